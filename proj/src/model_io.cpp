#include "camid/model_io.hpp"

#include <fstream>

#include "camid/error.hpp"

namespace camid {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows) throw Error(ErrorCode::InvalidArgument, "matrix row count");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(data[r].size()) != cols) throw Error(ErrorCode::InvalidArgument, "matrix column count");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[r][c].get<double>();
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json standardizer_json(const Standardizer& s) {
  return {{"mean", vector_json(s.mean)}, {"stddev", vector_json(s.stddev)}, {"kept", s.kept}};
}

Standardizer standardizer_from(const json& j) {
  Standardizer s;
  s.mean = vector_from(j.at("mean"));
  s.stddev = vector_from(j.at("stddev"));
  s.kept = j.at("kept").get<std::vector<int>>();
  for (int idx : s.kept) {
    if (idx < 0 || idx >= s.input_dim() || !(s.stddev(idx) > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "standardizer keeps an invalid column");
    }
  }
  return s;
}

json classifier_json(const ClassifierModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LogRegModel>) {
          return {{"theta", matrix_json(m.theta)},
                  {"lambda", m.lambda},
                  {"intercept", m.intercept},
                  {"standardizer", standardizer_json(m.standardizer)}};
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          return {{"k", m.k},
                  {"num_classes", m.num_classes},
                  {"labels", m.labels},
                  {"reference", matrix_json(m.reference)},
                  {"standardizer", standardizer_json(m.standardizer)}};
        } else {
          return {{"hidden_weights", matrix_json(m.hidden_weights)},
                  {"output_weights", matrix_json(m.output_weights)},
                  {"lambda", m.lambda},
                  {"standardizer", standardizer_json(m.standardizer)}};
        }
      },
      model);
}

}  // namespace

std::string Pipeline::model_type() const {
  switch (classifier.index()) {
    case 0: return "logreg";
    case 1: return "knn";
    default: return "mlp";
  }
}

Eigen::MatrixXd Pipeline::prepare(const Eigen::MatrixXd& raw) const {
  if (raw.cols() != features.dimension) {
    throw Error(ErrorCode::FeatureModelMismatch, "model expects " + std::to_string(features.dimension) +
                                                     " features, got " + std::to_string(raw.cols()));
  }
  if (!pca) return raw;
  return pca_transform_rows(*pca, pca_standardizer->transform(raw));
}

Eigen::MatrixXd predict_probabilities(const ClassifierModel& model, const Eigen::MatrixXd& X) {
  return std::visit(
      [&](const auto& m) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LogRegModel>) {
          return logreg_predict_proba_rows(m, X);
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          return knn_vote_fractions(m, X);
        } else {
          return mlp_predict_proba_rows(m, X);
        }
      },
      model);
}

std::vector<int> predict_classes(const ClassifierModel& model, const Eigen::MatrixXd& X) {
  if (const auto* knn = std::get_if<KnnModel>(&model)) return knn_predict_rows(*knn, X);
  const Eigen::MatrixXd p = predict_probabilities(model, X);
  std::vector<int> out(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    Eigen::Index arg = 0;
    p.row(i).maxCoeff(&arg);
    out[i] = static_cast<int>(arg);
  }
  return out;
}

Eigen::MatrixXd Pipeline::predict_proba(const Eigen::MatrixXd& raw) const {
  return predict_probabilities(classifier, prepare(raw));
}

std::vector<int> Pipeline::predict(const Eigen::MatrixXd& raw) const { return predict_classes(classifier, prepare(raw)); }

json to_json(const Pipeline& pipeline) {
  const auto& f = pipeline.features;
  json doc = {{"format_version", kModelFormatVersion},
              {"model_type", pipeline.model_type()},
              {"features",
               {{"feature_set", f.feature_set}, {"dimension", f.dimension}, {"params", f.params}}},
              {"class_names", f.class_names},
              {"classifier", classifier_json(pipeline.classifier)}};
  if (pipeline.pca) {
    const auto& p = *pipeline.pca;
    doc["pca"] = {{"standardizer", standardizer_json(*pipeline.pca_standardizer)},
                  {"mean", vector_json(p.mean)},
                  {"eigenvalues", vector_json(p.eigenvalues)},
                  {"basis", matrix_json(p.basis)},
                  {"centered", p.centered}};
  }
  return doc;
}

Pipeline pipeline_from_json(const json& doc) {
  try {
    if (doc.at("format_version").get<int>() != kModelFormatVersion) {
      throw Error(ErrorCode::InvalidArgument, "unsupported model format version");
    }
    Pipeline p;
    const auto& f = doc.at("features");
    p.features.feature_set = f.at("feature_set").get<std::string>();
    p.features.dimension = f.at("dimension").get<int>();
    p.features.params = f.at("params");
    p.features.class_names = doc.at("class_names").get<std::vector<std::string>>();
    if (doc.contains("pca")) {
      const auto& j = doc.at("pca");
      p.pca_standardizer = standardizer_from(j.at("standardizer"));
      PcaModel pca;
      pca.mean = vector_from(j.at("mean"));
      pca.eigenvalues = vector_from(j.at("eigenvalues"));
      pca.basis = matrix_from(j.at("basis"));
      pca.centered = j.at("centered").get<bool>();
      p.pca = std::move(pca);
    }
    const auto& c = doc.at("classifier");
    const auto type = doc.at("model_type").get<std::string>();
    if (type == "logreg") {
      LogRegModel m;
      m.theta = matrix_from(c.at("theta"));
      m.lambda = c.at("lambda").get<double>();
      m.intercept = c.at("intercept").get<bool>();
      m.standardizer = standardizer_from(c.at("standardizer"));
      p.classifier = std::move(m);
    } else if (type == "knn") {
      KnnModel m;
      m.k = c.at("k").get<int>();
      m.num_classes = c.at("num_classes").get<int>();
      m.labels = c.at("labels").get<std::vector<int>>();
      m.reference = matrix_from(c.at("reference"));
      m.standardizer = standardizer_from(c.at("standardizer"));
      p.classifier = std::move(m);
    } else if (type == "mlp") {
      MlpModel m;
      m.hidden_weights = matrix_from(c.at("hidden_weights"));
      m.output_weights = matrix_from(c.at("output_weights"));
      m.lambda = c.at("lambda").get<double>();
      m.standardizer = standardizer_from(c.at("standardizer"));
      p.classifier = std::move(m);
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown model_type '" + type + "'");
    }
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const Pipeline& pipeline, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << to_json(pipeline).dump(1) << '\n';
}

Pipeline load_model(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
  return pipeline_from_json(doc);
}

}  // namespace camid
