#include "camid/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "camid/dataset.hpp"
#include "camid/error.hpp"
#include "camid/eval.hpp"
#include "camid/feature_cache.hpp"
#include "camid/features_dwd.hpp"
#include "camid/features_lbp.hpp"
#include "camid/model_io.hpp"
#include "text_util.hpp"

namespace camid::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Error usage(const std::string& what) { return Error(ErrorCode::Usage, what); }

// ---------------------------------------------------------------- extract

struct ExtractOptions {
  fs::path manifest;
  std::string features;
  std::string tau = "auto";
  bool augment = false;
  bool include_original = false;
  int gray_levels = 16;
  std::string offset = "0,1";
  int levels = kDenoiseLevels;
  fs::path out;
  int jobs = 1;
  bool describe = false;
};

struct Extractor {
  std::string feature_set;
  Threshold tau;
  int levels = kDenoiseLevels;
  CooccurrenceConfig glcm;

  int dimension() const { return feature_set == "dwd" ? static_cast<int>(kDwdDimension) : kLbpDimension; }

  json params() const {
    if (feature_set == "dwd") {
      return {{"wavelet", "db8"},
              {"levels", kDwdLevels},
              {"gray_levels", glcm.gray_levels},
              {"offset", {glcm.offset_rows, glcm.offset_cols}}};
    }
    return {{"wavelet", "bior3.5"}, {"levels", levels}, {"tau", tau ? json(*tau) : json("auto")}};
  }

  std::vector<double> operator()(const ImageRGB& image) const {
    if (feature_set == "dwd") return extract_dwd(image, glcm).values;
    return extract_lbp(image, tau, levels).values;
  }
};

std::vector<std::string> slot_names(const std::string& feature_set) {
  if (feature_set == "dwd") return dwd_slot_names();
  std::vector<std::string> names;
  for (const char* ch : {"R", "G", "B"}) {
    for (int b = 0; b < kRiu2Bins; ++b) {
      names.push_back(std::string("lbp.") + ch + (b + 1 < kRiu2Bins ? ".uniform" + std::to_string(b) : ".nonuniform"));
    }
  }
  return names;
}

Extractor make_extractor(const ExtractOptions& opt) {
  Extractor ex;
  ex.feature_set = opt.features;
  if (opt.tau != "auto") {
    try {
      ex.tau = detail::parse_double(opt.tau);
    } catch (const Error&) {
      throw usage("--tau expects 'auto' or a number");
    }
    if (!(*ex.tau >= 0.0)) throw usage("--tau must be nonnegative");
  }
  ex.levels = opt.levels;
  ex.glcm.gray_levels = opt.gray_levels;
  const auto parts = detail::split(opt.offset);
  if (parts.size() != 2) throw usage("--offset expects 'rows,cols'");
  try {
    ex.glcm.offset_rows = static_cast<int>(detail::parse_int(parts[0]));
    ex.glcm.offset_cols = static_cast<int>(detail::parse_int(parts[1]));
  } catch (const Error&) {
    throw usage("--offset expects two integers");
  }
  if (ex.glcm.offset_rows == 0 && ex.glcm.offset_cols == 0) throw usage("--offset must be nonzero");
  if (ex.glcm.gray_levels < 2) throw usage("--gray-levels must be at least 2");
  if (ex.levels < 1) throw usage("--levels must be positive");
  return ex;
}

int cmd_extract(const ExtractOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.features != "dwd" && opt.features != "lbp") throw usage("--features must be dwd or lbp");
  if (opt.describe) {
    const auto names = slot_names(opt.features);
    for (std::size_t i = 0; i < names.size(); ++i) out << i << ',' << names[i] << '\n';
    return kOk;
  }
  if (opt.manifest.empty() || opt.out.empty()) throw usage("extract needs a manifest and --out");
  if (opt.include_original && !opt.augment) throw usage("--include-original requires --augment");
  const Extractor extractor = make_extractor(opt);
  const DatasetManifest manifest = load_manifest(opt.manifest);

  struct Outcome {
    std::vector<FeatureRow> rows;
    std::string error;
  };
  std::vector<Outcome> outcomes(manifest.entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < outcomes.size(); i = next++) {
      const auto& entry = manifest.entries[i];
      try {
        const ImageRGB image = decode_image(entry.path);
        if (!opt.augment) {
          outcomes[i].rows.push_back({entry.id, entry.label, extractor(image)});
          continue;
        }
        const auto crops = augment_quadrant_crops(image, opt.include_original);
        for (std::size_t q = 0; q < crops.size(); ++q) {
          const std::string suffix = q < 4 ? "#q" + std::to_string(q) : "#full";
          outcomes[i].rows.push_back({entry.id + suffix, entry.label, extractor(crops[q])});
        }
      } catch (const std::exception& e) {
        outcomes[i].rows.clear();
        outcomes[i].error = e.what();
      }
    }
  };
  int jobs = opt.jobs > 0 ? opt.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(1, outcomes.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  FeatureCache cache;
  cache.header.feature_set = extractor.feature_set;
  cache.header.dimension = extractor.dimension();
  cache.header.params = extractor.params();
  cache.header.class_names = manifest.class_names;
  cache.header.augmented = opt.augment;
  cache.header.include_original = opt.include_original;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      ++skipped;
      err << "skipped " << manifest.entries[i].id << ": " << outcomes[i].error << '\n';
      continue;
    }
    for (auto& row : outcomes[i].rows) cache.rows.push_back(std::move(row));
  }
  write_feature_cache(cache, opt.out);
  out << "wrote " << cache.rows.size() << " rows of " << cache.header.dimension << " " << cache.header.feature_set
      << " features to " << opt.out.string() << " (" << skipped << " images skipped)\n";
  if (!outcomes.empty() && static_cast<double>(skipped) > 0.05 * static_cast<double>(outcomes.size())) {
    err << "more than 5% of images failed\n";
    return kDataError;
  }
  return kOk;
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  std::vector<fs::path> caches;
  std::string model;
  fs::path out;
  fs::path report;
  std::string lambda;
  std::string lambda_grid;
  int k = 0;
  std::string k_grid;
  int hidden = 0;
  std::string pca;
  bool pca_absolute = false;
  bool no_center = false;
  bool no_intercept = false;
  double split = 0.8;
  std::uint64_t seed = 0;
  double lr = 1.0;
  int max_iters = 1000;
  double tol = 1e-6;
  int grad_check_every = 0;
};

const std::vector<double> kDefaultLambdaGrid = {1e1, 1e0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  try {
    for (const auto& part : detail::split(text)) values.push_back(detail::parse_double(part));
  } catch (const Error&) {
    throw usage(flag + " expects a comma-separated list of numbers");
  }
  if (values.empty()) throw usage(flag + " is empty");
  return values;
}

std::string parent_id(const std::string& id) { return id.substr(0, id.find('#')); }

void require_same_features(const FeatureCacheHeader& a, const FeatureCacheHeader& b, const std::string& what) {
  if (a.feature_set != b.feature_set || a.dimension != b.dimension || a.params != b.params) {
    throw Error(ErrorCode::FeatureModelMismatch,
                what + ": feature set/parameters differ (" + a.feature_set + " " + a.params.dump() + " vs " +
                    b.feature_set + " " + b.params.dump() + ")");
  }
}

struct Dataset {
  Eigen::MatrixXd X;
  std::vector<int> y;
};

Dataset take_rows(const Eigen::MatrixXd& X, const std::vector<int>& y, const std::vector<std::size_t>& rows) {
  Dataset d;
  d.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.X.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
    d.y.push_back(y[rows[i]]);
  }
  return d;
}

int cmd_train(const TrainOptions& opt, std::ostream& out, std::ostream&) {
  if (opt.model != "logreg" && opt.model != "knn" && opt.model != "mlp") throw usage("--model must be logreg, knn or mlp");
  if (opt.caches.empty()) throw usage("train needs at least one feature cache");
  if (opt.out.empty()) throw usage("train needs --out");
  if (!(opt.split > 0.0 && opt.split <= 1.0)) throw usage("--split must lie in (0, 1]");
  if (!opt.lambda.empty() && !opt.lambda_grid.empty()) throw usage("--lambda and --lambda-grid are exclusive");
  if (opt.k != 0 && !opt.k_grid.empty()) throw usage("--k and --k-grid are exclusive");

  FeatureCache merged = read_feature_cache(opt.caches.front());
  for (std::size_t i = 1; i < opt.caches.size(); ++i) {
    auto more = read_feature_cache(opt.caches[i]);
    require_same_features(merged.header, more.header, opt.caches[i].string());
    if (more.header.class_names != merged.header.class_names) {
      throw Error(ErrorCode::InvalidArgument, opt.caches[i].string() + ": class names differ");
    }
    for (auto& row : more.rows) merged.rows.push_back(std::move(row));
  }
  const auto& header = merged.header;
  const int num_classes = static_cast<int>(header.class_names.size());
  if (num_classes < 2) throw Error(ErrorCode::InvalidArgument, "training needs at least 2 classes");
  for (const auto& row : merged.rows) {
    if (!row.label) throw Error(ErrorCode::InvalidArgument, "row '" + row.id + "' is unlabeled");
  }
  const Eigen::MatrixXd X_all = merged.matrix();
  std::vector<int> y_all;
  for (const auto& row : merged.rows) y_all.push_back(*row.label);

  // Split whole source images so crops of one photo never straddle the split.
  std::vector<std::size_t> train_rows, test_rows;
  if (opt.split < 1.0) {
    std::map<std::string, std::size_t> group_of;
    std::vector<int> group_labels;
    std::vector<std::vector<std::size_t>> group_rows;
    for (std::size_t i = 0; i < merged.rows.size(); ++i) {
      const auto key = parent_id(merged.rows[i].id);
      auto [it, fresh] = group_of.emplace(key, group_rows.size());
      if (fresh) {
        group_rows.emplace_back();
        group_labels.push_back(y_all[i]);
      } else if (group_labels[it->second] != y_all[i]) {
        throw Error(ErrorCode::InvalidArgument, "crops of '" + key + "' carry different labels");
      }
      group_rows[it->second].push_back(i);
    }
    const auto split = stratified_split_indices(group_labels, num_classes, {opt.split, opt.seed});
    for (auto g : split.train) train_rows.insert(train_rows.end(), group_rows[g].begin(), group_rows[g].end());
    for (auto g : split.test) test_rows.insert(test_rows.end(), group_rows[g].begin(), group_rows[g].end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
  } else {
    for (std::size_t i = 0; i < merged.rows.size(); ++i) train_rows.push_back(i);
  }
  Dataset train = take_rows(X_all, y_all, train_rows);
  Dataset test = take_rows(X_all, y_all, test_rows);

  Pipeline pipeline;
  pipeline.features = header;
  std::ostringstream report;
  report << "model: " << opt.model << "\nfeatures: " << header.feature_set << " (" << header.dimension
         << ") params " << header.params.dump() << "\ntrain rows: " << train.y.size()
         << "\nheld-out rows: " << test.y.size() << "\nseed: " << opt.seed << '\n';

  if (!opt.pca.empty()) {
    PcaTarget target;
    const bool fractional = opt.pca.find_first_of(".eE") != std::string::npos;
    try {
      if (fractional) {
        target = ProjectionTolerance{detail::parse_double(opt.pca), opt.pca_absolute};
      } else {
        target = ComponentCount{static_cast<int>(detail::parse_int(opt.pca))};
      }
    } catch (const Error&) {
      throw usage("--pca expects a component count or a tolerance");
    }
    pipeline.pca_standardizer = Standardizer::fit(train.X);
    const Eigen::MatrixXd Z = pipeline.pca_standardizer->transform(train.X);
    pipeline.pca = pca_fit(Z, target, !opt.no_center);
    const auto pe = projection_error(*pipeline.pca, Z);
    report << "pca: " << pipeline.pca->components() << " of " << Z.cols() << " components, projection error "
           << pe.eigen_tail << " (relative " << pe.eigen_tail / pipeline.pca->total_variance() << ")\n";
    train.X = pca_transform_rows(*pipeline.pca, Z);
    if (!test.y.empty()) test.X = pca_transform_rows(*pipeline.pca, pipeline.pca_standardizer->transform(test.X));
  }

  TrainConfig config;
  config.learning_rate = opt.lr;
  config.max_iters = opt.max_iters;
  config.tol = opt.tol;
  config.seed = opt.seed;
  config.grad_check_every = opt.grad_check_every;
  const bool lbp = header.feature_set == "lbp";

  auto fit = [&](double parameter, const Eigen::MatrixXd& X, std::span<const int> y) -> ClassifierModel {
    if (opt.model == "logreg") return logreg_train(X, y, num_classes, parameter, config, !opt.no_intercept);
    if (opt.model == "knn") return knn_fit(X, y, num_classes, static_cast<int>(parameter));
    const int hidden = opt.hidden > 0 ? opt.hidden : (lbp ? 60 : 90);
    return mlp_train(X, y, num_classes, hidden, parameter, config);
  };

  std::vector<double> grid;
  std::string parameter_name = "lambda";
  if (opt.model == "knn") {
    parameter_name = "k";
    if (!opt.k_grid.empty()) {
      grid = parse_list(opt.k_grid, "--k-grid");
    } else {
      grid = {static_cast<double>(opt.k > 0 ? opt.k : (lbp ? 8 : 15))};
    }
    for (double k : grid) {
      if (k < 1 || k != std::floor(k)) throw usage("k must be a positive integer");
    }
  } else if (!opt.lambda_grid.empty()) {
    grid = opt.lambda_grid == "default" ? kDefaultLambdaGrid : parse_list(opt.lambda_grid, "--lambda-grid");
  } else if (!opt.lambda.empty()) {
    grid = parse_list(opt.lambda, "--lambda");
    if (grid.size() != 1) throw usage("--lambda takes a single value");
  } else if (opt.model == "logreg") {
    grid = kDefaultLambdaGrid;
  } else {
    grid = {lbp ? 7e-5 : 5e-5};
  }

  double chosen = grid.front();
  if (grid.size() > 1) {
    if (test.y.empty()) throw usage("grid selection needs a held-out split (--split < 1)");
    const Trainer trainer = [&](double parameter, const Eigen::MatrixXd& X, std::span<const int> y) -> Classifier {
      auto model = std::make_shared<ClassifierModel>(fit(parameter, X, y));
      return [model](const Eigen::MatrixXd& Xq) { return predict_classes(*model, Xq); };
    };
    const auto result = grid_select(trainer, grid, train.X, train.y, test.X, test.y, num_classes);
    chosen = result.best_parameter;
    report << "\ngrid selection (held-out mean per-class accuracy):\n" << render_grid(result, parameter_name);
  }
  report << "selected " << parameter_name << " = " << chosen << '\n';
  pipeline.classifier = fit(chosen, train.X, train.y);

  std::string csv;
  if (!test.y.empty()) {
    const auto predicted = predict_classes(pipeline.classifier, test.X);
    const auto cm = confusion(test.y, predicted, num_classes, header.class_names);
    report << "\nconfusion matrix on held-out rows (rows: true, columns: predicted):\n" << render_table(cm);
    csv = render_csv(cm);
    const auto acc = accuracies(cm);
    out << "held-out mean per-class accuracy: " << acc.mean << " (overall " << acc.overall << ")\n";
  }

  save_model(pipeline, opt.out);
  fs::path report_path = opt.report.empty() ? fs::path(opt.out.string() + ".report.txt") : opt.report;
  {
    std::ofstream r(report_path);
    if (!r) throw Error(ErrorCode::Io, "cannot write " + report_path.string());
    r << report.str();
  }
  if (!csv.empty()) {
    std::ofstream c(fs::path(report_path).replace_extension(".csv"));
    c << csv;
  }
  out << "wrote model " << opt.out.string() << " and report " << report_path.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- predict

struct PredictOptions {
  fs::path model;
  fs::path features;
  fs::path out;
  bool proba = false;
};

int cmd_predict(const PredictOptions& opt, std::ostream& out, std::ostream&) {
  const Pipeline pipeline = load_model(opt.model);
  const FeatureCache cache = read_feature_cache(opt.features);
  require_same_features(pipeline.features, cache.header, "feature cache does not match the model");
  const Eigen::MatrixXd X = cache.matrix();
  const auto classes = pipeline.predict(X);
  Eigen::MatrixXd proba;
  if (opt.proba) proba = pipeline.predict_proba(X);

  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot write " + opt.out.string());
  file << "fname,camera";
  if (opt.proba) {
    for (const auto& name : pipeline.features.class_names) file << ",p_" << name;
  }
  file << '\n';
  for (std::size_t i = 0; i < cache.rows.size(); ++i) {
    file << cache.rows[i].id << ',' << pipeline.features.class_names.at(classes[i]);
    if (opt.proba) {
      for (Eigen::Index c = 0; c < proba.cols(); ++c) {
        file << ',' << detail::format_double(proba(static_cast<Eigen::Index>(i), c));
      }
    }
    file << '\n';
  }
  out << "wrote " << cache.rows.size() << " predictions to " << opt.out.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  fs::path predictions;
  fs::path truth;
  fs::path out;
  fs::path csv;
};

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream&) {
  std::vector<std::string> class_names;
  std::map<std::string, int> truth;
  if (is_feature_cache(opt.truth)) {
    const auto cache = read_feature_cache(opt.truth);
    class_names = cache.header.class_names;
    for (const auto& row : cache.rows) {
      if (row.label) truth[row.id] = *row.label;
    }
  } else {
    const auto manifest = load_manifest(opt.truth);
    class_names = manifest.class_names;
    for (const auto& e : manifest.entries) {
      if (e.label) truth[e.id] = *e.label;
    }
  }
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(class_names.size()); ++i) index[class_names[i]] = i;

  std::ifstream in(opt.predictions);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + opt.predictions.string());
  std::string line;
  if (!std::getline(in, line) || !detail::trim(line).starts_with("fname,camera")) {
    throw Error(ErrorCode::InvalidArgument, opt.predictions.string() + ": expected header 'fname,camera'");
  }
  std::vector<int> y_true, y_pred;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line);
    if (fields.size() < 2) throw Error(ErrorCode::InvalidArgument, "short prediction row: " + line);
    auto t = truth.find(fields[0]);
    if (t == truth.end()) t = truth.find(parent_id(fields[0]));
    if (t == truth.end()) throw Error(ErrorCode::LabelOutOfRange, "no ground truth for '" + fields[0] + "'");
    const auto p = index.find(fields[1]);
    if (p == index.end()) throw Error(ErrorCode::LabelOutOfRange, "unknown class '" + fields[1] + "'");
    y_true.push_back(t->second);
    y_pred.push_back(p->second);
  }
  const auto cm = confusion(y_true, y_pred, static_cast<int>(class_names.size()), class_names);
  const std::string table = render_table(cm);
  if (opt.out.empty()) {
    out << table;
  } else {
    std::ofstream f(opt.out);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + opt.out.string());
    f << table;
  }
  if (!opt.csv.empty()) {
    std::ofstream f(opt.csv);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + opt.csv.string());
    f << render_csv(cm);
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return kUsageError;
    case ErrorCode::NonFiniteCost:
    case ErrorCode::GradientCheckFailed: return kNumericFailure;
    default: return kDataError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Camera-model identification from wavelet and LBP noise features", "camid"};
  app.require_subcommand(1);

  ExtractOptions ex;
  auto* extract = app.add_subcommand("extract", "Extract DWD or LBP features for every manifest entry");
  extract->add_option("manifest", ex.manifest, "Manifest CSV (id,path,label)");
  extract->add_option("--features", ex.features, "dwd | lbp")->required();
  extract->add_option("--tau", ex.tau, "LBP denoising threshold: 'auto' or a number");
  extract->add_flag("--augment", ex.augment, "Extract the four quadrant crops of each image");
  extract->add_flag("--include-original", ex.include_original, "With --augment, also keep the full image");
  extract->add_option("--gray-levels", ex.gray_levels, "DWD co-occurrence quantization levels");
  extract->add_option("--offset", ex.offset, "DWD co-occurrence offset 'rows,cols'");
  extract->add_option("--levels", ex.levels, "LBP denoising decomposition depth");
  extract->add_option("--out", ex.out, "Feature cache to write");
  extract->add_option("--jobs", ex.jobs, "Worker threads (0 = all cores)");
  extract->add_flag("--describe-features", ex.describe, "Print the feature slot map and exit");

  TrainOptions tr;
  auto* train = app.add_subcommand("train", "Train a classifier on feature caches");
  train->add_option("caches", tr.caches, "Feature cache file(s)")->required();
  train->add_option("--model", tr.model, "logreg | knn | mlp")->required();
  train->add_option("--out", tr.out, "Model JSON to write")->required();
  train->add_option("--report", tr.report, "Text report path (CSV written alongside)");
  train->add_option("--lambda", tr.lambda, "Regularization weight");
  train->add_option("--lambda-grid", tr.lambda_grid, "'default' (10 to 1e-5 by decades) or comma-separated values");
  train->add_option("--k", tr.k, "Neighbors for knn (default 8 for lbp, 15 for dwd)");
  train->add_option("--k-grid", tr.k_grid, "Comma-separated k values");
  train->add_option("--hidden", tr.hidden, "Hidden units for mlp (default 60 for lbp, 90 for dwd)");
  train->add_option("--pca", tr.pca, "Component count, or tolerance on the discarded eigenvalue fraction");
  train->add_flag("--pca-absolute", tr.pca_absolute, "Treat the PCA tolerance as an absolute eigenvalue sum");
  train->add_flag("--no-center", tr.no_center, "Fit PCA without mean-centering");
  train->add_flag("--no-intercept", tr.no_intercept, "Softmax regression without bias terms");
  train->add_option("--split", tr.split, "Training fraction of the stratified split (1 = no held-out set)");
  train->add_option("--seed", tr.seed, "Seed for the split and weight initialization");
  train->add_option("--lr", tr.lr, "Initial gradient-descent learning rate");
  train->add_option("--max-iters", tr.max_iters, "Gradient-descent iteration limit");
  train->add_option("--tol", tr.tol, "Stop when the largest gradient entry falls below");
  train->add_option("--grad-check-every", tr.grad_check_every, "MLP finite-difference check cadence (0 = off)");

  PredictOptions pr;
  auto* predict = app.add_subcommand("predict", "Predict camera models for a feature cache");
  predict->add_option("--model", pr.model, "Model JSON")->required();
  predict->add_option("--features", pr.features, "Feature cache")->required();
  predict->add_option("--out", pr.out, "Prediction CSV (fname,camera)")->required();
  predict->add_flag("--proba", pr.proba, "Append per-class probabilities");

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Confusion matrix of predictions against ground truth");
  eval->add_option("--predictions", ev.predictions, "Prediction CSV")->required();
  eval->add_option("--truth", ev.truth, "Labeled manifest or feature cache")->required();
  eval->add_option("--out", ev.out, "Text report (default: stdout)");
  eval->add_option("--csv", ev.csv, "CSV report");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kOk : kUsageError;
  }

  try {
    if (*extract) return cmd_extract(ex, out, err);
    if (*train) return cmd_train(tr, out, err);
    if (*predict) return cmd_predict(pr, out, err);
    if (*eval) return cmd_eval(ev, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace camid::cli
