#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>
#include <json.hpp>

#include "camid/feature_cache.hpp"
#include "camid/knn.hpp"
#include "camid/logreg.hpp"
#include "camid/mlp.hpp"
#include "camid/pca.hpp"
#include "camid/standardizer.hpp"

namespace camid {

using ClassifierModel = std::variant<LogRegModel, KnnModel, MlpModel>;

/// Argmax class per row of already-prepared features; ties go to the lower index.
std::vector<int> predict_classes(const ClassifierModel& model, const Eigen::MatrixXd& X);

/// Per-row class probabilities of already-prepared features.
Eigen::MatrixXd predict_probabilities(const ClassifierModel& model, const Eigen::MatrixXd& X);

/// Everything needed to turn cached feature rows into class predictions:
/// optional standardize + PCA stage, then the classifier (which applies its
/// own standardizer).
struct Pipeline {
  FeatureCacheHeader features;  // feature_set, dimension, params, class_names
  std::optional<Standardizer> pca_standardizer;
  std::optional<PcaModel> pca;
  ClassifierModel classifier;

  std::string model_type() const;
  Eigen::MatrixXd prepare(const Eigen::MatrixXd& raw) const;
  std::vector<int> predict(const Eigen::MatrixXd& raw) const;
  /// Rows sum to one: softmax (logreg), normalized outputs (mlp), vote fractions (knn).
  Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& raw) const;
};

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const Pipeline& pipeline);
Pipeline pipeline_from_json(const nlohmann::json& doc);

void save_model(const Pipeline& pipeline, const std::filesystem::path& path);
Pipeline load_model(const std::filesystem::path& path);

}  // namespace camid
