#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace camid {

struct FeatureCacheHeader {
  std::string feature_set;  // "dwd" | "lbp"
  int dimension = 0;
  nlohmann::json params;  // extraction parameters, enforced at predict time
  std::vector<std::string> class_names;
  bool augmented = false;
  bool include_original = false;
};

struct FeatureRow {
  std::string id;
  std::optional<int> label;
  std::vector<double> values;
};

/// Text cache of extracted features:
///
///   #camid-features {"format_version":1,"feature_set":...,"params":{...},...}
///   id,label,f0,f1,...
///   <id>,<class name or ?>,<values with round-trip precision>
struct FeatureCache {
  FeatureCacheHeader header;
  std::vector<FeatureRow> rows;

  Eigen::MatrixXd matrix() const;
};

inline constexpr int kFeatureCacheVersion = 1;

void write_feature_cache(const FeatureCache& cache, const std::filesystem::path& path);
FeatureCache read_feature_cache(const std::filesystem::path& path);

/// True when the file starts with the cache signature line.
bool is_feature_cache(const std::filesystem::path& path);

}  // namespace camid
