#include "camid/feature_cache.hpp"

#include <fstream>
#include <map>

#include "camid/error.hpp"
#include "text_util.hpp"

namespace camid {

namespace fs = std::filesystem;

namespace {
constexpr std::string_view kSignature = "#camid-features ";
}

Eigen::MatrixXd FeatureCache::matrix() const {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), header.dimension);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < header.dimension; ++j) X(static_cast<Eigen::Index>(i), j) = rows[i].values[j];
  }
  return X;
}

void write_feature_cache(const FeatureCache& cache, const fs::path& path) {
  const auto& h = cache.header;
  nlohmann::json meta = {{"format_version", kFeatureCacheVersion},
                         {"feature_set", h.feature_set},
                         {"dimension", h.dimension},
                         {"params", h.params},
                         {"class_names", h.class_names},
                         {"augmented", h.augmented},
                         {"include_original", h.include_original}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << kSignature << meta.dump() << '\n';
  out << "id,label";
  for (int j = 0; j < h.dimension; ++j) out << ",f" << j;
  out << '\n';
  for (const auto& row : cache.rows) {
    if (static_cast<int>(row.values.size()) != h.dimension) {
      throw Error(ErrorCode::DimensionMismatch, "row '" + row.id + "' has " + std::to_string(row.values.size()) +
                                                    " values, header says " + std::to_string(h.dimension));
    }
    out << row.id << ',' << (row.label ? h.class_names.at(*row.label) : "?");
    for (double v : row.values) out << ',' << detail::format_double(v);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

bool is_feature_cache(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  return std::getline(in, line) && line.starts_with(kSignature);
}

FeatureCache read_feature_cache(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || !line.starts_with(kSignature)) {
    throw Error(ErrorCode::InvalidArgument, path.string() + " is not a feature cache");
  }
  FeatureCache cache;
  try {
    const auto meta = nlohmann::json::parse(line.substr(kSignature.size()));
    if (meta.at("format_version").get<int>() != kFeatureCacheVersion) {
      throw Error(ErrorCode::InvalidArgument, "unsupported feature cache version");
    }
    auto& h = cache.header;
    h.feature_set = meta.at("feature_set").get<std::string>();
    h.dimension = meta.at("dimension").get<int>();
    h.params = meta.at("params");
    h.class_names = meta.at("class_names").get<std::vector<std::string>>();
    h.augmented = meta.value("augmented", false);
    h.include_original = meta.value("include_original", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": bad header: " + e.what());
  }
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(cache.header.class_names.size()); ++i) index[cache.header.class_names[i]] = i;

  std::getline(in, line);  // column names
  int line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line);
    if (static_cast<int>(fields.size()) != cache.header.dimension + 2) {
      throw Error(ErrorCode::DimensionMismatch, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                                    std::to_string(cache.header.dimension) + " values");
    }
    FeatureRow row;
    row.id = fields[0];
    if (fields[1] != "?") {
      const auto it = index.find(fields[1]);
      if (it == index.end()) throw Error(ErrorCode::LabelOutOfRange, "unknown class '" + fields[1] + "'");
      row.label = it->second;
    }
    row.values.reserve(static_cast<std::size_t>(cache.header.dimension));
    for (std::size_t j = 2; j < fields.size(); ++j) row.values.push_back(detail::parse_double(fields[j]));
    cache.rows.push_back(std::move(row));
  }
  return cache;
}

}  // namespace camid
