#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace camid {

enum class ColorChannel { Red = 0, Green = 1, Blue = 2 };

ColorChannel parse_color_channel(const std::string& name);

/// 8-bit RGB raster promoted to double planes (rows = height) in [0, 255].
class ImageRGB {
 public:
  /// Smallest side that still admits a 4-level decomposition.
  static constexpr int kMinSide = 32;

  explicit ImageRGB(std::array<Eigen::MatrixXd, 3> planes);

  int width() const { return static_cast<int>(planes_[0].cols()); }
  int height() const { return static_cast<int>(planes_[0].rows()); }

  const Eigen::MatrixXd& channel(ColorChannel c) const { return planes_[static_cast<int>(c)]; }
  const Eigen::MatrixXd& channel(int index) const { return planes_.at(index); }

  ImageRGB crop(int row, int col, int rows, int cols) const;
  ImageRGB transposed() const;

 private:
  std::array<Eigen::MatrixXd, 3> planes_;
};

ImageRGB decode_image(const std::filesystem::path& path);

/// Writes a lossless 8-bit PNG; intensities are rounded and clamped.
void write_png(const ImageRGB& image, const std::filesystem::path& path);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;
  std::optional<int> label;  // empty for unlabeled samples
};

/// Labeled image list backed by a CSV file with header `id,path,label`.
///
/// Optional leading comment lines:
///   #format_version=1
///   #classes=name0,name1,...
/// Labels are class names (or "?" / empty for unlabeled rows). Without a
/// `#classes` line the class order is the sorted set of distinct labels.
/// Relative paths resolve against the manifest's directory.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> class_names;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  void validate() const;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct IndexSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified partition of sample indices by label. Per class the train count
/// is round(train_fraction * size) clamped to [1, size - 1]; each side keeps
/// ascending index order.
IndexSplit stratified_split_indices(std::span<const int> labels, int num_classes,
                                    const SplitSpec& spec);

struct ManifestSplit {
  DatasetManifest train;
  DatasetManifest test;
};

ManifestSplit stratified_split(const DatasetManifest& manifest, const SplitSpec& spec);

/// Four half-size crops spanning from the image center to each corner, in the
/// order top-left, top-right, bottom-left, bottom-right; the original image is
/// appended when `include_original` is set.
std::vector<ImageRGB> augment_quadrant_crops(const ImageRGB& image, bool include_original);

/// Top-left corner (row, col) of quadrant `q` (0..3) inside a height x width image.
std::pair<int, int> quadrant_origin(int height, int width, int q);

}  // namespace camid
