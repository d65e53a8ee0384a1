#include "camid/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "camid/error.hpp"
#include "camid/random.hpp"
#include "text_util.hpp"

namespace camid {

namespace fs = std::filesystem;

ColorChannel parse_color_channel(const std::string& name) {
  if (name == "red" || name == "r") return ColorChannel::Red;
  if (name == "green" || name == "g") return ColorChannel::Green;
  if (name == "blue" || name == "b") return ColorChannel::Blue;
  throw Error(ErrorCode::InvalidArgument, "unknown channel '" + name + "'");
}

ImageRGB::ImageRGB(std::array<Eigen::MatrixXd, 3> planes) : planes_(std::move(planes)) {
  for (const auto& p : planes_) {
    if (p.rows() != planes_[0].rows() || p.cols() != planes_[0].cols()) {
      throw Error(ErrorCode::ShapeMismatch, "color planes differ in size");
    }
  }
  if (height() < kMinSide || width() < kMinSide) {
    throw Error(ErrorCode::ImageTooSmall, std::to_string(width()) + "x" + std::to_string(height()) +
                                              " is below the " + std::to_string(kMinSide) +
                                              "-pixel minimum");
  }
  for (const auto& p : planes_) {
    if (!p.allFinite() || p.minCoeff() < 0.0 || p.maxCoeff() > 255.0) {
      throw Error(ErrorCode::InvalidArgument, "intensities must be finite and within [0, 255]");
    }
  }
}

ImageRGB ImageRGB::crop(int row, int col, int rows, int cols) const {
  if (row < 0 || col < 0 || row + rows > height() || col + cols > width()) {
    throw Error(ErrorCode::InvalidArgument, "crop window outside image");
  }
  std::array<Eigen::MatrixXd, 3> out;
  for (int c = 0; c < 3; ++c) out[c] = planes_[c].block(row, col, rows, cols);
  return ImageRGB(std::move(out));
}

ImageRGB ImageRGB::transposed() const {
  std::array<Eigen::MatrixXd, 3> out;
  for (int c = 0; c < 3; ++c) out[c] = planes_[c].transpose();
  return ImageRGB(std::move(out));
}

namespace {

enum class Signature { Png, Jpeg, Other };

Signature sniff(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned char head[8] = {};
  in.read(reinterpret_cast<char*>(head), sizeof(head));
  const auto got = in.gcount();
  static constexpr unsigned char kPng[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (got == 8 && std::equal(head, head + 8, kPng)) return Signature::Png;
  if (got >= 3 && head[0] == 0xFF && head[1] == 0xD8 && head[2] == 0xFF) return Signature::Jpeg;
  return Signature::Other;
}

}  // namespace

ImageRGB decode_image(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::Io, "no such image file: " + path.string());
  }
  if (sniff(path) == Signature::Other) {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + " is neither PNG nor JPEG");
  }
  const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty() || bgr.type() != CV_8UC3) {
    throw Error(ErrorCode::CorruptFile, "cannot decode " + path.string());
  }
  if (bgr.rows < ImageRGB::kMinSide || bgr.cols < ImageRGB::kMinSide) {
    throw Error(ErrorCode::ImageTooSmall, path.string() + " is " + std::to_string(bgr.cols) + "x" +
                                              std::to_string(bgr.rows));
  }
  std::array<Eigen::MatrixXd, 3> planes;
  for (auto& p : planes) p.resize(bgr.rows, bgr.cols);
  for (int r = 0; r < bgr.rows; ++r) {
    const auto* row = bgr.ptr<cv::Vec3b>(r);
    for (int c = 0; c < bgr.cols; ++c) {
      planes[0](r, c) = row[c][2];
      planes[1](r, c) = row[c][1];
      planes[2](r, c) = row[c][0];
    }
  }
  return ImageRGB(std::move(planes));
}

void write_png(const ImageRGB& image, const fs::path& path) {
  cv::Mat bgr(image.height(), image.width(), CV_8UC3);
  auto to_byte = [](double v) {
    return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
  };
  for (int r = 0; r < image.height(); ++r) {
    auto* row = bgr.ptr<cv::Vec3b>(r);
    for (int c = 0; c < image.width(); ++c) {
      row[c][2] = to_byte(image.channel(0)(r, c));
      row[c][1] = to_byte(image.channel(1)(r, c));
      row[c][0] = to_byte(image.channel(2)(r, c));
    }
  }
  if (!cv::imwrite(path.string(), bgr)) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
}

void DatasetManifest::validate() const {
  const bool any_labeled = std::any_of(entries.begin(), entries.end(),
                                       [](const ManifestEntry& e) { return e.label.has_value(); });
  if (any_labeled && class_names.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "a labeled manifest needs at least 2 classes");
  }
  std::set<std::string> ids;
  for (const auto& e : entries) {
    if (e.label && (*e.label < 0 || *e.label >= num_classes())) {
      throw Error(ErrorCode::LabelOutOfRange, "entry '" + e.id + "' has label " + std::to_string(*e.label));
    }
    if (!ids.insert(e.id).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate id '" + e.id + "'");
    }
  }
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + path.string());

  std::vector<std::string> declared_classes;
  struct Raw {
    std::string id, path, label;
  };
  std::vector<Raw> rows;
  bool header_seen = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const auto body = text.substr(1);
      if (body.starts_with("classes=")) {
        declared_classes = detail::split(body.substr(8));
      } else if (body.starts_with("format_version=")) {
        if (detail::parse_int(body.substr(15)) != 1) {
          throw Error(ErrorCode::InvalidArgument, "unsupported manifest format version");
        }
      }
      continue;
    }
    auto fields = detail::split(text);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"id", "path", "label"}) {
        throw Error(ErrorCode::InvalidArgument, path.string() + ": expected header 'id,path,label'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() == 2) fields.emplace_back();
    if (fields.size() != 3) {
      throw Error(ErrorCode::InvalidArgument,
                  path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    rows.push_back({fields[0], fields[1], fields[2]});
  }

  DatasetManifest manifest;
  if (!declared_classes.empty()) {
    manifest.class_names = declared_classes;
  } else {
    std::set<std::string> names;
    for (const auto& r : rows) {
      if (!r.label.empty() && r.label != "?") names.insert(r.label);
    }
    manifest.class_names.assign(names.begin(), names.end());
  }
  std::map<std::string, int> index;
  for (int i = 0; i < manifest.num_classes(); ++i) index[manifest.class_names[i]] = i;

  const fs::path base = path.parent_path();
  for (auto& r : rows) {
    ManifestEntry entry;
    entry.id = r.id;
    entry.path = fs::path(r.path).is_absolute() ? fs::path(r.path) : base / r.path;
    if (!r.label.empty() && r.label != "?") {
      const auto it = index.find(r.label);
      if (it == index.end()) {
        throw Error(ErrorCode::LabelOutOfRange, "entry '" + r.id + "' has undeclared class '" + r.label + "'");
      }
      entry.label = it->second;
    }
    manifest.entries.push_back(std::move(entry));
  }
  manifest.validate();
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest " + path.string());
  out << "#format_version=1\n";
  if (!manifest.class_names.empty()) {
    out << "#classes=";
    for (std::size_t i = 0; i < manifest.class_names.size(); ++i) {
      out << (i ? "," : "") << manifest.class_names[i];
    }
    out << '\n';
  }
  out << "id,path,label\n";
  for (const auto& e : manifest.entries) {
    out << e.id << ',' << e.path.string() << ',' << (e.label ? manifest.class_names[*e.label] : "?") << '\n';
  }
}

IndexSplit stratified_split_indices(std::span<const int> labels, int num_classes, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> members(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(labels[i]));
    }
    members[labels[i]].push_back(i);
  }
  Rng rng(spec.seed);
  IndexSplit split;
  for (int c = 0; c < num_classes; ++c) {
    auto& group = members[c];
    if (group.size() < 2) {
      throw Error(ErrorCode::ClassTooSmall, "class " + std::to_string(c) + " has fewer than 2 samples");
    }
    const auto n = static_cast<long>(group.size());
    const long n_train =
        std::clamp(static_cast<long>(std::floor(spec.train_fraction * static_cast<double>(n) + 0.5)), 1L, n - 1);
    shuffle(group, rng);
    split.train.insert(split.train.end(), group.begin(), group.begin() + n_train);
    split.test.insert(split.test.end(), group.begin() + n_train, group.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

ManifestSplit stratified_split(const DatasetManifest& manifest, const SplitSpec& spec) {
  std::vector<int> labels;
  labels.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) {
    if (!e.label) throw Error(ErrorCode::InvalidArgument, "cannot split unlabeled entry '" + e.id + "'");
    labels.push_back(*e.label);
  }
  const auto idx = stratified_split_indices(labels, manifest.num_classes(), spec);
  ManifestSplit out;
  out.train.class_names = out.test.class_names = manifest.class_names;
  for (auto i : idx.train) out.train.entries.push_back(manifest.entries[i]);
  for (auto i : idx.test) out.test.entries.push_back(manifest.entries[i]);
  return out;
}

std::pair<int, int> quadrant_origin(int height, int width, int q) {
  const int h2 = height / 2;
  const int w2 = width / 2;
  switch (q) {
    case 0: return {0, 0};
    case 1: return {0, width - w2};
    case 2: return {height - h2, 0};
    case 3: return {height - h2, width - w2};
    default: throw Error(ErrorCode::InvalidArgument, "quadrant index must be 0..3");
  }
}

std::vector<ImageRGB> augment_quadrant_crops(const ImageRGB& image, bool include_original) {
  if (image.height() < 2 * ImageRGB::kMinSide || image.width() < 2 * ImageRGB::kMinSide) {
    throw Error(ErrorCode::ImageTooSmall, "quadrant crops need an image of at least 64x64");
  }
  std::vector<ImageRGB> out;
  out.reserve(5);
  for (int q = 0; q < 4; ++q) {
    const auto [row, col] = quadrant_origin(image.height(), image.width(), q);
    out.push_back(image.crop(row, col, image.height() / 2, image.width() / 2));
  }
  if (include_original) out.push_back(image);
  return out;
}

}  // namespace camid
