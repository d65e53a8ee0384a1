#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "camid/dataset.hpp"
#include "camid/random.hpp"

namespace camid::test {

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                                     double hi = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = uniform(rng, lo, hi);
  }
  return m;
}

inline Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = standard_normal(rng);
  }
  return m;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Random 8-bit-valued RGB image.
inline ImageRGB random_image(Rng& rng, int height, int width) {
  std::array<Eigen::MatrixXd, 3> planes;
  for (auto& p : planes) {
    p.resize(height, width);
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = std::floor(uniform(rng, 0.0, 256.0));
  }
  return ImageRGB(planes);
}

/// Smooth gradient plus noise, still integer valued.
inline ImageRGB textured_image(Rng& rng, int height, int width) {
  std::array<Eigen::MatrixXd, 3> planes;
  for (int ch = 0; ch < 3; ++ch) {
    auto& p = planes[ch];
    p.resize(height, width);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        const double base = 100.0 + 60.0 * std::sin(0.11 * r + 0.3 * ch) * std::cos(0.07 * c);
        p(r, c) = std::clamp(std::round(base + 12.0 * standard_normal(rng)), 0.0, 255.0);
      }
    }
  }
  return ImageRGB(planes);
}

/// Fresh empty directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("camid_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Smooth random scene plus noise from a kernel that depends on `camera` (0..3).
inline ImageRGB synthetic_camera_image(Rng& rng, int camera, int height, int width) {
  const double fr = uniform(rng, 0.02, 0.09), fc = uniform(rng, 0.02, 0.09);
  const double phase = uniform(rng, 0.0, 6.28), level = uniform(rng, 70.0, 150.0);
  Eigen::MatrixXd white(height + 2, width + 2);
  std::array<Eigen::MatrixXd, 3> planes;
  for (int ch = 0; ch < 3; ++ch) {
    for (Eigen::Index i = 0; i < white.size(); ++i) white(i) = standard_normal(rng);
    auto& p = planes[ch];
    p.resize(height, width);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        const auto w = white.block(r, c, 3, 3);
        double noise = 0.0;
        switch (camera) {
          case 0: noise = 6.0 * w(1, 1); break;
          case 1: noise = 6.0 * w.sum() / 3.0; break;
          case 2: noise = 3.0 * (4.0 * w(1, 1) - w(0, 1) - w(2, 1) - w(1, 0) - w(1, 2)) / 2.0; break;
          default: noise = 6.0 * (w(1, 1) - 0.9 * w(1, 2)); break;
        }
        const double scene = level + 50.0 * std::sin(fr * r + phase + ch) * std::cos(fc * c - phase);
        p(r, c) = std::clamp(std::round(scene + noise), 0.0, 255.0);
      }
    }
  }
  return ImageRGB(planes);
}

/// Writes `per_class` PNGs for each of `cameras` classes plus a labeled
/// manifest; returns the manifest path.
inline std::filesystem::path write_synthetic_dataset(const std::filesystem::path& dir, int cameras, int per_class,
                                                     int size, std::uint64_t seed) {
  Rng rng(seed);
  DatasetManifest manifest;
  for (int k = 0; k < cameras; ++k) manifest.class_names.push_back("cam" + std::to_string(k));
  for (int i = 0; i < per_class; ++i) {
    for (int k = 0; k < cameras; ++k) {
      const std::string id = "cam" + std::to_string(k) + "_" + std::to_string(i);
      write_png(synthetic_camera_image(rng, k, size, size), dir / (id + ".png"));
      manifest.entries.push_back({id, id + ".png", k});
    }
  }
  const auto path = dir / "manifest.csv";
  save_manifest(manifest, path);
  return path;
}

}  // namespace camid::test
