#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "camid/dataset.hpp"
#include "camid/wavelet.hpp"

namespace camid {

/// Denoising threshold; an empty value selects the universal threshold
/// sigma * sqrt(2 ln N) with sigma = median(|finest diagonal band|) / 0.6745.
using Threshold = std::optional<double>;

struct NoiseResidual {
  Eigen::MatrixXd residual;  // channel minus its denoised reconstruction
  double tau = 0.0;
};

inline constexpr int kDenoiseLevels = 4;

double universal_threshold(const WaveletPyramid& pyramid);

NoiseResidual noise_residual(const Eigen::MatrixXd& channel, Threshold tau, int levels = kDenoiseLevels);

inline constexpr int kRiu2Bins = 10;
inline constexpr int kLbpDimension = 3 * kRiu2Bins;

/// Rotation-invariant uniform bin of an 8-neighbor pattern: popcount for
/// patterns with at most two circular 0/1 transitions, 9 otherwise.
int riu2_bin(std::uint8_t pattern);

/// 8-bit pattern at interior pixel (r, c); bit i is set when neighbor i,
/// walked clockwise from the top-left, is >= the center.
std::uint8_t lbp_pattern(const Eigen::MatrixXd& m, Eigen::Index r, Eigen::Index c);

/// Normalized riu2 histogram over interior pixels (borders excluded).
std::array<double, kRiu2Bins> lbp_riu2_histogram(const Eigen::MatrixXd& residual);

struct LbpFeatureVector {
  std::vector<double> values;  // R bins 0..9, G bins 0..9, B bins 0..9
};

LbpFeatureVector extract_lbp(const ImageRGB& image, Threshold tau, int levels = kDenoiseLevels);

}  // namespace camid
