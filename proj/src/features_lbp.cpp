#include "camid/features_lbp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "camid/error.hpp"

namespace camid {

double universal_threshold(const WaveletPyramid& pyramid) {
  const Eigen::MatrixXd& finest = pyramid.detail(1, Orientation::Diagonal);
  std::vector<double> mags(static_cast<std::size_t>(finest.size()));
  std::transform(finest.data(), finest.data() + finest.size(), mags.begin(), [](double v) { return std::abs(v); });
  const auto mid = mags.size() / 2;
  std::nth_element(mags.begin(), mags.begin() + static_cast<long>(mid), mags.end());
  double median = mags[mid];
  if (mags.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(mags.begin(), mags.begin() + static_cast<long>(mid)));
  }
  const double sigma = median / 0.6745;
  const double pixels = static_cast<double>(pyramid.rows * pyramid.cols);
  return sigma * std::sqrt(2.0 * std::log(pixels));
}

NoiseResidual noise_residual(const Eigen::MatrixXd& channel, Threshold tau, int levels) {
  if (channel.rows() < ImageRGB::kMinSide || channel.cols() < ImageRGB::kMinSide) {
    throw Error(ErrorCode::ImageTooSmall, "noise residual needs at least a 32x32 channel");
  }
  const auto& bank = bior3_5();
  auto pyramid = dwt2(channel, bank, levels);
  NoiseResidual out;
  out.tau = tau ? *tau : universal_threshold(pyramid);
  const Eigen::MatrixXd denoised = idwt2(hard_threshold(std::move(pyramid), out.tau), bank);
  out.residual = channel - denoised;
  return out;
}

int riu2_bin(std::uint8_t pattern) {
  const auto rotated = static_cast<std::uint8_t>((pattern >> 1) | (pattern << 7));
  const int transitions = std::popcount(static_cast<unsigned>(pattern ^ rotated));
  return transitions <= 2 ? std::popcount(static_cast<unsigned>(pattern)) : kRiu2Bins - 1;
}

std::uint8_t lbp_pattern(const Eigen::MatrixXd& m, Eigen::Index r, Eigen::Index c) {
  static constexpr int kDr[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
  static constexpr int kDc[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
  const double center = m(r, c);
  unsigned code = 0;
  for (int i = 0; i < 8; ++i) {
    if (m(r + kDr[i], c + kDc[i]) >= center) code |= 1u << i;
  }
  return static_cast<std::uint8_t>(code);
}

std::array<double, kRiu2Bins> lbp_riu2_histogram(const Eigen::MatrixXd& residual) {
  if (residual.rows() < 3 || residual.cols() < 3) {
    throw Error(ErrorCode::ImageTooSmall, "LBP needs at least a 3x3 matrix");
  }
  static const auto table = [] {
    std::array<int, 256> t{};
    for (int p = 0; p < 256; ++p) t[p] = riu2_bin(static_cast<std::uint8_t>(p));
    return t;
  }();
  std::array<long, kRiu2Bins> counts{};
  for (Eigen::Index c = 1; c + 1 < residual.cols(); ++c) {
    for (Eigen::Index r = 1; r + 1 < residual.rows(); ++r) ++counts[table[lbp_pattern(residual, r, c)]];
  }
  const double interior = static_cast<double>((residual.rows() - 2) * (residual.cols() - 2));
  std::array<double, kRiu2Bins> hist{};
  for (int b = 0; b < kRiu2Bins; ++b) hist[b] = static_cast<double>(counts[b]) / interior;
  return hist;
}

LbpFeatureVector extract_lbp(const ImageRGB& image, Threshold tau, int levels) {
  LbpFeatureVector out;
  out.values.reserve(kLbpDimension);
  for (int ch = 0; ch < 3; ++ch) {
    const auto hist = lbp_riu2_histogram(noise_residual(image.channel(ch), tau, levels).residual);
    out.values.insert(out.values.end(), hist.begin(), hist.end());
  }
  return out;
}

}  // namespace camid
