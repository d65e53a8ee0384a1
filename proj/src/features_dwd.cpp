#include "camid/features_dwd.hpp"

#include <algorithm>
#include <cmath>

#include "camid/error.hpp"

namespace camid {

namespace {

constexpr const char* kChannelNames[] = {"R", "G", "B"};
constexpr const char* kMomentNames[] = {"mean", "variance", "skewness", "kurtosis"};
constexpr const char* kHaralickNames[] = {"energy", "entropy", "contrast", "homogeneity", "correlation"};

SubbandStats moments(std::span<const double> values, bool& degenerate) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "empty band");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  SubbandStats s;
  s.mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.variance = m2;
  degenerate = m2 < kDegenerateVariance;
  if (!degenerate) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
  }
  return s;
}

}  // namespace

SubbandStats subband_stats(std::span<const double> values) {
  bool degenerate = false;
  const auto s = moments(values, degenerate);
  if (degenerate) throw Error(ErrorCode::DegenerateBand, "zero-variance band");
  return s;
}

SubbandStats subband_stats_lenient(std::span<const double> values, bool& degenerate) {
  return moments(values, degenerate);
}

PredictorDesign predictor_design(const WaveletPyramid& pyramid, Orientation orientation, int level) {
  if (level < 1 || level + 1 > pyramid.levels()) {
    throw Error(ErrorCode::InvalidArgument, "predictor at level " + std::to_string(level) + " needs level " +
                                                std::to_string(level + 1) + " in the pyramid");
  }
  const Eigen::MatrixXd& band = pyramid.detail(level, orientation);
  const Eigen::MatrixXd& parent = pyramid.detail(level + 1, orientation);
  const bool diagonal = orientation == Orientation::Diagonal;
  const Eigen::MatrixXd& cross_a =
      diagonal ? pyramid.detail(level, Orientation::Horizontal) : pyramid.detail(level, Orientation::Diagonal);
  const Eigen::MatrixXd& cross_b =
      diagonal ? pyramid.detail(level, Orientation::Vertical) : pyramid.detail(level + 1, Orientation::Diagonal);
  const bool cross_b_is_parent = !diagonal;

  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index c = 1; c + 1 < band.cols(); ++c) {
    for (Eigen::Index r = 1; r + 1 < band.rows(); ++r) {
      if (std::abs(band(r, c)) > 1.0) {
        rows.push_back(r);
        cols.push_back(c);
      }
    }
  }
  PredictorDesign design;
  const auto n = static_cast<Eigen::Index>(rows.size());
  design.magnitudes.resize(n);
  design.neighbors.resize(n, kPredictorNeighbors);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = rows[i], c = cols[i];
    design.magnitudes(i) = std::abs(band(r, c));
    design.neighbors(i, 0) = std::abs(band(r, c - 1));
    design.neighbors(i, 1) = std::abs(band(r, c + 1));
    design.neighbors(i, 2) = std::abs(band(r - 1, c));
    design.neighbors(i, 3) = std::abs(band(r + 1, c));
    design.neighbors(i, 4) = std::abs(parent(r / 2, c / 2));
    design.neighbors(i, 5) = std::abs(cross_a(r, c));
    design.neighbors(i, 6) = cross_b_is_parent ? std::abs(cross_b(r / 2, c / 2)) : std::abs(cross_b(r, c));
  }
  return design;
}

Eigen::VectorXd fit_predictor(const PredictorDesign& design) {
  return design.neighbors.colPivHouseholderQr().solve(design.magnitudes);
}

std::vector<double> predictor_errors(const WaveletPyramid& pyramid, Orientation orientation, int level) {
  const auto design = predictor_design(pyramid, orientation, level);
  if (design.magnitudes.size() < kPredictorMinSamples) return {};
  const Eigen::VectorXd prediction = design.neighbors * fit_predictor(design);
  std::vector<double> errors(static_cast<std::size_t>(design.magnitudes.size()));
  for (Eigen::Index i = 0; i < design.magnitudes.size(); ++i) {
    errors[i] = std::log2(design.magnitudes(i) + kLogEpsilon) - std::log2(std::abs(prediction(i)) + kLogEpsilon);
  }
  return errors;
}

Eigen::MatrixXd cooccurrence_matrix(const Eigen::MatrixXd& band, const CooccurrenceConfig& config) {
  const int levels = config.gray_levels;
  if (levels < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 gray levels");
  const Eigen::Index dr = config.offset_rows, dc = config.offset_cols;
  if ((dr == 0 && dc == 0) || band.rows() <= std::abs(dr) || band.cols() <= std::abs(dc)) {
    throw Error(ErrorCode::InvalidArgument, "band too small for co-occurrence offset");
  }
  const double lo = band.minCoeff();
  double span = band.maxCoeff() - lo;
  // Rounding residue of a constant band is not texture.
  if (span <= 1e-10 * std::max(1.0, band.cwiseAbs().maxCoeff())) span = 0.0;
  Eigen::MatrixXi quantized(band.rows(), band.cols());
  for (Eigen::Index c = 0; c < band.cols(); ++c) {
    for (Eigen::Index r = 0; r < band.rows(); ++r) {
      int q = 0;
      if (span > 0.0) q = std::min(levels - 1, static_cast<int>((band(r, c) - lo) / span * levels));
      quantized(r, c) = q;
    }
  }
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(levels, levels);
  const Eigen::Index r0 = std::max<Eigen::Index>(0, -dr), r1 = band.rows() - std::max<Eigen::Index>(0, dr);
  const Eigen::Index c0 = std::max<Eigen::Index>(0, -dc), c1 = band.cols() - std::max<Eigen::Index>(0, dc);
  for (Eigen::Index c = c0; c < c1; ++c) {
    for (Eigen::Index r = r0; r < r1; ++r) {
      const int a = quantized(r, c), b = quantized(r + dr, c + dc);
      counts(a, b) += 1.0;
      counts(b, a) += 1.0;
    }
  }
  return counts / counts.sum();
}

HaralickStats haralick_from_probabilities(const Eigen::MatrixXd& p, bool& degenerate) {
  const Eigen::Index g = p.rows();
  HaralickStats s;
  double mu_i = 0.0, mu_j = 0.0;
  for (Eigen::Index j = 0; j < g; ++j) {
    for (Eigen::Index i = 0; i < g; ++i) {
      const double v = p(i, j);
      const double d = static_cast<double>(i - j);
      s.energy += v * v;
      if (v > 0.0) s.entropy -= v * std::log2(v);
      s.contrast += d * d * v;
      s.homogeneity += v / (1.0 + d * d);
      mu_i += static_cast<double>(i) * v;
      mu_j += static_cast<double>(j) * v;
    }
  }
  double var_i = 0.0, var_j = 0.0, cov = 0.0;
  for (Eigen::Index j = 0; j < g; ++j) {
    for (Eigen::Index i = 0; i < g; ++i) {
      const double di = static_cast<double>(i) - mu_i, dj = static_cast<double>(j) - mu_j;
      var_i += di * di * p(i, j);
      var_j += dj * dj * p(i, j);
      cov += di * dj * p(i, j);
    }
  }
  degenerate = var_i <= 0.0 || var_j <= 0.0;
  s.correlation = degenerate ? 0.0 : cov / std::sqrt(var_i * var_j);
  return s;
}

HaralickStats cooccurrence_features(const Eigen::MatrixXd& band, const CooccurrenceConfig& config) {
  bool degenerate = false;
  const auto s = haralick_from_probabilities(cooccurrence_matrix(band, config), degenerate);
  if (degenerate) throw Error(ErrorCode::DegenerateBand, "co-occurrence occupies a single gray level");
  return s;
}

std::size_t dwd_slot(DwdBlock block, int channel, int level, Orientation orientation, int stat) {
  const int stats = block == DwdBlock::Haralick ? 5 : 4;
  if (channel < 0 || channel > 2 || level < 1 || level > kDwdFeatureLevels || stat < 0 || stat >= stats) {
    throw Error(ErrorCode::InvalidArgument, "slot coordinates out of range");
  }
  std::size_t base = 0;
  if (block != DwdBlock::Coefficients) base += kDwdCoefficientBlock;
  if (block == DwdBlock::Haralick) base += kDwdPredictorBlock;
  const auto subband = static_cast<std::size_t>((channel * kDwdFeatureLevels + (level - 1)) * 3 +
                                                static_cast<int>(orientation));
  return base + subband * static_cast<std::size_t>(stats) + static_cast<std::size_t>(stat);
}

std::vector<std::string> dwd_slot_names() {
  std::vector<std::string> names(kDwdDimension);
  for (int ch = 0; ch < 3; ++ch) {
    for (int level = 1; level <= kDwdFeatureLevels; ++level) {
      for (auto o : kOrientations) {
        const std::string where = std::string(kChannelNames[ch]) + ".L" + std::to_string(level) + "." +
                                  std::string(to_string(o)) + ".";
        for (int s = 0; s < 4; ++s) {
          names[dwd_slot(DwdBlock::Coefficients, ch, level, o, s)] = "coef." + where + kMomentNames[s];
          names[dwd_slot(DwdBlock::PredictorErrors, ch, level, o, s)] = "pred." + where + kMomentNames[s];
        }
        for (int s = 0; s < 5; ++s) {
          names[dwd_slot(DwdBlock::Haralick, ch, level, o, s)] = "glcm." + where + kHaralickNames[s];
        }
      }
    }
  }
  return names;
}

DwdFeatureVector extract_dwd(const ImageRGB& image, const CooccurrenceConfig& config) {
  DwdFeatureVector out;
  out.values.assign(kDwdDimension, 0.0);
  auto put_moments = [&](DwdBlock block, int ch, int level, Orientation o, const SubbandStats& s) {
    const double v[] = {s.mean, s.variance, s.skewness, s.kurtosis};
    for (int k = 0; k < 4; ++k) out.values[dwd_slot(block, ch, level, o, k)] = v[k];
  };
  for (int ch = 0; ch < 3; ++ch) {
    const auto pyramid = dwt2(image.channel(ch), db8(), kDwdLevels);
    for (int level = 1; level <= kDwdFeatureLevels; ++level) {
      for (auto o : kOrientations) {
        const std::string where = std::string(kChannelNames[ch]) + ".L" + std::to_string(level) + "." +
                                  std::string(to_string(o));
        const Eigen::MatrixXd& band = pyramid.detail(level, o);
        bool degenerate = false;
        put_moments(DwdBlock::Coefficients, ch, level, o,
                    subband_stats_lenient({band.data(), static_cast<std::size_t>(band.size())}, degenerate));
        if (degenerate) out.flags.push_back("coef." + where + ": degenerate band");

        const auto errors = predictor_errors(pyramid, o, level);
        if (errors.empty()) {
          out.flags.push_back("pred." + where + ": insufficient samples");
        } else {
          put_moments(DwdBlock::PredictorErrors, ch, level, o, subband_stats_lenient(errors, degenerate));
          if (degenerate) out.flags.push_back("pred." + where + ": degenerate errors");
        }

        const auto h = haralick_from_probabilities(cooccurrence_matrix(band, config), degenerate);
        if (degenerate) out.flags.push_back("glcm." + where + ": degenerate band");
        const double hv[] = {h.energy, h.entropy, h.contrast, h.homogeneity, h.correlation};
        for (int k = 0; k < 5; ++k) out.values[dwd_slot(DwdBlock::Haralick, ch, level, o, k)] = hv[k];
      }
    }
  }
  return out;
}

}  // namespace camid
