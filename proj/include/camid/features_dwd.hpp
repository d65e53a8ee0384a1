#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "camid/dataset.hpp"
#include "camid/wavelet.hpp"

namespace camid {

/// Population moments; kurtosis is non-excess (a Gaussian gives 3).
struct SubbandStats {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

/// Variance below this makes skewness and kurtosis undefined.
inline constexpr double kDegenerateVariance = 1e-12;

/// Throws DegenerateBand when the variance is below kDegenerateVariance.
SubbandStats subband_stats(std::span<const double> values);

/// Like subband_stats, but substitutes skewness = kurtosis = 0 and raises
/// `degenerate` instead of throwing.
SubbandStats subband_stats_lenient(std::span<const double> values, bool& degenerate);

/// Least-squares problem for the linear magnitude predictor of one subband.
/// Each row is an interior coefficient with magnitude > 1; the seven columns
/// hold neighbor magnitudes:
///   V/H bands: left, right, up, down, parent (same orientation, level k+1),
///              diagonal band at level k, diagonal band at level k+1
///   D band:    left, right, up, down, parent (D, level k+1),
///              horizontal band at level k, vertical band at level k
struct PredictorDesign {
  Eigen::VectorXd magnitudes;
  Eigen::MatrixXd neighbors;
};

inline constexpr int kPredictorNeighbors = 7;
inline constexpr int kPredictorMinSamples = 8;
inline constexpr double kLogEpsilon = 1e-10;

/// `level` is 1-based and the pyramid must contain level + 1.
PredictorDesign predictor_design(const WaveletPyramid& pyramid, Orientation orientation, int level);

/// Weights minimizing ||magnitudes - neighbors * w||.
Eigen::VectorXd fit_predictor(const PredictorDesign& design);

/// log2(|c| + eps) - log2(|prediction| + eps) per design row; empty when fewer
/// than kPredictorMinSamples coefficients qualify.
std::vector<double> predictor_errors(const WaveletPyramid& pyramid, Orientation orientation, int level);

struct HaralickStats {
  double energy = 0.0;
  double entropy = 0.0;  // bits
  double contrast = 0.0;
  double homogeneity = 0.0;
  double correlation = 0.0;
};

struct CooccurrenceConfig {
  int gray_levels = 16;
  int offset_rows = 0;
  int offset_cols = 1;
};

/// Min-max quantizes the band to `gray_levels` bins and returns the
/// symmetric, normalized co-occurrence matrix for the configured offset. A
/// band whose range is below 1e-10 of its magnitude quantizes to level 0.
Eigen::MatrixXd cooccurrence_matrix(const Eigen::MatrixXd& band, const CooccurrenceConfig& config);

/// Statistics of a normalized co-occurrence matrix. `degenerate` is raised
/// (and correlation set to 0) when the marginal has zero spread.
HaralickStats haralick_from_probabilities(const Eigen::MatrixXd& p, bool& degenerate);

/// Throws DegenerateBand when the band quantizes to a single gray level.
HaralickStats cooccurrence_features(const Eigen::MatrixXd& band, const CooccurrenceConfig& config);

// Layout of the 351-slot vector: three contiguous blocks, each ordered
// channel (R, G, B) > level (1..3) > orientation (V, H, D) > statistic.
inline constexpr int kDwdLevels = 4;          // decomposition depth
inline constexpr int kDwdFeatureLevels = 3;   // levels summarized
inline constexpr std::size_t kDwdCoefficientBlock = 108;
inline constexpr std::size_t kDwdPredictorBlock = 108;
inline constexpr std::size_t kDwdHaralickBlock = 135;
inline constexpr std::size_t kDwdDimension = kDwdCoefficientBlock + kDwdPredictorBlock + kDwdHaralickBlock;

enum class DwdBlock { Coefficients = 0, PredictorErrors = 1, Haralick = 2 };

/// Slot index of statistic `stat` (0..3 for moment blocks, 0..4 for Haralick);
/// `level` is 1-based.
std::size_t dwd_slot(DwdBlock block, int channel, int level, Orientation orientation, int stat);

/// Human-readable name of every slot, e.g. "pred.G.L2.H.skewness".
std::vector<std::string> dwd_slot_names();

struct DwdFeatureVector {
  std::vector<double> values;
  /// One entry per substituted statistic (degenerate band, too few predictor samples).
  std::vector<std::string> flags;
};

DwdFeatureVector extract_dwd(const ImageRGB& image, const CooccurrenceConfig& config = {});

}  // namespace camid
