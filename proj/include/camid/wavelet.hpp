#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace camid {

/// Boundary handling of a filter bank. Both modes are non-expansive: a line of
/// even length N yields N/2 approximation and N/2 detail coefficients.
enum class Extension {
  Periodic,   ///< circular wrap; keeps orthogonal banks orthogonal
  Symmetric,  ///< half-point mirror; requires symmetric/antisymmetric even-length filters
};

struct FilterBank {
  std::string name;
  std::vector<double> dec_lo;
  std::vector<double> dec_hi;
  std::vector<double> rec_lo;
  std::vector<double> rec_hi;
  Extension extension;
};

/// Daubechies-8 (16 taps), periodic extension.
const FilterBank& db8();
/// Biorthogonal 3.5 (12-tap decomposition lowpass), symmetric extension.
const FilterBank& bior3_5();
/// Looks up "db8" or "bior3.5".
const FilterBank& filter_bank(std::string_view name);

/// One analysis step along a line. Odd-length input is padded with its last
/// sample; lo and hi must both have ceil(N/2) entries.
void analyze_line(std::span<const double> x, const FilterBank& bank, std::span<double> lo, std::span<double> hi);

/// Inverse of analyze_line; `x.size()` selects the (possibly odd) output length.
void synthesize_line(std::span<const double> lo, std::span<const double> hi, const FilterBank& bank,
                     std::span<double> x);

enum class Orientation { Vertical = 0, Horizontal = 1, Diagonal = 2 };

inline constexpr Orientation kOrientations[] = {Orientation::Vertical, Orientation::Horizontal,
                                                Orientation::Diagonal};

std::string_view to_string(Orientation o);

struct DetailBands {
  Eigen::MatrixXd vertical;    // lowpass down the columns, highpass along rows
  Eigen::MatrixXd horizontal;  // highpass down the columns, lowpass along rows
  Eigen::MatrixXd diagonal;    // highpass both ways

  const Eigen::MatrixXd& band(Orientation o) const;
  Eigen::MatrixXd& band(Orientation o);
};

/// Multilevel separable decomposition. details[k - 1] holds level k; the band
/// at level k is ceil(rows / 2^k) x ceil(cols / 2^k).
struct WaveletPyramid {
  Eigen::MatrixXd approx;
  std::vector<DetailBands> details;
  Eigen::Index rows = 0;  // original shape
  Eigen::Index cols = 0;

  int levels() const { return static_cast<int>(details.size()); }
  /// 1-based level.
  const Eigen::MatrixXd& detail(int level, Orientation o) const { return details.at(level - 1).band(o); }
  Eigen::MatrixXd& detail(int level, Orientation o) { return details.at(level - 1).band(o); }
};

WaveletPyramid dwt2(const Eigen::MatrixXd& channel, const FilterBank& bank, int levels);

Eigen::MatrixXd idwt2(const WaveletPyramid& pyramid, const FilterBank& bank);

/// Zeroes every detail coefficient with |c| <= tau; the approximation is untouched.
WaveletPyramid hard_threshold(WaveletPyramid pyramid, double tau);

}  // namespace camid
