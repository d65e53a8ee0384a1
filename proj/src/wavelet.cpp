#include "camid/wavelet.hpp"

#include <algorithm>
#include <cmath>

#include "camid/error.hpp"

namespace camid {

namespace {

FilterBank make_db8() {
  FilterBank bank;
  bank.name = "db8";
  bank.rec_lo = {0.05441584224310401,    0.31287159091429995,   0.6756307362972898,
                 0.5853546836542067,     -0.015829105256349306, -0.2840155429615469,
                 0.0004724845739132828,  0.12874742662047847,   -0.017369301001807547,
                 -0.044088253930794755,  0.013981027917398282,  0.008746094047405777,
                 -0.004870352993451574,  -0.00039174037337694705, 0.0006754494064505693,
                 -0.00011747678412476953};
  const auto n = bank.rec_lo.size();
  bank.dec_lo.assign(bank.rec_lo.rbegin(), bank.rec_lo.rend());
  bank.rec_hi.resize(n);
  bank.dec_hi.resize(n);
  // Quadrature mirror relations of an orthogonal bank.
  for (std::size_t k = 0; k < n; ++k) bank.rec_hi[k] = ((k % 2) ? -1.0 : 1.0) * bank.dec_lo[k];
  for (std::size_t k = 0; k < n; ++k) bank.dec_hi[k] = bank.rec_hi[n - 1 - k];
  bank.extension = Extension::Periodic;
  return bank;
}

FilterBank make_bior3_5() {
  FilterBank bank;
  bank.name = "bior3.5";
  bank.dec_lo = {-0.013810679320049757, 0.04143203796014927,  0.052480581416189075,
                 -0.26792717880896527,  -0.07181553246425873, 0.966747552403483,
                 0.966747552403483,     -0.07181553246425873, -0.26792717880896527,
                 0.052480581416189075,  0.04143203796014927,  -0.013810679320049757};
  bank.dec_hi = {0.0, 0.0, 0.0, 0.0, -0.1767766952966369, 0.5303300858899106,
                 -0.5303300858899106, 0.1767766952966369, 0.0, 0.0, 0.0, 0.0};
  bank.rec_lo = {0.0, 0.0, 0.0, 0.0, 0.1767766952966369, 0.5303300858899106,
                 0.5303300858899106, 0.1767766952966369, 0.0, 0.0, 0.0, 0.0};
  bank.rec_hi = {-0.013810679320049757, -0.04143203796014927, 0.052480581416189075,
                 0.26792717880896527,   -0.07181553246425873, -0.966747552403483,
                 0.966747552403483,     0.07181553246425873,  -0.26792717880896527,
                 -0.052480581416189075, 0.04143203796014927,  0.013810679320049757};
  bank.extension = Extension::Symmetric;
  return bank;
}

long wrap(long i, long period) {
  const long r = i % period;
  return r < 0 ? r + period : r;
}

// out[j] = sum_k f[k] * x[(2 * (first + j) + phase - k) mod P]
void decimate(std::span<const double> x, std::span<const double> f, int phase, long first,
              std::span<double> out) {
  const long period = static_cast<long>(x.size());
  const long taps = static_cast<long>(f.size());
  const long count = static_cast<long>(out.size());
  const long base = 2 * first + phase - (taps - 1);
  std::vector<double> ext(static_cast<std::size_t>(2 * count + taps));
  for (long t = 0; t < static_cast<long>(ext.size()); ++t) ext[t] = x[wrap(base + t, period)];
  for (long j = 0; j < count; ++j) {
    const double* window = ext.data() + 2 * j + taps - 1;
    double acc = 0.0;
    for (long k = 0; k < taps; ++k) acc += f[k] * window[-k];
    out[j] = acc;
  }
}

// y[(2i + j + 1 + phase - L) mod P] += rec_lo[j] lo[i] + rec_hi[j] hi[i], for i < lo.size()
void upsample_add(std::span<const double> lo, std::span<const double> hi, const FilterBank& bank, int phase,
                  long period, std::span<double> y) {
  const long taps = static_cast<long>(bank.rec_lo.size());
  const long count = static_cast<long>(lo.size());
  std::vector<double> acc(static_cast<std::size_t>(2 * count + taps), 0.0);
  for (long i = 0; i < count; ++i) {
    double* dst = acc.data() + 2 * i;
    for (long j = 0; j < taps; ++j) dst[j] += bank.rec_lo[j] * lo[i] + bank.rec_hi[j] * hi[i];
  }
  std::vector<double> folded(static_cast<std::size_t>(period), 0.0);
  const long shift = 1 + phase - taps;
  for (long t = 0; t < static_cast<long>(acc.size()); ++t) folded[wrap(t + shift, period)] += acc[t];
  std::copy_n(folded.begin(), y.size(), y.begin());
}

// First stored subband position for the symmetric mode: the decimated output
// of a half-point-symmetric line is half-point symmetric about (L - 2) / 4.
long symmetric_first(const FilterBank& bank) { return static_cast<long>(bank.dec_lo.size()) / 4; }

std::vector<double> padded_even(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  if (out.size() % 2) out.push_back(out.back());
  return out;
}

}  // namespace

const FilterBank& db8() {
  static const FilterBank bank = make_db8();
  return bank;
}

const FilterBank& bior3_5() {
  static const FilterBank bank = make_bior3_5();
  return bank;
}

const FilterBank& filter_bank(std::string_view name) {
  if (name == "db8") return db8();
  if (name == "bior3.5") return bior3_5();
  throw Error(ErrorCode::InvalidArgument, "unknown filter bank '" + std::string(name) + "'");
}

std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::Vertical: return "V";
    case Orientation::Horizontal: return "H";
    case Orientation::Diagonal: return "D";
  }
  return "?";
}

void analyze_line(std::span<const double> x, const FilterBank& bank, std::span<double> lo, std::span<double> hi) {
  if (x.empty()) throw Error(ErrorCode::ShapeMismatch, "empty line");
  const auto half = (x.size() + 1) / 2;
  if (lo.size() != half || hi.size() != half) {
    throw Error(ErrorCode::ShapeMismatch, "subband buffers must hold ceil(N/2) coefficients");
  }
  const auto even = padded_even(x);
  if (bank.extension == Extension::Periodic) {
    const int phase = static_cast<int>(bank.dec_lo.size()) / 2;
    decimate(even, bank.dec_lo, phase, 0, lo);
    decimate(even, bank.dec_hi, phase, 0, hi);
    return;
  }
  std::vector<double> mirrored(even);
  mirrored.insert(mirrored.end(), even.rbegin(), even.rend());
  const long first = symmetric_first(bank);
  decimate(mirrored, bank.dec_lo, 0, first, lo);
  decimate(mirrored, bank.dec_hi, 0, first, hi);
}

void synthesize_line(std::span<const double> lo, std::span<const double> hi, const FilterBank& bank,
                     std::span<double> x) {
  const long half = static_cast<long>(lo.size());
  if (hi.size() != lo.size() || half == 0 ||
      (static_cast<long>(x.size()) != 2 * half && static_cast<long>(x.size()) != 2 * half - 1)) {
    throw Error(ErrorCode::ShapeMismatch, "subband lengths inconsistent with output length");
  }
  const long even = 2 * half;
  if (bank.extension == Extension::Periodic) {
    upsample_add(lo, hi, bank, static_cast<int>(bank.rec_lo.size()) / 2, even, x);
    return;
  }
  // Rebuild the full-period subbands from their stored fundamental halves.
  const long first = symmetric_first(bank);
  std::vector<double> lo_full(even), hi_full(even);
  for (long j = 0; j < half; ++j) {
    lo_full[wrap(first + j, even)] = lo[j];
    lo_full[wrap(first - 1 - j, even)] = lo[j];
    hi_full[wrap(first + j, even)] = hi[j];
    hi_full[wrap(first - 1 - j, even)] = -hi[j];
  }
  upsample_add(lo_full, hi_full, bank, 0, 2 * even, x);
}

namespace {

struct Halves {
  Eigen::MatrixXd lo;
  Eigen::MatrixXd hi;
};

// Filters every column (down the rows).
Halves analyze_columns(const Eigen::MatrixXd& m, const FilterBank& bank) {
  const Eigen::Index half = (m.rows() + 1) / 2;
  Halves out{Eigen::MatrixXd(half, m.cols()), Eigen::MatrixXd(half, m.cols())};
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    analyze_line({m.col(c).data(), static_cast<std::size_t>(m.rows())}, bank,
                 {out.lo.col(c).data(), static_cast<std::size_t>(half)},
                 {out.hi.col(c).data(), static_cast<std::size_t>(half)});
  }
  return out;
}

Eigen::MatrixXd synthesize_columns(const Eigen::MatrixXd& lo, const Eigen::MatrixXd& hi, const FilterBank& bank,
                                   Eigen::Index rows) {
  Eigen::MatrixXd out(rows, lo.cols());
  for (Eigen::Index c = 0; c < lo.cols(); ++c) {
    synthesize_line({lo.col(c).data(), static_cast<std::size_t>(lo.rows())},
                    {hi.col(c).data(), static_cast<std::size_t>(hi.rows())}, bank,
                    {out.col(c).data(), static_cast<std::size_t>(rows)});
  }
  return out;
}

}  // namespace

WaveletPyramid dwt2(const Eigen::MatrixXd& channel, const FilterBank& bank, int levels) {
  if (levels < 1) throw Error(ErrorCode::TooManyLevels, "levels must be at least 1");
  const Eigen::Index shortest = std::min(channel.rows(), channel.cols());
  if (shortest < (Eigen::Index{1} << levels)) {
    throw Error(ErrorCode::TooManyLevels, std::to_string(levels) + " levels need a side of at least " +
                                              std::to_string(1 << levels));
  }
  WaveletPyramid pyramid;
  pyramid.rows = channel.rows();
  pyramid.cols = channel.cols();
  Eigen::MatrixXd current = channel;
  for (int level = 0; level < levels; ++level) {
    // Rows first (horizontal filtering), then columns.
    const Halves along_rows = analyze_columns(current.transpose(), bank);
    const Eigen::MatrixXd row_lo = along_rows.lo.transpose();
    const Eigen::MatrixXd row_hi = along_rows.hi.transpose();
    Halves lo_split = analyze_columns(row_lo, bank);
    Halves hi_split = analyze_columns(row_hi, bank);
    DetailBands bands;
    bands.horizontal = std::move(lo_split.hi);
    bands.vertical = std::move(hi_split.lo);
    bands.diagonal = std::move(hi_split.hi);
    pyramid.details.push_back(std::move(bands));
    current = std::move(lo_split.lo);
  }
  pyramid.approx = std::move(current);
  return pyramid;
}

Eigen::MatrixXd idwt2(const WaveletPyramid& pyramid, const FilterBank& bank) {
  const int levels = pyramid.levels();
  if (levels < 1) throw Error(ErrorCode::ShapeMismatch, "pyramid has no levels");
  std::vector<std::pair<Eigen::Index, Eigen::Index>> shapes{{pyramid.rows, pyramid.cols}};
  for (int k = 0; k < levels; ++k) {
    shapes.emplace_back((shapes.back().first + 1) / 2, (shapes.back().second + 1) / 2);
  }
  auto check = [&](const Eigen::MatrixXd& band, int k) {
    if (band.rows() != shapes[k].first || band.cols() != shapes[k].second) {
      throw Error(ErrorCode::ShapeMismatch, "band at level " + std::to_string(k) + " has inconsistent shape");
    }
  };
  check(pyramid.approx, levels);
  Eigen::MatrixXd current = pyramid.approx;
  for (int k = levels; k >= 1; --k) {
    const auto& bands = pyramid.details[k - 1];
    for (auto o : kOrientations) check(bands.band(o), k);
    const auto [rows, cols] = shapes[k - 1];
    const Eigen::MatrixXd row_lo = synthesize_columns(current, bands.horizontal, bank, rows);
    const Eigen::MatrixXd row_hi = synthesize_columns(bands.vertical, bands.diagonal, bank, rows);
    current = synthesize_columns(row_lo.transpose(), row_hi.transpose(), bank, cols).transpose();
  }
  return current;
}

WaveletPyramid hard_threshold(WaveletPyramid pyramid, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be nonnegative");
  for (auto& bands : pyramid.details) {
    for (auto o : kOrientations) {
      auto& band = bands.band(o);
      band = (band.array().abs() <= tau).select(0.0, band);
    }
  }
  return pyramid;
}

const Eigen::MatrixXd& DetailBands::band(Orientation o) const {
  switch (o) {
    case Orientation::Vertical: return vertical;
    case Orientation::Horizontal: return horizontal;
    case Orientation::Diagonal: return diagonal;
  }
  return diagonal;
}

Eigen::MatrixXd& DetailBands::band(Orientation o) {
  return const_cast<Eigen::MatrixXd&>(static_cast<const DetailBands&>(*this).band(o));
}

}  // namespace camid
