#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "camid/error.hpp"
#include "camid/features_lbp.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace camid;
using namespace camid::test;
using Eigen::MatrixXd;

namespace {

std::uint8_t rotate(std::uint8_t p, int k) {
  return static_cast<std::uint8_t>((p << k) | (p >> (8 - k)));
}

}  // namespace

TEST_CASE("riu2 mapping over all 256 patterns") {
  std::array<int, 10> members{};
  for (int p = 0; p < 256; ++p) {
    const auto code = static_cast<std::uint8_t>(p);
    const int bin = riu2_bin(code);
    ++members[bin];
    for (int k = 1; k < 8; ++k) CHECK(riu2_bin(rotate(code, k)) == bin);
    if (circular_transitions(p) <= 2) {
      CHECK(bin == __builtin_popcount(p));
    } else {
      CHECK(bin == 9);
    }
  }
  CHECK(members[0] == 1);
  CHECK(members[8] == 1);
  for (int b = 1; b <= 7; ++b) CHECK(members[b] == 8);
  CHECK(256 - members[9] == 58);
}

TEST_CASE("riu2 histogram equals the naive u2 oracle") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    MatrixXd m = test::random_matrix(rng, 16, 16, -3, 3);
    if (trial % 2) m = m.array().round();  // plenty of ties
    const auto got = lbp_riu2_histogram(m);
    const auto want = naive_histogram(m);
    for (int b = 0; b < 10; ++b) CHECK(got[b] == want[b]);
  }
}

TEST_CASE("histogram mass and edge cases") {
  CHECK(lbp_riu2_histogram(MatrixXd::Constant(5, 7, 1.5))[8] == 1.0);

  MatrixXd peak = MatrixXd::Zero(9, 9);
  peak(4, 4) = 2.0;
  const auto h = lbp_riu2_histogram(peak);
  CHECK(h[0] * 49 == doctest::Approx(1.0));

  Rng rng(2);
  const MatrixXd m = test::gaussian_matrix(rng, 23, 31);
  const auto g = lbp_riu2_histogram(m);
  CHECK(std::accumulate(g.begin(), g.end(), 0.0) * 21 * 29 == doctest::Approx(21 * 29));
  CHECK_THROWS_AS(lbp_riu2_histogram(MatrixXd::Zero(2, 9)), Error);
}

TEST_CASE("pattern bits walk clockwise from the top-left") {
  MatrixXd m = MatrixXd::Zero(3, 3);
  m(1, 1) = 1.0;
  m(0, 0) = 5.0;  // bit 0
  m(1, 2) = 5.0;  // bit 3
  CHECK(lbp_pattern(m, 1, 1) == 0b00001001);
}

TEST_CASE("noise residual with zero threshold vanishes") {
  Rng rng(3);
  const MatrixXd x = test::random_matrix(rng, 45, 64, 0, 255);
  const auto n = noise_residual(x, 0.0);
  CHECK(test::max_abs(n.residual) < 1e-8);
  CHECK(n.tau == 0.0);
}

TEST_CASE("noise residual of a constant channel vanishes") {
  const MatrixXd x = MatrixXd::Constant(64, 48, 77.0);
  CHECK(test::max_abs(noise_residual(x, 30.0).residual) < 1e-8);
  CHECK(test::max_abs(noise_residual(x, std::nullopt).residual) < 1e-8);
}

TEST_CASE("impulse on a ramp concentrates the residual") {
  const int n = 64, r0 = 30, c0 = 33;
  MatrixXd x(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) x(r, c) = 40.0 + 0.5 * r + 0.25 * c;
  }
  x(r0, c0) += 100.0;
  const auto res = noise_residual(x, 1e6).residual;
  const int half = static_cast<int>(bior3_5().dec_lo.size());  // window of two filter lengths
  double inside = 0.0;
  for (int r = std::max(0, r0 - half); r < std::min(n, r0 + half); ++r) {
    for (int c = std::max(0, c0 - half); c < std::min(n, c0 + half); ++c) inside += res(r, c) * res(r, c);
  }
  CHECK(inside >= 0.5 * res.squaredNorm());
}

TEST_CASE("universal threshold") {
  Rng rng(4);
  const MatrixXd x = test::random_matrix(rng, 64, 80, 0, 255);
  const auto p = dwt2(x, bior3_5(), 4);
  const MatrixXd& hd = p.detail(1, Orientation::Diagonal);
  std::vector<double> mags(hd.data(), hd.data() + hd.size());
  for (auto& v : mags) v = std::abs(v);
  std::sort(mags.begin(), mags.end());
  const double median = mags.size() % 2 ? mags[mags.size() / 2]
                                        : 0.5 * (mags[mags.size() / 2 - 1] + mags[mags.size() / 2]);
  const double expect = median / 0.6745 * std::sqrt(2.0 * std::log(64.0 * 80.0));
  CHECK(universal_threshold(p) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(noise_residual(x, std::nullopt).tau == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("residual needs a 32-pixel channel") {
  CHECK_THROWS_AS(noise_residual(MatrixXd::Zero(31, 64), 1.0), Error);
  try {
    noise_residual(MatrixXd::Zero(32, 32), 1.0, 6);
    FAIL("expected TooManyLevels");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyLevels);
  }
}

TEST_CASE("extract_lbp shape, normalization and channel independence") {
  Rng rng(5);
  const ImageRGB img = test::textured_image(rng, 64, 72);
  const auto f = extract_lbp(img, std::nullopt);
  REQUIRE(f.values.size() == 30);
  for (int ch = 0; ch < 3; ++ch) {
    const double sum = std::accumulate(f.values.begin() + 10 * ch, f.values.begin() + 10 * ch + 10, 0.0);
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  CHECK(extract_lbp(img, std::nullopt).values == f.values);

  const ImageRGB swapped({img.channel(ColorChannel::Blue), img.channel(ColorChannel::Green),
                          img.channel(ColorChannel::Red)});
  const auto g = extract_lbp(swapped, std::nullopt);
  for (int b = 0; b < 10; ++b) {
    CHECK(g.values[b] == f.values[20 + b]);
    CHECK(g.values[10 + b] == f.values[10 + b]);
    CHECK(g.values[20 + b] == f.values[b]);
  }

  const auto fixed = extract_lbp(img, 12.0);
  CHECK(fixed.values != f.values);
}
