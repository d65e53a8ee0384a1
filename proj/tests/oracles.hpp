#pragma once

// Slow reference implementations shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace camid::test {

// Central differences over every coordinate of a flattened matrix.
template <typename Cost>
Eigen::MatrixXd numeric_gradient(const Eigen::MatrixXd& at, Cost cost, double h = 1e-5) {
  Eigen::MatrixXd g(at.rows(), at.cols());
  Eigen::MatrixXd probe = at;
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    probe(i) = at(i) + h;
    const double up = cost(probe);
    probe(i) = at(i) - h;
    const double down = cost(probe);
    probe(i) = at(i);
    g(i) = (up - down) / (2 * h);
  }
  return g;
}

inline double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(a.norm() + b.norm(), 1e-12);
}

// Exhaustive sort of all reference rows, then a plain majority with the
// nearest-member tie rule.
inline int brute_force_knn(const Eigen::MatrixXd& ref, const std::vector<int>& labels, int K, int k, const Eigen::VectorXd& z) {
  std::vector<std::pair<double, Eigen::Index>> all;
  for (Eigen::Index i = 0; i < ref.rows(); ++i) all.push_back({(ref.row(i).transpose() - z).squaredNorm(), i});
  std::sort(all.begin(), all.end());
  std::vector<int> votes(K, 0);
  for (int j = 0; j < k; ++j) ++votes[labels[all[j].second]];
  const int top = *std::max_element(votes.begin(), votes.end());
  double nearest = INFINITY;
  int best = K;
  for (int j = 0; j < k; ++j) {
    const int c = labels[all[j].second];
    if (votes[c] != top) continue;
    const double d = all[j].first;
    if (d < nearest || (d == nearest && c < best)) {
      nearest = d;
      best = c;
    }
  }
  return best;
}

// Uniform-pattern (u2) labels with 59 bins: 1 + rank among the 58 uniform
// codes in ascending order, or 0 for every non-uniform code.
struct U2Table {
  std::array<int, 256> label{};
  std::array<int, 59> popcount{};
};

inline int circular_transitions(int code) {
  int bits[8];
  for (int i = 0; i < 8; ++i) bits[i] = (code >> i) & 1;
  int t = 0;
  for (int i = 0; i < 8; ++i) t += bits[i] != bits[(i + 1) % 8];
  return t;
}

inline U2Table make_u2_table() {
  U2Table t;
  int next = 1;
  for (int code = 0; code < 256; ++code) {
    if (circular_transitions(code) <= 2) {
      t.popcount[next] = __builtin_popcount(code);
      t.label[code] = next++;
    }
  }
  return t;
}

inline int collapse_u2(const U2Table& t, int label) { return label == 0 ? 9 : t.popcount[label]; }

// Neighbors sampled counter-clockwise by angle from the east, unlike the
// library's clockwise walk from the north-west.
inline std::array<double, 10> naive_histogram(const Eigen::MatrixXd& m) {
  static const U2Table table = make_u2_table();
  std::array<double, 10> counts{};
  for (Eigen::Index r = 1; r + 1 < m.rows(); ++r) {
    for (Eigen::Index c = 1; c + 1 < m.cols(); ++c) {
      int code = 0;
      for (int p = 0; p < 8; ++p) {
        const double angle = p * M_PI / 4;
        const auto dr = static_cast<Eigen::Index>(std::lround(-std::sin(angle)));
        const auto dc = static_cast<Eigen::Index>(std::lround(std::cos(angle)));
        if (m(r + dr, c + dc) >= m(r, c)) code |= 1 << p;
      }
      counts[collapse_u2(table, table.label[code])] += 1;
    }
  }
  const double n = static_cast<double>((m.rows() - 2) * (m.cols() - 2));
  for (auto& v : counts) v /= n;
  return counts;
}

}  // namespace camid::test
