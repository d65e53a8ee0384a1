#pragma once

#include <vector>

#include <Eigen/Dense>

namespace camid {

/// Z-score transform fit on training rows. Features whose spread is
/// negligible relative to their magnitude are dropped; `kept` lists the
/// surviving input columns in order.
struct Standardizer {
  Eigen::VectorXd mean;    // per input column
  Eigen::VectorXd stddev;  // per input column, population
  std::vector<int> kept;

  static Standardizer fit(const Eigen::MatrixXd& X);

  int input_dim() const { return static_cast<int>(mean.size()); }
  int output_dim() const { return static_cast<int>(kept.size()); }

  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd transform(const Eigen::VectorXd& x) const;
  /// Maps standardized rows back to input space; dropped columns get their mean.
  Eigen::MatrixXd inverse(const Eigen::MatrixXd& Z) const;
};

}  // namespace camid
