#pragma once

#include <variant>

#include <Eigen/Dense>

namespace camid {

/// Fitted principal-component basis.
///
/// Eigenvalues are those of the scatter matrix Xc^T Xc (no 1/m factor), so the
/// discarded tail sum equals the squared Frobenius reconstruction error of
/// the training matrix.
struct PcaModel {
  Eigen::VectorXd mean;         // zero when fit without centering
  Eigen::VectorXd eigenvalues;  // all n, descending, clamped at 0
  Eigen::MatrixXd basis;        // n x k, orthonormal columns
  bool centered = true;

  int input_dim() const { return static_cast<int>(mean.size()); }
  int components() const { return static_cast<int>(basis.cols()); }
  double total_variance() const { return eigenvalues.sum(); }
  double tail_sum() const;
};

struct ComponentCount {
  int k;
};

/// Keep the smallest k whose discarded eigenvalue mass is within `tolerance`,
/// measured relative to the total mass unless `absolute` is set.
struct ProjectionTolerance {
  double tolerance;
  bool absolute = false;
};

using PcaTarget = std::variant<ComponentCount, ProjectionTolerance>;

PcaModel pca_fit(const Eigen::MatrixXd& X, const PcaTarget& target, bool center = true);

Eigen::VectorXd pca_transform(const PcaModel& model, const Eigen::VectorXd& x);

/// Row-wise transform of an m x n matrix into m x k.
Eigen::MatrixXd pca_transform_rows(const PcaModel& model, const Eigen::MatrixXd& X);

/// Rank-k reconstruction, row-wise.
Eigen::MatrixXd pca_reconstruct_rows(const PcaModel& model, const Eigen::MatrixXd& Z);

struct ProjectionError {
  double direct;      // ||Xc - Xc B B^T||_F^2
  double eigen_tail;  // sum of discarded eigenvalues
};

ProjectionError projection_error(const PcaModel& model, const Eigen::MatrixXd& X);

}  // namespace camid
