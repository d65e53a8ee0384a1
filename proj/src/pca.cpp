#include "camid/pca.hpp"

#include <algorithm>
#include <cmath>

#include "camid/error.hpp"

namespace camid {

namespace {

// Largest-magnitude entry of every column made positive.
void fix_signs(Eigen::MatrixXd& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index arg = 0;
    basis.col(j).cwiseAbs().maxCoeff(&arg);
    if (basis(arg, j) < 0.0) basis.col(j) *= -1.0;
  }
}

// Extends orthonormal columns to `k` columns with an orthonormal complement.
Eigen::MatrixXd complete_basis(const Eigen::MatrixXd& partial, Eigen::Index n, Eigen::Index k) {
  if (partial.cols() >= k) return partial.leftCols(k);
  const Eigen::MatrixXd q = partial.cols() == 0 ? Eigen::MatrixXd::Identity(n, n)
                                                : Eigen::MatrixXd(Eigen::HouseholderQR<Eigen::MatrixXd>(partial).householderQ());
  Eigen::MatrixXd out(n, k);
  out.leftCols(partial.cols()) = partial;
  out.rightCols(k - partial.cols()) = q.middleCols(partial.cols(), k - partial.cols());
  return out;
}

}  // namespace

double PcaModel::tail_sum() const {
  const auto k = basis.cols();
  return eigenvalues.tail(eigenvalues.size() - k).sum();
}

PcaModel pca_fit(const Eigen::MatrixXd& X, const PcaTarget& target, bool center) {
  const Eigen::Index m = X.rows(), n = X.cols();
  if (m < 2 || n < 1) throw Error(ErrorCode::InvalidArgument, "PCA needs at least 2 rows and 1 column");
  if (!X.allFinite()) throw Error(ErrorCode::InvalidArgument, "PCA input has non-finite entries");

  PcaModel model;
  model.centered = center;
  model.mean = center ? Eigen::VectorXd(X.colwise().mean().transpose()) : Eigen::VectorXd::Zero(n);
  const Eigen::MatrixXd Xc = X.rowwise() - model.mean.transpose();
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if (Xc.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    throw Error(ErrorCode::DegenerateData, "all rows are identical");
  }

  Eigen::MatrixXd vectors;  // descending order
  model.eigenvalues = Eigen::VectorXd::Zero(n);
  if (m < n) {
    // Gram route: eigenvectors of Xc Xc^T map to Xc^T u / sqrt(lambda).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Xc * Xc.transpose());
    const Eigen::VectorXd values = eig.eigenvalues().reverse();
    const Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse();
    const double cutoff = 1e-10 * std::max(values(0), 0.0);
    Eigen::Index rank = 0;
    while (rank < m && values(rank) > cutoff) ++rank;
    vectors.resize(n, rank);
    for (Eigen::Index j = 0; j < rank; ++j) {
      vectors.col(j) = Xc.transpose() * u.col(j) / std::sqrt(values(j));
      model.eigenvalues(j) = values(j);
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Xc.transpose() * Xc);
    model.eigenvalues = eig.eigenvalues().reverse();
    vectors = eig.eigenvectors().rowwise().reverse();
  }
  model.eigenvalues = model.eigenvalues.cwiseMax(0.0);

  Eigen::Index k = 0;
  if (const auto* count = std::get_if<ComponentCount>(&target)) {
    if (count->k < 0 || count->k > n) {
      throw Error(ErrorCode::InvalidArgument, "component count must lie in [0, " + std::to_string(n) + "]");
    }
    k = count->k;
  } else {
    const auto& tol = std::get<ProjectionTolerance>(target);
    if (!(tol.tolerance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
    const double total = model.eigenvalues.sum();
    auto discarded = [&](Eigen::Index kept) {
      const double tail = model.eigenvalues.tail(n - kept).sum();
      return tol.absolute ? tail : tail / total;
    };
    while (k < n && discarded(k) > tol.tolerance) ++k;
  }
  model.basis = complete_basis(vectors, n, k);
  fix_signs(model.basis);
  return model;
}

Eigen::VectorXd pca_transform(const PcaModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(model.input_dim()) + " features, got " +
                                                  std::to_string(x.size()));
  }
  return model.basis.transpose() * (x - model.mean);
}

Eigen::MatrixXd pca_transform_rows(const PcaModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(model.input_dim()) + " features, got " +
                                                  std::to_string(X.cols()));
  }
  return (X.rowwise() - model.mean.transpose()) * model.basis;
}

Eigen::MatrixXd pca_reconstruct_rows(const PcaModel& model, const Eigen::MatrixXd& Z) {
  if (Z.cols() != model.components()) throw Error(ErrorCode::DimensionMismatch, "wrong component count");
  return (Z * model.basis.transpose()).rowwise() + model.mean.transpose();
}

ProjectionError projection_error(const PcaModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.input_dim()) throw Error(ErrorCode::DimensionMismatch, "wrong feature count");
  const Eigen::MatrixXd Xc = X.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd residual = Xc - Xc * model.basis * model.basis.transpose();
  return {residual.squaredNorm(), model.tail_sum()};
}

}  // namespace camid
