#include "camid/standardizer.hpp"

#include <cmath>

#include "camid/error.hpp"

namespace camid {

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
  if (X.rows() < 1) throw Error(ErrorCode::InvalidArgument, "cannot standardize an empty matrix");
  Standardizer s;
  s.mean = X.colwise().mean().transpose();
  s.stddev = ((X.rowwise() - s.mean.transpose()).colwise().squaredNorm() / static_cast<double>(X.rows()))
                 .cwiseSqrt()
                 .transpose();
  for (int j = 0; j < X.cols(); ++j) {
    if (s.stddev(j) > 1e-12 * std::max(1.0, std::abs(s.mean(j)))) s.kept.push_back(j);
  }
  if (s.kept.empty()) throw Error(ErrorCode::DegenerateData, "every feature is constant");
  return s;
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& X) const {
  if (X.cols() != input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(input_dim()) + " features, got " +
                                                  std::to_string(X.cols()));
  }
  Eigen::MatrixXd Z(X.rows(), output_dim());
  for (int j = 0; j < output_dim(); ++j) {
    const int src = kept[j];
    Z.col(j) = (X.col(src).array() - mean(src)) / stddev(src);
  }
  return Z;
}

Eigen::VectorXd Standardizer::transform(const Eigen::VectorXd& x) const {
  return transform(Eigen::MatrixXd(x.transpose())).transpose();
}

Eigen::MatrixXd Standardizer::inverse(const Eigen::MatrixXd& Z) const {
  if (Z.cols() != output_dim()) throw Error(ErrorCode::DimensionMismatch, "wrong standardized width");
  Eigen::MatrixXd X = mean.transpose().replicate(Z.rows(), 1);
  for (int j = 0; j < output_dim(); ++j) {
    const int dst = kept[j];
    X.col(dst) = Z.col(j).array() * stddev(dst) + mean(dst);
  }
  return X;
}

}  // namespace camid
