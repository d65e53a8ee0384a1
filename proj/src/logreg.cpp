#include "camid/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "camid/error.hpp"

namespace camid {

namespace {

Eigen::Index weight_offset(bool intercept) { return intercept ? 1 : 0; }

void check_labels(std::span<const int> y, Eigen::Index rows, int classes) {
  if (static_cast<Eigen::Index>(y.size()) != rows) throw Error(ErrorCode::ShapeMismatch, "label count != rows");
  for (int label : y) {
    if (label < 0 || label >= classes) throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(label));
  }
}

Eigen::MatrixXd scores(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& X, bool intercept) {
  const Eigen::Index off = weight_offset(intercept);
  if (theta.cols() != X.cols() + off) {
    throw Error(ErrorCode::ShapeMismatch, "theta has " + std::to_string(theta.cols()) + " columns for " +
                                              std::to_string(X.cols()) + " features");
  }
  Eigen::MatrixXd z = X * theta.rightCols(X.cols()).transpose();
  if (intercept) z.rowwise() += theta.col(0).transpose();
  return z;
}

// Stable log-sum-exp per row; turns z into log-probabilities in place.
void log_softmax_rows(Eigen::MatrixXd& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double top = z.row(i).maxCoeff();
    const double lse = top + std::log((z.row(i).array() - top).exp().sum());
    z.row(i).array() -= lse;
  }
}

}  // namespace

Eigen::MatrixXd softmax_probabilities(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& X, bool intercept) {
  Eigen::MatrixXd z = scores(theta, X, intercept);
  log_softmax_rows(z);
  return z.array().exp();
}

SoftmaxCostGrad softmax_cost_grad(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& X, std::span<const int> y,
                                  double lambda, bool intercept) {
  check_labels(y, X.rows(), static_cast<int>(theta.rows()));
  const double m = static_cast<double>(X.rows());
  Eigen::MatrixXd logp = scores(theta, X, intercept);
  log_softmax_rows(logp);

  SoftmaxCostGrad out;
  double loglik = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) loglik += logp(i, y[i]);
  const auto weights = theta.rightCols(X.cols());
  out.cost = -loglik / m + lambda / (2.0 * m) * weights.squaredNorm();

  // delta = P - 1{y = j}
  Eigen::MatrixXd delta = logp.array().exp();
  for (Eigen::Index i = 0; i < X.rows(); ++i) delta(i, y[i]) -= 1.0;
  out.grad.resize(theta.rows(), theta.cols());
  out.grad.rightCols(X.cols()) = delta.transpose() * X / m + (lambda / m) * weights;
  if (intercept) out.grad.col(0) = delta.colwise().sum().transpose() / m;
  return out;
}

LogRegModel logreg_train(const Eigen::MatrixXd& X, std::span<const int> y, int num_classes, double lambda,
                         const TrainConfig& config, bool intercept) {
  check_labels(y, X.rows(), num_classes);
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
  if (std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end()) {
    throw Error(ErrorCode::InvalidArgument, "training data needs at least 2 classes");
  }
  LogRegModel model;
  model.lambda = lambda;
  model.intercept = intercept;
  model.standardizer = Standardizer::fit(X);
  const Eigen::MatrixXd Z = model.standardizer.transform(X);
  const Eigen::Index rows = num_classes;
  const Eigen::Index cols = Z.cols() + weight_offset(intercept);

  const CostGradFn fn = [&](const Eigen::VectorXd& flat, Eigen::VectorXd& grad) {
    const Eigen::Map<const Eigen::MatrixXd> theta(flat.data(), rows, cols);
    auto cg = softmax_cost_grad(theta, Z, y, lambda, intercept);
    grad = Eigen::Map<const Eigen::VectorXd>(cg.grad.data(), cg.grad.size());
    return cg.cost;
  };
  const auto result = gradient_descent(fn, Eigen::VectorXd::Zero(rows * cols), config);
  model.theta = Eigen::Map<const Eigen::MatrixXd>(result.theta.data(), rows, cols);
  return model;
}

Eigen::MatrixXd logreg_predict_proba_rows(const LogRegModel& model, const Eigen::MatrixXd& X) {
  return softmax_probabilities(model.theta, model.standardizer.transform(X), model.intercept);
}

Eigen::VectorXd logreg_predict_proba(const LogRegModel& model, const Eigen::VectorXd& x) {
  return logreg_predict_proba_rows(model, Eigen::MatrixXd(x.transpose())).transpose();
}

}  // namespace camid
