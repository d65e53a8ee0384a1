#pragma once

#include <span>

#include <Eigen/Dense>

#include "camid/optimize.hpp"
#include "camid/standardizer.hpp"

namespace camid {

/// Multinomial logistic (softmax) regression.
///
/// With an intercept, column 0 of theta holds the per-class bias and the
/// remaining n columns multiply the standardized features; the bias is never
/// regularized.
struct LogRegModel {
  Eigen::MatrixXd theta;  // K x (n + intercept)
  double lambda = 0.0;
  bool intercept = true;
  Standardizer standardizer;

  int num_classes() const { return static_cast<int>(theta.rows()); }
};

struct SoftmaxCostGrad {
  double cost = 0.0;
  Eigen::MatrixXd grad;  // same shape as theta
};

/// Regularized cross-entropy of softmax probabilities and its gradient:
///   J = -(1/m) sum_i log p(y_i | x_i) + (lambda / 2m) ||theta_w||_F^2
/// where theta_w excludes the intercept column.
SoftmaxCostGrad softmax_cost_grad(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& X, std::span<const int> y,
                                  double lambda, bool intercept);

/// Row-wise softmax of X theta^T (plus bias).
Eigen::MatrixXd softmax_probabilities(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& X, bool intercept);

/// Gradient descent from theta = 0 on standardized features.
LogRegModel logreg_train(const Eigen::MatrixXd& X, std::span<const int> y, int num_classes, double lambda,
                         const TrainConfig& config, bool intercept = true);

/// Class probabilities for one raw (unstandardized) feature vector.
Eigen::VectorXd logreg_predict_proba(const LogRegModel& model, const Eigen::VectorXd& x);
Eigen::MatrixXd logreg_predict_proba_rows(const LogRegModel& model, const Eigen::MatrixXd& X);

}  // namespace camid
