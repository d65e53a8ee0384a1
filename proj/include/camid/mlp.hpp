#pragma once

#include <span>

#include <Eigen/Dense>

#include "camid/optimize.hpp"
#include "camid/standardizer.hpp"

namespace camid {

/// Three-layer perceptron with sigmoid hidden and output units. Column 0 of
/// each weight matrix multiplies the bias unit.
struct MlpModel {
  Eigen::MatrixXd hidden_weights;  // s2 x (n + 1)
  Eigen::MatrixXd output_weights;  // K x (s2 + 1)
  double lambda = 0.0;
  Standardizer standardizer;

  int hidden_units() const { return static_cast<int>(hidden_weights.rows()); }
  int num_classes() const { return static_cast<int>(output_weights.rows()); }
};

struct MlpCostGrad {
  double cost = 0.0;
  Eigen::MatrixXd hidden_grad;
  Eigen::MatrixXd output_grad;
};

/// Per-unit cross-entropy over sigmoid outputs plus (lambda / 2m) times the
/// squared non-bias weights; gradients by backpropagation.
MlpCostGrad mlp_cost_grad(const Eigen::MatrixXd& hidden_weights, const Eigen::MatrixXd& output_weights,
                          const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double lambda);

/// One-hot targets, m x K.
Eigen::MatrixXd one_hot(std::span<const int> y, int num_classes);

/// Output activations for already standardized rows, m x K.
Eigen::MatrixXd mlp_forward(const Eigen::MatrixXd& hidden_weights, const Eigen::MatrixXd& output_weights,
                            const Eigen::MatrixXd& Z);

/// Weights start uniform in [-eps, eps], eps = sqrt(6 / (fan_in + fan_out)).
/// With config.grad_check_every > 0, backprop is compared against central
/// differences on up to 20 random weights at that cadence; a relative error
/// above 1e-4 throws GradientCheckFailed.
MlpModel mlp_train(const Eigen::MatrixXd& X, std::span<const int> y, int num_classes, int hidden_units,
                   double lambda, const TrainConfig& config);

/// Raw output activations for raw feature rows.
Eigen::MatrixXd mlp_outputs(const MlpModel& model, const Eigen::MatrixXd& X);

/// Output activations rescaled to sum to one per row.
Eigen::MatrixXd mlp_predict_proba_rows(const MlpModel& model, const Eigen::MatrixXd& X);

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckTolerance = 1e-4;
inline constexpr int kGradCheckWeights = 20;

}  // namespace camid
