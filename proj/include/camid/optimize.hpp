#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace camid {

struct TrainConfig {
  double learning_rate = 1.0;
  int max_iters = 1000;
  double tol = 1e-6;  // stop once ||grad||_inf falls below
  std::uint64_t seed = 0;
  int grad_check_every = 0;  // 0 disables
};

/// Returns the cost at `theta` and writes the gradient into `grad`.
using CostGradFn = std::function<double(const Eigen::VectorXd& theta, Eigen::VectorXd& grad)>;

/// Called after every accepted step with the step count and new parameters.
using StepHook = std::function<void(int step, const Eigen::VectorXd& theta)>;

struct DescentResult {
  Eigen::VectorXd theta;
  std::vector<double> trace;  // cost at the start and after each accepted step
  int iterations = 0;         // attempted steps, accepted or not
  bool converged = false;
};

/// Full-batch gradient descent. A step that raises the cost (or makes it
/// non-finite) is rejected and the learning rate halved; after three
/// consecutive accepted steps the rate returns to its configured value.
/// Throws NonFiniteCost when the starting cost is not finite.
DescentResult gradient_descent(const CostGradFn& cost_grad, Eigen::VectorXd theta0, const TrainConfig& config,
                               const StepHook& hook = {});

/// Central-difference derivative of `cost` at `theta` along coordinate `index`.
double finite_difference(const CostGradFn& cost, const Eigen::VectorXd& theta, Eigen::Index index, double h);

/// ||a - b|| / max(||a|| + ||b||, floor)
double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-12);

}  // namespace camid
