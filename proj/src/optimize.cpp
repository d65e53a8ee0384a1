#include "camid/optimize.hpp"

#include <cmath>

#include "camid/error.hpp"

namespace camid {

DescentResult gradient_descent(const CostGradFn& cost_grad, Eigen::VectorXd theta0, const TrainConfig& config,
                               const StepHook& hook) {
  if (!(config.learning_rate > 0.0) || config.max_iters < 0 || !(config.tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "learning rate must be positive, iterations and tol nonnegative");
  }
  DescentResult result;
  result.theta = std::move(theta0);
  Eigen::VectorXd grad(result.theta.size());
  double cost = cost_grad(result.theta, grad);
  if (!std::isfinite(cost) || !grad.allFinite()) {
    throw Error(ErrorCode::NonFiniteCost, "cost is not finite at the starting point");
  }
  result.trace.push_back(cost);

  double rate = config.learning_rate;
  int streak = 0;
  int accepted = 0;
  Eigen::VectorXd candidate_grad(result.theta.size());
  for (; result.iterations < config.max_iters; ++result.iterations) {
    if (grad.size() == 0 || grad.lpNorm<Eigen::Infinity>() < config.tol) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd candidate = result.theta - rate * grad;
    const double candidate_cost = cost_grad(candidate, candidate_grad);
    if (!std::isfinite(candidate_cost) || !candidate_grad.allFinite() || candidate_cost > cost) {
      rate *= 0.5;
      streak = 0;
      if (rate < config.learning_rate * 1e-30) break;
      continue;
    }
    result.theta = std::move(candidate);
    cost = candidate_cost;
    grad.swap(candidate_grad);
    result.trace.push_back(cost);
    if (++streak >= 3) {
      rate = config.learning_rate;
      streak = 0;
    }
    if (hook) hook(++accepted, result.theta);
  }
  if (!result.converged && grad.size() > 0 && grad.lpNorm<Eigen::Infinity>() < config.tol) result.converged = true;
  return result;
}

double finite_difference(const CostGradFn& cost, const Eigen::VectorXd& theta, Eigen::Index index, double h) {
  Eigen::VectorXd probe = theta;
  Eigen::VectorXd scratch(theta.size());
  probe(index) = theta(index) + h;
  const double up = cost(probe, scratch);
  probe(index) = theta(index) - h;
  const double down = cost(probe, scratch);
  return (up - down) / (2.0 * h);
}

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor) {
  return (a - b).norm() / std::max(a.norm() + b.norm(), floor);
}

}  // namespace camid
