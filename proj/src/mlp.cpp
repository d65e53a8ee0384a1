#include "camid/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "camid/error.hpp"
#include "camid/random.hpp"

namespace camid {

namespace {

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& z) { return 1.0 / (1.0 + (-z).exp()); }

// log(1 + exp(z)) without overflow.
Eigen::ArrayXXd softplus(const Eigen::ArrayXXd& z) {
  return z.max(0.0) + (-z.abs()).exp().log1p();
}

Eigen::MatrixXd with_bias(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd out(a.rows(), a.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(a.cols()) = a;
  return out;
}

void check_shapes(const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2, const Eigen::MatrixXd& X) {
  if (w1.cols() != X.cols() + 1 || w2.cols() != w1.rows() + 1) {
    throw Error(ErrorCode::ShapeMismatch, "weight shapes inconsistent with the architecture");
  }
}

}  // namespace

Eigen::MatrixXd one_hot(std::span<const int> y, int num_classes) {
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(y.size()), num_classes);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0 || y[i] >= num_classes) throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(y[i]));
    Y(static_cast<Eigen::Index>(i), y[i]) = 1.0;
  }
  return Y;
}

Eigen::MatrixXd mlp_forward(const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2, const Eigen::MatrixXd& Z) {
  check_shapes(w1, w2, Z);
  const Eigen::MatrixXd hidden = sigmoid((with_bias(Z) * w1.transpose()).array());
  return sigmoid((with_bias(hidden) * w2.transpose()).array());
}

MlpCostGrad mlp_cost_grad(const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2, const Eigen::MatrixXd& X,
                          const Eigen::MatrixXd& Y, double lambda) {
  check_shapes(w1, w2, X);
  if (Y.rows() != X.rows() || Y.cols() != w2.rows()) throw Error(ErrorCode::ShapeMismatch, "targets shape");
  const double m = static_cast<double>(X.rows());

  const Eigen::MatrixXd a1 = with_bias(X);
  const Eigen::MatrixXd a2 = with_bias(sigmoid((a1 * w1.transpose()).array()));
  const Eigen::ArrayXXd z3 = (a2 * w2.transpose()).array();
  const Eigen::ArrayXXd h = sigmoid(z3);

  // -y log h - (1 - y) log(1 - h), with log h = -softplus(-z), log(1 - h) = -softplus(z)
  const Eigen::ArrayXXd y = Y.array();
  MlpCostGrad out;
  out.cost = (y * softplus(-z3) + (1.0 - y) * softplus(z3)).sum() / m;
  out.cost += lambda / (2.0 * m) * (w1.rightCols(w1.cols() - 1).squaredNorm() + w2.rightCols(w2.cols() - 1).squaredNorm());

  const Eigen::MatrixXd delta3 = (h - y).matrix();
  const Eigen::ArrayXXd g = a2.rightCols(a2.cols() - 1).array();
  const Eigen::MatrixXd delta2 = ((delta3 * w2.rightCols(w2.cols() - 1)).array() * g * (1.0 - g)).matrix();

  out.hidden_grad = delta2.transpose() * a1 / m;
  out.output_grad = delta3.transpose() * a2 / m;
  out.hidden_grad.rightCols(w1.cols() - 1) += (lambda / m) * w1.rightCols(w1.cols() - 1);
  out.output_grad.rightCols(w2.cols() - 1) += (lambda / m) * w2.rightCols(w2.cols() - 1);
  return out;
}

MlpModel mlp_train(const Eigen::MatrixXd& X, std::span<const int> y, int num_classes, int hidden_units,
                   double lambda, const TrainConfig& config) {
  if (hidden_units < 1) throw Error(ErrorCode::InvalidArgument, "need at least one hidden unit");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
  if (static_cast<Eigen::Index>(y.size()) != X.rows()) throw Error(ErrorCode::ShapeMismatch, "label count != rows");

  MlpModel model;
  model.lambda = lambda;
  model.standardizer = Standardizer::fit(X);
  const Eigen::MatrixXd Z = model.standardizer.transform(X);
  const Eigen::MatrixXd Y = one_hot(y, num_classes);

  const Eigen::Index n = Z.cols(), s2 = hidden_units, k = num_classes;
  const Eigen::Index size1 = s2 * (n + 1), size2 = k * (s2 + 1);

  Rng rng(config.seed);
  Eigen::VectorXd theta0(size1 + size2);
  const double eps1 = std::sqrt(6.0 / static_cast<double>(n + s2));
  const double eps2 = std::sqrt(6.0 / static_cast<double>(s2 + k));
  for (Eigen::Index i = 0; i < theta0.size(); ++i) {
    const double eps = i < size1 ? eps1 : eps2;
    theta0(i) = uniform(rng, -eps, eps);
  }

  const CostGradFn fn = [&](const Eigen::VectorXd& flat, Eigen::VectorXd& grad) {
    const Eigen::Map<const Eigen::MatrixXd> w1(flat.data(), s2, n + 1);
    const Eigen::Map<const Eigen::MatrixXd> w2(flat.data() + size1, k, s2 + 1);
    const auto cg = mlp_cost_grad(w1, w2, Z, Y, lambda);
    grad.resize(flat.size());
    grad.head(size1) = Eigen::Map<const Eigen::VectorXd>(cg.hidden_grad.data(), size1);
    grad.tail(size2) = Eigen::Map<const Eigen::VectorXd>(cg.output_grad.data(), size2);
    return cg.cost;
  };

  StepHook hook;
  if (config.grad_check_every > 0) {
    hook = [&, check_rng = Rng(config.seed ^ 0x9E3779B97F4A7C15ULL)](int step, const Eigen::VectorXd& theta) mutable {
      if (step % config.grad_check_every != 0) return;
      const Eigen::Index count = std::min<Eigen::Index>(kGradCheckWeights, theta.size());
      Eigen::VectorXd analytic_full(theta.size());
      fn(theta, analytic_full);
      Eigen::VectorXd analytic(count), numeric(count);
      for (Eigen::Index j = 0; j < count; ++j) {
        const auto index = static_cast<Eigen::Index>(uniform_index(check_rng, static_cast<std::uint64_t>(theta.size())));
        analytic(j) = analytic_full(index);
        numeric(j) = finite_difference(fn, theta, index, kGradCheckStep);
      }
      const double err = relative_error(analytic, numeric, 1e-6);
      if (!(err <= kGradCheckTolerance)) {
        throw Error(ErrorCode::GradientCheckFailed,
                    "step " + std::to_string(step) + ": relative error " + std::to_string(err));
      }
    };
  }

  const auto result = gradient_descent(fn, theta0, config, hook);
  model.hidden_weights = Eigen::Map<const Eigen::MatrixXd>(result.theta.data(), s2, n + 1);
  model.output_weights = Eigen::Map<const Eigen::MatrixXd>(result.theta.data() + size1, k, s2 + 1);
  return model;
}

Eigen::MatrixXd mlp_outputs(const MlpModel& model, const Eigen::MatrixXd& X) {
  return mlp_forward(model.hidden_weights, model.output_weights, model.standardizer.transform(X));
}

Eigen::MatrixXd mlp_predict_proba_rows(const MlpModel& model, const Eigen::MatrixXd& X) {
  Eigen::MatrixXd out = mlp_outputs(model, X);
  for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) /= out.row(i).sum();
  return out;
}

}  // namespace camid
