#include <doctest.h>

#include <cmath>

#include "camid/error.hpp"
#include "camid/pca.hpp"
#include "support.hpp"

using namespace camid;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct EigenPairs {
  VectorXd values;   // descending
  MatrixXd vectors;  // columns
};

// Cyclic Jacobi rotations on a symmetric matrix.
EigenPairs jacobi(MatrixXd a) {
  const Eigen::Index n = a.rows();
  MatrixXd v = MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });
  EigenPairs out{VectorXd(n), MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

MatrixXd centered(const MatrixXd& X) { return X.rowwise() - X.colwise().mean(); }

// Random n x k matrix with orthonormal columns.
MatrixXd random_orthonormal(Rng& rng, Eigen::Index n, Eigen::Index k) {
  const MatrixXd g = test::gaussian_matrix(rng, n, k);
  return Eigen::HouseholderQR<MatrixXd>(g).householderQ() * MatrixXd::Identity(n, k);
}

}  // namespace

TEST_CASE("points on a line need one component") {
  MatrixXd X(6, 2);
  for (int i = 0; i < 6; ++i) {
    X(i, 0) = i - 1.5;
    X(i, 1) = 2.0 * (i - 1.5);
  }
  const auto model = pca_fit(X, ProjectionTolerance{1e-6});
  REQUIRE(model.components() == 1);
  CHECK(model.basis(0, 0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(model.basis(1, 0) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(model.eigenvalues(1) < 1e-10);
}

TEST_CASE("eigenpairs match the Jacobi oracle on both routes") {
  Rng rng(1);
  for (auto [m, n] : {std::pair{50, 10}, {8, 12}, {30, 8}}) {
    const MatrixXd X = test::gaussian_matrix(rng, m, n) * test::random_matrix(rng, n, n);
    const auto model = pca_fit(X, ComponentCount{std::min(m, n) - 1});
    const MatrixXd Xc = centered(X);
    const auto oracle = jacobi(Xc.transpose() * Xc);
    CHECK(test::max_abs(model.eigenvalues - oracle.values) < 1e-6 * oracle.values(0));
    for (Eigen::Index j = 0; j < model.components(); ++j) {
      const double dot = std::abs(model.basis.col(j).dot(oracle.vectors.col(j)));
      CHECK(dot == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(test::max_abs(model.mean - X.colwise().mean().transpose()) < 1e-12);
  }
}

TEST_CASE("basis is orthonormal and sign-normalized") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = static_cast<Eigen::Index>(3 + uniform_index(rng, 30));
    const auto n = static_cast<Eigen::Index>(1 + uniform_index(rng, 20));
    const MatrixXd X = test::gaussian_matrix(rng, m, n);
    const auto k = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n) + 1));
    const auto model = pca_fit(X, ComponentCount{k});
    CHECK(model.components() == k);
    CHECK(test::max_abs(model.basis.transpose() * model.basis - MatrixXd::Identity(k, k)) < 1e-8);
    for (Eigen::Index i = 1; i < n; ++i) CHECK(model.eigenvalues(i) <= model.eigenvalues(i - 1));
    CHECK(model.eigenvalues.minCoeff() >= 0.0);
    for (Eigen::Index j = 0; j < k; ++j) {
      Eigen::Index arg = 0;
      model.basis.col(j).cwiseAbs().maxCoeff(&arg);
      CHECK(model.basis(arg, j) > 0.0);
    }
  }
}

TEST_CASE("wide data completes the basis past the rank") {
  Rng rng(3);
  const MatrixXd X = test::gaussian_matrix(rng, 4, 9);
  const auto model = pca_fit(X, ComponentCount{9});
  CHECK(model.components() == 9);
  CHECK(test::max_abs(model.basis.transpose() * model.basis - MatrixXd::Identity(9, 9)) < 1e-8);
  CHECK(model.eigenvalues.tail(6).maxCoeff() == 0.0);
  const auto pe = projection_error(model, X);
  CHECK(pe.direct < 1e-8);
}

TEST_CASE("transform contract") {
  Rng rng(4);
  const MatrixXd X = test::gaussian_matrix(rng, 40, 6);
  const auto model = pca_fit(X, ComponentCount{4});
  CHECK(pca_transform(model, model.mean).norm() == 0.0);
  for (int j = 0; j < 4; ++j) {
    const VectorXd z = pca_transform(model, model.mean + model.basis.col(j));
    CHECK(test::max_abs(z - VectorXd::Unit(4, j)) < 1e-12);
  }
  for (int i = 0; i < 100; ++i) {
    const VectorXd x = 3 * test::gaussian_matrix(rng, 6, 1);
    CHECK(pca_transform(model, x).norm() <= (x - model.mean).norm() + 1e-9);
  }
  const MatrixXd Z = pca_transform_rows(model, X);
  CHECK(test::max_abs(Z.row(7).transpose() - pca_transform(model, X.row(7).transpose())) < 1e-12);
  try {
    pca_transform(model, VectorXd::Zero(5));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("projection error equals the eigenvalue tail") {
  Rng rng(5);
  const MatrixXd X = test::gaussian_matrix(rng, 30, 8);
  for (int k = 0; k <= 8; ++k) {
    const auto model = pca_fit(X, ComponentCount{k});
    const auto pe = projection_error(model, X);
    const MatrixXd Xc = centered(X);
    const MatrixXd rebuilt = pca_reconstruct_rows(model, pca_transform_rows(model, X));
    CHECK((X - rebuilt).squaredNorm() == doctest::Approx(pe.direct).epsilon(1e-10));
    if (k == 0) CHECK(pe.direct == doctest::Approx(Xc.squaredNorm()).epsilon(1e-12));
    if (k == 8) CHECK(pe.direct < 1e-8);
    CHECK(pe.direct == doctest::Approx(pe.eigen_tail).epsilon(1e-6).scale(1e-8));
  }
  CHECK(pca_fit(X, ComponentCount{0}).total_variance() == doctest::Approx(centered(X).squaredNorm()));
}

TEST_CASE("rank-k reconstruction beats random rank-k projections") {
  Rng rng(6);
  const MatrixXd X = test::gaussian_matrix(rng, 40, 7) * test::random_matrix(rng, 7, 7);
  const MatrixXd Xc = centered(X);
  for (int k : {1, 3, 5}) {
    const double best = projection_error(pca_fit(X, ComponentCount{k}), X).direct;
    for (int trial = 0; trial < 100; ++trial) {
      const MatrixXd B = random_orthonormal(rng, 7, k);
      CHECK(best <= (Xc - Xc * B * B.transpose()).squaredNorm() + 1e-9);
    }
  }
}

TEST_CASE("refitting reconstructed data keeps the leading eigenvalues") {
  Rng rng(7);
  const MatrixXd X = test::gaussian_matrix(rng, 35, 9) * test::random_matrix(rng, 9, 9);
  const auto model = pca_fit(X, ComponentCount{4});
  const MatrixXd rebuilt = pca_reconstruct_rows(model, pca_transform_rows(model, X));
  const auto again = pca_fit(rebuilt, ComponentCount{4});
  for (int j = 0; j < 4; ++j) {
    CHECK(again.eigenvalues(j) == doctest::Approx(model.eigenvalues(j)).epsilon(1e-6));
  }
  CHECK(again.tail_sum() < 1e-8 * model.total_variance());
}

TEST_CASE("tolerance selects the smallest sufficient k") {
  Rng rng(8);
  const MatrixXd X = test::gaussian_matrix(rng, 60, 10) * VectorXd::LinSpaced(10, 10, 0.1).asDiagonal();
  const auto full = pca_fit(X, ComponentCount{10});
  const double total = full.total_variance();
  for (double tol : {0.5, 0.1, 0.01, 0.001}) {
    const auto model = pca_fit(X, ProjectionTolerance{tol});
    const int k = model.components();
    CHECK(full.eigenvalues.tail(10 - k).sum() / total <= tol);
    if (k > 0) CHECK(full.eigenvalues.tail(10 - k + 1).sum() / total > tol);
  }
  const double absolute = 0.5 * full.eigenvalues.tail(3).sum();
  const auto abs_model = pca_fit(X, ProjectionTolerance{absolute, true});
  CHECK(abs_model.tail_sum() <= absolute);
  CHECK(abs_model.components() == 8);
}

TEST_CASE("uncentered fit uses the raw scatter matrix") {
  Rng rng(9);
  const MatrixXd X = (test::gaussian_matrix(rng, 20, 4).array() + 5.0).matrix();
  const auto model = pca_fit(X, ComponentCount{2}, false);
  CHECK(model.mean.norm() == 0.0);
  CHECK_FALSE(model.centered);
  const auto oracle = jacobi(X.transpose() * X);
  CHECK(model.eigenvalues(0) == doctest::Approx(oracle.values(0)).epsilon(1e-10));
}

TEST_CASE("identical rows are degenerate") {
  MatrixXd X(5, 3);
  X.rowwise() = Eigen::RowVector3d(1, 2, 3);
  try {
    pca_fit(X, ComponentCount{1});
    FAIL("expected DegenerateData");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateData);
  }
  CHECK_THROWS_AS(pca_fit(MatrixXd::Zero(1, 3), ComponentCount{1}), Error);
  CHECK_THROWS_AS(pca_fit(MatrixXd::Identity(3, 3), ComponentCount{4}), Error);
}
