#include <doctest.h>

#include <sstream>

#include "camid/error.hpp"
#include "camid/eval.hpp"
#include "camid/logreg.hpp"
#include "support.hpp"

using namespace camid;
using Eigen::MatrixXd;

namespace {

constexpr int kReferenceCounts[10][10] = {
    {41, 0, 2, 8, 7, 0, 4, 0, 0, 0},  {1, 49, 2, 0, 3, 1, 0, 0, 1, 0}, {1, 2, 45, 2, 1, 0, 1, 0, 0, 0},
    {5, 0, 0, 39, 1, 0, 3, 1, 0, 0},  {3, 0, 2, 1, 36, 0, 7, 2, 1, 0}, {0, 1, 0, 0, 2, 53, 1, 0, 1, 1},
    {0, 0, 1, 4, 4, 0, 33, 2, 2, 0},  {3, 0, 0, 1, 0, 0, 2, 48, 4, 0}, {1, 3, 3, 0, 1, 1, 4, 2, 46, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 54}};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("confusion of perfect predictions is diagonal") {
  const std::vector<int> y = {0, 1, 2, 2, 1, 0, 0};
  const auto cm = confusion(y, y, 3);
  CHECK(cm.trace() == 7);
  CHECK(cm.total() == 7);
  CHECK(cm.count(0, 0) == 3);
  CHECK(cm.count(1, 0) == 0);
  const auto acc = accuracies(cm);
  CHECK(acc.mean == 1.0);
  CHECK(acc.overall == 1.0);
  CHECK(acc.per_class == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("confusion of a single miss") {
  const std::vector<int> t = {0}, p = {3};
  const auto cm = confusion(t, p, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(cm.count(i, j) == (i == 0 && j == 3 ? 1 : 0));
  }
}

TEST_CASE("confusion rejects labels out of range") {
  const std::vector<int> t = {0, 4}, p = {0, 1};
  try {
    confusion(t, p, 4);
    FAIL("expected LabelOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LabelOutOfRange);
  }
  const std::vector<int> shorter = {0};
  CHECK_THROWS_AS(confusion(t, shorter, 5), Error);
}

TEST_CASE("row sums equal per-class true counts; streaming equals batch") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 2 + static_cast<int>(uniform_index(rng, 8));
    std::vector<int> t(200), p(200);
    std::vector<long> per(K, 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<int>(uniform_index(rng, K));
      p[i] = static_cast<int>(uniform_index(rng, K));
      ++per[t[i]];
    }
    const auto batch = confusion(t, p, K);
    ConfusionMatrix streaming(K);
    for (std::size_t i = 0; i < t.size(); ++i) streaming.add(t[i], p[i]);
    CHECK(streaming == batch);
    for (int c = 0; c < K; ++c) CHECK(batch.row_total(c) == per[c]);
    CHECK(batch.total() == 200);
  }
}

TEST_CASE("accuracies of a small two-class matrix") {
  ConfusionMatrix cm(2);
  cm.add(0, 0, 3);
  cm.add(0, 1, 1);
  cm.add(1, 0, 2);
  cm.add(1, 1, 2);
  const auto acc = accuracies(cm);
  CHECK(acc.per_class[0] == 0.75);
  CHECK(acc.per_class[1] == 0.5);
  CHECK(acc.mean == 0.625);
  CHECK(acc.overall == 0.625);
}

TEST_CASE("ten-class reference counts give an 81 percent mean") {
  ConfusionMatrix cm(10);
  for (int t = 0; t < 10; ++t) {
    for (int p = 0; p < 10; ++p) cm.add(t, p, kReferenceCounts[t][p]);
  }
  const auto acc = accuracies(cm);
  CHECK(acc.mean == doctest::Approx(0.8071931077072787).epsilon(1e-12));
  CHECK(std::lround(100 * acc.mean) == 81);
  const auto table = render_table(cm);
  CHECK(table.find("   81%") != std::string::npos);
}

TEST_CASE("mean accuracy ignores duplicating one class") {
  Rng rng(2);
  std::vector<int> t(90), p(90);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = static_cast<int>(i % 3);
    p[i] = uniform01(rng) < 0.7 ? t[i] : static_cast<int>(uniform_index(rng, 3));
  }
  auto t2 = t, p2 = p;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 1) {
      t2.push_back(t[i]);
      p2.push_back(p[i]);
    }
  }
  const double a = accuracies(confusion(t, p, 3)).mean;
  const double b = accuracies(confusion(t2, p2, 3)).mean;
  CHECK(a == doctest::Approx(b).epsilon(1e-15));
}

TEST_CASE("accuracies need every class") {
  ConfusionMatrix cm(3);
  cm.add(0, 0);
  cm.add(2, 1);
  try {
    accuracies(cm);
    FAIL("expected EmptyClass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyClass);
  }
  CHECK_NOTHROW(render_table(cm));
  CHECK_NOTHROW(render_csv(cm));
}

TEST_CASE("table layout") {
  ConfusionMatrix cm(3, {"alpha", "beta", "gamma"});
  cm.add(0, 0, 10);
  cm.add(1, 1, 5);
  cm.add(1, 2, 5);
  cm.add(2, 2, 7);
  const auto lines = lines_of(render_table(cm));
  REQUIRE(lines.size() >= 9);
  CHECK(lines[0].find("C1") != std::string::npos);
  CHECK(lines[0].find("C3") != std::string::npos);
  CHECK(lines[0].back() == '%');
  CHECK(lines[1].rfind("C1", 0) == 0);
  CHECK(lines[3].rfind("C3", 0) == 0);
  CHECK(lines[4].find_first_not_of("-+") == std::string::npos);
  CHECK(lines[5].rfind("%", 0) == 0);
  CHECK(lines[5].find("100") != std::string::npos);
  CHECK(lines[5].find("50") != std::string::npos);
  CHECK(lines[5].substr(lines[5].size() - 4) == " 83%");
  CHECK(lines[6].find("overall accuracy: 81.48% (22/27)") == 0);
  CHECK(lines[7] == "C1 = alpha");
  CHECK(lines[9] == "C3 = gamma");
}

TEST_CASE("CSV and table carry identical counts") {
  Rng rng(3);
  ConfusionMatrix cm(4, {"a", "b", "c", "d"});
  for (int t = 0; t < 4; ++t) {
    for (int p = 0; p < 4; ++p) cm.add(t, p, static_cast<long>(uniform_index(rng, 30)) + (t == p) * 40);
  }
  const auto csv = render_csv(cm);
  CHECK(csv.rfind("format_version,1\n", 0) == 0);
  const auto back = parse_confusion_csv(csv);
  CHECK(back == cm);
  const auto table = lines_of(render_table(cm));
  for (int t = 0; t < 4; ++t) {
    std::istringstream row(table[1 + t]);
    std::string label;
    row >> label;
    for (int p = 0; p < 4; ++p) {
      long v = -1;
      row >> v;
      CHECK(v == cm.count(t, p));
    }
  }
  const auto lines = lines_of(csv);
  CHECK(lines[1] == "true\\predicted,a,b,c,d,accuracy");
  CHECK(lines[6].rfind("mean_per_class_accuracy,", 0) == 0);
  CHECK(lines[7].rfind("overall_accuracy,", 0) == 0);
  CHECK_THROWS_AS(parse_confusion_csv("nope\n"), Error);
}

TEST_CASE("grid selection") {
  const Trainer constant = [](double parameter, const MatrixXd&, std::span<const int>) -> Classifier {
    return [parameter](const MatrixXd& X) { return std::vector<int>(X.rows(), parameter > 0.5 ? 1 : 0); };
  };
  const MatrixXd X = MatrixXd::Zero(4, 1);
  const std::vector<int> y = {0, 1, 1, 1};
  const std::vector<double> one = {0.9};
  const auto single = grid_select(constant, one, X, y, X, y, 2);
  CHECK(single.best_parameter == 0.9);
  CHECK(single.rows.size() == 1);

  const std::vector<double> tied = {0.1, 0.9, 0.2};
  const auto r = grid_select(constant, tied, X, y, X, y, 2);
  CHECK(r.rows.size() == 3);
  CHECK(r.best_index == 0);
  CHECK(r.rows[0].mean_accuracy == 0.5);
  CHECK(r.rows[1].overall_accuracy == 0.75);
  const auto text = render_grid(r, "lambda");
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find("<- selected") != std::string::npos);

  const std::vector<double> empty;
  CHECK_THROWS_AS(grid_select(constant, empty, X, y, X, y, 2), Error);
}

TEST_CASE("grid selection prefers a moderate lambda on separable data") {
  Rng rng(4);
  MatrixXd X(80, 2);
  std::vector<int> y;
  for (int i = 0; i < 80; ++i) {
    const int c = i < 20 ? 1 : 0;
    X(i, 0) = (c ? 2.0 : -2.0) + 0.6 * standard_normal(rng);
    X(i, 1) = standard_normal(rng);
    y.push_back(c);
  }
  // With unbalanced training data a heavily shrunk model follows the prior.
  MatrixXd Xt(30, 2);
  std::vector<int> yt;
  for (int i = 0; i < 30; ++i) {
    const int c = i < 10 ? 1 : 0;
    Xt(i, 0) = (c ? 2.0 : -2.0) + 0.6 * standard_normal(rng);
    Xt(i, 1) = standard_normal(rng);
    yt.push_back(c);
  }
  const Trainer trainer = [](double lambda, const MatrixXd& Xtr, std::span<const int> ytr) -> Classifier {
    auto model = std::make_shared<LogRegModel>(logreg_train(Xtr, ytr, 2, lambda, {}));
    return [model](const MatrixXd& Xq) {
      const MatrixXd p = logreg_predict_proba_rows(*model, Xq);
      std::vector<int> out;
      for (Eigen::Index i = 0; i < p.rows(); ++i) out.push_back(p(i, 1) > p(i, 0) ? 1 : 0);
      return out;
    };
  };
  const std::vector<double> grid = {1e9, 1e-2};
  const auto r = grid_select(trainer, grid, X, y, Xt, yt, 2);
  CHECK(r.best_parameter == 1e-2);
  CHECK(r.rows[0].mean_accuracy == doctest::Approx(0.5));
}
