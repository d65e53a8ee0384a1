#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace camid {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix(int num_classes, std::vector<std::string> class_names = {});

  void add(int truth, int predicted, long times = 1);

  int num_classes() const { return static_cast<int>(counts_.size()); }
  long count(int truth, int predicted) const { return counts_[truth][predicted]; }
  long row_total(int truth) const;
  long total() const;
  long trace() const;
  const std::vector<std::string>& class_names() const { return names_; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::vector<std::vector<long>> counts_;
  std::vector<std::string> names_;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, int num_classes,
                          std::vector<std::string> class_names = {});

struct Accuracies {
  std::vector<double> per_class;  // diagonal / row total
  double mean = 0.0;              // unweighted mean of per_class
  double overall = 0.0;           // trace / total
};

/// Throws EmptyClass when some class has no true samples.
Accuracies accuracies(const ConfusionMatrix& cm);

/// Aligned table: a header row C1..CK and "%", one row per true class, and a
/// bottom row of per-class accuracy percentages ending with the mean.
std::string render_table(const ConfusionMatrix& cm);

/// Machine-readable form of the same report.
std::string render_csv(const ConfusionMatrix& cm);

/// Reads back the counts written by render_csv.
ConfusionMatrix parse_confusion_csv(const std::string& text);

using Classifier = std::function<std::vector<int>(const Eigen::MatrixXd& X)>;
using Trainer = std::function<Classifier(double parameter, const Eigen::MatrixXd& X, std::span<const int> y)>;

struct GridRow {
  double parameter = 0.0;
  double mean_accuracy = 0.0;
  double overall_accuracy = 0.0;
};

struct GridResult {
  std::size_t best_index = 0;
  double best_parameter = 0.0;
  std::vector<GridRow> rows;  // grid order
};

/// Trains on (X_train, y_train) for every grid point and keeps the one with
/// the highest held-out mean per-class accuracy; ties go to the earlier point.
GridResult grid_select(const Trainer& trainer, std::span<const double> grid, const Eigen::MatrixXd& X_train,
                       std::span<const int> y_train, const Eigen::MatrixXd& X_test, std::span<const int> y_test,
                       int num_classes);

std::string render_grid(const GridResult& result, const std::string& parameter_name);

}  // namespace camid
