#include "camid/eval.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "camid/error.hpp"
#include "text_util.hpp"

namespace camid {

ConfusionMatrix::ConfusionMatrix(int num_classes, std::vector<std::string> class_names)
    : counts_(static_cast<std::size_t>(num_classes), std::vector<long>(static_cast<std::size_t>(num_classes), 0)),
      names_(std::move(class_names)) {
  if (num_classes < 1) throw Error(ErrorCode::InvalidArgument, "need at least one class");
  if (names_.empty()) {
    for (int i = 0; i < num_classes; ++i) names_.push_back("C" + std::to_string(i + 1));
  }
  if (static_cast<int>(names_.size()) != num_classes) {
    throw Error(ErrorCode::InvalidArgument, "class name count != class count");
  }
}

void ConfusionMatrix::add(int truth, int predicted, long times) {
  if (truth < 0 || truth >= num_classes() || predicted < 0 || predicted >= num_classes()) {
    throw Error(ErrorCode::LabelOutOfRange,
                "pair (" + std::to_string(truth) + ", " + std::to_string(predicted) + ") outside 0.." +
                    std::to_string(num_classes() - 1));
  }
  if (times < 0) throw Error(ErrorCode::InvalidArgument, "negative count");
  counts_[truth][predicted] += times;
}

long ConfusionMatrix::row_total(int truth) const {
  long sum = 0;
  for (long c : counts_[truth]) sum += c;
  return sum;
}

long ConfusionMatrix::total() const {
  long sum = 0;
  for (int t = 0; t < num_classes(); ++t) sum += row_total(t);
  return sum;
}

long ConfusionMatrix::trace() const {
  long sum = 0;
  for (int t = 0; t < num_classes(); ++t) sum += counts_[t][t];
  return sum;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, int num_classes,
                          std::vector<std::string> class_names) {
  if (y_true.size() != y_pred.size()) throw Error(ErrorCode::ShapeMismatch, "label sequences differ in length");
  ConfusionMatrix cm(num_classes, std::move(class_names));
  for (std::size_t i = 0; i < y_true.size(); ++i) cm.add(y_true[i], y_pred[i]);
  return cm;
}

Accuracies accuracies(const ConfusionMatrix& cm) {
  Accuracies out;
  for (int t = 0; t < cm.num_classes(); ++t) {
    const long row = cm.row_total(t);
    if (row == 0) throw Error(ErrorCode::EmptyClass, "class '" + cm.class_names()[t] + "' has no samples");
    out.per_class.push_back(static_cast<double>(cm.count(t, t)) / static_cast<double>(row));
    out.mean += out.per_class.back();
  }
  out.mean /= cm.num_classes();
  out.overall = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
  return out;
}

std::string render_table(const ConfusionMatrix& cm) {
  const int k = cm.num_classes();
  int width = 4;
  for (int t = 0; t < k; ++t) {
    for (int p = 0; p < k; ++p) width = std::max<int>(width, static_cast<int>(std::to_string(cm.count(t, p)).size()) + 1);
  }
  width = std::max(width, static_cast<int>(std::to_string(k).size()) + 2);
  std::ostringstream out;
  auto label = [](int i) { return "C" + std::to_string(i + 1); };
  out << std::left << std::setw(6) << "" << std::right;
  for (int p = 0; p < k; ++p) out << std::setw(width) << label(p);
  out << " |" << std::setw(6) << "%" << '\n';
  for (int t = 0; t < k; ++t) {
    out << std::left << std::setw(6) << label(t) << std::right;
    for (int p = 0; p < k; ++p) out << std::setw(width) << cm.count(t, p);
    out << " |\n";
  }
  out << std::string(6 + width * k, '-') << "-+" << std::string(6, '-') << '\n';
  out << std::left << std::setw(6) << "%" << std::right;
  bool complete = true;
  for (int t = 0; t < k; ++t) complete = complete && cm.row_total(t) > 0;
  if (complete) {
    const auto acc = accuracies(cm);
    for (double a : acc.per_class) out << std::setw(width) << std::lround(100.0 * a);
    out << " |" << std::setw(5) << std::lround(100.0 * acc.mean) << "%\n";
    out << "overall accuracy: " << std::fixed << std::setprecision(2) << 100.0 * acc.overall << "% (" << cm.trace()
        << "/" << cm.total() << ")\n";
  } else {
    for (int t = 0; t < k; ++t) {
      const long row = cm.row_total(t);
      out << std::setw(width) << (row ? std::to_string(std::lround(100.0 * cm.count(t, t) / row)) : "-");
    }
    out << " |" << std::setw(6) << "-" << '\n';
  }
  for (int i = 0; i < k; ++i) out << label(i) << " = " << cm.class_names()[i] << '\n';
  return out.str();
}

std::string render_csv(const ConfusionMatrix& cm) {
  const int k = cm.num_classes();
  std::ostringstream out;
  out << "format_version,1\n";
  out << "true\\predicted";
  for (const auto& name : cm.class_names()) out << ',' << name;
  out << ",accuracy\n";
  for (int t = 0; t < k; ++t) {
    out << cm.class_names()[t];
    for (int p = 0; p < k; ++p) out << ',' << cm.count(t, p);
    const long row = cm.row_total(t);
    out << ',' << (row ? detail::format_double(static_cast<double>(cm.count(t, t)) / static_cast<double>(row)) : "")
        << '\n';
  }
  bool complete = true;
  for (int t = 0; t < k; ++t) complete = complete && cm.row_total(t) > 0;
  if (complete) {
    const auto acc = accuracies(cm);
    out << "mean_per_class_accuracy," << detail::format_double(acc.mean) << '\n';
    out << "overall_accuracy," << detail::format_double(acc.overall) << '\n';
  }
  return out.str();
}

ConfusionMatrix parse_confusion_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "format_version,1") {
    throw Error(ErrorCode::InvalidArgument, "confusion CSV lacks format_version,1");
  }
  std::getline(in, line);
  auto header = detail::split(line);
  if (header.size() < 3) throw Error(ErrorCode::InvalidArgument, "confusion CSV header too short");
  std::vector<std::string> names(header.begin() + 1, header.end() - 1);
  const int k = static_cast<int>(names.size());
  ConfusionMatrix cm(k, names);
  for (int t = 0; t < k; ++t) {
    if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "confusion CSV truncated");
    const auto fields = detail::split(line);
    if (static_cast<int>(fields.size()) != k + 2) throw Error(ErrorCode::InvalidArgument, "bad confusion row");
    for (int p = 0; p < k; ++p) {
      cm.add(t, p, static_cast<long>(detail::parse_int(fields[p + 1])));
    }
  }
  return cm;
}

GridResult grid_select(const Trainer& trainer, std::span<const double> grid, const Eigen::MatrixXd& X_train,
                       std::span<const int> y_train, const Eigen::MatrixXd& X_test, std::span<const int> y_test,
                       int num_classes) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty parameter grid");
  GridResult result;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto classify = trainer(grid[i], X_train, y_train);
    const auto predicted = classify(X_test);
    const auto acc = accuracies(confusion(y_test, predicted, num_classes));
    result.rows.push_back({grid[i], acc.mean, acc.overall});
    if (i == 0 || acc.mean > result.rows[result.best_index].mean_accuracy) result.best_index = i;
  }
  result.best_parameter = grid[result.best_index];
  return result;
}

std::string render_grid(const GridResult& result, const std::string& parameter_name) {
  std::ostringstream out;
  out << std::setw(12) << parameter_name << std::setw(14) << "mean acc %" << std::setw(14) << "overall %" << '\n';
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    out << std::setw(12) << std::defaultfloat << row.parameter << std::fixed << std::setprecision(2)
        << std::setw(14) << 100.0 * row.mean_accuracy << std::setw(14) << 100.0 * row.overall_accuracy
        << (i == result.best_index ? "  <- selected" : "") << '\n'
        << std::defaultfloat << std::setprecision(6);
  }
  return out.str();
}

}  // namespace camid
