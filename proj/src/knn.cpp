#include "camid/knn.hpp"

#include <algorithm>
#include <numeric>

#include "camid/error.hpp"

namespace camid {

namespace {

struct Neighbor {
  Eigen::Index row;
  double distance;  // squared
};

// The k nearest reference rows, nearest first.
std::vector<Neighbor> nearest(const KnnModel& model, const Eigen::VectorXd& z) {
  if (z.size() != model.reference.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(model.reference.cols()) +
                                                  " standardized features, got " + std::to_string(z.size()));
  }
  const Eigen::Index m = model.reference.rows();
  std::vector<double> dist(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) dist[i] = (model.reference.row(i).transpose() - z).squaredNorm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto closer = [&](Eigen::Index a, Eigen::Index b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); };
  std::partial_sort(order.begin(), order.begin() + model.k, order.end(), closer);
  std::vector<Neighbor> out;
  out.reserve(static_cast<std::size_t>(model.k));
  for (int j = 0; j < model.k; ++j) out.push_back({order[j], dist[order[j]]});
  return out;
}

}  // namespace

KnnModel knn_fit(const Eigen::MatrixXd& X, std::span<const int> y, int num_classes, int k) {
  if (static_cast<Eigen::Index>(y.size()) != X.rows()) throw Error(ErrorCode::ShapeMismatch, "label count != rows");
  if (k < 1 || k > X.rows()) {
    throw Error(ErrorCode::InvalidArgument, "k must lie in [1, " + std::to_string(X.rows()) + "]");
  }
  for (int label : y) {
    if (label < 0 || label >= num_classes) throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(label));
  }
  KnnModel model;
  model.standardizer = Standardizer::fit(X);
  model.reference = model.standardizer.transform(X);
  model.labels.assign(y.begin(), y.end());
  model.k = k;
  model.num_classes = num_classes;
  return model;
}

int knn_predict_standardized(const KnnModel& model, const Eigen::VectorXd& z) {
  const auto neighbors = nearest(model, z);
  std::vector<int> votes(static_cast<std::size_t>(model.num_classes), 0);
  for (const auto& n : neighbors) ++votes[model.labels[n.row]];
  const int top = *std::max_element(votes.begin(), votes.end());
  // Neighbors are sorted nearest first: the first tied class met owns the
  // nearest member; tied classes at that same distance fall back to the
  // lowest class index.
  int best = -1;
  double best_distance = 0.0;
  for (const auto& n : neighbors) {
    const int label = model.labels[n.row];
    if (votes[label] != top) continue;
    if (best < 0) {
      best = label;
      best_distance = n.distance;
    } else if (n.distance == best_distance && label < best) {
      best = label;
    } else if (n.distance > best_distance) {
      break;
    }
  }
  return best;
}

int knn_predict(const KnnModel& model, const Eigen::VectorXd& x) {
  return knn_predict_standardized(model, model.standardizer.transform(x));
}

std::vector<int> knn_predict_rows(const KnnModel& model, const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd Z = model.standardizer.transform(X);
  std::vector<int> out(static_cast<std::size_t>(Z.rows()));
  for (Eigen::Index i = 0; i < Z.rows(); ++i) out[i] = knn_predict_standardized(model, Z.row(i).transpose());
  return out;
}

Eigen::MatrixXd knn_vote_fractions(const KnnModel& model, const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd Z = model.standardizer.transform(X);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(Z.rows(), model.num_classes);
  for (Eigen::Index r = 0; r < Z.rows(); ++r) {
    for (const auto& n : nearest(model, Z.row(r).transpose())) out(r, model.labels[n.row]) += 1.0 / model.k;
  }
  return out;
}

}  // namespace camid
