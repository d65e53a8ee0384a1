#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "camid/standardizer.hpp"

namespace camid {

struct KnnModel {
  Eigen::MatrixXd reference;  // m x n, standardized
  std::vector<int> labels;
  int k = 1;
  int num_classes = 0;
  Standardizer standardizer;
};

KnnModel knn_fit(const Eigen::MatrixXd& X, std::span<const int> y, int num_classes, int k);

/// Majority vote among the k reference rows nearest in Euclidean distance
/// (equal distances ordered by row index). A tied vote goes to the tied class
/// owning the nearest of the k neighbors.
int knn_predict(const KnnModel& model, const Eigen::VectorXd& x);

/// Same, for a query that is already standardized.
int knn_predict_standardized(const KnnModel& model, const Eigen::VectorXd& z);

/// Vote fractions among the k nearest neighbors, one row per query.
Eigen::MatrixXd knn_vote_fractions(const KnnModel& model, const Eigen::MatrixXd& X);

std::vector<int> knn_predict_rows(const KnnModel& model, const Eigen::MatrixXd& X);

}  // namespace camid
