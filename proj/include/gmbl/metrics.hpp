#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace gmbl {

struct ClusterAssignment {
  std::vector<int> labels;  // in [0, k)
  int k = 0;
  double inertia = 0;  // within-cluster sum of squared distances at the best restart
};

/// Lloyd k-means with k-means++ seeding over the columns of b, best of
/// n_restarts by inertia. Restart r uses a seed derived from (seed, r), so
/// results are reproducible. Empty clusters are re-seeded to the point
/// farthest from its centroid. inertia_trace, when given, receives the
/// per-iteration inertia of the winning restart.
ClusterAssignment kmeans_codes(const Eigen::MatrixXd& b, int k, std::uint64_t seed,
                               int max_iters = 100, int n_restarts = 10,
                               std::vector<double>* inertia_trace = nullptr);

/// Counts of samples falling in (predicted cluster i, true class j).
Eigen::MatrixXi contingency_table(const std::vector<int>& predicted,
                                  const std::vector<int>& truth);

/// Clustering accuracy: the best one-to-one matching of predicted clusters to
/// classes (rectangular cases are padded), matched count over n.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Mutual information normalized by sqrt(H(pred) H(truth)), natural logs.
/// Two single-cluster partitions score 1; exactly one degenerate side scores 0.
double nmi(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Fraction of samples whose cluster's majority class matches their own.
double purity(const std::vector<int>& predicted, const std::vector<int>& truth);

/// F1 over all sample pairs: a pair counts as positive when both sides place
/// it in the same group.
double pairwise_f_score(const std::vector<int>& predicted, const std::vector<int>& truth);

struct ClusteringReport {
  double acc = 0;
  double nmi = 0;
  double purity = 0;
  double f_score = 0;
};

ClusteringReport evaluate(const std::vector<int>& predicted, const std::vector<int>& truth);

}  // namespace gmbl
