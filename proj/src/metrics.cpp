#include "gmbl/metrics.hpp"

#include "gmbl/errors.hpp"
#include "gmbl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace gmbl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& b, int k, std::mt19937_64& eng) {
  const Eigen::Index n = b.cols();
  Eigen::MatrixXd centers(b.rows(), k);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centers.col(0) = b.col(pick(eng));
  Eigen::VectorXd d2 =
      (b.colwise() - centers.col(0)).colwise().squaredNorm().transpose();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index idx;
    if (total > 0) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double x = u(eng);
      double cum = 0;
      idx = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += d2(i);
        if (cum >= x) {
          idx = i;
          break;
        }
      }
    } else {
      idx = pick(eng);  // every point already coincides with a center
    }
    centers.col(c) = b.col(idx);
    d2 = d2.cwiseMin(
        (b.colwise() - centers.col(c)).colwise().squaredNorm().transpose());
  }
  return centers;
}

struct LloydResult {
  std::vector<int> labels;
  double inertia = kInf;
  std::vector<double> trace;
};

LloydResult lloyd(const Eigen::MatrixXd& b, int k, int max_iters, std::mt19937_64& eng) {
  const Eigen::Index n = b.cols();
  Eigen::MatrixXd centers = kmeanspp_init(b, k, eng);
  LloydResult res;
  res.labels.assign(n, 0);
  std::vector<Eigen::Index> counts(k);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (b.col(i) - centers.col(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (b.col(i) - centers.col(c)).squaredNorm();
        if (d < best_d) {  // ties keep the smaller cluster index
          best_d = d;
          best = c;
        }
      }
      if (res.labels[i] != best) {
        res.labels[i] = best;
        changed = true;
      }
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) ++counts[res.labels[i]];
    // re-seed each empty cluster to the point farthest from its centroid
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      Eigen::Index far = -1;
      double far_d = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (counts[res.labels[i]] <= 1) continue;
        const double d = (b.col(i) - centers.col(res.labels[i])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far < 0) break;  // fewer distinct points than clusters
      --counts[res.labels[far]];
      res.labels[far] = c;
      counts[c] = 1;
      changed = true;
    }
    centers.setZero();
    for (Eigen::Index i = 0; i < n; ++i) centers.col(res.labels[i]) += b.col(i);
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0) centers.col(c) /= static_cast<double>(counts[c]);
    double inertia = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      inertia += (b.col(i) - centers.col(res.labels[i])).squaredNorm();
    res.trace.push_back(inertia);
    res.inertia = inertia;
    if (!changed) break;
  }
  return res;
}

// shortest augmenting path assignment on a square cost matrix, O(n^3)
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

double entropy(const Eigen::VectorXd& counts, double n) {
  double h = 0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (counts(i) <= 0) continue;
    const double p = counts(i) / n;
    h -= p * std::log(p);
  }
  return h;
}

double comb2(double m) { return m * (m - 1) / 2; }

}  // namespace

ClusterAssignment kmeans_codes(const Eigen::MatrixXd& b, int k, std::uint64_t seed,
                               int max_iters, int n_restarts,
                               std::vector<double>* inertia_trace) {
  const Eigen::Index n = b.cols();
  if (k < 1) throw ValidationError("cluster count must be at least 1");
  if (k > n)
    throw TooManyClusters("asked for " + std::to_string(k) + " clusters from " +
                          std::to_string(n) + " samples");
  if (max_iters < 1 || n_restarts < 1)
    throw ValidationError("k-means iteration and restart counts must be at least 1");

  LloydResult best;
  for (int r = 0; r < n_restarts; ++r) {
    auto eng = std::mt19937_64(rng::derive(seed, r));
    LloydResult res = lloyd(b, k, max_iters, eng);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  if (inertia_trace) *inertia_trace = best.trace;
  ClusterAssignment out;
  out.labels = std::move(best.labels);
  out.k = k;
  out.inertia = best.inertia;
  return out;
}

Eigen::MatrixXi contingency_table(const std::vector<int>& predicted,
                                  const std::vector<int>& truth) {
  if (predicted.size() != truth.size())
    throw LengthMismatch("label vectors have sizes " + std::to_string(predicted.size()) +
                         " and " + std::to_string(truth.size()));
  if (predicted.empty()) throw ValidationError("label vectors are empty");
  int kp = 0, kt = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] < 0 || truth[i] < 0)
      throw ValidationError("labels must be non-negative");
    kp = std::max(kp, predicted[i] + 1);
    kt = std::max(kt, truth[i] + 1);
  }
  Eigen::MatrixXi table = Eigen::MatrixXi::Zero(kp, kt);
  for (std::size_t i = 0; i < predicted.size(); ++i) ++table(predicted[i], truth[i]);
  return table;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  const Eigen::MatrixXi table = contingency_table(predicted, truth);
  const Eigen::Index k = std::max(table.rows(), table.cols());
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(k, k);
  cost.topLeftCorner(table.rows(), table.cols()) = -table.cast<double>();
  const auto match = min_cost_assignment(cost);
  double hits = 0;
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    if (match[i] < table.cols()) hits += table(i, match[i]);
  return hits / static_cast<double>(predicted.size());
}

double nmi(const std::vector<int>& predicted, const std::vector<int>& truth) {
  const Eigen::MatrixXi table = contingency_table(predicted, truth);
  const double n = static_cast<double>(predicted.size());
  const Eigen::VectorXd rows = table.cast<double>().rowwise().sum();
  const Eigen::VectorXd cols = table.cast<double>().colwise().sum().transpose();
  const double hp = entropy(rows, n), ht = entropy(cols, n);
  if (hp == 0 && ht == 0) return 1.0;  // two single-cluster partitions agree
  if (hp == 0 || ht == 0) return 0.0;
  double mi = 0;
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    for (Eigen::Index j = 0; j < table.cols(); ++j) {
      const double nij = table(i, j);
      if (nij <= 0) continue;
      mi += nij / n * std::log(n * nij / (rows(i) * cols(j)));
    }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double purity(const std::vector<int>& predicted, const std::vector<int>& truth) {
  const Eigen::MatrixXi table = contingency_table(predicted, truth);
  double hits = 0;
  for (Eigen::Index i = 0; i < table.rows(); ++i) hits += table.row(i).maxCoeff();
  return hits / static_cast<double>(predicted.size());
}

double pairwise_f_score(const std::vector<int>& predicted, const std::vector<int>& truth) {
  const Eigen::MatrixXi table = contingency_table(predicted, truth);
  double tp = 0;
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    for (Eigen::Index j = 0; j < table.cols(); ++j) tp += comb2(table(i, j));
  double same_pred = 0, same_truth = 0;
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    same_pred += comb2(table.cast<double>().row(i).sum());
  for (Eigen::Index j = 0; j < table.cols(); ++j)
    same_truth += comb2(table.cast<double>().col(j).sum());
  if (tp == 0) return 0.0;
  const double precision = tp / same_pred;
  const double recall = tp / same_truth;
  return 2 * precision * recall / (precision + recall);
}

ClusteringReport evaluate(const std::vector<int>& predicted, const std::vector<int>& truth) {
  ClusteringReport report;
  report.acc = accuracy(predicted, truth);
  report.nmi = nmi(predicted, truth);
  report.purity = purity(predicted, truth);
  report.f_score = pairwise_f_score(predicted, truth);
  return report;
}

}  // namespace gmbl
