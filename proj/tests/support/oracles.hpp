#pragma once

// Test-only reference implementations. Each one solves the same problem as
// the library through a different route (KKT systems, finite differences,
// exhaustive enumeration), so agreement is meaningful evidence.

#include "gmbl/dataset.hpp"
#include "gmbl/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// Reconstruction weights by solving the KKT system of
///   minimize w^T C' w  subject to 1^T w = 1,
/// where C' is the difference Gram plus the same trace ridge the library
/// applies. The library instead normalizes C'^{-1} 1; the two must agree.
inline Eigen::VectorXd lle_weights_kkt(const Eigen::VectorXd& x, const Eigen::MatrixXd& u,
                                       double reg) {
  const Eigen::Index g = u.cols();
  Eigen::MatrixXd diff(x.size(), g);
  for (Eigen::Index j = 0; j < g; ++j) diff.col(j) = x - u.col(j);
  Eigen::MatrixXd c = diff.transpose() * diff;
  const double trace = c.trace();
  c.diagonal().array() += reg * (trace > 0 ? trace : 1.0);

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(g + 1, g + 1);
  kkt.topLeftCorner(g, g) = 2.0 * c;
  kkt.topRightCorner(g, 1).setOnes();
  kkt.bottomLeftCorner(1, g).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g + 1);
  rhs(g) = 1.0;
  return kkt.fullPivLu().solve(rhs).head(g);
}

/// The relaxed code objective whose gradient the optimizer follows. The
/// ||B||^2 subtraction reflects that sign matrices have constant norm, so the
/// optimizer drops that direction from the quantization terms.
inline double relaxed_code_objective(const Eigen::MatrixXd& b,
                                     const std::vector<Eigen::MatrixXd>& hg,
                                     const Eigen::VectorXd& a, double c,
                                     const Eigen::MatrixXd& laplacian, double beta,
                                     double mu, double rho, bool centered) {
  double f = 0;
  for (std::size_t v = 0; v < hg.size(); ++v)
    f += std::pow(a(static_cast<Eigen::Index>(v)), c) *
         ((b - hg[v]).squaredNorm() - b.squaredNorm());
  f += beta * (b * laplacian).cwiseProduct(b).sum();
  Eigen::MatrixXd bbt = b * b.transpose();
  if (centered) bbt.diagonal().array() -= static_cast<double>(b.cols());
  f += mu * bbt.squaredNorm();
  f += rho * b.rowwise().sum().squaredNorm();
  return f;
}

/// Central finite differences of relaxed_code_objective in every entry of b.
inline Eigen::MatrixXd fd_code_gradient(const Eigen::MatrixXd& b,
                                        const std::vector<Eigen::MatrixXd>& hg,
                                        const Eigen::VectorXd& a, double c,
                                        const Eigen::MatrixXd& laplacian, double beta,
                                        double mu, double rho, bool centered) {
  Eigen::MatrixXd grad(b.rows(), b.cols());
  Eigen::MatrixXd work = b;
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(b(i, j)));
      work(i, j) = b(i, j) + h;
      const double fp = relaxed_code_objective(work, hg, a, c, laplacian, beta, mu, rho, centered);
      work(i, j) = b(i, j) - h;
      const double fm = relaxed_code_objective(work, hg, a, c, laplacian, beta, mu, rho, centered);
      work(i, j) = b(i, j);
      grad(i, j) = (fp - fm) / (2 * h);
    }
  return grad;
}

/// Clustering accuracy by trying every cluster-to-class bijection. Only
/// feasible for max(k_pred, k_true) <= ~8.
inline double brute_force_accuracy(const std::vector<int>& pred,
                                   const std::vector<int>& truth) {
  int kp = 0, kt = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    kp = std::max(kp, pred[i] + 1);
    kt = std::max(kt, truth[i] + 1);
  }
  const int k = std::max(kp, kt);
  std::vector<std::vector<int>> table(kp, std::vector<int>(kt, 0));
  for (std::size_t i = 0; i < pred.size(); ++i) ++table[pred[i]][truth[i]];
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int hits = 0;
    for (int i = 0; i < kp; ++i)
      if (perm[i] < kt) hits += table[i][perm[i]];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

/// Minimum of sum_v a_v^c m_v over a grid on the simplex with `steps`
/// subdivisions per axis.
inline double simplex_grid_min(const std::vector<double>& losses, double c, int steps) {
  const int k = static_cast<int>(losses.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> q(k, 0);
  // enumerate compositions of `steps` into k non-negative parts
  const std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      q[pos] = left;
      double f = 0;
      for (int v = 0; v < k; ++v)
        f += std::pow(static_cast<double>(q[v]) / steps, c) * losses[v];
      best = std::min(best, f);
      return;
    }
    for (int take = 0; take <= left; ++take) {
      q[pos] = take;
      rec(pos + 1, left - take);
    }
  };
  rec(0, steps);
  return best;
}

/// Three views over three clusters where view v gives clusters v and
/// (v+1) mod 3 the same center: no single view separates all three, but the
/// views are jointly sufficient.
inline gmbl::MultiViewDataset complementary_blobs(int per_cluster, int dim, double noise,
                                                  std::uint64_t seed) {
  const int n_clusters = 3, n_views = 3;
  const Eigen::Index n = static_cast<Eigen::Index>(n_clusters) * per_cluster;
  gmbl::MultiViewDataset ds;
  ds.labels.resize(n);
  for (int c = 0; c < n_clusters; ++c)
    for (int i = 0; i < per_cluster; ++i) ds.labels[c * per_cluster + i] = c;

  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int v = 0; v < n_views; ++v) {
    Eigen::MatrixXd centers(dim, n_clusters);
    for (Eigen::Index j = 0; j < centers.cols(); ++j)
      for (Eigen::Index i = 0; i < centers.rows(); ++i) centers(i, j) = 2.0 * normal(eng);
    centers.col((v + 1) % 3) = centers.col(v);  // the pair this view cannot split
    gmbl::ViewMatrix view;
    view.view_id = v;
    view.data.resize(dim, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const int c = ds.labels[j];
      for (Eigen::Index i = 0; i < dim; ++i)
        view.data(i, j) = centers(i, c) + noise * normal(eng);
    }
    ds.views.push_back(std::move(view));
  }
  return ds;
}

}  // namespace oracle
