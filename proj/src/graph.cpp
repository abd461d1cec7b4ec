#include "gmbl/graph.hpp"

#include "gmbl/errors.hpp"
#include "gmbl/log.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace gmbl {

NeighborIndex find_neighbors(const EmbeddedView& ev, Eigen::Index g) {
  const Eigen::Index n = ev.n_samples();
  if (g < 1 || g > n - 1)
    throw NeighborCountTooLarge("neighbor count " + std::to_string(g) +
                                " must lie in [1, " + std::to_string(n - 1) + "]");
  NeighborIndex nn;
  nn.neighbors.resize(g, n);
  std::vector<std::pair<double, Eigen::Index>> cand(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      // exact squared distances keep duplicate columns at distance zero, so
      // the (distance, index) order below breaks ties deterministically
      cand[m++] = {(ev.g.col(i) - ev.g.col(j)).squaredNorm(), j};
    }
    std::partial_sort(cand.begin(), cand.begin() + g, cand.end());
    for (Eigen::Index t = 0; t < g; ++t) nn.neighbors(t, i) = cand[static_cast<std::size_t>(t)].second;
  }
  return nn;
}

LleWeights lle_weights(const EmbeddedView& ev, const NeighborIndex& nn, double reg) {
  const Eigen::Index n = ev.n_samples();
  const Eigen::Index g = nn.n_neighbors();
  if (nn.n_samples() != n)
    throw LengthMismatch("neighbor index covers " + std::to_string(nn.n_samples()) +
                         " samples, embedding has " + std::to_string(n));
  if (reg < 0) throw ValidationError("gram ridge must be non-negative");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n * g));
  Eigen::MatrixXd diff(ev.n_anchors(), g);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index t = 0; t < g; ++t)
      diff.col(t) = ev.g.col(i) - ev.g.col(nn.neighbors(t, i));
    Eigen::MatrixXd c = diff.transpose() * diff;
    const double trace = c.trace();
    c.diagonal().array() += reg * (trace > 0 ? trace : 1.0);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(c);
    Eigen::VectorXd w = ldlt.solve(ones);
    if (!w.allFinite() ||
        (c * w - ones).norm() > 1e-6 * std::max(1.0, c.norm() * w.norm()))
      throw SingularLocalGram("local Gram solve failed for sample " + std::to_string(i));
    const double sum = w.sum();
    if (!std::isfinite(sum) || std::abs(sum) < 1e-300)
      throw SingularLocalGram("reconstruction weights of sample " + std::to_string(i) +
                              " sum to zero");
    w /= sum;
    for (Eigen::Index t = 0; t < g; ++t)
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(nn.neighbors(t, i)), w(t));
  }
  LleWeights out;
  out.w.resize(n, n);
  out.w.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

SpMat per_view_similarity(const LleWeights& w) {
  SpMat wc = w.w;  // to column major
  SpMat s = 0.5 * (wc + SpMat(wc.transpose()));
  return s;
}

SimilarityGraph fuse_and_laplacian(const std::vector<SpMat>& per_view,
                                   const Eigen::VectorXd& a) {
  if (per_view.empty()) throw MissingView("no per-view affinities to fuse");
  if (a.size() != static_cast<Eigen::Index>(per_view.size()))
    throw LengthMismatch("got " + std::to_string(a.size()) + " weights for " +
                         std::to_string(per_view.size()) + " affinities");
  if (std::abs(a.sum() - 1.0) > 1e-9 || (a.array() < 0).any())
    throw WeightsNotSimplex("view weights must be non-negative and sum to 1");
  const Eigen::Index n = per_view.front().rows();
  for (const auto& s : per_view)
    if (s.rows() != n || s.cols() != n)
      throw MismatchedSampleCount("per-view affinities disagree on sample count");

  SimilarityGraph graph;
  graph.s = a(0) * per_view.front();
  for (Eigen::Index v = 1; v < a.size(); ++v)
    graph.s += a(v) * per_view[static_cast<std::size_t>(v)];

  double most_negative = 0;
  for (Eigen::Index k = 0; k < graph.s.outerSize(); ++k)
    for (SpMat::InnerIterator it(graph.s, k); it; ++it)
      most_negative = std::min(most_negative, it.value());
  if (most_negative < 0)
    warn("fused affinity has negative entries (most negative " +
         std::to_string(most_negative) + "); Laplacian may be indefinite");

  graph.degree = graph.s * Eigen::VectorXd::Ones(n);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(graph.s.nonZeros()) + static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < graph.s.outerSize(); ++k)
    for (SpMat::InnerIterator it(graph.s, k); it; ++it)
      triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                            -it.value());
  for (Eigen::Index i = 0; i < n; ++i)
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), graph.degree(i));
  graph.laplacian.resize(n, n);
  graph.laplacian.setFromTriplets(triplets.begin(), triplets.end());
  return graph;
}

}  // namespace gmbl
