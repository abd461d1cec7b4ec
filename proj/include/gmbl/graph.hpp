#pragma once

#include "gmbl/kernel.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace gmbl {

using SpMat = Eigen::SparseMatrix<double>;

/// Column i lists the g nearest samples of sample i, nearest first, in the
/// embedded space of one view. A sample is never its own neighbor; distance
/// ties break toward the smaller index.
struct NeighborIndex {
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> neighbors;  // g x N

  Eigen::Index n_neighbors() const { return neighbors.rows(); }
  Eigen::Index n_samples() const { return neighbors.cols(); }
};

NeighborIndex find_neighbors(const EmbeddedView& ev, Eigen::Index g);

/// Row i holds sample i's locally linear reconstruction weights over its
/// neighbors; every row sums to 1.
struct LleWeights {
  Eigen::SparseMatrix<double, Eigen::RowMajor> w;  // N x N, g entries per row
};

/// Solves the constrained least squares min ||x_i - sum_j w_j u_j||^2 with
/// sum_j w_j = 1 through the local Gram system. The Gram matrix is ridged by
/// reg times its trace before the solve.
LleWeights lle_weights(const EmbeddedView& ev, const NeighborIndex& nn, double reg = 1e-3);

/// Symmetrized single-view affinity (W + W^T) / 2.
SpMat per_view_similarity(const LleWeights& w);

/// Fused affinity, degrees and unnormalized Laplacian L = D - S.
struct SimilarityGraph {
  SpMat s;
  Eigen::VectorXd degree;
  SpMat laplacian;
};

/// Combines per-view affinities with convex weights a (validated against the
/// simplex) and assembles the Laplacian.
SimilarityGraph fuse_and_laplacian(const std::vector<SpMat>& per_view,
                                   const Eigen::VectorXd& a);

}  // namespace gmbl
