#pragma once

#include "gmbl/dataset.hpp"

#include <Eigen/Dense>

#include <optional>

namespace gmbl {

/// Nonlinear embedding of one view: column i holds the RBF responses of
/// sample i against the s anchors, g(i)_j = exp(-||x_i - o_j||^2 / width).
struct EmbeddedView {
  Eigen::MatrixXd g;  // s x N
  double width = 0;   // kernel width actually used
  int view_id = 0;

  Eigen::Index n_anchors() const { return g.rows(); }
  Eigen::Index n_samples() const { return g.cols(); }
};

/// Mean squared distance between samples and anchors; the default width when
/// none is given. Returns 1 for the degenerate all-identical case so the
/// embedding stays well defined.
double kernel_width_heuristic(const ViewMatrix& view, const Eigen::MatrixXd& anchors);

/// An absent width selects the heuristic; an explicit width must be positive
/// or NonPositiveKernelWidth is thrown.
EmbeddedView embed_view(const ViewMatrix& view, const Eigen::MatrixXd& anchors,
                        std::optional<double> width = std::nullopt);

}  // namespace gmbl
