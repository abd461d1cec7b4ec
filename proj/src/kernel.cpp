#include "gmbl/kernel.hpp"

#include "gmbl/errors.hpp"

namespace gmbl {

namespace {

void check_shapes(const ViewMatrix& view, const Eigen::MatrixXd& anchors) {
  if (anchors.cols() < 1) throw ValidationError("anchor set is empty");
  if (anchors.rows() != view.dim())
    throw ValidationError("anchors have dimension " + std::to_string(anchors.rows()) +
                          " but view " + std::to_string(view.view_id) + " has dimension " +
                          std::to_string(view.dim()));
  if (!view.data.allFinite() || !anchors.allFinite())
    throw NonFiniteEntry("non-finite entries in view or anchors");
}

}  // namespace

double kernel_width_heuristic(const ViewMatrix& view, const Eigen::MatrixXd& anchors) {
  check_shapes(view, anchors);
  double total = 0;
  for (Eigen::Index j = 0; j < anchors.cols(); ++j)
    total += (view.data.colwise() - anchors.col(j)).colwise().squaredNorm().sum();
  const double mean = total / (static_cast<double>(view.n_samples()) *
                               static_cast<double>(anchors.cols()));
  return mean > 0 ? mean : 1.0;
}

EmbeddedView embed_view(const ViewMatrix& view, const Eigen::MatrixXd& anchors,
                        std::optional<double> width) {
  check_shapes(view, anchors);
  double xi;
  if (width.has_value()) {
    if (!(*width > 0))
      throw NonPositiveKernelWidth("kernel width must be positive, got " +
                                   std::to_string(*width));
    xi = *width;
  } else {
    xi = kernel_width_heuristic(view, anchors);
  }

  EmbeddedView ev;
  ev.view_id = view.view_id;
  ev.width = xi;
  ev.g.resize(anchors.cols(), view.n_samples());
  for (Eigen::Index j = 0; j < anchors.cols(); ++j)
    ev.g.row(j) = (-(view.data.colwise() - anchors.col(j)).colwise().squaredNorm() / xi)
                      .array()
                      .exp();
  return ev;
}

}  // namespace gmbl
