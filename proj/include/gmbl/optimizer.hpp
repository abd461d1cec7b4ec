#pragma once

#include "gmbl/graph.hpp"
#include "gmbl/kernel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace gmbl {

struct HyperParams {
  Eigen::Index bits = 32;     // code length r
  double delta = 1e-3;        // ridge on the projection matrices
  double lambda = 1e-2;       // spread reward on the projected embeddings
  double beta = 0.1;          // graph smoothness weight
  double mu = 1e-5;           // bit decorrelation penalty (gradient only)
  double rho = 1e-3;          // bit balance penalty (gradient only)
  double c = 2.0;             // view-weight sharpness, must be > 1
  double eta = 0.1;           // proximal step control; <= 0 selects n at fit time
  double tol = 1e-4;          // relative objective change stopping threshold
  int max_iters = 50;
  int inner_b_steps = 3;
  bool decorrelation_centered = false;  // subtract n I from B B^T in the penalty
  bool refresh_graph_each_iter = false;

  void validate(Eigen::Index n_samples) const;
};

/// Learned state: codes, per-view projections, view weights, and the
/// objective value after initialization and after each alternation sweep.
struct Model {
  Eigen::MatrixXd b;               // r x N, entries in {-1, +1}
  std::vector<Eigen::MatrixXd> h;  // per view, r x s_v
  Eigen::VectorXd a;               // view weights on the simplex
  std::vector<double> objective_trace;
};

/// Random sign codes plus their optimal projections and uniform weights.
Model init_model(const std::vector<EmbeddedView>& embeds, const HyperParams& hp,
                 std::uint64_t seed);

/// Closed-form projection update H = B G^T P^{-1} with
/// P = (1 - lambda/n) G G^T + delta I. Refines the solve until the relative
/// residual is at machine level and throws SingularNormalMatrix otherwise.
Eigen::MatrixXd update_h(const Eigen::MatrixXd& b, const EmbeddedView& ev,
                         const HyperParams& hp);

/// Unweighted per-view coding loss
/// m_v = ||B - H_v G_v||_F^2 + delta ||H_v||_F^2 - (lambda/n) ||H_v G_v||_F^2.
std::vector<double> per_view_losses(const Model& model,
                                    const std::vector<EmbeddedView>& embeds,
                                    const HyperParams& hp);

struct ObjectiveParts {
  double coding = 0;         // sum_v a_v^c m_v
  double graph = 0;          // beta tr(B L B^T)
  double decorrelation = 0;  // mu penalty, reported but not part of total()
  double balance = 0;        // rho penalty, reported but not part of total()

  double total() const { return coding + graph; }
};

ObjectiveParts objective_parts(const Model& model, const std::vector<EmbeddedView>& embeds,
                               const SimilarityGraph& graph, const HyperParams& hp);

double objective(const Model& model, const std::vector<EmbeddedView>& embeds,
                 const SimilarityGraph& graph, const HyperParams& hp);

/// Gradient of the relaxed code objective used by the proximal sign step:
/// -2 sum_v a_v^c H_v G_v + 2 beta B L + 4 mu (B B^T) B + 2 rho B 1 1^T,
/// with B B^T - n I replacing B B^T when decorrelation is centered.
Eigen::MatrixXd b_gradient(const Model& model, const std::vector<EmbeddedView>& embeds,
                           const SimilarityGraph& graph, const HyperParams& hp);

/// inner_b_steps proximal sign steps B <- sgn(B - grad / eta); a zero stays
/// at its previous sign.
Eigen::MatrixXd update_b(const Model& model, const std::vector<EmbeddedView>& embeds,
                         const SimilarityGraph& graph, const HyperParams& hp);

/// Closed-form simplex update a_v proportional to m_v^{1/(1-c)}; losses are
/// clamped below at 1e-12 with a warning.
Eigen::VectorXd update_a(const std::vector<double>& losses, const HyperParams& hp);

/// Alternating optimization from a fresh random initialization. per_view_s
/// may be null unless hp.refresh_graph_each_iter is set.
Model fit(const std::vector<EmbeddedView>& embeds, const SimilarityGraph& graph,
          const std::vector<SpMat>* per_view_s, const HyperParams& hp, std::uint64_t seed);

/// Alternating optimization from an existing state; exposed so callers can
/// warm-start or control initialization themselves.
Model fit_from(Model model, const std::vector<EmbeddedView>& embeds,
               const SimilarityGraph& graph, const std::vector<SpMat>* per_view_s,
               const HyperParams& hp);

}  // namespace gmbl
