#include "gmbl/optimizer.hpp"

#include "gmbl/errors.hpp"
#include "gmbl/log.hpp"
#include "gmbl/rng.hpp"

#include <cmath>
#include <string>

namespace gmbl {

namespace {

void check_embeds(const std::vector<EmbeddedView>& embeds) {
  if (embeds.empty()) throw MissingView("no embedded views");
  const Eigen::Index n = embeds.front().n_samples();
  for (const auto& ev : embeds)
    if (ev.n_samples() != n)
      throw MismatchedSampleCount("embedded views disagree on sample count");
}

void check_model(const Model& model, const std::vector<EmbeddedView>& embeds) {
  if (model.h.size() != embeds.size() ||
      model.a.size() != static_cast<Eigen::Index>(embeds.size()))
    throw LengthMismatch("model does not cover every embedded view");
  if (model.b.cols() != embeds.front().n_samples())
    throw MismatchedSampleCount("codes and embeddings disagree on sample count");
}

double resolved_eta(const HyperParams& hp, Eigen::Index n) {
  return hp.eta > 0 ? hp.eta : static_cast<double>(n);
}

double trace_blbt(const Eigen::MatrixXd& b, const SpMat& laplacian) {
  return (b * laplacian).cwiseProduct(b).sum();
}

}  // namespace

void HyperParams::validate(Eigen::Index n_samples) const {
  if (bits < 1) throw ValidationError("code length must be at least 1");
  if (!(delta > 0)) throw ValidationError("delta must be positive");
  if (lambda < 0 || lambda >= static_cast<double>(n_samples))
    throw ValidationError("lambda must satisfy 0 <= lambda < n");
  if (beta < 0 || mu < 0 || rho < 0)
    throw ValidationError("beta, mu, rho must be non-negative");
  if (!(c > 1)) throw ValidationError("view-weight sharpness c must exceed 1");
  if (eta < 0) throw ValidationError("eta must be positive (or 0 to select n)");
  if (tol < 0) throw ValidationError("tol must be non-negative");
  if (max_iters < 0) throw ValidationError("max_iters must be non-negative");
  if (inner_b_steps < 1) throw ValidationError("inner_b_steps must be at least 1");
}

Model init_model(const std::vector<EmbeddedView>& embeds, const HyperParams& hp,
                 std::uint64_t seed) {
  check_embeds(embeds);
  const Eigen::Index n = embeds.front().n_samples();
  Model model;
  model.b.resize(hp.bits, n);
  auto eng = rng::engine(seed, rng::kInitCodes);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < hp.bits; ++i)
      model.b(i, j) = normal(eng) < 0 ? -1.0 : 1.0;
  model.a = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(embeds.size()),
                                      1.0 / static_cast<double>(embeds.size()));
  model.h.reserve(embeds.size());
  for (const auto& ev : embeds) model.h.push_back(update_h(model.b, ev, hp));
  return model;
}

Eigen::MatrixXd update_h(const Eigen::MatrixXd& b, const EmbeddedView& ev,
                         const HyperParams& hp) {
  const Eigen::Index n = ev.n_samples();
  if (b.cols() != n)
    throw MismatchedSampleCount("codes and embedding disagree on sample count");
  Eigen::MatrixXd p = (1.0 - hp.lambda / static_cast<double>(n)) *
                      (ev.g * ev.g.transpose());
  p.diagonal().array() += hp.delta;
  const Eigen::MatrixXd rhs = ev.g * b.transpose();  // s x r, solves P H^T = G B^T
  Eigen::LDLT<Eigen::MatrixXd> ldlt(p);
  if (ldlt.info() != Eigen::Success)
    throw SingularNormalMatrix("normal matrix factorization failed for view " +
                               std::to_string(ev.view_id));
  Eigen::MatrixXd ht = ldlt.solve(rhs);
  // a couple of refinement passes push the residual to machine level even
  // when P is badly conditioned
  const double scale = rhs.norm();
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::MatrixXd resid = rhs - p * ht;
    if (resid.norm() <= 1e-14 * scale) break;
    ht += ldlt.solve(resid);
  }
  if (!ht.allFinite() || (scale > 0 && (rhs - p * ht).norm() > 1e-8 * scale))
    throw SingularNormalMatrix("normal matrix solve did not converge for view " +
                               std::to_string(ev.view_id));
  return ht.transpose();
}

std::vector<double> per_view_losses(const Model& model,
                                    const std::vector<EmbeddedView>& embeds,
                                    const HyperParams& hp) {
  check_embeds(embeds);
  check_model(model, embeds);
  const double n = static_cast<double>(model.b.cols());
  std::vector<double> losses(embeds.size());
  for (std::size_t v = 0; v < embeds.size(); ++v) {
    const Eigen::MatrixXd hg = model.h[v] * embeds[v].g;
    losses[v] = (model.b - hg).squaredNorm() + hp.delta * model.h[v].squaredNorm() -
                hp.lambda / n * hg.squaredNorm();
  }
  return losses;
}

ObjectiveParts objective_parts(const Model& model, const std::vector<EmbeddedView>& embeds,
                               const SimilarityGraph& graph, const HyperParams& hp) {
  ObjectiveParts parts;
  const auto losses = per_view_losses(model, embeds, hp);
  for (std::size_t v = 0; v < losses.size(); ++v)
    parts.coding += std::pow(model.a(static_cast<Eigen::Index>(v)), hp.c) * losses[v];
  parts.graph = hp.beta * trace_blbt(model.b, graph.laplacian);

  const Eigen::Index n = model.b.cols();
  Eigen::MatrixXd bbt = model.b * model.b.transpose();
  if (hp.decorrelation_centered) bbt.diagonal().array() -= static_cast<double>(n);
  parts.decorrelation = hp.mu * bbt.squaredNorm();
  parts.balance = hp.rho * model.b.rowwise().sum().squaredNorm();
  return parts;
}

double objective(const Model& model, const std::vector<EmbeddedView>& embeds,
                 const SimilarityGraph& graph, const HyperParams& hp) {
  return objective_parts(model, embeds, graph, hp).total();
}

Eigen::MatrixXd b_gradient(const Model& model, const std::vector<EmbeddedView>& embeds,
                           const SimilarityGraph& graph, const HyperParams& hp) {
  check_embeds(embeds);
  check_model(model, embeds);
  const Eigen::Index n = model.b.cols();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(model.b.rows(), n);
  for (std::size_t v = 0; v < embeds.size(); ++v)
    grad.noalias() -=
        2.0 * std::pow(model.a(static_cast<Eigen::Index>(v)), hp.c) *
        (model.h[v] * embeds[v].g);
  grad.noalias() += 2.0 * hp.beta * (model.b * graph.laplacian);
  Eigen::MatrixXd bbt = model.b * model.b.transpose();
  if (hp.decorrelation_centered) bbt.diagonal().array() -= static_cast<double>(n);
  grad.noalias() += 4.0 * hp.mu * (bbt * model.b);
  grad.colwise() += 2.0 * hp.rho * model.b.rowwise().sum();
  return grad;
}

Eigen::MatrixXd update_b(const Model& model, const std::vector<EmbeddedView>& embeds,
                         const SimilarityGraph& graph, const HyperParams& hp) {
  const double eta = resolved_eta(hp, model.b.cols());
  Model work = model;
  for (int step = 0; step < hp.inner_b_steps; ++step) {
    const Eigen::MatrixXd x = work.b - b_gradient(work, embeds, graph, hp) / eta;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        if (x(i, j) != 0) work.b(i, j) = x(i, j) > 0 ? 1.0 : -1.0;
    // a zero argument keeps the previous sign
  }
  return work.b;
}

Eigen::VectorXd update_a(const std::vector<double>& losses, const HyperParams& hp) {
  const Eigen::Index k = static_cast<Eigen::Index>(losses.size());
  if (k == 0) throw MissingView("no per-view losses");
  Eigen::VectorXd a(k);
  int clamped = 0;
  const double p = 1.0 / (1.0 - hp.c);
  for (Eigen::Index v = 0; v < k; ++v) {
    double m = losses[static_cast<std::size_t>(v)];
    if (m < 1e-12) {
      m = 1e-12;
      ++clamped;
    }
    a(v) = std::pow(m, p);
  }
  if (clamped)
    warn(std::to_string(clamped) + " view loss(es) clamped to 1e-12 in the weight update");
  a /= a.sum();
  return a;
}

Model fit(const std::vector<EmbeddedView>& embeds, const SimilarityGraph& graph,
          const std::vector<SpMat>* per_view_s, const HyperParams& hp, std::uint64_t seed) {
  check_embeds(embeds);
  hp.validate(embeds.front().n_samples());
  return fit_from(init_model(embeds, hp, seed), embeds, graph, per_view_s, hp);
}

Model fit_from(Model model, const std::vector<EmbeddedView>& embeds,
               const SimilarityGraph& graph, const std::vector<SpMat>* per_view_s,
               const HyperParams& hp) {
  check_embeds(embeds);
  check_model(model, embeds);
  hp.validate(embeds.front().n_samples());
  if (hp.refresh_graph_each_iter && per_view_s == nullptr)
    throw ValidationError("graph refresh requested but per-view affinities not supplied");

  SimilarityGraph local;
  const SimilarityGraph* active = &graph;
  model.objective_trace.assign(1, objective(model, embeds, *active, hp));
  double prev = model.objective_trace.front();
  for (int iter = 0; iter < hp.max_iters; ++iter) {
    for (std::size_t v = 0; v < embeds.size(); ++v)
      model.h[v] = update_h(model.b, embeds[v], hp);
    model.b = update_b(model, embeds, *active, hp);
    model.a = update_a(per_view_losses(model, embeds, hp), hp);
    if (hp.refresh_graph_each_iter) {
      local = fuse_and_laplacian(*per_view_s, model.a);
      active = &local;
    }
    const double cur = objective(model, embeds, *active, hp);
    model.objective_trace.push_back(cur);
    const double rel = std::abs(prev - cur) / std::max(std::abs(prev), 1e-12);
    if (rel < hp.tol) break;
    prev = cur;
  }
  return model;
}

}  // namespace gmbl
