#include "gmbl/pipeline.hpp"

#include "gmbl/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

namespace fs = std::filesystem;

namespace gmbl {

MultiViewDataset load_input(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.synth)
    return make_synthetic(cfg.synth_views, cfg.synth_clusters, cfg.synth_per_cluster,
                          cfg.synth_dims, cfg.synth_noise, cfg.seed);
  return load_dataset(cfg.data);
}

Prepared prepare_views(const MultiViewDataset& raw, const RunConfig& cfg) {
  validate_dataset(raw);
  MultiViewDataset selected;
  if (cfg.view >= 0) {
    if (cfg.view >= static_cast<int>(raw.n_views()))
      throw ViewOutOfRange("view " + std::to_string(cfg.view) + " requested, dataset has " +
                           std::to_string(raw.n_views()));
    selected.views.push_back(raw.views[cfg.view]);
    selected.labels = raw.labels;
  } else {
    selected = raw;
  }

  Prepared prep;
  prep.normalized = normalize_views(selected);
  const Eigen::Index n = prep.normalized.n_samples();
  prep.anchors_used = cfg.anchors > 0 ? cfg.anchors : std::min<Eigen::Index>(300, n);

  for (const auto& view : prep.normalized.views) {
    const AnchorSet anchors = sample_anchors(view, prep.anchors_used, cfg.seed);
    std::optional<double> width;
    if (cfg.kernel_width > 0) width = cfg.kernel_width;
    prep.embeds.push_back(embed_view(view, anchors.points, width));
  }

  for (const auto& ev : prep.embeds) {
    const NeighborIndex nn = find_neighbors(ev, cfg.neighbors);
    prep.per_view_s.push_back(per_view_similarity(lle_weights(ev, nn, cfg.lle_reg)));
  }
  const Eigen::Index k = static_cast<Eigen::Index>(prep.per_view_s.size());
  prep.graph = fuse_and_laplacian(
      prep.per_view_s, Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k)));
  return prep;
}

namespace {

int resolve_clusters(const MultiViewDataset& ds, const RunConfig& cfg) {
  if (cfg.clusters > 0) return cfg.clusters;
  if (!ds.has_labels())
    throw ValidationError("dataset has no labels; pass the cluster count explicitly");
  return ds.n_classes();
}

}  // namespace

RunResult fit_prepared(const Prepared& prep, const RunConfig& cfg) {
  RunResult result;
  result.clusters = resolve_clusters(prep.normalized, cfg);
  result.model = fit(prep.embeds, prep.graph, &prep.per_view_s, cfg.hp, cfg.seed);
  result.assignment = kmeans_codes(result.model.b, result.clusters, cfg.seed,
                                   cfg.kmeans_iters, cfg.kmeans_restarts);
  if (prep.normalized.has_labels())
    result.report = evaluate(result.assignment.labels, prep.normalized.labels);
  return result;
}

RunResult run_fit(const MultiViewDataset& raw, const RunConfig& cfg) {
  return fit_prepared(prepare_views(raw, cfg), cfg);
}

nlohmann::json report_json(const RunResult& result, const RunConfig& cfg) {
  nlohmann::json j;
  if (result.report) {
    j["acc"] = result.report->acc;
    j["nmi"] = result.report->nmi;
    j["purity"] = result.report->purity;
    j["f_score"] = result.report->f_score;
  }
  j["n_clusters"] = result.clusters;
  j["code_length"] = result.model.b.rows();
  j["inertia"] = result.assignment.inertia;
  j["seed"] = cfg.seed;
  if (cfg.view >= 0) j["view"] = cfg.view;
  return j;
}

void write_outputs(const Prepared& prep, const RunResult& result, const RunConfig& cfg,
                   const fs::path& dir) {
  fs::create_directories(dir);
  save_model(result.model, cfg.hp, dir);

  {
    std::ofstream out(dir / "trace.csv");
    if (!out) throw ValidationError("cannot write " + (dir / "trace.csv").string());
    out << "iteration,objective\n";
    char buf[64];
    for (std::size_t i = 0; i < result.model.objective_trace.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", result.model.objective_trace[i]);
      out << i << ',' << buf << '\n';
    }
  }

  {
    std::ofstream out(dir / "report.json");
    if (!out) throw ValidationError("cannot write " + (dir / "report.json").string());
    out << report_json(result, cfg).dump(2) << '\n';
  }

  {
    nlohmann::json manifest;
    manifest["version"] = version_string();
    manifest["config"] = cfg.to_json();
    std::ofstream out(dir / "manifest.json");
    if (!out) throw ValidationError("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
  }

  if (cfg.dump_embeddings) {
    nlohmann::json shapes = nlohmann::json::array();
    for (std::size_t v = 0; v < prep.embeds.size(); ++v) {
      const auto& g = prep.embeds[v].g;
      save_matrix_f64(g, dir / ("embed" + std::to_string(v) + ".f64"));
      shapes.push_back({{"file", "embed" + std::to_string(v) + ".f64"},
                        {"rows", g.rows()},
                        {"cols", g.cols()},
                        {"width", prep.embeds[v].width}});
    }
    std::ofstream out(dir / "embed_shapes.json");
    out << shapes.dump(2) << '\n';
  }

  if (cfg.dump_graph) {
    std::ofstream out(dir / "graph.csv");
    if (!out) throw ValidationError("cannot write " + (dir / "graph.csv").string());
    out << "i,j,s\n";
    char buf[64];
    for (Eigen::Index k = 0; k < prep.graph.s.outerSize(); ++k)
      for (SpMat::InnerIterator it(prep.graph.s, k); it; ++it) {
        std::snprintf(buf, sizeof buf, "%.17g", it.value());
        out << it.row() << ',' << it.col() << ',' << buf << '\n';
      }
  }
}

}  // namespace gmbl
