#pragma once

#include "gmbl/dataset.hpp"
#include "gmbl/graph.hpp"
#include "gmbl/metrics.hpp"
#include "gmbl/model_io.hpp"
#include "gmbl/run_config.hpp"

#include <optional>

namespace gmbl {

/// Loads the configured data source: a dataset directory or a synthetic draw.
MultiViewDataset load_input(const RunConfig& cfg);

/// Everything that does not depend on the code length, shared across fits:
/// normalized views, anchor embeddings, per-view affinities and the fused
/// graph built with uniform view weights.
struct Prepared {
  MultiViewDataset normalized;
  std::vector<EmbeddedView> embeds;
  std::vector<SpMat> per_view_s;
  SimilarityGraph graph;
  Eigen::Index anchors_used = 0;
};

/// Honors cfg.view when set by restricting the dataset to that single view.
Prepared prepare_views(const MultiViewDataset& raw, const RunConfig& cfg);

struct RunResult {
  Model model;
  ClusterAssignment assignment;
  std::optional<ClusteringReport> report;  // present when ground truth exists
  int clusters = 0;
};

/// Fit plus k-means plus metrics on prepared views.
RunResult fit_prepared(const Prepared& prep, const RunConfig& cfg);

/// Full pipeline: normalize, embed, graph, fit, cluster, score.
RunResult run_fit(const MultiViewDataset& raw, const RunConfig& cfg);

/// Writes model.bits/model.json/h<v>.f64, trace.csv, report.json,
/// manifest.json and the optional debug dumps into cfg.out.
void write_outputs(const Prepared& prep, const RunResult& result, const RunConfig& cfg,
                   const std::filesystem::path& dir);

nlohmann::json report_json(const RunResult& result, const RunConfig& cfg);

}  // namespace gmbl
