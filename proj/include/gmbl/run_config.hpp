#pragma once

#include "gmbl/optimizer.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gmbl {

/// Everything a run needs, resolvable from defaults, a config file, and
/// command-line flags in that order. Flags always win. The resolved state is
/// written to manifest.json next to the other outputs, and such a manifest
/// can be passed back as a config file to reproduce the run.
struct RunConfig {
  // data source: a dataset directory or a synthetic draw
  std::string data;
  std::string model;  // fitted model directory, only used when re-evaluating
  bool synth = false;
  int synth_views = 3;
  int synth_clusters = 3;
  int synth_per_cluster = 100;
  std::vector<int> synth_dims = {20, 20, 20};
  double synth_noise = 0.3;
  std::string format = "csv";  // dataset layout written by the synth command

  // embedding and graph
  Eigen::Index anchors = 0;  // 0 selects min(300, n); explicit values are strict
  double kernel_width = 0;   // <= 0 selects the mean-distance heuristic
  Eigen::Index neighbors = 6;
  double lle_reg = 1e-3;

  HyperParams hp;

  // clustering and evaluation
  int clusters = 0;  // 0 means "use the number of distinct labels"
  int kmeans_restarts = 10;
  int kmeans_iters = 100;

  std::uint64_t seed = 1;
  std::string out;
  int parallel = 1;
  int view = -1;  // restricts fitting to one view when >= 0
  std::vector<Eigen::Index> sweep_bits = {8, 16, 32, 64, 128};
  bool dump_embeddings = false;
  bool dump_graph = false;

  /// Applies one key=value pair; throws ValidationError naming the key when
  /// it is unknown or the value does not parse.
  void set(const std::string& key, const std::string& value);

  /// Reads either a flat "key = value" text file or a JSON manifest
  /// ({"config": {...}} or a flat JSON object).
  void load_file(const std::filesystem::path& file);

  /// Fully resolved flat view of this config, for the manifest.
  nlohmann::json to_json() const;

  void validate() const;
};

/// Build identifier embedded at configure time, recorded in manifests.
const char* version_string();

}  // namespace gmbl
