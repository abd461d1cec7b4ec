// Command-line front end: fit, sweep, single-view, synth, eval.
// Exit codes: 0 success, 1 rejected input, 2 numerical failure.

#include "gmbl/errors.hpp"
#include "gmbl/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

namespace {

using gmbl::RunConfig;

// Every option funnels into (key, value) pairs applied onto RunConfig after
// an optional config file, so flags always win over file values and both
// paths share one validator.
struct Collected {
  std::vector<std::pair<std::string, std::string>> kvs;
  std::string config_file;
};

void opt(CLI::App* cmd, Collected& c, const std::string& flag, const std::string& key,
         const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&c, key](const std::string& v) { c.kvs.emplace_back(key, v); }, help);
}

void flag(CLI::App* cmd, Collected& c, const std::string& name, const std::string& key,
          const std::string& help) {
  cmd->add_flag_callback(name, [&c, key] { c.kvs.emplace_back(key, "true"); }, help);
}

void add_config_opt(CLI::App* cmd, Collected& c) {
  cmd->add_option("--config", c.config_file,
                  "config file: flat key = value lines or a manifest.json");
}

void add_data_opts(CLI::App* cmd, Collected& c) {
  opt(cmd, c, "--data", "data", "dataset directory (view<i>.csv or view<i>.f64 + shape.json)");
  flag(cmd, c, "--synth", "synth", "draw a synthetic multi-view blob dataset instead");
  opt(cmd, c, "--synth-views", "synth-views", "synthetic: number of views");
  opt(cmd, c, "--synth-clusters", "synth-clusters", "synthetic: number of clusters");
  opt(cmd, c, "--synth-per-cluster", "synth-per-cluster", "synthetic: samples per cluster");
  opt(cmd, c, "--synth-dims", "synth-dims", "synthetic: comma-separated view dimensions");
  opt(cmd, c, "--synth-noise", "synth-noise", "synthetic: within-cluster noise stddev");
}

void add_pipeline_opts(CLI::App* cmd, Collected& c) {
  opt(cmd, c, "--anchors", "anchors", "anchor count (default min(300, n))");
  opt(cmd, c, "--kernel-width", "kernel-width", "RBF width (default: mean squared distance)");
  opt(cmd, c, "--neighbors", "neighbors", "nearest neighbors per sample in the graph");
  opt(cmd, c, "--lle-reg", "lle-reg", "ridge on the local Gram matrices");
  opt(cmd, c, "--bits", "bits", "code length");
  opt(cmd, c, "--delta", "delta", "projection ridge weight");
  opt(cmd, c, "--lambda", "lambda", "projected-spread reward weight");
  opt(cmd, c, "--beta", "beta", "graph smoothness weight");
  opt(cmd, c, "--mu", "mu", "bit decorrelation penalty weight");
  opt(cmd, c, "--rho", "rho", "bit balance penalty weight");
  opt(cmd, c, "--c", "c", "view-weight sharpness (> 1)");
  opt(cmd, c, "--eta", "eta", "proximal step control (0 selects the sample count)");
  opt(cmd, c, "--tol", "tol", "relative objective change stopping threshold");
  opt(cmd, c, "--max-iters", "max-iters", "alternation sweep limit");
  opt(cmd, c, "--inner-b-steps", "inner-b-steps", "sign steps per code update");
  flag(cmd, c, "--decorrelation-centered", "decorrelation-centered",
       "subtract n I from B B^T inside the decorrelation gradient");
  flag(cmd, c, "--refresh-graph", "refresh-graph",
       "rebuild the fused graph with the learned view weights every sweep");
  opt(cmd, c, "--clusters", "clusters", "cluster count (default: distinct labels)");
  opt(cmd, c, "--kmeans-restarts", "kmeans-restarts", "k-means restarts");
  opt(cmd, c, "--kmeans-iters", "kmeans-iters", "k-means iteration limit");
  flag(cmd, c, "--dump-embeddings", "dump-embeddings", "write embed<v>.f64 debug dumps");
  flag(cmd, c, "--dump-graph", "dump-graph", "write the fused affinity as graph.csv");
}

void add_run_opts(CLI::App* cmd, Collected& c) {
  opt(cmd, c, "--seed", "seed", "master seed; all randomness derives from it");
  opt(cmd, c, "--out", "out", "output directory");
}

RunConfig resolve(const Collected& c) {
  RunConfig cfg;
  if (!c.config_file.empty()) cfg.load_file(c.config_file);
  for (const auto& [key, value] : c.kvs) cfg.set(key, value);
  return cfg;
}

void require_out(const RunConfig& cfg) {
  if (cfg.out.empty()) throw gmbl::ValidationError("--out is required");
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << std::endl; }

int cmd_fit(const RunConfig& cfg) {
  require_out(cfg);
  const auto raw = gmbl::load_input(cfg);
  const auto prep = gmbl::prepare_views(raw, cfg);
  const auto result = gmbl::fit_prepared(prep, cfg);
  gmbl::write_outputs(prep, result, cfg, cfg.out);
  print_json(gmbl::report_json(result, cfg));
  return 0;
}

int cmd_single_view(const RunConfig& cfg) {
  if (cfg.view < 0)
    throw gmbl::ValidationError("single-view requires --view");
  return cmd_fit(cfg);
}

int cmd_sweep(const RunConfig& cfg) {
  require_out(cfg);
  const auto raw = gmbl::load_input(cfg);
  if (!raw.has_labels())
    throw gmbl::ValidationError("sweep scores against labels; the dataset has none");
  const auto prep = gmbl::prepare_views(raw, cfg);

  const std::size_t m = cfg.sweep_bits.size();
  std::vector<gmbl::RunResult> results(m);
  std::vector<std::exception_ptr> errors(m);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < m; i = next.fetch_add(1)) {
      try {
        RunConfig local = cfg;
        local.hp.bits = cfg.sweep_bits[i];
        results[i] = gmbl::fit_prepared(prep, local);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(cfg.parallel, m);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const std::filesystem::path out_dir = cfg.out;
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir / "sweep.csv");
  if (!csv) throw gmbl::ValidationError("cannot write " + (out_dir / "sweep.csv").string());
  csv << "bits,acc,nmi,purity,f_score\n";
  char buf[64];
  for (std::size_t i = 0; i < m; ++i) {
    RunConfig local = cfg;
    local.hp.bits = cfg.sweep_bits[i];
    local.out = (out_dir / ("bits" + std::to_string(cfg.sweep_bits[i]))).string();
    gmbl::write_outputs(prep, results[i], local, local.out);
    csv << cfg.sweep_bits[i];
    const auto& r = *results[i].report;
    for (double value : {r.acc, r.nmi, r.purity, r.f_score}) {
      std::snprintf(buf, sizeof buf, "%.17g", value);
      csv << ',' << buf;
    }
    csv << '\n';
  }
  nlohmann::json manifest;
  manifest["version"] = gmbl::version_string();
  manifest["config"] = cfg.to_json();
  std::ofstream mf(out_dir / "manifest.json");
  mf << manifest.dump(2) << '\n';

  nlohmann::json summary;
  summary["sweep"] = nlohmann::json::array();
  for (std::size_t i = 0; i < m; ++i) {
    auto row = gmbl::report_json(results[i], cfg);
    row["code_length"] = cfg.sweep_bits[i];
    summary["sweep"].push_back(row);
  }
  print_json(summary);
  return 0;
}

int cmd_synth(const RunConfig& cfg) {
  require_out(cfg);
  const auto ds = gmbl::make_synthetic(cfg.synth_views, cfg.synth_clusters,
                                       cfg.synth_per_cluster, cfg.synth_dims,
                                       cfg.synth_noise, cfg.seed);
  gmbl::save_dataset(ds, cfg.out,
                     cfg.format == "binary" ? gmbl::DatasetFormat::kBinary
                                            : gmbl::DatasetFormat::kCsv);
  nlohmann::json j;
  j["out"] = cfg.out;
  j["views"] = ds.n_views();
  j["samples"] = ds.n_samples();
  j["clusters"] = cfg.synth_clusters;
  print_json(j);
  return 0;
}

int cmd_eval(const RunConfig& cfg) {
  if (cfg.model.empty()) throw gmbl::ValidationError("eval requires --model");
  if (cfg.data.empty()) throw gmbl::ValidationError("eval requires --data");
  const auto loaded = gmbl::load_model(cfg.model);
  const auto ds = gmbl::load_dataset(cfg.data);
  if (ds.n_samples() != loaded.model.b.cols())
    throw gmbl::MismatchedSampleCount(
        "model holds " + std::to_string(loaded.model.b.cols()) + " codes, dataset has " +
        std::to_string(ds.n_samples()) + " samples");
  int k = cfg.clusters;
  if (k == 0) {
    if (!ds.has_labels())
      throw gmbl::ValidationError("dataset has no labels; pass the cluster count explicitly");
    k = ds.n_classes();
  }
  const auto assignment = gmbl::kmeans_codes(loaded.model.b, k, cfg.seed,
                                             cfg.kmeans_iters, cfg.kmeans_restarts);
  nlohmann::json j;
  if (ds.has_labels()) {
    const auto report = gmbl::evaluate(assignment.labels, ds.labels);
    j["acc"] = report.acc;
    j["nmi"] = report.nmi;
    j["purity"] = report.purity;
    j["f_score"] = report.f_score;
  }
  j["n_clusters"] = k;
  j["code_length"] = loaded.model.b.rows();
  j["inertia"] = assignment.inertia;
  j["seed"] = cfg.seed;
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    std::ofstream out(std::filesystem::path(cfg.out) / "report.json");
    if (!out)
      throw gmbl::ValidationError("cannot write report.json under " + cfg.out);
    out << j.dump(2) << '\n';
    nlohmann::json manifest;
    manifest["version"] = gmbl::version_string();
    manifest["config"] = cfg.to_json();
    std::ofstream mf(std::filesystem::path(cfg.out) / "manifest.json");
    mf << manifest.dump(2) << '\n';
  }
  print_json(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-regularized multi-view binary code learning"};
  app.require_subcommand(1);

  Collected c_fit, c_sweep, c_single, c_synth, c_eval;

  auto* fit_cmd = app.add_subcommand("fit", "learn codes on all views, cluster, score");
  add_config_opt(fit_cmd, c_fit);
  add_data_opts(fit_cmd, c_fit);
  add_pipeline_opts(fit_cmd, c_fit);
  add_run_opts(fit_cmd, c_fit);

  auto* sweep_cmd = app.add_subcommand("sweep", "fit across code lengths, write sweep.csv");
  add_config_opt(sweep_cmd, c_sweep);
  add_data_opts(sweep_cmd, c_sweep);
  add_pipeline_opts(sweep_cmd, c_sweep);
  add_run_opts(sweep_cmd, c_sweep);
  opt(sweep_cmd, c_sweep, "--sweep-bits", "sweep-bits", "comma-separated code lengths");
  opt(sweep_cmd, c_sweep, "--parallel", "parallel", "worker threads across code lengths");

  auto* single_cmd = app.add_subcommand("single-view", "fit on one view only");
  add_config_opt(single_cmd, c_single);
  add_data_opts(single_cmd, c_single);
  add_pipeline_opts(single_cmd, c_single);
  add_run_opts(single_cmd, c_single);
  opt(single_cmd, c_single, "--view", "view", "view index to fit on");

  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic dataset directory");
  add_config_opt(synth_cmd, c_synth);
  add_data_opts(synth_cmd, c_synth);
  opt(synth_cmd, c_synth, "--format", "format", "dataset layout: csv or binary");
  add_run_opts(synth_cmd, c_synth);

  auto* eval_cmd = app.add_subcommand("eval", "re-cluster a fitted model against labels");
  add_config_opt(eval_cmd, c_eval);
  opt(eval_cmd, c_eval, "--model", "model", "fitted model directory");
  opt(eval_cmd, c_eval, "--data", "data", "dataset directory with labels.csv");
  opt(eval_cmd, c_eval, "--clusters", "clusters", "cluster count (default: distinct labels)");
  opt(eval_cmd, c_eval, "--kmeans-restarts", "kmeans-restarts", "k-means restarts");
  opt(eval_cmd, c_eval, "--kmeans-iters", "kmeans-iters", "k-means iteration limit");
  add_run_opts(eval_cmd, c_eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(resolve(c_fit));
    if (sweep_cmd->parsed()) return cmd_sweep(resolve(c_sweep));
    if (single_cmd->parsed()) return cmd_single_view(resolve(c_single));
    if (synth_cmd->parsed()) return cmd_synth(resolve(c_synth));
    if (eval_cmd->parsed()) return cmd_eval(resolve(c_eval));
  } catch (const gmbl::ValidationError& e) {
    std::fprintf(stderr, "gmbl: validation error: %s\n", e.what());
    return 1;
  } catch (const gmbl::NumericalError& e) {
    std::fprintf(stderr, "gmbl: numerical error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gmbl: error: %s\n", e.what());
    return 2;
  }
  return 0;
}
