#include "gmbl/run_config.hpp"

#include "gmbl/errors.hpp"
#include "gmbl/version.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace gmbl {

namespace {

std::string trim(std::string s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const std::string v = trim(value);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ValidationError("config key '" + key + "': cannot parse '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("config key '" + key + "': cannot parse '" + value + "' as a bool");
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ValidationError("config key '" + key + "': empty list");
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

std::string json_value_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += json_value_to_string(v[i]);
    }
    return s;
  }
  return v.dump();  // numbers round-trip exactly through the shortest form
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "data") data = trim(value);
  else if (key == "model") model = trim(value);
  else if (key == "synth") synth = parse_bool(key, value);
  else if (key == "synth-views") synth_views = parse_number<int>(key, value);
  else if (key == "synth-clusters") synth_clusters = parse_number<int>(key, value);
  else if (key == "synth-per-cluster") synth_per_cluster = parse_number<int>(key, value);
  else if (key == "synth-dims") synth_dims = parse_list<int>(key, value);
  else if (key == "synth-noise") synth_noise = parse_number<double>(key, value);
  else if (key == "format") {
    format = trim(value);
    if (format != "csv" && format != "binary")
      throw ValidationError("config key 'format': expected csv or binary");
  }
  else if (key == "anchors") anchors = parse_number<Eigen::Index>(key, value);
  else if (key == "kernel-width") kernel_width = parse_number<double>(key, value);
  else if (key == "neighbors") neighbors = parse_number<Eigen::Index>(key, value);
  else if (key == "lle-reg") lle_reg = parse_number<double>(key, value);
  else if (key == "bits") hp.bits = parse_number<Eigen::Index>(key, value);
  else if (key == "delta") hp.delta = parse_number<double>(key, value);
  else if (key == "lambda") hp.lambda = parse_number<double>(key, value);
  else if (key == "beta") hp.beta = parse_number<double>(key, value);
  else if (key == "mu") hp.mu = parse_number<double>(key, value);
  else if (key == "rho") hp.rho = parse_number<double>(key, value);
  else if (key == "c") hp.c = parse_number<double>(key, value);
  else if (key == "eta") hp.eta = parse_number<double>(key, value);
  else if (key == "tol") hp.tol = parse_number<double>(key, value);
  else if (key == "max-iters") hp.max_iters = parse_number<int>(key, value);
  else if (key == "inner-b-steps") hp.inner_b_steps = parse_number<int>(key, value);
  else if (key == "decorrelation-centered") hp.decorrelation_centered = parse_bool(key, value);
  else if (key == "refresh-graph") hp.refresh_graph_each_iter = parse_bool(key, value);
  else if (key == "clusters") clusters = parse_number<int>(key, value);
  else if (key == "kmeans-restarts") kmeans_restarts = parse_number<int>(key, value);
  else if (key == "kmeans-iters") kmeans_iters = parse_number<int>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") out = trim(value);
  else if (key == "parallel") parallel = parse_number<int>(key, value);
  else if (key == "view") view = parse_number<int>(key, value);
  else if (key == "sweep-bits") sweep_bits = parse_list<Eigen::Index>(key, value);
  else if (key == "dump-embeddings") dump_embeddings = parse_bool(key, value);
  else if (key == "dump-graph") dump_graph = parse_bool(key, value);
  else throw ValidationError("unknown config key '" + key + "'");
}

void RunConfig::load_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open config file " + file.string());
  if (file.extension() == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(file.string() + ": " + e.what());
    }
    const nlohmann::json& cfg = j.contains("config") ? j["config"] : j;
    if (!cfg.is_object())
      throw ValidationError(file.string() + ": expected a JSON object of config keys");
    for (const auto& [key, value] : cfg.items()) set(key, json_value_to_string(value));
    return;
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ValidationError(file.string() + ":" + std::to_string(lineno) +
                            ": expected key = value");
    set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["data"] = data;
  j["model"] = model;
  j["synth"] = synth;
  j["synth-views"] = synth_views;
  j["synth-clusters"] = synth_clusters;
  j["synth-per-cluster"] = synth_per_cluster;
  j["synth-dims"] = synth_dims;
  j["synth-noise"] = synth_noise;
  j["format"] = format;
  j["anchors"] = anchors;
  j["kernel-width"] = kernel_width;
  j["neighbors"] = neighbors;
  j["lle-reg"] = lle_reg;
  j["bits"] = hp.bits;
  j["delta"] = hp.delta;
  j["lambda"] = hp.lambda;
  j["beta"] = hp.beta;
  j["mu"] = hp.mu;
  j["rho"] = hp.rho;
  j["c"] = hp.c;
  j["eta"] = hp.eta;
  j["tol"] = hp.tol;
  j["max-iters"] = hp.max_iters;
  j["inner-b-steps"] = hp.inner_b_steps;
  j["decorrelation-centered"] = hp.decorrelation_centered;
  j["refresh-graph"] = hp.refresh_graph_each_iter;
  j["clusters"] = clusters;
  j["kmeans-restarts"] = kmeans_restarts;
  j["kmeans-iters"] = kmeans_iters;
  j["seed"] = seed;
  j["out"] = out;
  j["parallel"] = parallel;
  j["view"] = view;
  j["sweep-bits"] = sweep_bits;
  j["dump-embeddings"] = dump_embeddings;
  j["dump-graph"] = dump_graph;
  return j;
}

void RunConfig::validate() const {
  if (data.empty() && !synth)
    throw ValidationError("no data source: pass a dataset directory or enable synth");
  if (!data.empty() && synth)
    throw ValidationError("pass either a dataset directory or synth, not both");
  if (anchors < 0) throw ValidationError("anchors must be positive (or 0 for auto)");
  if (neighbors < 1) throw ValidationError("neighbors must be at least 1");
  if (lle_reg < 0) throw ValidationError("lle-reg must be non-negative");
  if (clusters < 0) throw ValidationError("clusters must be positive (or 0 for auto)");
  if (kmeans_restarts < 1 || kmeans_iters < 1)
    throw ValidationError("k-means restarts and iterations must be at least 1");
  if (parallel < 1) throw ValidationError("parallel must be at least 1");
}

const char* version_string() { return kVersion; }

}  // namespace gmbl
