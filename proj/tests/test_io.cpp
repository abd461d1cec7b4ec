#include "gmbl/errors.hpp"
#include "gmbl/model_io.hpp"
#include "gmbl/run_config.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

namespace fs = std::filesystem;
using namespace gmbl;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gmbl_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Model make_model(Eigen::Index r, Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> normal;
  Model m;
  m.b.resize(r, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m.b(i, j) = coin(eng) ? 1.0 : -1.0;
  m.h.push_back(Eigen::MatrixXd::NullaryExpr(r, 4, [&] { return normal(eng); }));
  m.h.push_back(Eigen::MatrixXd::NullaryExpr(r, 7, [&] { return normal(eng); }));
  m.a.resize(2);
  m.a << 0.25, 0.75;
  m.objective_trace = {10.5, 4.25, 4.2421875};
  return m;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("f64 matrices round trip and are stored row-major") {
  const auto dir = fresh_dir("f64");
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  save_matrix_f64(m, dir / "m.f64");
  CHECK(fs::file_size(dir / "m.f64") == 4 * sizeof(double));

  std::ifstream in(dir / "m.f64", std::ios::binary);
  double raw[4];
  in.read(reinterpret_cast<char*>(raw), sizeof raw);
  CHECK(raw[0] == 1.0);
  CHECK(raw[1] == 2.0);  // row-major: row 0 first
  CHECK(raw[2] == 3.0);
  CHECK(raw[3] == 4.0);

  CHECK(load_matrix_f64(dir / "m.f64", 2, 2) == m);
  CHECK_THROWS_AS(load_matrix_f64(dir / "m.f64", 3, 2), ValidationError);
}

TEST_CASE("code packing is row-major, LSB first, bit 1 for +1") {
  const auto dir = fresh_dir("bits");
  Model m;
  m.b.resize(1, 8);
  m.b << 1, -1, -1, 1, 1, -1, 1, -1;  // bits 10011010 -> 0x59 LSB-first
  m.h = {};
  m.a = Eigen::VectorXd::Ones(0);
  m.objective_trace = {0.0};
  HyperParams hp;
  hp.bits = 1;
  save_model(m, hp, dir);
  std::ifstream in(dir / "model.bits", std::ios::binary);
  char byte = 0;
  in.read(&byte, 1);
  CHECK(static_cast<unsigned char>(byte) == 0x59);
  CHECK(fs::file_size(dir / "model.bits") == 1);
}

TEST_CASE("model round trip preserves every field exactly") {
  const auto dir = fresh_dir("model_rt");
  const Model m = make_model(5, 13, 3);  // 65 bits: exercises the ragged tail byte
  HyperParams hp;
  hp.bits = 5;
  hp.delta = 0.25;
  hp.lambda = 0.5;
  hp.beta = 0.125;
  hp.mu = 3e-4;
  hp.rho = 7e-5;
  hp.c = 2.5;
  hp.eta = 12.0;
  hp.tol = 1e-5;
  hp.max_iters = 33;
  hp.inner_b_steps = 2;
  hp.decorrelation_centered = true;
  hp.refresh_graph_each_iter = true;
  save_model(m, hp, dir);
  CHECK(fs::file_size(dir / "model.bits") == (5 * 13 + 7) / 8);

  const auto back = load_model(dir);
  CHECK(back.model.b == m.b);
  CHECK(back.model.a == m.a);
  CHECK(back.model.objective_trace == m.objective_trace);
  REQUIRE(back.model.h.size() == 2);
  CHECK(back.model.h[0] == m.h[0]);
  CHECK(back.model.h[1] == m.h[1]);
  CHECK(back.hp.bits == hp.bits);
  CHECK(back.hp.delta == hp.delta);
  CHECK(back.hp.lambda == hp.lambda);
  CHECK(back.hp.beta == hp.beta);
  CHECK(back.hp.mu == hp.mu);
  CHECK(back.hp.rho == hp.rho);
  CHECK(back.hp.c == hp.c);
  CHECK(back.hp.eta == hp.eta);
  CHECK(back.hp.tol == hp.tol);
  CHECK(back.hp.max_iters == hp.max_iters);
  CHECK(back.hp.inner_b_steps == hp.inner_b_steps);
  CHECK(back.hp.decorrelation_centered == hp.decorrelation_centered);
  CHECK(back.hp.refresh_graph_each_iter == hp.refresh_graph_each_iter);
}

TEST_CASE("packing rejects non-sign codes") {
  const auto dir = fresh_dir("badcodes");
  Model m = make_model(2, 4, 9);
  m.b(0, 0) = 0.5;
  CHECK_THROWS_AS(save_model(m, HyperParams{}, dir), ValidationError);
}

TEST_CASE("config keys cover the whole run and reject junk") {
  RunConfig cfg;
  cfg.set("bits", "64");
  CHECK(cfg.hp.bits == 64);
  cfg.set("delta", "5e-2");
  CHECK(cfg.hp.delta == 5e-2);
  cfg.set("seed", "12345");
  CHECK(cfg.seed == 12345);
  cfg.set("sweep-bits", "4,8,16");
  CHECK(cfg.sweep_bits == std::vector<Eigen::Index>{4, 8, 16});
  cfg.set("synth-dims", "3,4,5");
  CHECK(cfg.synth_dims == std::vector<int>{3, 4, 5});
  cfg.set("decorrelation-centered", "true");
  CHECK(cfg.hp.decorrelation_centered);
  cfg.set("decorrelation-centered", "off");
  CHECK(!cfg.hp.decorrelation_centered);

  CHECK_THROWS_WITH_AS(cfg.set("bogus-key", "1"),
                       doctest::Contains("bogus-key"), ValidationError);
  CHECK_THROWS_AS(cfg.set("bits", "not-a-number"), ValidationError);
  CHECK_THROWS_AS(cfg.set("sweep-bits", ""), ValidationError);
  CHECK_THROWS_AS(cfg.set("format", "xml"), ValidationError);
}

TEST_CASE("flat config files parse with comments and blank lines") {
  const auto dir = fresh_dir("cfgtext");
  std::ofstream(dir / "run.conf") << "# comment\n"
                                  << "bits = 16\n"
                                  << "\n"
                                  << "seed=99\n"
                                  << "synth = true\n";
  RunConfig cfg;
  cfg.load_file(dir / "run.conf");
  CHECK(cfg.hp.bits == 16);
  CHECK(cfg.seed == 99);
  CHECK(cfg.synth);

  std::ofstream(dir / "broken.conf") << "bits 16\n";
  RunConfig broken;
  CHECK_THROWS_AS(broken.load_file(dir / "broken.conf"), ValidationError);
}

TEST_CASE("a manifest round trips through load_file exactly") {
  const auto dir = fresh_dir("manifest");
  RunConfig cfg;
  cfg.set("synth", "true");
  cfg.set("bits", "24");
  cfg.set("delta", "0.012345678901234567");
  cfg.set("eta", "0.3");
  cfg.set("seed", "17");
  cfg.set("sweep-bits", "8,32");
  cfg.set("out", "somewhere");

  nlohmann::json manifest;
  manifest["version"] = version_string();
  manifest["config"] = cfg.to_json();
  std::ofstream(dir / "manifest.json") << manifest.dump(2);

  RunConfig back;
  back.load_file(dir / "manifest.json");
  CHECK(back.to_json().dump() == cfg.to_json().dump());
}

TEST_CASE("later assignments win, mirroring flag precedence") {
  const auto dir = fresh_dir("precedence");
  std::ofstream(dir / "base.conf") << "bits = 8\nseed = 1\n";
  RunConfig cfg;
  cfg.load_file(dir / "base.conf");
  cfg.set("bits", "128");  // flag applied after the file
  CHECK(cfg.hp.bits == 128);
  CHECK(cfg.seed == 1);
}

TEST_CASE("config validation catches contradictions") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);  // no data source
  cfg.synth = true;
  CHECK_NOTHROW(cfg.validate());
  cfg.data = "somewhere";
  CHECK_THROWS_AS(cfg.validate(), ValidationError);  // both sources
  cfg.data.clear();
  cfg.parallel = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

}  // TEST_SUITE
