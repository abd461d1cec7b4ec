#include "gmbl/model_io.hpp"

#include "gmbl/errors.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <fstream>
#include <vector>

namespace fs = std::filesystem;

namespace gmbl {

static_assert(std::endian::native == std::endian::little,
              "raw float64 files are little-endian");

void save_matrix_f64(const Eigen::MatrixXd& m, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + file.string());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  out.write(reinterpret_cast<const char*>(rm.data()),
            static_cast<std::streamsize>(sizeof(double)) * rm.size());
  if (!out) throw ValidationError("short write to " + file.string());
}

Eigen::MatrixXd load_matrix_f64(const fs::path& file, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + file.string());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
  in.read(reinterpret_cast<char*>(rm.data()),
          static_cast<std::streamsize>(sizeof(double)) * rows * cols);
  if (in.gcount() != static_cast<std::streamsize>(sizeof(double)) * rows * cols)
    throw ValidationError(file.string() + " is shorter than its recorded shape");
  return rm;
}

namespace {

std::vector<std::uint8_t> pack_codes(const Eigen::MatrixXd& b) {
  const Eigen::Index total = b.rows() * b.cols();
  std::vector<std::uint8_t> bytes((total + 7) / 8, 0);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j, ++t) {
      const double v = b(i, j);
      if (v != 1.0 && v != -1.0)
        throw ValidationError("codes must be exactly +1 or -1 to be packed");
      if (v > 0) bytes[t / 8] |= static_cast<std::uint8_t>(1u << (t % 8));
    }
  return bytes;
}

Eigen::MatrixXd unpack_codes(const std::vector<std::uint8_t>& bytes, Eigen::Index rows,
                             Eigen::Index cols) {
  if (static_cast<Eigen::Index>(bytes.size()) != (rows * cols + 7) / 8)
    throw ValidationError("packed code buffer does not match the recorded shape");
  Eigen::MatrixXd b(rows, cols);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j, ++t)
      b(i, j) = (bytes[t / 8] >> (t % 8)) & 1u ? 1.0 : -1.0;
  return b;
}

nlohmann::json hyperparams_json(const HyperParams& hp) {
  return {{"bits", hp.bits},
          {"delta", hp.delta},
          {"lambda", hp.lambda},
          {"beta", hp.beta},
          {"mu", hp.mu},
          {"rho", hp.rho},
          {"c", hp.c},
          {"eta", hp.eta},
          {"tol", hp.tol},
          {"max_iters", hp.max_iters},
          {"inner_b_steps", hp.inner_b_steps},
          {"decorrelation_centered", hp.decorrelation_centered},
          {"refresh_graph_each_iter", hp.refresh_graph_each_iter}};
}

HyperParams hyperparams_from_json(const nlohmann::json& j) {
  HyperParams hp;
  hp.bits = j.at("bits").get<Eigen::Index>();
  hp.delta = j.at("delta").get<double>();
  hp.lambda = j.at("lambda").get<double>();
  hp.beta = j.at("beta").get<double>();
  hp.mu = j.at("mu").get<double>();
  hp.rho = j.at("rho").get<double>();
  hp.c = j.at("c").get<double>();
  hp.eta = j.at("eta").get<double>();
  hp.tol = j.at("tol").get<double>();
  hp.max_iters = j.at("max_iters").get<int>();
  hp.inner_b_steps = j.at("inner_b_steps").get<int>();
  hp.decorrelation_centered = j.at("decorrelation_centered").get<bool>();
  hp.refresh_graph_each_iter = j.at("refresh_graph_each_iter").get<bool>();
  return hp;
}

}  // namespace

void save_model(const Model& model, const HyperParams& hp, const fs::path& dir) {
  fs::create_directories(dir);
  const auto bytes = pack_codes(model.b);
  {
    std::ofstream out(dir / "model.bits", std::ios::binary);
    if (!out) throw ValidationError("cannot write " + (dir / "model.bits").string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ValidationError("short write to " + (dir / "model.bits").string());
  }
  nlohmann::json meta;
  meta["format"] = "gmbl-model-v1";
  meta["bits"] = model.b.rows();
  meta["samples"] = model.b.cols();
  meta["views"] = model.h.size();
  meta["a"] = std::vector<double>(model.a.data(), model.a.data() + model.a.size());
  meta["objective_trace"] = model.objective_trace;
  meta["hyperparameters"] = hyperparams_json(hp);
  auto shapes = nlohmann::json::array();
  for (std::size_t v = 0; v < model.h.size(); ++v) {
    shapes.push_back({model.h[v].rows(), model.h[v].cols()});
    save_matrix_f64(model.h[v], dir / ("h" + std::to_string(v) + ".f64"));
  }
  meta["h_shapes"] = shapes;
  std::ofstream out(dir / "model.json");
  if (!out) throw ValidationError("cannot write " + (dir / "model.json").string());
  out << meta.dump(2) << '\n';
  if (!out) throw ValidationError("short write to " + (dir / "model.json").string());
}

LoadedModel load_model(const fs::path& dir) {
  std::ifstream in(dir / "model.json");
  if (!in) throw ValidationError("cannot open " + (dir / "model.json").string());
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError((dir / "model.json").string() + ": " + e.what());
  }
  if (meta.value("format", "") != "gmbl-model-v1")
    throw ValidationError((dir / "model.json").string() + ": unknown model format");

  LoadedModel loaded;
  loaded.hp = hyperparams_from_json(meta.at("hyperparameters"));
  const auto rows = meta.at("bits").get<Eigen::Index>();
  const auto cols = meta.at("samples").get<Eigen::Index>();

  std::ifstream bits(dir / "model.bits", std::ios::binary);
  if (!bits) throw ValidationError("cannot open " + (dir / "model.bits").string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(bits)),
                                  std::istreambuf_iterator<char>());
  loaded.model.b = unpack_codes(bytes, rows, cols);

  const auto& a = meta.at("a");
  loaded.model.a.resize(static_cast<Eigen::Index>(a.size()));
  for (Eigen::Index v = 0; v < loaded.model.a.size(); ++v)
    loaded.model.a(v) = a[static_cast<std::size_t>(v)].get<double>();
  loaded.model.objective_trace = meta.at("objective_trace").get<std::vector<double>>();

  const auto& shapes = meta.at("h_shapes");
  for (std::size_t v = 0; v < shapes.size(); ++v)
    loaded.model.h.push_back(load_matrix_f64(dir / ("h" + std::to_string(v) + ".f64"),
                                             shapes[v][0].get<Eigen::Index>(),
                                             shapes[v][1].get<Eigen::Index>()));
  return loaded;
}

}  // namespace gmbl
