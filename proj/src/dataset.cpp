#include "gmbl/dataset.hpp"

#include "gmbl/errors.hpp"
#include "gmbl/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace gmbl {

static_assert(std::endian::native == std::endian::little,
              "raw float64 files are little-endian");

namespace {

double parse_double(std::string_view token, const std::string& where) {
  // trim spaces and a stray \r from windows line endings
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() &&
         (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
    token.remove_suffix(1);
  if (token.empty()) throw ValidationError("empty value in " + where);
  double out = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ValidationError("cannot parse '" + std::string(token) + "' as a number in " + where);
  return out;
}

Eigen::MatrixXd read_csv_matrix(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string_view tok(line.data() + start,
                           (comma == std::string::npos ? line.size() : comma) - start);
      row.push_back(parse_double(tok, file.filename().string() + ":" + std::to_string(lineno)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ValidationError(file.string() + ": row " + std::to_string(lineno) + " has " +
                            std::to_string(row.size()) + " columns, expected " +
                            std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(file.string() + " is empty");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_csv_matrix(const Eigen::MatrixXd& m, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw ValidationError("cannot write " + file.string());
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw ValidationError("short write to " + file.string());
}

Eigen::MatrixXd read_f64_matrix(const fs::path& file, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + file.string());
  // stored row-major, Eigen is column-major by default
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double)) * rows * cols);
  if (in.gcount() != static_cast<std::streamsize>(sizeof(double)) * rows * cols)
    throw ValidationError(file.string() + " is shorter than shape.json promises");
  char extra;
  if (in.read(&extra, 1))
    throw ValidationError(file.string() + " is longer than shape.json promises");
  return m;
}

void write_f64_matrix(const Eigen::MatrixXd& m, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + file.string());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  out.write(reinterpret_cast<const char*>(rm.data()),
            static_cast<std::streamsize>(sizeof(double)) * rm.size());
  if (!out) throw ValidationError("short write to " + file.string());
}

std::vector<int> read_labels(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open " + file.string());
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int value = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw ValidationError(file.string() + ":" + std::to_string(lineno) +
                            ": cannot parse '" + line + "' as an integer label");
    if (value < 0)
      throw ValidationError(file.string() + ":" + std::to_string(lineno) +
                            ": labels must be non-negative");
    labels.push_back(value);
  }
  return labels;
}

// view files sorted by name so view ordering is stable across filesystems
std::vector<fs::path> list_view_files(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("view", 0) == 0 && entry.path().extension() == ext)
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int MultiViewDataset::n_classes() const {
  std::set<int> distinct(labels.begin(), labels.end());
  return static_cast<int>(distinct.size());
}

void validate_dataset(const MultiViewDataset& ds) {
  if (ds.views.empty()) throw MissingView("dataset has no views");
  const Eigen::Index n = ds.views.front().n_samples();
  for (const auto& v : ds.views) {
    if (v.dim() < 1 || v.n_samples() < 1)
      throw ValidationError("view " + std::to_string(v.view_id) + " is empty");
    if (v.n_samples() != n)
      throw MismatchedSampleCount("view " + std::to_string(v.view_id) + " has " +
                                  std::to_string(v.n_samples()) + " samples, expected " +
                                  std::to_string(n));
    if (!v.data.allFinite())
      throw NonFiniteEntry("view " + std::to_string(v.view_id) +
                           " contains NaN or infinite entries");
  }
  if (!ds.labels.empty() && static_cast<Eigen::Index>(ds.labels.size()) != n)
    throw LengthMismatch("got " + std::to_string(ds.labels.size()) + " labels for " +
                         std::to_string(n) + " samples");
}

MultiViewDataset load_dataset(const fs::path& dir, DatasetFormat format) {
  if (!fs::is_directory(dir)) throw ValidationError(dir.string() + " is not a directory");
  if (format == DatasetFormat::kAuto)
    format = fs::exists(dir / "shape.json") ? DatasetFormat::kBinary : DatasetFormat::kCsv;

  MultiViewDataset ds;
  if (format == DatasetFormat::kCsv) {
    auto files = list_view_files(dir, ".csv");
    for (const auto& file : files) {
      ViewMatrix v;
      v.view_id = static_cast<int>(ds.views.size());
      v.data = read_csv_matrix(file);
      ds.views.push_back(std::move(v));
    }
  } else {
    const fs::path shape_file = dir / "shape.json";
    std::ifstream in(shape_file);
    if (!in) throw MissingView(shape_file.string() + " not found");
    nlohmann::json shape;
    try {
      in >> shape;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(shape_file.string() + ": " + e.what());
    }
    if (!shape.contains("views") || !shape["views"].is_array())
      throw ValidationError(shape_file.string() + ": missing \"views\" array");
    for (const auto& entry : shape["views"]) {
      ViewMatrix v;
      v.view_id = static_cast<int>(ds.views.size());
      const auto file = dir / entry.at("file").get<std::string>();
      v.data = read_f64_matrix(file, entry.at("rows").get<Eigen::Index>(),
                               entry.at("cols").get<Eigen::Index>());
      ds.views.push_back(std::move(v));
    }
  }
  if (ds.views.empty())
    throw MissingView("no view files found in " + dir.string());

  if (fs::exists(dir / "labels.csv")) ds.labels = read_labels(dir / "labels.csv");
  validate_dataset(ds);
  return ds;
}

void save_dataset(const MultiViewDataset& ds, const fs::path& dir, DatasetFormat format) {
  validate_dataset(ds);
  if (format == DatasetFormat::kAuto) format = DatasetFormat::kCsv;
  fs::create_directories(dir);
  if (format == DatasetFormat::kCsv) {
    for (std::size_t v = 0; v < ds.views.size(); ++v)
      write_csv_matrix(ds.views[v].data, dir / ("view" + std::to_string(v) + ".csv"));
  } else {
    nlohmann::json shape;
    shape["views"] = nlohmann::json::array();
    for (std::size_t v = 0; v < ds.views.size(); ++v) {
      const std::string file = "view" + std::to_string(v) + ".f64";
      write_f64_matrix(ds.views[v].data, dir / file);
      shape["views"].push_back({{"file", file},
                                {"rows", ds.views[v].dim()},
                                {"cols", ds.views[v].n_samples()}});
    }
    std::ofstream out(dir / "shape.json");
    out << shape.dump(2) << '\n';
    if (!out) throw ValidationError("cannot write " + (dir / "shape.json").string());
  }
  if (ds.has_labels()) {
    std::ofstream out(dir / "labels.csv");
    for (int label : ds.labels) out << label << '\n';
    if (!out) throw ValidationError("cannot write " + (dir / "labels.csv").string());
  }
}

MultiViewDataset normalize_views(const MultiViewDataset& ds) {
  validate_dataset(ds);
  MultiViewDataset out = ds;
  const double n = static_cast<double>(ds.n_samples());
  for (auto& v : out.views) {
    for (Eigen::Index d = 0; d < v.dim(); ++d) {
      auto row = v.data.row(d);
      const double mean = row.mean();
      row.array() -= mean;
      const double var = row.squaredNorm() / n;
      if (var > 0) row /= std::sqrt(var);
    }
  }
  return out;
}

std::vector<Eigen::Index> anchor_indices(Eigen::Index n, Eigen::Index s, std::uint64_t seed) {
  if (s < 1) throw ValidationError("anchor count must be at least 1");
  if (s > n)
    throw AnchorCountExceedsSamples("requested " + std::to_string(s) + " anchors from " +
                                    std::to_string(n) + " samples");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  auto eng = rng::engine(seed, rng::kAnchors);
  std::shuffle(idx.begin(), idx.end(), eng);
  idx.resize(static_cast<std::size_t>(s));
  return idx;
}

AnchorSet sample_anchors(const ViewMatrix& view, Eigen::Index s, std::uint64_t seed) {
  AnchorSet anchors;
  anchors.indices = anchor_indices(view.n_samples(), s, seed);
  anchors.points.resize(view.dim(), s);
  for (Eigen::Index j = 0; j < s; ++j)
    anchors.points.col(j) = view.data.col(anchors.indices[static_cast<std::size_t>(j)]);
  return anchors;
}

MultiViewDataset make_synthetic(int n_views, int n_clusters, int per_cluster,
                                const std::vector<int>& dims, double noise,
                                std::uint64_t seed) {
  if (n_views < 1) throw ValidationError("need at least one view");
  if (n_clusters < 1 || per_cluster < 1)
    throw ValidationError("cluster count and cluster size must be at least 1");
  if (static_cast<int>(dims.size()) != n_views)
    throw ValidationError("got " + std::to_string(dims.size()) + " dims for " +
                          std::to_string(n_views) + " views");
  if (noise < 0) throw ValidationError("noise must be non-negative");

  const Eigen::Index n = static_cast<Eigen::Index>(n_clusters) * per_cluster;
  MultiViewDataset ds;
  ds.labels.resize(static_cast<std::size_t>(n));
  for (int c = 0; c < n_clusters; ++c)
    for (int i = 0; i < per_cluster; ++i)
      ds.labels[static_cast<std::size_t>(c) * per_cluster + i] = c;

  for (int v = 0; v < n_views; ++v) {
    const Eigen::Index d = dims[static_cast<std::size_t>(v)];
    if (d < 1) throw ValidationError("view dimensions must be at least 1");
    auto eng = std::mt19937_64(
        rng::derive(rng::derive(seed, rng::kSynthetic), static_cast<std::uint64_t>(v)));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd centers(d, n_clusters);
    for (Eigen::Index j = 0; j < centers.cols(); ++j)
      for (Eigen::Index i = 0; i < d; ++i) centers(i, j) = normal(eng);
    ViewMatrix view;
    view.view_id = v;
    view.data.resize(d, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const int c = ds.labels[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < d; ++i)
        view.data(i, j) = centers(i, c) + noise * normal(eng);
    }
    ds.views.push_back(std::move(view));
  }
  return ds;
}

}  // namespace gmbl
