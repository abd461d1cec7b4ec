#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gmbl {

/// One feature representation of the corpus: a dense dim x N matrix whose
/// columns are samples. Column j of every view describes the same sample j.
struct ViewMatrix {
  Eigen::MatrixXd data;
  int view_id = 0;

  Eigen::Index dim() const { return data.rows(); }
  Eigen::Index n_samples() const { return data.cols(); }
};

/// Aligned views over the same samples, plus optional ground-truth labels.
struct MultiViewDataset {
  std::vector<ViewMatrix> views;
  std::vector<int> labels;  // empty when no ground truth is available

  Eigen::Index n_samples() const { return views.empty() ? 0 : views.front().n_samples(); }
  std::size_t n_views() const { return views.size(); }
  bool has_labels() const { return !labels.empty(); }
  int n_classes() const;
};

/// Throws if views disagree on sample count, contain non-finite entries,
/// are empty, or labels do not line up with the samples.
void validate_dataset(const MultiViewDataset& ds);

enum class DatasetFormat { kAuto, kCsv, kBinary };

/// Loads view0.csv, view1.csv, ... (rows = feature dims, columns = samples)
/// or view<i>.f64 raw buffers described by shape.json, plus optional
/// labels.csv with one integer per line. kAuto prefers the binary form when
/// shape.json is present.
MultiViewDataset load_dataset(const std::filesystem::path& dir,
                              DatasetFormat format = DatasetFormat::kAuto);

/// Writes the dataset in the layout load_dataset() reads back.
void save_dataset(const MultiViewDataset& ds, const std::filesystem::path& dir,
                  DatasetFormat format = DatasetFormat::kCsv);

/// Per-view, per-dimension z-score using the population standard deviation.
/// Constant dimensions are centered only, so they cannot produce NaN.
MultiViewDataset normalize_views(const MultiViewDataset& ds);

/// Anchor points of one view: a dim x s matrix of columns copied from the
/// view, plus the sample indices they came from.
struct AnchorSet {
  Eigen::MatrixXd points;
  std::vector<Eigen::Index> indices;
};

/// Picks s distinct sample indices uniformly without replacement.
/// Identical (n, s, seed) always yields the identical permuted prefix.
std::vector<Eigen::Index> anchor_indices(Eigen::Index n, Eigen::Index s, std::uint64_t seed);

AnchorSet sample_anchors(const ViewMatrix& view, Eigen::Index s, std::uint64_t seed);

/// Gaussian blob generator for smoke tests and benchmarks. Per view, cluster
/// centers are drawn from a unit normal in that view's dimension and samples
/// add isotropic noise with the given standard deviation. Samples are laid
/// out cluster by cluster; labels run 0..n_clusters-1.
MultiViewDataset make_synthetic(int n_views, int n_clusters, int per_cluster,
                                const std::vector<int>& dims, double noise,
                                std::uint64_t seed);

}  // namespace gmbl
