#pragma once

#include "gmbl/optimizer.hpp"

#include <Eigen/Dense>

#include <filesystem>

namespace gmbl {

/// Raw row-major little-endian float64 buffer, no header; the caller supplies
/// the shape (it is recorded in an adjacent JSON file by the writers here).
void save_matrix_f64(const Eigen::MatrixXd& m, const std::filesystem::path& file);
Eigen::MatrixXd load_matrix_f64(const std::filesystem::path& file, Eigen::Index rows,
                                Eigen::Index cols);

/// Directory layout:
///   model.bits  codes packed row-major, 8 per byte, LSB first, bit 1 <-> +1
///   model.json  shapes, hyperparameters, view weights, objective trace
///   h<v>.f64    per-view projection matrices
void save_model(const Model& model, const HyperParams& hp,
                const std::filesystem::path& dir);

struct LoadedModel {
  Model model;
  HyperParams hp;
};

LoadedModel load_model(const std::filesystem::path& dir);

}  // namespace gmbl
