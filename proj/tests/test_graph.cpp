#include "gmbl/errors.hpp"
#include "gmbl/graph.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace gmbl;

namespace {

EmbeddedView random_embedding(Eigen::Index s, Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  EmbeddedView ev;
  ev.g.resize(s, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < s; ++i) ev.g(i, j) = uni(eng);
  return ev;
}

EmbeddedView line_embedding(std::initializer_list<double> xs) {
  EmbeddedView ev;
  ev.g.resize(1, static_cast<Eigen::Index>(xs.size()));
  Eigen::Index j = 0;
  for (double x : xs) ev.g(0, j++) = x;
  return ev;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("nearest neighbors on a line") {
  const auto ev = line_embedding({0.0, 0.1, 1.0, 1.1});
  const auto nn = find_neighbors(ev, 1);
  CHECK(nn.neighbors(0, 0) == 1);
  CHECK(nn.neighbors(0, 1) == 0);
  CHECK(nn.neighbors(0, 2) == 3);
  CHECK(nn.neighbors(0, 3) == 2);

  const auto nn2 = find_neighbors(ev, 2);
  CHECK(nn2.neighbors(0, 0) == 1);  // nearest first
  CHECK(nn2.neighbors(1, 0) == 2);
}

TEST_CASE("self is excluded and ties break toward the smaller index") {
  const auto ev = line_embedding({0.5, 0.5, 0.5, 0.5});
  const auto nn = find_neighbors(ev, 2);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index t = 0; t < 2; ++t) CHECK(nn.neighbors(t, i) != i);
  CHECK(nn.neighbors(0, 2) == 0);
  CHECK(nn.neighbors(1, 2) == 1);
  CHECK(nn.neighbors(0, 0) == 1);
  CHECK(nn.neighbors(1, 0) == 2);
}

TEST_CASE("neighbor count bounds are enforced") {
  const auto ev = random_embedding(2, 5, 1);
  CHECK_THROWS_AS(find_neighbors(ev, 0), NeighborCountTooLarge);
  CHECK_THROWS_AS(find_neighbors(ev, 5), NeighborCountTooLarge);
  CHECK_NOTHROW(find_neighbors(ev, 4));
}

TEST_CASE("reconstruction weights sum to one on their neighbor support") {
  const auto ev = random_embedding(4, 30, 5);
  const auto nn = find_neighbors(ev, 6);
  const auto w = lle_weights(ev, nn, 1e-3);
  for (Eigen::Index i = 0; i < 30; ++i) {
    double sum = 0;
    int nnz = 0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(w.w, i); it; ++it) {
      sum += it.value();
      ++nnz;
      bool in_support = false;
      for (Eigen::Index t = 0; t < 6; ++t)
        if (nn.neighbors(t, i) == it.col()) in_support = true;
      CHECK(in_support);
    }
    CHECK(nnz == 6);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("weights agree with the constrained least squares oracle") {
  std::mt19937_64 eng(2024);
  std::uniform_int_distribution<Eigen::Index> pick_n(5, 12), pick_s(2, 6), pick_g(1, 3);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = pick_n(eng), s = pick_s(eng), g = pick_g(eng);
    const auto ev = random_embedding(s, n, eng());
    const auto nn = find_neighbors(ev, g);
    const auto w = lle_weights(ev, nn, 1e-3);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::MatrixXd u(s, g);
      for (Eigen::Index t = 0; t < g; ++t) u.col(t) = ev.g.col(nn.neighbors(t, i));
      const Eigen::VectorXd expect = oracle::lle_weights_kkt(ev.g.col(i), u, 1e-3);
      for (Eigen::Index t = 0; t < g; ++t)
        CHECK(w.w.coeff(i, nn.neighbors(t, i)) ==
              doctest::Approx(expect(t)).epsilon(1e-8));
    }
  }
}

TEST_CASE("an exactly singular local Gram with no ridge throws") {
  // neighbors at equal offsets make the difference Gram rank deficient
  const auto ev = line_embedding({0.5, 0.0, 1.0, 0.3});
  const auto nn = find_neighbors(ev, 2);
  CHECK_THROWS_AS(lle_weights(ev, nn, 0.0), SingularLocalGram);
  CHECK_NOTHROW(lle_weights(ev, nn, 1e-3));
}

TEST_CASE("per-view similarity is exactly symmetric") {
  const auto ev = random_embedding(3, 25, 8);
  const auto s = per_view_similarity(lle_weights(ev, find_neighbors(ev, 4), 1e-3));
  const SpMat st = SpMat(s.transpose());
  CHECK((Eigen::MatrixXd(s) - Eigen::MatrixXd(st)).norm() == 0.0);
}

TEST_CASE("fusion validates the weight simplex") {
  const auto ev = random_embedding(3, 15, 2);
  const auto s = per_view_similarity(lle_weights(ev, find_neighbors(ev, 3), 1e-3));
  const std::vector<SpMat> views = {s, s};
  Eigen::VectorXd bad(2);
  bad << 0.7, 0.7;
  CHECK_THROWS_AS(fuse_and_laplacian(views, bad), WeightsNotSimplex);
  bad << 1.5, -0.5;
  CHECK_THROWS_AS(fuse_and_laplacian(views, bad), WeightsNotSimplex);
  Eigen::VectorXd wrong_len = Eigen::VectorXd::Constant(3, 1.0 / 3);
  CHECK_THROWS_AS(fuse_and_laplacian(views, wrong_len), LengthMismatch);
}

TEST_CASE("the Laplacian satisfies L = D - S with zero row sums") {
  const auto ev0 = random_embedding(3, 20, 31);
  const auto ev1 = random_embedding(4, 20, 32);
  const std::vector<SpMat> views = {
      per_view_similarity(lle_weights(ev0, find_neighbors(ev0, 4), 1e-3)),
      per_view_similarity(lle_weights(ev1, find_neighbors(ev1, 4), 1e-3))};
  Eigen::VectorXd a(2);
  a << 0.3, 0.7;
  const auto graph = fuse_and_laplacian(views, a);

  const Eigen::MatrixXd s = Eigen::MatrixXd(graph.s);
  const Eigen::MatrixXd l = Eigen::MatrixXd(graph.laplacian);
  CHECK((l - (Eigen::MatrixXd(graph.degree.asDiagonal()) - s)).norm() <
        1e-14 * std::max(1.0, s.norm()));
  const Eigen::VectorXd row_sums = l * Eigen::VectorXd::Ones(20);
  CHECK(row_sums.cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s - s.transpose()).norm() == 0.0);
  CHECK((l - l.transpose()).norm() == 0.0);

  // the fused affinity is the stated convex combination
  const Eigen::MatrixXd expect =
      0.3 * Eigen::MatrixXd(views[0]) + 0.7 * Eigen::MatrixXd(views[1]);
  CHECK((s - expect).norm() < 1e-15 * std::max(1.0, expect.norm()));
}

TEST_CASE("constant codes incur no graph penalty") {
  const auto ev = random_embedding(3, 12, 4);
  const std::vector<SpMat> views = {
      per_view_similarity(lle_weights(ev, find_neighbors(ev, 3), 1e-3))};
  const auto graph = fuse_and_laplacian(views, Eigen::VectorXd::Ones(1));
  const Eigen::MatrixXd b = Eigen::MatrixXd::Ones(4, 12);
  CHECK((b * graph.laplacian).cwiseProduct(b).sum() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

}  // TEST_SUITE
