#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uos/metrics.hpp"
#include "uos/rng.hpp"
#include "uos/spectral.hpp"

#include <functional>
#include <numeric>

using namespace uos;
using namespace uos::spectral;

namespace {

// Block-diagonal affinity with the given block sizes and constant in-block
// weight.
Matrix block_affinity(const std::vector<Index>& sizes, double weight) {
  const Index N = std::accumulate(sizes.begin(), sizes.end(), Index{0});
  Matrix W = Matrix::Zero(N, N);
  Index off = 0;
  for (const Index s : sizes) {
    W.block(off, off, s, s).setConstant(weight);
    off += s;
  }
  W.diagonal().setZero();
  return W;
}

std::vector<int> block_labels(const std::vector<Index>& sizes) {
  std::vector<int> out;
  int lab = 1;
  for (const Index s : sizes) {
    out.insert(out.end(), static_cast<std::size_t>(s), lab);
    ++lab;
  }
  return out;
}

// Union-find count of connected components over nonzero edges.
Index component_count(const Matrix& W) {
  const Index N = W.rows();
  std::vector<Index> parent(static_cast<std::size_t>(N));
  std::iota(parent.begin(), parent.end(), Index{0});
  std::function<Index(Index)> find = [&](Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (Index i = 0; i < N; ++i)
    for (Index j = i + 1; j < N; ++j)
      if (W(i, j) > 0) parent[static_cast<std::size_t>(find(i))] = find(j);
  Index count = 0;
  for (Index i = 0; i < N; ++i)
    if (find(i) == i) ++count;
  return count;
}

}  // namespace

TEST_CASE("three disconnected blocks are recovered exactly") {
  const std::vector<Index> sizes = {8, 11, 6};
  const Matrix W = block_affinity(sizes, 0.7);
  const auto a = spectral_cluster(W, 3, 42);
  CHECK(metrics::clustering_error(a.labels, block_labels(sizes)) == 0.0);
  CHECK_FALSE(a.flagged());
}

TEST_CASE("zero affinity returns a flagged assignment without crashing") {
  const auto a = spectral_cluster(Matrix::Zero(10, 10), 2, 1);
  CHECK(a.degenerate);
  CHECK(a.labels.size() == 10);
  for (const int lab : a.labels) CHECK(lab == 1);
}

TEST_CASE("weak cross-block noise does not change the partition") {
  const std::vector<Index> sizes = {10, 10};
  Matrix W = block_affinity(sizes, 1.0);
  const auto clean = spectral_cluster(W, 2, 5);
  Matrix noisy = W;
  for (Index i = 0; i < 10; ++i)
    for (Index j = 10; j < 20; ++j) {
      noisy(i, j) = 1e-6;
      noisy(j, i) = 1e-6;
    }
  const auto perturbed = spectral_cluster(noisy, 2, 5);
  CHECK(metrics::clustering_error(perturbed.labels, clean.labels) == 0.0);
}

TEST_CASE("laplacian eigenvalues live in [0, 2]") {
  RngStream g(9);
  Matrix W = Matrix::Zero(20, 20);
  for (Index i = 0; i < 20; ++i)
    for (Index j = i + 1; j < 20; ++j)
      if (g.next_unit() < 0.3) {
        const double v = g.next_unit();
        W(i, j) = v;
        W(j, i) = v;
      }
  const auto a = spectral_cluster(W, 4, 3);
  // Full spectrum check through a fresh decomposition.
  Vector deg = W.rowwise().sum();
  Vector dis(20);
  for (Index i = 0; i < 20; ++i)
    dis[i] = deg[i] > 0 ? 1.0 / std::sqrt(deg[i]) : 0.0;
  Matrix lap = -(dis.asDiagonal() * W * dis.asDiagonal());
  lap.diagonal().array() += 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(lap);
  CHECK(eig.eigenvalues().minCoeff() > -1e-8);
  CHECK(eig.eigenvalues().maxCoeff() < 2.0 + 1e-8);
  CHECK(a.laplacian_eigenvalues.size() == 5);
}

TEST_CASE("near-zero eigenvalue count equals the number of components") {
  RngStream g(13);
  for (int trial = 0; trial < 8; ++trial) {
    const std::vector<Index> sizes = {
        2 + static_cast<Index>(g.next_below(4)),
        2 + static_cast<Index>(g.next_below(4)),
        2 + static_cast<Index>(g.next_below(4))};
    Matrix W = block_affinity(sizes, 0.5 + g.next_unit());
    const Index N = W.rows();
    const auto a = spectral_cluster(W, 3, 99);
    // Count near-zero eigenvalues over the full spectrum.
    Vector deg = W.rowwise().sum();
    Vector dis(N);
    for (Index i = 0; i < N; ++i)
      dis[i] = deg[i] > 0 ? 1.0 / std::sqrt(deg[i]) : 0.0;
    Matrix lap = -(dis.asDiagonal() * W * dis.asDiagonal());
    lap.diagonal().array() += 1.0;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(lap);
    Index zeros = 0;
    for (Index i = 0; i < N; ++i)
      if (eig.eigenvalues()[i] < 1e-10) ++zeros;
    CHECK(zeros == component_count(W));
    CHECK(zeros == 3);
    CHECK(a.labels.size() == static_cast<std::size_t>(N));
  }
}

TEST_CASE("identical inputs give identical labels") {
  const std::vector<Index> sizes = {7, 9};
  Matrix W = block_affinity(sizes, 0.9);
  RngStream g(31);
  for (Index i = 0; i < 7; ++i)
    for (Index j = 7; j < 16; ++j) {
      const double v = 0.05 * g.next_unit();
      W(i, j) = v;
      W(j, i) = v;
    }
  const auto a = spectral_cluster(W, 2, 77, 10);
  const auto b = spectral_cluster(W, 2, 77, 10);
  CHECK(a.labels == b.labels);
  CHECK(a.inertia == b.inertia);
}

TEST_CASE("parameter errors") {
  Matrix W = Matrix::Zero(4, 4);
  CHECK_THROWS_AS(spectral_cluster(W, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(spectral_cluster(W, 0, 1), std::invalid_argument);
  Matrix asym = Matrix::Zero(4, 4);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(spectral_cluster(asym, 2, 1), std::invalid_argument);
}
