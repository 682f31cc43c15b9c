#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uos/metrics.hpp"
#include "uos/model.hpp"
#include "uos/rng.hpp"

#include <algorithm>
#include <numeric>

using namespace uos;
using namespace uos::metrics;

namespace {

Matrix random_orthonormal(RngStream& g, Index n, Index d) {
  Matrix G(n, d);
  for (Index j = 0; j < d; ++j) G.col(j) = g.gaussian_vector(n);
  Eigen::HouseholderQR<Matrix> qr(G);
  return qr.householderQ() * Matrix::Identity(n, d);
}

}  // namespace

TEST_CASE("clustering error: identity, permutation, single flip") {
  std::vector<int> truth = {1, 1, 1, 2, 2, 2, 3, 3, 3, 3};
  CHECK(clustering_error(truth, truth) == 0.0);

  // Relabeling the predictions is free.
  std::vector<int> permuted;
  for (const int g : truth) permuted.push_back(g == 1 ? 3 : (g == 3 ? 1 : 2));
  CHECK(clustering_error(permuted, truth) == 0.0);

  auto flipped = permuted;
  flipped[0] = 2;  // one point moves after alignment
  CHECK(clustering_error(flipped, truth) == doctest::Approx(0.1));

  CHECK_THROWS_AS(clustering_error({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("clustering error is invariant under relabeling both sides") {
  RngStream g(404);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> truth(40), pred(40);
    for (auto& v : truth) v = 1 + static_cast<int>(g.next_below(4));
    for (auto& v : pred) v = 1 + static_cast<int>(g.next_below(4));
    const double base = clustering_error(pred, truth);

    std::vector<int> perm = {1, 2, 3, 4};
    for (Index t = 3; t > 0; --t)
      std::swap(perm[static_cast<std::size_t>(t)],
                perm[g.next_below(static_cast<std::uint64_t>(t + 1))]);
    auto relab = [&](const std::vector<int>& v) {
      std::vector<int> out;
      for (const int x : v) out.push_back(perm[static_cast<std::size_t>(x - 1)]);
      return out;
    };
    CHECK(clustering_error(relab(pred), truth) == doctest::Approx(base));
    CHECK(clustering_error(pred, relab(truth)) == doctest::Approx(base));
  }
}

TEST_CASE("hungarian matches brute force on small random costs") {
  RngStream g(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(g.next_below(4));
    Matrix cost(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) cost(i, j) = g.next_unit();
    const auto assign = hungarian_min_cost(cost);
    double got = 0.0;
    for (Index i = 0; i < n; ++i)
      got += cost(i, assign[static_cast<std::size_t>(i)]);

    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    double best = 1e300;
    do {
      double acc = 0.0;
      for (Index i = 0; i < n; ++i)
        acc += cost(i, perm[static_cast<std::size_t>(i)]);
      best = std::min(best, acc);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("completion error basics") {
  RngStream g(3);
  Matrix T(6, 8);
  for (Index j = 0; j < 8; ++j) T.col(j) = g.gaussian_vector(6);
  CHECK(completion_error(T, T) == 0.0);
  CHECK(completion_error(Matrix::Zero(6, 8), T) == doctest::Approx(1.0));

  Matrix E(6, 8);
  for (Index j = 0; j < 8; ++j) E.col(j) = g.gaussian_vector(6);
  E *= 0.05 * T.norm() / E.norm();
  CHECK(completion_error(T + E, T) == doctest::Approx(0.05).epsilon(1e-12));

  CHECK_THROWS_AS(completion_error(T, Matrix::Zero(6, 8)),
                  std::invalid_argument);
  CHECK_THROWS_AS(completion_error(T, Matrix::Ones(5, 8)),
                  std::invalid_argument);
}

TEST_CASE("completion error difference bound on random triples") {
  RngStream g(12);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix T(5, 7), X(5, 7), Y(5, 7);
    for (Index j = 0; j < 7; ++j) {
      T.col(j) = g.gaussian_vector(5);
      X.col(j) = g.gaussian_vector(5);
      Y.col(j) = g.gaussian_vector(5);
    }
    const double lhs =
        std::abs(completion_error(X, T) - completion_error(Y, T));
    CHECK(lhs <= (X - Y).norm() / T.norm() + 1e-12);
  }
}

TEST_CASE("subspace error: identical, orthogonal, principal-angle oracle") {
  RngStream g(21);
  Matrix A = random_orthonormal(g, 10, 3);
  CHECK(subspace_error(A, A) == doctest::Approx(0.0).epsilon(1e-10));

  // Disjoint coordinate blocks span orthogonal subspaces.
  Matrix B = Matrix::Zero(10, 3);
  Matrix C = Matrix::Zero(10, 3);
  B.block(0, 0, 3, 3) = Matrix::Identity(3, 3);
  C.block(5, 0, 3, 3) = Matrix::Identity(3, 3);
  CHECK(subspace_error(B, C) == doctest::Approx(std::asin(1.0)));

  // Largest principal angle from the SVD of A^T B.
  for (int trial = 0; trial < 10; ++trial) {
    Matrix P = random_orthonormal(g, 50, 3);
    Matrix Q = random_orthonormal(g, 50, 3);
    Eigen::JacobiSVD<Matrix> svd(P.transpose() * Q);
    const double smin = svd.singularValues()[2];
    const double oracle = std::acos(std::min(1.0, std::max(-1.0, smin)));
    CHECK(subspace_error(P, Q) == doctest::Approx(oracle).epsilon(1e-9));
    // Symmetry and rotation invariance.
    CHECK(std::abs(subspace_error(P, Q) - subspace_error(Q, P)) < 1e-9);
    Matrix R = random_orthonormal(g, 3, 3);
    CHECK(subspace_error(P, (Q * R).eval()) ==
          doctest::Approx(subspace_error(P, Q)).epsilon(1e-9));
  }

  Matrix bad = Matrix::Ones(10, 2);
  CHECK_THROWS_WITH_AS(subspace_error(bad, A.leftCols(2)),
                       doctest::Contains("first"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(subspace_error(A.leftCols(2), bad),
                       doctest::Contains("second"), std::invalid_argument);
}
