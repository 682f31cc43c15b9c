#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uos/certify.hpp"
#include "uos/metrics.hpp"
#include "uos/rng.hpp"
#include "uos/selfrep.hpp"
#include "uos/spectral.hpp"

#include <filesystem>
#include <numeric>
#include <fstream>

using namespace uos;
using namespace uos::selfrep;
using model::CaseTag;
using model::GenerationMode;

namespace {

// Two orthogonal 1-D subspaces (coordinate axes), points_per copies each,
// with distinct positive scales so no two columns are identical.
model::ObservedDataset axis_dataset(Index points_per) {
  const Index N = 2 * points_per;
  Matrix X = Matrix::Zero(4, N);
  for (Index j = 0; j < points_per; ++j) {
    X(0, j) = 1.0 + 0.1 * static_cast<double>(j);
    X(1, points_per + j) = 1.0 + 0.1 * static_cast<double>(j);
  }
  const auto pattern = model::sample_case1(4, N, 1.0);
  std::vector<int> labels;
  labels.insert(labels.end(), static_cast<std::size_t>(points_per), 1);
  labels.insert(labels.end(), static_cast<std::size_t>(points_per), 2);
  return model::zero_fill(X, pattern, labels);
}

}  // namespace

TEST_CASE("ssc-lp on orthogonal subspaces keeps support in-subspace") {
  const auto ds = axis_dataset(4);
  const auto cm = ssc_lp_coefficients(ds);
  CHECK(cm.failure_count() == 0);
  CHECK(cm.C.diagonal().cwiseAbs().maxCoeff() == 0.0);
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j) {
      const bool same = (i < 4) == (j < 4);
      if (!same) CHECK(std::abs(cm.C(j, i)) < 1e-10);
    }
  // Each column must actually be represented.
  for (Index i = 0; i < 8; ++i) CHECK(cm.C.col(i).cwiseAbs().maxCoeff() > 1e-8);
}

TEST_CASE("ssc-lp statuses are honest in the underdetermined regime") {
  // Mask smaller than d with a dictionary that cannot reach the target.
  Matrix X = Matrix::Zero(3, 3);
  X(0, 0) = 1.0;  // column 0 observed only at row 0
  X(1, 1) = 1.0;
  X(2, 2) = 1.0;
  model::ObservationPattern pat;
  pat.ambient_dim = 3;
  pat.masks = {{0}, {1}, {2}};
  pat.case_tag = CaseTag::RandomPerColumn;
  const auto ds = model::zero_fill(X, pat);
  const auto cm = ssc_lp_coefficients(ds);
  // Every dictionary is all-zero on the observed row of its target.
  CHECK(cm.failure_count() == 3);
  for (Index i = 0; i < 3; ++i) {
    CHECK(cm.column_status[static_cast<std::size_t>(i)] !=
          l1core::SolveStatus::Optimal);
    CHECK(cm.C.col(i).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("ssc-lp column-order equivariance on generic data") {
  const auto gen = model::generate_ensemble(
      12, 2, 2, 8, GenerationMode::OrthonormalUnitSphere, 5);
  const Index N = 16;
  const auto pattern = model::sample_case3(12, N, 0.7, 6);
  const auto ds = model::zero_fill(gen.full, pattern);
  const auto base = ssc_lp_coefficients(ds);

  RngStream g(50);
  std::vector<Index> perm(static_cast<std::size_t>(N));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index t = N - 1; t > 0; --t)
    std::swap(perm[static_cast<std::size_t>(t)],
              perm[g.next_below(static_cast<std::uint64_t>(t + 1))]);

  Matrix Xp(12, N);
  model::ObservationPattern pp;
  pp.ambient_dim = 12;
  pp.case_tag = pattern.case_tag;
  pp.masks.resize(static_cast<std::size_t>(N));
  for (Index t = 0; t < N; ++t) {
    Xp.col(t) = gen.full.col(perm[static_cast<std::size_t>(t)]);
    pp.masks[static_cast<std::size_t>(t)] =
        pattern.masks[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])];
  }
  const auto permuted = ssc_lp_coefficients(model::zero_fill(Xp, pp));

  for (Index a = 0; a < N; ++a)
    for (Index b = 0; b < N; ++b)
      CHECK(permuted.C(a, b) ==
            doctest::Approx(base.C(perm[static_cast<std::size_t>(a)],
                                   perm[static_cast<std::size_t>(b)]))
                .epsilon(1e-7));
}

TEST_CASE("ssc-lp at full observation obeys certified instances") {
  // Certified points of the same-support condition at full observation must
  // have no cross-subspace support.
  const auto gen = model::generate_ensemble(
      15, 2, 3, 10, GenerationMode::OrthonormalUnitSphere, 77);
  const Index N = 30;
  const auto pattern = model::sample_case1(15, N, 1.0);
  const auto ds = model::zero_fill(gen.full, pattern, gen.ensemble.labels());
  const auto cm = ssc_lp_coefficients(ds);
  REQUIRE(cm.failure_count() == 0);

  Index certified = 0;
  for (Index gi = 0; gi < N; ++gi) {
    const Index ell = gen.ensemble.subspace_of(gi);
    const Index local = gi - gen.ensemble.column_offset(ell);
    const auto entry =
        certify::check_case1(gen.ensemble, pattern.masks[0], local, ell);
    if (entry.verdict != certify::Verdict::Certified) continue;
    ++certified;
    for (Index j = 0; j < N; ++j)
      if (gen.ensemble.subspace_of(j) != ell)
        CHECK(std::abs(cm.C(j, gi)) <= 1e-6);
  }
  CHECK(certified > 0);  // the instance is easy enough to certify some points
}

TEST_CASE("ssc-ewzf duplicate columns attract mass") {
  Matrix X(4, 4);
  X.col(0) = Vector{{1.0, 2.0, 0.5, -1.0}};
  X.col(1) = X.col(0);  // duplicate
  X.col(2) = Vector{{-2.0, 0.3, 1.0, 0.8}};
  X.col(3) = Vector{{0.1, -1.2, 2.2, 0.4}};
  const auto pattern = model::sample_case1(4, 4, 1.0);
  const auto ds = model::zero_fill(X, pattern);
  // gmax is the duplicate pair's inner product ||x0||^2 = 6.25, so this
  // alpha puts lambda below the duplicate's threshold but far above every
  // cross correlation.
  const auto cm = ssc_ewzf_coefficients(ds, 30.0);
  CHECK(cm.failure_count() == 0);
  // Column 0's representation concentrates on its duplicate.
  const double dup = cm.C(1, 0);
  CHECK(dup == doctest::Approx(1.0 - 4.8 / 6.25).epsilon(1e-6));
  CHECK(std::abs(cm.C(2, 0)) < 1e-9);
  CHECK(std::abs(cm.C(3, 0)) < 1e-9);
}

TEST_CASE("ssc-ewzf full shrinkage zeroes the matrix") {
  RngStream g(17);
  Matrix X(5, 6);
  for (Index j = 0; j < 6; ++j) X.col(j) = g.gaussian_vector(5);
  const auto ds = model::zero_fill(X, model::sample_case1(5, 6, 1.0));
  // Every per-column shrinkage threshold is at most gmax, so lambda = 2*gmax
  // (alpha = 2*gmax^2) zeroes everything.
  const Matrix gram = X.transpose() * X;
  double gmax = 0.0;
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j)
      if (i != j) gmax = std::max(gmax, std::abs(gram(i, j)));
  const double alpha = 2.0 * gmax * gmax;
  const auto cm = ssc_ewzf_coefficients(ds, alpha);
  CHECK(cm.failure_count() == 0);
  CHECK(cm.C.cwiseAbs().maxCoeff() == 0.0);
  CHECK(cm.lambda_reg == doctest::Approx(2.0 * gmax).epsilon(1e-12));
}

TEST_CASE("ssc-ewzf rejects an all-zero gram") {
  Matrix X = Matrix::Zero(3, 3);
  X(0, 0) = 1.0;
  X(1, 1) = 1.0;
  X(2, 2) = 1.0;
  model::ObservationPattern pat;
  pat.ambient_dim = 3;
  pat.masks = {{0}, {1}, {2}};
  pat.case_tag = CaseTag::RandomPerColumn;
  // Orthogonal columns: all off-diagonal Gram entries are zero.
  const auto ds = model::zero_fill(X, pat);
  CHECK_THROWS_AS(ssc_ewzf_coefficients(ds, 7.34), std::invalid_argument);
}

TEST_CASE("tsc affinity structure") {
  const auto gen = model::generate_ensemble(
      10, 2, 2, 20, GenerationMode::OrthonormalUnitSphere, 9);
  const auto ds =
      model::zero_fill(gen.full, model::sample_case3(10, 40, 0.6, 10));
  const auto aff = tsc_affinity(ds, 20);
  const Index q = aff.q;
  CHECK(q == std::llround(std::sqrt(20.0 * std::log(20.0))));
  const Matrix& W = aff.W;
  CHECK((W - W.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(W.minCoeff() >= 0.0);
  CHECK(W.diagonal().cwiseAbs().maxCoeff() == 0.0);
  for (Index i = 0; i < 40; ++i) {
    Index nnz = 0;
    for (Index j = 0; j < 40; ++j)
      if (W(i, j) > 0) ++nnz;
    CHECK(nnz <= 2 * q);
  }
}

TEST_CASE("tsc: orthogonal subspaces have zero cross affinities") {
  const auto ds = axis_dataset(6);
  const auto aff = tsc_affinity(ds, 6);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 6; j < 12; ++j) CHECK(aff.W(i, j) == 0.0);
}

TEST_CASE("tsc q-threshold matches the paper-scale value") {
  // q = sqrt(150 log 150) ~ 27.4 -> 27 neighbors kept per column.
  const double q = std::sqrt(150.0 * std::log(150.0));
  CHECK(q == doctest::Approx(27.4).epsilon(0.01));
  const auto gen = model::generate_ensemble(
      8, 1, 1, 150, GenerationMode::OrthonormalUnitSphere, 4);
  const auto ds = model::zero_fill(gen.full, model::sample_case1(8, 150, 1.0));
  CHECK(tsc_affinity(ds, 150).q == 27);
}

TEST_CASE("affinity_from_coefficients is |C| + |C|^T entrywise") {
  RngStream g(33);
  CoefficientMatrix cm;
  cm.C = Matrix(5, 5);
  for (Index j = 0; j < 5; ++j) cm.C.col(j) = g.gaussian_vector(5);
  cm.C.diagonal().setZero();
  const Matrix W = affinity_from_coefficients(cm);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j)
      CHECK(W(i, j) == std::abs(cm.C(i, j)) + std::abs(cm.C(j, i)));

  CoefficientMatrix zero;
  zero.C = Matrix::Zero(3, 3);
  CHECK(affinity_from_coefficients(zero).cwiseAbs().maxCoeff() == 0.0);

  CoefficientMatrix upper;
  upper.C = Matrix::Zero(3, 3);
  upper.C(0, 1) = 2.0;
  upper.C(0, 2) = 1.0;
  const Matrix Wu = affinity_from_coefficients(upper);
  CHECK(Wu(1, 0) == 2.0);
  CHECK(Wu(0, 1) == 2.0);
}

TEST_CASE("coefficients export writes csv and metadata") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "uos_test_coeffs";
  fs::remove_all(dir);
  const auto ds = axis_dataset(3);
  const auto cm = ssc_lp_coefficients(ds);
  write_coefficients(dir, cm);
  CHECK(fs::exists(dir / "coeffs.csv"));
  CHECK(fs::exists(dir / "coeffs_meta.json"));
  std::ifstream meta(dir / "coeffs_meta.json");
  std::string text((std::istreambuf_iterator<char>(meta)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("ssc-lp") != std::string::npos);
  CHECK(text.find("column_status") != std::string::npos);
  fs::remove_all(dir);
}
