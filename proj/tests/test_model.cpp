#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uos/dataset_io.hpp"
#include "uos/model.hpp"
#include "uos/rng.hpp"

#include <filesystem>
#include <fstream>
#include <map>

using namespace uos;
using namespace uos::model;

TEST_CASE("generate_ensemble invariants hold in both modes") {
  for (const auto mode : {GenerationMode::OrthonormalUnitSphere,
                          GenerationMode::GaussianProduct}) {
    const auto gen = generate_ensemble(10, 2, 2, 20, mode, 42);
    gen.ensemble.validate();
    CHECK(gen.full.rows() == 10);
    CHECK(gen.full.cols() == 40);
  }
}

TEST_CASE("orthonormal mode: columns lie in their subspace span") {
  const auto gen =
      generate_ensemble(10, 2, 2, 20, GenerationMode::OrthonormalUnitSphere, 7);
  for (Index l = 0; l < 2; ++l) {
    const auto& U = gen.ensemble.bases[static_cast<std::size_t>(l)];
    for (Index j = 0; j < 20; ++j) {
      const Vector x = gen.full.col(l * 20 + j);
      const double residual = (x - U * (U.transpose() * x)).norm();
      CHECK(residual < 1e-10);
    }
  }
}

TEST_CASE("gaussian-product mode matches the advertised scale and rank") {
  const auto gen =
      generate_ensemble(50, 3, 3, 150, GenerationMode::GaussianProduct, 3);
  CHECK(gen.full.rows() == 50);
  CHECK(gen.full.cols() == 450);
  Eigen::JacobiSVD<Matrix> svd(gen.full);
  // rank <= L * d = 9
  CHECK(svd.singularValues()[9] < 1e-8 * svd.singularValues()[0]);
  // The record keeps a consistent orthonormal basis: each column stays in
  // the span of its subspace basis.
  const auto& U = gen.ensemble.bases[0];
  for (Index j = 0; j < 5; ++j) {
    const Vector x = gen.full.col(j);
    CHECK((x - U * (U.transpose() * x)).norm() < 1e-8 * (1.0 + x.norm()));
  }
}

TEST_CASE("full-dimensional single-point ensemble is a unit vector") {
  const auto gen =
      generate_ensemble(5, 5, 1, 1, GenerationMode::OrthonormalUnitSphere, 5);
  CHECK(gen.full.cols() == 1);
  CHECK(gen.full.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generation is reproducible bit for bit") {
  const auto a =
      generate_ensemble(12, 3, 2, 9, GenerationMode::GaussianProduct, 99);
  const auto b =
      generate_ensemble(12, 3, 2, 9, GenerationMode::GaussianProduct, 99);
  CHECK((a.full - b.full).cwiseAbs().maxCoeff() == 0.0);
  const auto c =
      generate_ensemble(12, 3, 2, 9, GenerationMode::GaussianProduct, 100);
  CHECK((a.full - c.full).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("invalid dimensions are rejected") {
  CHECK_THROWS_AS(
      generate_ensemble(3, 5, 1, 1, GenerationMode::GaussianProduct, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      generate_ensemble(3, 1, 0, 1, GenerationMode::GaussianProduct, 1),
      std::invalid_argument);
}

TEST_CASE("case-1 masks cover the first ceil(p*n) coordinates") {
  const auto pat = sample_case1(50, 450, 0.1);
  CHECK(pat.case_tag == CaseTag::SameSupport);
  for (const auto& m : pat.masks) {
    REQUIRE(m.size() == 5);
    for (Index t = 0; t < 5; ++t) CHECK(m[static_cast<std::size_t>(t)] == t);
  }

  // ceil arithmetic: 0.08 * 50 must stay 4 despite the float representation.
  CHECK(sample_case1(50, 3, 0.08).masks[0].size() == 4);
  CHECK(sample_case1(7, 3, 0.5).masks[0].size() == 4);  // ceil(3.5)
  CHECK(sample_case1(50, 3, 1.0).masks[0].size() == 50);
  CHECK_THROWS_AS(sample_case1(50, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_case1(50, 3, 1.5), std::invalid_argument);
}

TEST_CASE("case-3 masks have round(p*n) entries and are seed-deterministic") {
  const auto pat = sample_case3(50, 450, 0.38, 11);
  CHECK(pat.case_tag == CaseTag::RandomPerColumn);
  for (const auto& m : pat.masks) CHECK(m.size() == 19);

  const auto again = sample_case3(50, 450, 0.38, 11);
  CHECK(pat.masks == again.masks);
  const auto other = sample_case3(50, 450, 0.38, 12);
  CHECK(pat.masks != other.masks);

  const auto full = sample_case3(50, 10, 1.0, 1);
  for (const auto& m : full.masks) CHECK(m.size() == 50);
}

TEST_CASE("case-2 masks have exactly d entries") {
  const auto pat = sample_case2(50, 450, 3, 17);
  CHECK(pat.case_tag == CaseTag::ExactlyD);
  for (const auto& m : pat.masks) CHECK(m.size() == 3);

  const auto forced = sample_case2(3, 5, 3, 17);
  for (const auto& m : forced.masks) {
    REQUIRE(m.size() == 3);
    CHECK(m == IndexList({0, 1, 2}));
  }
  CHECK_THROWS_AS(sample_case2(3, 5, 4, 17), std::invalid_argument);
}

TEST_CASE("case-2 subsets are approximately uniform over pairs") {
  // n=6, d=2: 15 possible pairs; chi-square with 14 dof at the 99.9% level.
  const Index N = 3000;
  const auto pat = sample_case2(6, N, 2, 123);
  std::map<std::pair<Index, Index>, Index> counts;
  for (const auto& m : pat.masks) ++counts[{m[0], m[1]}];
  CHECK(counts.size() == 15);
  const double expected = static_cast<double>(N) / 15.0;
  double chi2 = 0.0;
  for (const auto& [pair, c] : counts) {
    const double dev = static_cast<double>(c) - expected;
    chi2 += dev * dev / expected;
  }
  CHECK(chi2 < 36.12);
}

TEST_CASE("zero_fill matches the mask entrywise") {
  Matrix full = Matrix::Ones(3, 2);
  ObservationPattern pat;
  pat.ambient_dim = 3;
  pat.masks = {{0}, {1, 2}};
  pat.case_tag = CaseTag::RandomPerColumn;
  const auto ds = zero_fill(full, pat);
  CHECK(ds.zero_filled.col(0).isApprox(Vector({{1.0, 0.0, 0.0}})));
  CHECK(ds.zero_filled.col(1).isApprox(Vector({{0.0, 1.0, 1.0}})));

  // Random instance: complement of the mask is exactly zero, mask entries
  // copy the input.
  RngStream g(5);
  Matrix rnd(5, 4);
  for (Index j = 0; j < 4; ++j) rnd.col(j) = g.gaussian_vector(5);
  const auto rpat = sample_case3(5, 4, 0.6, 9);
  const auto rds = zero_fill(rnd, rpat);
  for (Index c = 0; c < 4; ++c) {
    std::vector<bool> in_mask(5, false);
    for (const Index k : rpat.masks[static_cast<std::size_t>(c)])
      in_mask[static_cast<std::size_t>(k)] = true;
    for (Index r = 0; r < 5; ++r) {
      if (in_mask[static_cast<std::size_t>(r)])
        CHECK(rds.zero_filled(r, c) == rnd(r, c));
      else
        CHECK(rds.zero_filled(r, c) == 0.0);
    }
  }

  // Idempotence: re-filling the zero-filled matrix changes nothing.
  const auto twice = zero_fill(rds.zero_filled, rpat);
  CHECK((twice.zero_filled - rds.zero_filled).cwiseAbs().maxCoeff() == 0.0);

  // Full masks reproduce the matrix.
  const auto full_pat = sample_case1(5, 4, 1.0);
  CHECK((zero_fill(rnd, full_pat).zero_filled - rnd).cwiseAbs().maxCoeff() ==
        0.0);

  Matrix wrong(4, 2);
  CHECK_THROWS_AS(zero_fill(wrong, pat), std::invalid_argument);
}

TEST_CASE("dataset directory round-trips and rejects shape mismatches") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / "uos_test_dataset";
  fs::remove_all(dir);

  const auto gen =
      generate_ensemble(8, 2, 2, 6, GenerationMode::OrthonormalUnitSphere, 21);
  const auto pat = sample_case3(8, 12, 0.5, 22);
  const auto labels = gen.ensemble.labels();
  const auto ds = zero_fill(gen.full, pat, labels);

  DatasetMeta meta;
  meta.n = 8;
  meta.N = 12;
  meta.L = 2;
  meta.d = 2;
  meta.points_per_subspace = {6, 6};
  meta.case_tag = pat.case_tag;
  meta.seed = 21;
  meta.mode = GenerationMode::OrthonormalUnitSphere;
  meta.labels = labels;
  write_dataset(dir, ds, meta);

  const auto loaded = read_dataset(dir);
  CHECK(loaded.meta.n == 8);
  CHECK(loaded.meta.seed == 21);
  CHECK(loaded.data.pattern.masks == pat.masks);
  CHECK((loaded.data.zero_filled - ds.zero_filled).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK(*loaded.data.true_labels == labels);
  CHECK_FALSE(loaded.data.full_matrix.has_value());

  // Truncating mask.csv must be rejected.
  {
    std::ifstream in(dir / "mask.csv");
    std::string all((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    in.close();
    std::ofstream out(dir / "mask.csv");
    out << all.substr(0, all.find('\n') + 1);
  }
  CHECK_THROWS(read_dataset(dir));
  fs::remove_all(dir);
}
