#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uos/bench.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace uos;
using namespace uos::bench;

namespace {

ExperimentConfig tiny_config() {
  // Self-expression under zero filling needs more points per subspace than
  // observed coordinates, hence the small ambient dimension.
  ExperimentConfig cfg;
  cfg.n = 10;
  cfg.d = 2;
  cfg.L = 2;
  cfg.points_per_subspace = 20;
  cfg.mode = model::GenerationMode::GaussianProduct;
  cfg.sampling_case = 3;
  cfg.p_grid = {0.5, 0.8};
  cfg.trials = 2;
  cfg.master_seed = 4242;
  cfg.normalize_columns = true;
  cfg.svt.max_iter = 200;
  cfg.kmeans_restarts = 8;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config json round-trips and rejects unknown keys") {
  const auto cfg = tiny_config();
  const auto text = config_to_json_text(cfg);
  const auto back = config_from_json_text(text);
  CHECK(back.n == cfg.n);
  CHECK(back.p_grid == cfg.p_grid);
  CHECK(back.algorithms == cfg.algorithms);
  CHECK(back.master_seed == cfg.master_seed);

  CHECK_THROWS_AS(config_from_json_text("{\"nn\": 3}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"p_grid\": [0.0]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"p_grid\": [0.5], \"trials\": 0}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("not json"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"svt\": {\"bogus\": 1}}"),
                  std::invalid_argument);
}

TEST_CASE("sweep rows land in the fixed schema and sorted order") {
  auto cfg = tiny_config();
  cfg.algorithms = {selfrep::Algorithm::SscLp, selfrep::Algorithm::Tsc};
  const auto result = run_sweep(cfg);
  CHECK(result.rows.size() == 2 * 2 * 2);  // p-grid x trials x algorithms

  const std::string csv = results_csv(result.rows);
  std::istringstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header ==
        "case,p,trial,algorithm,clustering_error,completion_error,"
        "subspace_error_max_rad,status,seed");
  std::string prev, line;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
  }
  CHECK(rows == result.rows.size());

  for (std::size_t t = 1; t < result.rows.size(); ++t) {
    const auto& a = result.rows[t - 1];
    const auto& b = result.rows[t];
    const bool ordered =
        a.p < b.p || (a.p == b.p && a.trial < b.trial) ||
        (a.p == b.p && a.trial == b.trial &&
         std::string(selfrep::to_string(a.algorithm)) <
             std::string(selfrep::to_string(b.algorithm)));
    CHECK(ordered);
  }

  // Sanity at this desk scale: dense sampling clusters far better than
  // chance and better than the sparse grid point.
  const double dense = result.mean_metric(0.8, selfrep::Algorithm::SscLp,
                                          Metric::ClusteringError);
  const double sparse = result.mean_metric(0.5, selfrep::Algorithm::SscLp,
                                           Metric::ClusteringError);
  CHECK(dense < 0.15);
  CHECK(dense < sparse);
}

TEST_CASE("sweep is byte-identical across worker counts") {
  namespace fs = std::filesystem;
  auto cfg = tiny_config();
  cfg.algorithms = {selfrep::Algorithm::SscLp};
  const fs::path dir1 = fs::temp_directory_path() / "uos_sweep_t1";
  const fs::path dir2 = fs::temp_directory_path() / "uos_sweep_t2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);

  setenv("UOS_THREADS", "1", 1);
  cfg.output_dir = dir1.string();
  run_sweep(cfg);
  setenv("UOS_THREADS", "2", 1);
  cfg.output_dir = dir2.string();
  run_sweep(cfg);
  unsetenv("UOS_THREADS");

  CHECK(slurp(dir1 / "results.csv") == slurp(dir2 / "results.csv"));
  CHECK(slurp(dir1 / "summary.csv") == slurp(dir2 / "summary.csv"));
  CHECK(fs::exists(dir1 / "thresholds.csv"));
  CHECK(fs::exists(dir1 / "fig_clustering.dat"));
  CHECK(fs::exists(dir1 / "fig_completion.dat"));
  CHECK(fs::exists(dir1 / "fig_subspace.dat"));
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("threshold extraction walks the grid in order") {
  SweepResult result;
  result.config = tiny_config();
  result.config.p_grid = {0.2, 0.4, 0.6};
  result.config.trials = 2;
  auto push = [&](double p, Index trial, double err) {
    SweepRow row;
    row.p = p;
    row.trial = trial;
    row.algorithm = selfrep::Algorithm::SscLp;
    row.clustering_error = err;
    result.rows.push_back(row);
  };
  push(0.2, 0, 0.5);
  push(0.2, 1, 0.4);
  push(0.4, 0, 0.0);
  push(0.4, 1, 0.004);  // mean 0.002, above the cut
  push(0.6, 0, 0.0);
  push(0.6, 1, 1e-6);
  const auto est = result.threshold(selfrep::Algorithm::SscLp,
                                    Metric::ClusteringError, 1e-3, 50);
  REQUIRE(est.threshold.has_value());
  CHECK(*est.threshold == 0.6);
  CHECK(result.mean_metric(0.4, selfrep::Algorithm::SscLp,
                           Metric::ClusteringError) == doctest::Approx(0.002));

  // A cut nothing satisfies yields an empty estimate.
  const auto none = result.threshold(selfrep::Algorithm::SscLp,
                                     Metric::ClusteringError, 1e-9, 10);
  CHECK_FALSE(none.threshold.has_value());
}

TEST_CASE("run_certify tabulates an empty forbidden cell on an easy case") {
  ExperimentConfig cfg;
  cfg.n = 16;
  cfg.d = 2;
  cfg.L = 2;
  cfg.points_per_subspace = 10;
  cfg.mode = model::GenerationMode::OrthonormalUnitSphere;
  cfg.p_grid = {1.0};
  cfg.trials = 1;
  cfg.master_seed = 555;
  const auto summary = run_certify(cfg, 1);
  CHECK(summary.total_points == 20);
  CHECK(summary.certified_incorrect == 0);
  CHECK(summary.certified_unsolved == 0);
  const Index certified =
      summary.counts[0][0] + summary.counts[0][1];
  CHECK(certified > 0);

  // Gaussian-product data is rejected.
  auto bad = cfg;
  bad.mode = model::GenerationMode::GaussianProduct;
  CHECK_THROWS_AS(run_certify(bad, 1), std::invalid_argument);
}
