#pragma once

#include "uos/certify.hpp"
#include "uos/completion.hpp"
#include "uos/model.hpp"
#include "uos/selfrep.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace uos::bench {

struct SvtConfig {
  std::optional<double> tau;
  std::optional<double> delta;
  double tol = 1e-4;
  Index max_iter = 500;

  completion::SvtOptions options() const;
};

struct ExperimentConfig {
  Index n = 50;
  Index d = 3;
  Index L = 3;
  Index points_per_subspace = 150;
  model::GenerationMode mode = model::GenerationMode::GaussianProduct;
  int sampling_case = 3;  // 1 or 3 for sweeps; 2 additionally for certify
  std::vector<double> p_grid;
  std::vector<selfrep::Algorithm> algorithms = {selfrep::Algorithm::SscLp,
                                                selfrep::Algorithm::SscEwzf,
                                                selfrep::Algorithm::Tsc};
  double alpha_tuning = 7.34;
  bool normalize_columns = false;
  Index trials = 25;
  std::uint64_t master_seed = 1;
  SvtConfig svt;
  Index kmeans_restarts = 20;
  std::string output_dir;

  void validate() const;  // throws std::invalid_argument
};

// Strict JSON mapping: unknown keys are rejected, fields mirror the struct.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig read_config(const std::filesystem::path& file);
std::string config_to_json_text(const ExperimentConfig& cfg);

struct SweepRow {
  int sampling_case = 0;
  double p = 0.0;
  Index trial = 0;
  selfrep::Algorithm algorithm = selfrep::Algorithm::SscLp;
  double clustering_error = 0.0;
  double completion_error = 0.0;
  double subspace_error_max = 0.0;
  std::string status = "ok";
  std::uint64_t seed = 0;
};

enum class Metric { ClusteringError, CompletionError, SubspaceErrorMax };

struct ThresholdEstimate {
  // Smallest grid p whose per-p mean metric falls below the cut; unset when
  // no grid point qualifies.
  std::optional<double> threshold;
  std::optional<double> ci_lo;  // bootstrap 95% interval over trials
  std::optional<double> ci_hi;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<SweepRow> rows;  // sorted by (p, trial, algorithm name)

  double mean_metric(double p, selfrep::Algorithm alg, Metric metric) const;
  double stderr_metric(double p, selfrep::Algorithm alg, Metric metric) const;
  ThresholdEstimate threshold(selfrep::Algorithm alg, Metric metric,
                              double cut, Index bootstrap = 200) const;
  bool all_ok() const;
};

// Runs the full (p, trial, algorithm) grid: generate -> mask -> coefficients
// -> spectral clustering -> per-cluster completion -> metrics.  Per-trial
// seeds derive from (master_seed, p index, trial) so every algorithm sees the
// same data.  When output_dir is set, appends results.csv incrementally and
// finally writes the sorted results.csv, summary.csv, thresholds.csv and one
// gnuplot .dat per metric.
SweepResult run_sweep(const ExperimentConfig& cfg);

// Serializes rows in the fixed schema:
// case,p,trial,algorithm,clustering_error,completion_error,
// subspace_error_max_rad,status,seed
std::string results_csv(const std::vector<SweepRow>& rows);

struct CertifyOutcome {
  certify::CertificateEntry entry;
  bool solver_optimal = false;
  bool support_correct = false;  // no cross-subspace coefficient above 1e-6
};

struct CertifySummary {
  std::vector<CertifyOutcome> outcomes;
  // counts[verdict][correct? 1 : 0]
  std::array<std::array<Index, 2>, 3> counts{};
  Index certified_incorrect = 0;  // the forbidden cell
  Index certified_unsolved = 0;   // certified but the LP column failed
  Index total_points = 0;

  void add(const CertifyOutcome& o);
};

// Generates OrthonormalUnitSphere instances per the config, runs the
// matching theorem check on every point, runs the LP coefficients, and
// tabulates (verdict x support-correct).
CertifySummary run_certify(const ExperimentConfig& cfg, int sampling_case);

// Support-correctness threshold shared by run_certify and the reports.
constexpr double kSupportTol = 1e-6;

}  // namespace uos::bench
