#include "uos/bench.hpp"

#include "uos/dataset_io.hpp"
#include "uos/metrics.hpp"
#include "uos/parallel.hpp"
#include "uos/rng.hpp"
#include "uos/spectral.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace uos::bench {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kHalfPi = 1.5707963267948966;

std::uint64_t trial_seed(std::uint64_t master, Index p_idx, Index trial) {
  // Algorithm-independent so every algorithm sees the same data per trial.
  std::uint64_t s = mix64(master + 0x9E3779B97F4A7C15ull);
  s = mix64(s ^ mix64(static_cast<std::uint64_t>(p_idx) + rngtag::kTrial));
  s = mix64(s ^ mix64(static_cast<std::uint64_t>(trial) + 0xA5A5A5A5A5A5A5A5ull));
  return s;
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::ClusteringError: return "clustering_error";
    case Metric::CompletionError: return "completion_error";
    case Metric::SubspaceErrorMax: return "subspace_error_max_rad";
  }
  return "unknown";
}

double row_metric(const SweepRow& row, Metric m) {
  switch (m) {
    case Metric::ClusteringError: return row.clustering_error;
    case Metric::CompletionError: return row.completion_error;
    case Metric::SubspaceErrorMax: return row.subspace_error_max;
  }
  return 0.0;
}

bool row_order(const SweepRow& a, const SweepRow& b) {
  if (a.p != b.p) return a.p < b.p;
  if (a.trial != b.trial) return a.trial < b.trial;
  return std::string(selfrep::to_string(a.algorithm)) <
         std::string(selfrep::to_string(b.algorithm));
}

std::string csv_header() {
  return "case,p,trial,algorithm,clustering_error,completion_error,"
         "subspace_error_max_rad,status,seed";
}

std::string format_metric(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string row_csv(const SweepRow& r) {
  std::ostringstream os;
  os << r.sampling_case << ',' << format_metric(r.p) << ',' << r.trial << ','
     << selfrep::to_string(r.algorithm) << ','
     << format_metric(r.clustering_error) << ','
     << format_metric(r.completion_error) << ','
     << format_metric(r.subspace_error_max) << ',' << r.status << ','
     << r.seed;
  return os.str();
}

}  // namespace

completion::SvtOptions SvtConfig::options() const {
  completion::SvtOptions o;
  if (tau) o.tau = *tau;
  if (delta) o.delta = *delta;
  o.tol = tol;
  o.max_iter = max_iter;
  return o;
}

void ExperimentConfig::validate() const {
  if (n < 1 || d < 1 || d > n || L < 1 || points_per_subspace < 1)
    throw std::invalid_argument("config: invalid data dimensions");
  if (sampling_case != 1 && sampling_case != 2 && sampling_case != 3)
    throw std::invalid_argument("config: sampling case must be 1, 2 or 3");
  if (p_grid.empty() && sampling_case != 2)
    throw std::invalid_argument("config: empty p grid");
  for (const double p : p_grid)
    if (!(p > 0.0) || p > 1.0)
      throw std::invalid_argument("config: p values must lie in (0, 1]");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (algorithms.empty())
    throw std::invalid_argument("config: no algorithms selected");
  if (alpha_tuning <= 0)
    throw std::invalid_argument("config: alpha_tuning must be positive");
  if (kmeans_restarts < 1)
    throw std::invalid_argument("config: kmeans_restarts must be >= 1");
  if (svt.tol <= 0 || svt.max_iter < 1)
    throw std::invalid_argument("config: invalid SVT parameters");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& ex) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") +
                                ex.what());
  }
  static const std::set<std::string> known = {
      "n",           "d",          "L",
      "points_per_subspace",       "mode",
      "case",        "p_grid",     "algorithms",
      "alpha_tuning",              "normalize_columns",
      "trials",      "master_seed", "svt",
      "kmeans_restarts",           "output_dir"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw std::invalid_argument("config: unknown key '" + key + "'");

  ExperimentConfig cfg;
  try {
    if (j.contains("n")) cfg.n = j["n"].get<Index>();
    if (j.contains("d")) cfg.d = j["d"].get<Index>();
    if (j.contains("L")) cfg.L = j["L"].get<Index>();
    if (j.contains("points_per_subspace"))
      cfg.points_per_subspace = j["points_per_subspace"].get<Index>();
    if (j.contains("mode"))
      cfg.mode = model::mode_from_string(j["mode"].get<std::string>());
    if (j.contains("case")) cfg.sampling_case = j["case"].get<int>();
    if (j.contains("p_grid"))
      cfg.p_grid = j["p_grid"].get<std::vector<double>>();
    if (j.contains("algorithms")) {
      cfg.algorithms.clear();
      for (const auto& a : j["algorithms"])
        cfg.algorithms.push_back(
            selfrep::algorithm_from_string(a.get<std::string>()));
    }
    if (j.contains("alpha_tuning"))
      cfg.alpha_tuning = j["alpha_tuning"].get<double>();
    if (j.contains("normalize_columns"))
      cfg.normalize_columns = j["normalize_columns"].get<bool>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<Index>();
    if (j.contains("master_seed"))
      cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("svt")) {
      const auto& s = j["svt"];
      static const std::set<std::string> svt_known = {"tau", "delta", "tol",
                                                      "max_iter"};
      for (const auto& [key, value] : s.items())
        if (!svt_known.count(key))
          throw std::invalid_argument("config: unknown svt key '" + key + "'");
      if (s.contains("tau") && !s["tau"].is_null())
        cfg.svt.tau = s["tau"].get<double>();
      if (s.contains("delta") && !s["delta"].is_null())
        cfg.svt.delta = s["delta"].get<double>();
      if (s.contains("tol")) cfg.svt.tol = s["tol"].get<double>();
      if (s.contains("max_iter"))
        cfg.svt.max_iter = s["max_iter"].get<Index>();
    }
    if (j.contains("kmeans_restarts"))
      cfg.kmeans_restarts = j["kmeans_restarts"].get<Index>();
    if (j.contains("output_dir"))
      cfg.output_dir = j["output_dir"].get<std::string>();
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& ex) {
    throw std::invalid_argument(std::string("config: bad field value: ") +
                                ex.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig read_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw std::invalid_argument("config: cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  ordered_json j;
  j["n"] = cfg.n;
  j["d"] = cfg.d;
  j["L"] = cfg.L;
  j["points_per_subspace"] = cfg.points_per_subspace;
  j["mode"] = model::to_string(cfg.mode);
  j["case"] = cfg.sampling_case;
  j["p_grid"] = cfg.p_grid;
  std::vector<std::string> algs;
  for (const auto a : cfg.algorithms) algs.emplace_back(selfrep::to_string(a));
  j["algorithms"] = algs;
  j["alpha_tuning"] = cfg.alpha_tuning;
  j["normalize_columns"] = cfg.normalize_columns;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  ordered_json svt;
  if (cfg.svt.tau) svt["tau"] = *cfg.svt.tau;
  if (cfg.svt.delta) svt["delta"] = *cfg.svt.delta;
  svt["tol"] = cfg.svt.tol;
  svt["max_iter"] = cfg.svt.max_iter;
  j["svt"] = svt;
  j["kmeans_restarts"] = cfg.kmeans_restarts;
  j["output_dir"] = cfg.output_dir;
  return j.dump(2) + "\n";
}

std::string results_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const auto& r : rows) os << row_csv(r) << '\n';
  return os.str();
}

double SweepResult::mean_metric(double p, selfrep::Algorithm alg,
                                Metric metric) const {
  double acc = 0.0;
  Index count = 0;
  for (const auto& r : rows)
    if (r.p == p && r.algorithm == alg) {
      acc += row_metric(r, metric);
      ++count;
    }
  if (count == 0) throw std::invalid_argument("no rows for requested (p, alg)");
  return acc / static_cast<double>(count);
}

double SweepResult::stderr_metric(double p, selfrep::Algorithm alg,
                                  Metric metric) const {
  std::vector<double> vals;
  for (const auto& r : rows)
    if (r.p == p && r.algorithm == alg) vals.push_back(row_metric(r, metric));
  if (vals.size() < 2) return 0.0;
  const double mean =
      std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
  double ss = 0.0;
  for (const double v : vals) ss += (v - mean) * (v - mean);
  const double var = ss / (vals.size() - 1);
  return std::sqrt(var / vals.size());
}

ThresholdEstimate SweepResult::threshold(selfrep::Algorithm alg, Metric metric,
                                         double cut, Index bootstrap) const {
  std::vector<double> grid = config.p_grid;
  std::sort(grid.begin(), grid.end());

  // values[p_idx][trial]
  std::vector<std::vector<double>> values(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    values[gi].assign(static_cast<std::size_t>(config.trials), 0.0);
    for (const auto& r : rows)
      if (r.p == grid[gi] && r.algorithm == alg)
        values[gi][static_cast<std::size_t>(r.trial)] = row_metric(r, metric);
  }

  auto threshold_of = [&](const std::vector<Index>& trial_ids)
      -> std::optional<double> {
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      double acc = 0.0;
      for (const Index t : trial_ids)
        acc += values[gi][static_cast<std::size_t>(t)];
      if (acc / trial_ids.size() < cut) return grid[gi];
    }
    return std::nullopt;
  };

  std::vector<Index> all(static_cast<std::size_t>(config.trials));
  std::iota(all.begin(), all.end(), Index{0});

  ThresholdEstimate out;
  out.threshold = threshold_of(all);

  if (bootstrap > 0 && config.trials > 1) {
    RngStream g = RngStream::derive(
        config.master_seed, rngtag::kBootstrap,
        static_cast<std::uint64_t>(alg), static_cast<std::uint64_t>(metric));
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(bootstrap));
    std::vector<Index> resample(static_cast<std::size_t>(config.trials));
    Index none_count = 0;
    for (Index b = 0; b < bootstrap; ++b) {
      for (auto& t : resample)
        t = static_cast<Index>(
            g.next_below(static_cast<std::uint64_t>(config.trials)));
      const auto th = threshold_of(resample);
      if (th)
        samples.push_back(*th);
      else
        ++none_count;
    }
    if (!samples.empty()) {
      std::sort(samples.begin(), samples.end());
      // Resamples with no qualifying p sit above every grid value.
      const Index total = static_cast<Index>(samples.size()) + none_count;
      const auto pick = [&](double q) -> std::optional<double> {
        const Index rank = static_cast<Index>(q * (total - 1) + 0.5);
        if (rank >= static_cast<Index>(samples.size())) return std::nullopt;
        return samples[static_cast<std::size_t>(rank)];
      };
      out.ci_lo = pick(0.025);
      out.ci_hi = pick(0.975);
    }
  }
  return out;
}

bool SweepResult::all_ok() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const SweepRow& r) { return r.status == "ok"; });
}

namespace {

struct TrialOutput {
  std::vector<SweepRow> rows;
};

SweepRow run_single(const ExperimentConfig& cfg, double p, Index p_idx,
                    Index trial, selfrep::Algorithm alg,
                    const model::GeneratedData& gen,
                    const model::ObservedDataset& ds,
                    const std::vector<int>& truth, std::uint64_t seed) {
  SweepRow row;
  row.sampling_case = cfg.sampling_case;
  row.p = p;
  row.trial = trial;
  row.algorithm = alg;
  row.seed = seed;

  std::vector<std::string> issues;
  Matrix W;
  switch (alg) {
    case selfrep::Algorithm::SscLp: {
      auto cm = selfrep::ssc_lp_coefficients(ds, cfg.normalize_columns, 1e-8,
                                             /*threads=*/1);
      if (cm.failure_count() > 0)
        issues.push_back("lp_fail:" + std::to_string(cm.failure_count()));
      W = selfrep::affinity_from_coefficients(cm);
      break;
    }
    case selfrep::Algorithm::SscEwzf: {
      auto cm = selfrep::ssc_ewzf_coefficients(ds, cfg.alpha_tuning, 1e-6,
                                               /*threads=*/1,
                                               cfg.normalize_columns);
      if (cm.failure_count() > 0)
        issues.push_back("lasso_fail:" + std::to_string(cm.failure_count()));
      W = selfrep::affinity_from_coefficients(cm);
      break;
    }
    case selfrep::Algorithm::Tsc: {
      auto tsc = selfrep::tsc_affinity(ds, cfg.points_per_subspace);
      if (!tsc.zero_columns.empty())
        issues.push_back("zero_cols:" +
                         std::to_string(tsc.zero_columns.size()));
      W = std::move(tsc.W);
      break;
    }
  }

  const std::uint64_t kmeans_seed =
      mix64(seed ^ mix64(static_cast<std::uint64_t>(alg) + rngtag::kKmeans));
  const auto assignment =
      spectral::spectral_cluster(W, cfg.L, kmeans_seed, cfg.kmeans_restarts);
  if (assignment.degenerate) issues.push_back("degenerate_embedding");
  if (!assignment.empty_clusters.empty())
    issues.push_back("empty_clusters:" +
                     std::to_string(assignment.empty_clusters.size()));

  const auto alignment = metrics::align_labels(assignment.labels, truth);
  row.clustering_error = alignment.error;

  auto comp = completion::complete_by_cluster(ds, assignment.labels, cfg.L,
                                              cfg.d, cfg.svt.options(),
                                              /*threads=*/1);
  Index svt_unconverged = 0;
  for (const auto& c : comp.clusters)
    if (!c.empty && (!c.converged || c.diverged)) ++svt_unconverged;
  if (svt_unconverged > 0)
    issues.push_back("svt_unconverged:" + std::to_string(svt_unconverged));

  row.completion_error = metrics::completion_error(comp.recovered, gen.full);

  // Per-cluster basis vs the true subspace matched by the aligning
  // permutation; unusable bases count as the worst angle.
  double max_angle = 0.0;
  for (Index g = 0; g < cfg.L; ++g) {
    const auto& cluster = comp.clusters[static_cast<std::size_t>(g)];
    double angle = kHalfPi;
    if (!cluster.empty && !cluster.rank_deficient &&
        cluster.basis.cols() == cfg.d) {
      int true_label = g < static_cast<Index>(alignment.permutation.size())
                           ? alignment.permutation[static_cast<std::size_t>(g)]
                           : 0;
      if (true_label >= 1 && true_label <= static_cast<int>(cfg.L)) {
        angle = metrics::subspace_error(
            cluster.basis,
            gen.ensemble.bases[static_cast<std::size_t>(true_label - 1)]);
      }
    }
    max_angle = std::max(max_angle, angle);
  }
  row.subspace_error_max = max_angle;

  if (issues.empty()) {
    row.status = "ok";
  } else {
    std::string joined;
    for (std::size_t t = 0; t < issues.size(); ++t) {
      if (t) joined += ';';
      joined += issues[t];
    }
    row.status = joined;
  }
  return row;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sampling_case == 2)
    throw std::invalid_argument("run_sweep supports sampling cases 1 and 3");

  std::vector<double> grid = cfg.p_grid;
  std::sort(grid.begin(), grid.end());

  const Index jobs = static_cast<Index>(grid.size()) * cfg.trials;
  std::vector<TrialOutput> outputs(static_cast<std::size_t>(jobs));

  const bool write_files = !cfg.output_dir.empty();
  std::ofstream incremental;
  std::mutex incremental_mutex;
  if (write_files) {
    std::filesystem::create_directories(cfg.output_dir);
    incremental.open(std::filesystem::path(cfg.output_dir) / "results.csv");
    if (!incremental)
      throw std::runtime_error("cannot write results.csv in " + cfg.output_dir);
    incremental << csv_header() << '\n' << std::flush;
  }

  parallel_for(jobs, [&](Index job) {
    const Index p_idx = job / cfg.trials;
    const Index trial = job % cfg.trials;
    const double p = grid[static_cast<std::size_t>(p_idx)];
    const std::uint64_t seed = trial_seed(cfg.master_seed, p_idx, trial);

    const auto gen = model::generate_ensemble(
        cfg.n, cfg.d, cfg.L, cfg.points_per_subspace, cfg.mode, seed);
    const Index N = gen.ensemble.total_points();
    const auto pattern = cfg.sampling_case == 1
                             ? model::sample_case1(cfg.n, N, p)
                             : model::sample_case3(cfg.n, N, p, seed);
    const auto truth = gen.ensemble.labels();
    const auto ds = model::zero_fill(gen.full, pattern, truth);

    auto& out = outputs[static_cast<std::size_t>(job)];
    for (const auto alg : cfg.algorithms) {
      SweepRow row;
      try {
        row = run_single(cfg, p, p_idx, trial, alg, gen, ds, truth, seed);
      } catch (const std::exception& ex) {
        row.sampling_case = cfg.sampling_case;
        row.p = p;
        row.trial = trial;
        row.algorithm = alg;
        row.seed = seed;
        row.clustering_error = 1.0;
        row.completion_error = 1.0;
        row.subspace_error_max = kHalfPi;
        std::string what = ex.what();
        for (auto& ch : what)
          if (ch == ',' || ch == '\n' || ch == ' ') ch = '_';
        row.status = "error:" + what.substr(0, 60);
      }
      out.rows.push_back(row);
      if (write_files) {
        std::lock_guard<std::mutex> lock(incremental_mutex);
        incremental << row_csv(row) << '\n' << std::flush;
      }
    }
  });

  SweepResult result;
  result.config = cfg;
  result.config.p_grid = grid;
  for (auto& out : outputs)
    result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
  std::sort(result.rows.begin(), result.rows.end(), row_order);

  if (write_files) {
    incremental.close();
    const std::filesystem::path dir(cfg.output_dir);
    {
      std::ofstream final_csv(dir / "results.csv");
      final_csv << results_csv(result.rows);
    }
    {
      std::ofstream summary(dir / "summary.csv");
      summary << "case,p,algorithm,trials,clustering_error_mean,"
                 "clustering_error_stderr,completion_error_mean,"
                 "completion_error_stderr,subspace_error_max_mean,"
                 "subspace_error_max_stderr\n";
      for (const double p : grid)
        for (const auto alg : cfg.algorithms) {
          summary << cfg.sampling_case << ',' << format_metric(p) << ','
                  << selfrep::to_string(alg) << ',' << cfg.trials;
          for (const Metric m : {Metric::ClusteringError,
                                 Metric::CompletionError,
                                 Metric::SubspaceErrorMax})
            summary << ',' << format_metric(result.mean_metric(p, alg, m))
                    << ','
                    << format_metric(result.stderr_metric(p, alg, m));
          summary << '\n';
        }
    }
    {
      std::ofstream th(dir / "thresholds.csv");
      th << "case,algorithm,metric,cut,threshold_p,ci_lo,ci_hi\n";
      const auto fmt_opt = [](const std::optional<double>& v) {
        return v ? format_metric(*v) : std::string("inf");
      };
      const std::vector<std::pair<Metric, double>> cuts = {
          {Metric::ClusteringError, 1e-3},
          {Metric::CompletionError, 1e-3},
          {Metric::SubspaceErrorMax, 0.01}};
      for (const auto alg : cfg.algorithms)
        for (const auto& [metric, cut] : cuts) {
          const auto est = result.threshold(alg, metric, cut);
          th << cfg.sampling_case << ',' << selfrep::to_string(alg) << ','
             << metric_name(metric) << ',' << format_metric(cut) << ','
             << fmt_opt(est.threshold) << ',' << fmt_opt(est.ci_lo) << ','
             << fmt_opt(est.ci_hi) << '\n';
        }
    }
    const std::vector<std::pair<Metric, std::string>> figures = {
        {Metric::ClusteringError, "fig_clustering.dat"},
        {Metric::CompletionError, "fig_completion.dat"},
        {Metric::SubspaceErrorMax, "fig_subspace.dat"}};
    for (const auto& [metric, name] : figures) {
      std::ofstream dat(dir / name);
      dat << "# " << metric_name(metric) << " vs sampling ratio p\n# p";
      for (const auto alg : cfg.algorithms)
        dat << ' ' << selfrep::to_string(alg) << "_mean "
            << selfrep::to_string(alg) << "_stderr";
      dat << '\n';
      for (const double p : grid) {
        dat << format_metric(p);
        for (const auto alg : cfg.algorithms)
          dat << ' ' << format_metric(result.mean_metric(p, alg, metric))
              << ' ' << format_metric(result.stderr_metric(p, alg, metric));
        dat << '\n';
      }
    }
  }
  return result;
}

void CertifySummary::add(const CertifyOutcome& o) {
  outcomes.push_back(o);
  const auto v = static_cast<std::size_t>(o.entry.verdict);
  counts[v][o.support_correct ? 1 : 0] += 1;
  ++total_points;
  if (o.entry.verdict == certify::Verdict::Certified) {
    if (!o.solver_optimal)
      ++certified_unsolved;
    else if (!o.support_correct)
      ++certified_incorrect;
  }
}

CertifySummary run_certify(const ExperimentConfig& cfg, int sampling_case) {
  cfg.validate();
  if (cfg.mode != model::GenerationMode::OrthonormalUnitSphere)
    throw std::invalid_argument(
        "run_certify requires orthonormal_unit_sphere generation");

  CertifySummary summary;
  std::vector<double> grid = cfg.p_grid;
  if (sampling_case == 2) grid = {1.0};  // p is not used for exactly-d masks
  std::sort(grid.begin(), grid.end());

  for (Index p_idx = 0; p_idx < static_cast<Index>(grid.size()); ++p_idx) {
    for (Index trial = 0; trial < cfg.trials; ++trial) {
      const double p = grid[static_cast<std::size_t>(p_idx)];
      const std::uint64_t seed = trial_seed(cfg.master_seed, p_idx, trial);
      const auto gen = model::generate_ensemble(
          cfg.n, cfg.d, cfg.L, cfg.points_per_subspace, cfg.mode, seed);
      const Index N = gen.ensemble.total_points();
      model::ObservationPattern pattern;
      switch (sampling_case) {
        case 1: pattern = model::sample_case1(cfg.n, N, p); break;
        case 2: pattern = model::sample_case2(cfg.n, N, cfg.d, seed); break;
        case 3: pattern = model::sample_case3(cfg.n, N, p, seed); break;
        default:
          throw std::invalid_argument("run_certify: case must be 1, 2 or 3");
      }
      const auto truth = gen.ensemble.labels();
      const auto ds = model::zero_fill(gen.full, pattern, truth);
      // No column normalization: the certificates apply to the plain LP,
      // whose objective the restricted-norm rescaling would reweight.
      const auto cm = selfrep::ssc_lp_coefficients(ds, false, 1e-8);

      certify::CheckOptions opts;
      if (sampling_case == 3 || cfg.d > 4) {
        opts.method = certify::InradiusMethod::SampledUpperBound;
        opts.samples = 20000;
      } else {
        opts.method = certify::InradiusMethod::ExactPolarVertices;
      }

      std::vector<CertifyOutcome> outcomes(static_cast<std::size_t>(N));
      parallel_for(N, [&](Index gi) {
        const Index ell = gen.ensemble.subspace_of(gi);
        const Index local = gi - gen.ensemble.column_offset(ell);
        CertifyOutcome o;
        switch (sampling_case) {
          case 1:
            o.entry = certify::check_case1(gen.ensemble, pattern.masks[0],
                                           local, ell, opts);
            break;
          case 2:
            o.entry =
                certify::check_case2(gen.ensemble, pattern, local, ell, opts);
            break;
          default:
            o.entry = certify::check_case3(gen.ensemble, pattern, ds, local,
                                           ell, opts);
            break;
        }
        o.solver_optimal = cm.column_status[static_cast<std::size_t>(gi)] ==
                           l1core::SolveStatus::Optimal;
        bool clean = true;
        for (Index j = 0; j < N && clean; ++j)
          if (truth[static_cast<std::size_t>(j)] !=
                  truth[static_cast<std::size_t>(gi)] &&
              std::abs(cm.C(j, gi)) > kSupportTol)
            clean = false;
        o.support_correct = o.solver_optimal && clean;
        outcomes[static_cast<std::size_t>(gi)] = std::move(o);
      });
      for (auto& o : outcomes) summary.add(o);
    }
  }
  return summary;
}

}  // namespace uos::bench
