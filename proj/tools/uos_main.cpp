// uos: generate / cluster / complete / certify / sweep for union-of-subspaces
// data with missing entries.
//
// Exit codes: 0 success, 1 configuration or usage errors, 2 partial failures
// (solver failures on some columns, non-ok sweep rows).

#include <CLI11.hpp>

#include "uos/bench.hpp"
#include "uos/dataset_io.hpp"
#include "uos/metrics.hpp"
#include "uos/parallel.hpp"
#include "uos/selfrep.hpp"
#include "uos/spectral.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace uos;

int cmd_generate(const std::string& out_dir, Index n, Index d, Index L,
                 Index points, const std::string& mode_str, int sampling_case,
                 double p, std::uint64_t seed) {
  const auto mode = model::mode_from_string(mode_str);
  const auto gen = model::generate_ensemble(n, d, L, points, mode, seed);
  const Index N = gen.ensemble.total_points();
  model::ObservationPattern pattern;
  switch (sampling_case) {
    case 1: pattern = model::sample_case1(n, N, p); break;
    case 2: pattern = model::sample_case2(n, N, d, seed); break;
    case 3: pattern = model::sample_case3(n, N, p, seed); break;
    default: throw std::invalid_argument("case must be 1, 2 or 3");
  }
  const auto labels = gen.ensemble.labels();
  const auto ds = model::zero_fill(gen.full, pattern, labels);

  model::DatasetMeta meta;
  meta.n = n;
  meta.N = N;
  meta.L = L;
  meta.d = d;
  meta.points_per_subspace = gen.ensemble.points_per_subspace;
  meta.case_tag = pattern.case_tag;
  meta.seed = seed;
  meta.mode = mode;
  meta.labels = labels;
  model::write_dataset(out_dir, ds, meta);
  std::cout << "wrote dataset (" << n << "x" << N << ", case " << sampling_case
            << ") to " << out_dir << "\n";
  return 0;
}

int cmd_cluster(const std::string& data_dir, const std::string& algorithm,
                const std::string& out_file, double alpha, bool normalize,
                std::uint64_t seed, Index restarts,
                const std::string& coeffs_dir) {
  const auto loaded = model::read_dataset(data_dir);
  const auto alg = selfrep::algorithm_from_string(algorithm);

  Matrix W;
  Index failures = 0;
  selfrep::CoefficientMatrix cm;
  switch (alg) {
    case selfrep::Algorithm::SscLp:
      cm = selfrep::ssc_lp_coefficients(loaded.data, normalize);
      failures = cm.failure_count();
      W = selfrep::affinity_from_coefficients(cm);
      break;
    case selfrep::Algorithm::SscEwzf:
      cm = selfrep::ssc_ewzf_coefficients(loaded.data, alpha, 1e-6, 0,
                                          normalize);
      failures = cm.failure_count();
      W = selfrep::affinity_from_coefficients(cm);
      break;
    case selfrep::Algorithm::Tsc: {
      Index nl = loaded.meta.points_per_subspace.empty()
                     ? loaded.meta.N / std::max<Index>(loaded.meta.L, 1)
                     : loaded.meta.points_per_subspace.front();
      W = selfrep::tsc_affinity(loaded.data, nl).W;
      break;
    }
  }
  if (!coeffs_dir.empty() && alg != selfrep::Algorithm::Tsc)
    selfrep::write_coefficients(coeffs_dir, cm);

  const auto assignment =
      spectral::spectral_cluster(W, loaded.meta.L, seed, restarts);

  std::ofstream out(out_file);
  if (!out) throw std::runtime_error("cannot write " + out_file);
  out << "column,label\n";
  for (std::size_t i = 0; i < assignment.labels.size(); ++i)
    out << i << ',' << assignment.labels[i] << '\n';

  if (loaded.data.true_labels) {
    const double err =
        metrics::clustering_error(assignment.labels, *loaded.data.true_labels);
    std::cout << "clustering error vs stored labels: " << err << "\n";
  }
  std::cout << "wrote labels to " << out_file << "\n";
  if (failures > 0) {
    std::cerr << failures << " column solves failed\n";
    return 2;
  }
  return 0;
}

std::vector<int> read_labels_csv(const std::string& file, Index N) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open labels file " + file);
  std::vector<int> labels(static_cast<std::size_t>(N), 0);
  std::string line;
  std::getline(in, line);  // header
  Index count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("labels file: expected column,label rows");
    const long col = std::stol(line.substr(0, comma));
    const int lab = std::stoi(line.substr(comma + 1));
    if (col < 0 || col >= N)
      throw std::invalid_argument("labels file: column index out of range");
    labels[static_cast<std::size_t>(col)] = lab;
    ++count;
  }
  if (count != N)
    throw std::invalid_argument("labels file: expected one row per column");
  return labels;
}

int cmd_complete(const std::string& data_dir, const std::string& labels_file,
                 const std::string& out_dir, double tau, double delta,
                 double tol, Index max_iter) {
  const auto loaded = model::read_dataset(data_dir);
  const auto labels = read_labels_csv(labels_file, loaded.meta.N);

  completion::SvtOptions opts;
  opts.tau = tau;
  opts.delta = delta;
  opts.tol = tol;
  opts.max_iter = max_iter;
  const auto result = completion::complete_by_cluster(
      loaded.data, labels, loaded.meta.L, loaded.meta.d, opts,
      worker_count());

  // Recovered matrix in the dataset format: full values, all-ones mask.
  model::ObservationPattern full_pattern;
  full_pattern.ambient_dim = loaded.meta.n;
  IndexList all_rows(static_cast<std::size_t>(loaded.meta.n));
  std::iota(all_rows.begin(), all_rows.end(), Index{0});
  full_pattern.masks.assign(static_cast<std::size_t>(loaded.meta.N), all_rows);
  full_pattern.case_tag = model::CaseTag::SameSupport;
  auto recovered_ds = model::zero_fill(result.recovered, full_pattern,
                                       loaded.data.true_labels);

  model::DatasetMeta meta = loaded.meta;
  meta.case_tag = model::CaseTag::SameSupport;
  model::write_dataset(out_dir, recovered_ds, meta);

  std::cout << "wrote recovered dataset to " << out_dir << "\n";
  for (const auto& c : result.clusters)
    std::cout << "cluster " << c.label << ": size " << c.size << ", "
              << c.iterations << " iterations, residual " << c.final_residual
              << (c.converged ? "" : " (not converged)")
              << (c.rank_deficient ? " (rank deficient)" : "") << "\n";
  return result.all_converged() ? 0 : 2;
}

int cmd_certify(const std::string& data_dir, int sampling_case,
                const std::string& out_file) {
  const auto loaded = model::read_dataset(data_dir);
  if (!loaded.meta.mode ||
      *loaded.meta.mode != model::GenerationMode::OrthonormalUnitSphere)
    throw std::invalid_argument(
        "certify requires a dataset generated in orthonormal_unit_sphere "
        "mode (the checks need the ground-truth bases)");

  // The ensemble is a pure function of (parameters, seed); regenerate and
  // verify it matches what is on disk.
  const auto gen = model::generate_ensemble(
      loaded.meta.n, loaded.meta.d, loaded.meta.L,
      loaded.meta.points_per_subspace.front(), *loaded.meta.mode,
      loaded.meta.seed);
  {
    const auto regen =
        model::zero_fill(gen.full, loaded.data.pattern, std::nullopt);
    const double dev =
        (regen.zero_filled - loaded.data.zero_filled).cwiseAbs().maxCoeff();
    if (dev > 1e-9)
      throw std::invalid_argument(
          "dataset values do not match their generation seed (deviation " +
          std::to_string(dev) + ")");
  }

  const auto& pattern = loaded.data.pattern;
  const Index N = loaded.meta.N;
  const auto cm = selfrep::ssc_lp_coefficients(loaded.data, false);
  const auto truth = gen.ensemble.labels();

  certify::CheckOptions opts;
  if (sampling_case == 3 || loaded.meta.d > 4) {
    opts.method = certify::InradiusMethod::SampledUpperBound;
    opts.samples = 20000;
  }

  bench::CertifySummary summary;
  std::vector<bench::CertifyOutcome> outcomes(static_cast<std::size_t>(N));
  parallel_for(N, [&](Index gi) {
    const Index ell = gen.ensemble.subspace_of(gi);
    const Index local = gi - gen.ensemble.column_offset(ell);
    bench::CertifyOutcome o;
    switch (sampling_case) {
      case 1:
        o.entry = certify::check_case1(gen.ensemble, pattern.masks[0], local,
                                       ell, opts);
        break;
      case 2:
        o.entry = certify::check_case2(gen.ensemble, pattern, local, ell, opts);
        break;
      case 3:
        o.entry =
            certify::check_case3(gen.ensemble, pattern, loaded.data, local,
                                 ell, opts);
        break;
      default:
        throw std::invalid_argument("case must be 1, 2 or 3");
    }
    o.solver_optimal = cm.column_status[static_cast<std::size_t>(gi)] ==
                       l1core::SolveStatus::Optimal;
    bool clean = true;
    for (Index j = 0; j < N && clean; ++j)
      if (truth[static_cast<std::size_t>(j)] !=
              truth[static_cast<std::size_t>(gi)] &&
          std::abs(cm.C(j, gi)) > bench::kSupportTol)
        clean = false;
    o.support_correct = o.solver_optimal && clean;
    outcomes[static_cast<std::size_t>(gi)] = std::move(o);
  });
  for (const auto& o : outcomes) summary.add(o);

  certify::CertificateReport report;
  {
    std::ostringstream os;
    os << "case=" << sampling_case << " n=" << loaded.meta.n
       << " d=" << loaded.meta.d << " L=" << loaded.meta.L
       << " N=" << loaded.meta.N << " seed=" << loaded.meta.seed;
    report.instance_summary = os.str();
  }
  for (const auto& o : summary.outcomes) report.entries.push_back(o.entry);

  if (out_file.empty() || out_file == "-") {
    certify::write_report(std::cout, report);
  } else {
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error("cannot write " + out_file);
    certify::write_report(out, report);
    std::cout << "wrote report to " << out_file << "\n";
  }

  const auto& c = summary.counts;
  std::cout << "contingency (points: " << summary.total_points << ")\n"
            << "  certified & support-correct:     " << c[0][1] << "\n"
            << "  certified & support-incorrect:   " << summary.certified_incorrect
            << "\n"
            << "  not-certified & support-correct: " << c[1][1] << "\n"
            << "  not-certified & incorrect:       " << c[1][0] << "\n"
            << "  hypothesis-violated:             " << c[2][0] + c[2][1]
            << "\n";
  Index failures = 0;
  for (const auto s : cm.column_status)
    if (s != l1core::SolveStatus::Optimal) ++failures;
  return failures > 0 ? 2 : 0;
}

int cmd_sweep(const std::string& config_file) {
  const auto cfg = bench::read_config(config_file);
  const auto result = bench::run_sweep(cfg);
  std::cout << "sweep complete: " << result.rows.size() << " rows";
  if (!cfg.output_dir.empty()) std::cout << " -> " << cfg.output_dir;
  std::cout << "\n";
  return result.all_ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"union-of-subspaces clustering and completion with missing data"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset directory");
  std::string gen_out, gen_mode = "gaussian_product";
  Index gen_n = 50, gen_d = 3, gen_L = 3, gen_points = 150;
  int gen_case = 3;
  double gen_p = 0.5;
  std::uint64_t gen_seed = 1;
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--n", gen_n, "ambient dimension");
  gen->add_option("--d", gen_d, "subspace dimension");
  gen->add_option("--L", gen_L, "number of subspaces");
  gen->add_option("--points-per-subspace", gen_points, "columns per subspace");
  gen->add_option("--mode", gen_mode,
                  "orthonormal_unit_sphere | gaussian_product");
  gen->add_option("--case", gen_case, "sampling case (1, 2 or 3)");
  gen->add_option("--p", gen_p, "sampling ratio (cases 1 and 3)");
  gen->add_option("--seed", gen_seed, "master seed");

  // cluster
  auto* clu = app.add_subcommand("cluster", "cluster a dataset directory");
  std::string clu_data, clu_alg = "ssc-lp", clu_out = "labels.csv",
              clu_coeffs;
  double clu_alpha = 7.34;
  bool clu_normalize = false;
  std::uint64_t clu_seed = 1;
  Index clu_restarts = 20;
  clu->add_option("--data", clu_data, "dataset directory")->required();
  clu->add_option("--algorithm", clu_alg, "ssc-lp | ssc-ewzf | tsc");
  clu->add_option("--out", clu_out, "labels CSV to write");
  clu->add_option("--alpha", clu_alpha, "ssc-ewzf tuning parameter");
  clu->add_flag("--normalize", clu_normalize,
                "normalize dictionary columns over each mask");
  clu->add_option("--seed", clu_seed, "k-means seed");
  clu->add_option("--restarts", clu_restarts, "k-means restarts");
  clu->add_option("--export-coeffs", clu_coeffs,
                  "directory for coeffs.csv + coeffs_meta.json");

  // complete
  auto* com = app.add_subcommand("complete",
                                 "complete a dataset given cluster labels");
  std::string com_data, com_labels, com_out;
  double com_tau = 0.0, com_delta = 0.0, com_tol = 1e-4;
  Index com_max_iter = 500;
  com->add_option("--data", com_data, "dataset directory")->required();
  com->add_option("--labels", com_labels, "labels CSV")->required();
  com->add_option("--out", com_out, "output dataset directory")->required();
  com->add_option("--tau", com_tau, "SVT shrinkage (0: default)");
  com->add_option("--delta", com_delta, "SVT step size (0: default)");
  com->add_option("--tol", com_tol, "SVT relative residual tolerance");
  com->add_option("--max-iter", com_max_iter, "SVT iteration cap");

  // certify
  auto* cer = app.add_subcommand(
      "certify", "check the clustering certificates on a dataset");
  std::string cer_data, cer_out;
  int cer_case = 1;
  cer->add_option("--data", cer_data, "dataset directory")->required();
  cer->add_option("--case", cer_case, "which condition to check (1, 2 or 3)")
      ->required();
  cer->add_option("--out", cer_out, "report file ('-' for stdout)");

  // sweep
  auto* swe = app.add_subcommand("sweep", "run an experiment sweep");
  std::string swe_config;
  swe->add_option("--config", swe_config, "experiment config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed())
      return cmd_generate(gen_out, gen_n, gen_d, gen_L, gen_points, gen_mode,
                          gen_case, gen_p, gen_seed);
    if (clu->parsed())
      return cmd_cluster(clu_data, clu_alg, clu_out, clu_alpha, clu_normalize,
                         clu_seed, clu_restarts, clu_coeffs);
    if (com->parsed())
      return cmd_complete(com_data, com_labels, com_out, com_tau, com_delta,
                          com_tol, com_max_iter);
    if (cer->parsed()) return cmd_certify(cer_data, cer_case, cer_out);
    if (swe->parsed()) return cmd_sweep(swe_config);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 1;
}
