#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uos/bench.hpp"
#include "uos/certify.hpp"
#include "uos/completion.hpp"
#include "uos/dataset_io.hpp"
#include "uos/l1core.hpp"
#include "uos/metrics.hpp"
#include "uos/model.hpp"
#include "uos/selfrep.hpp"
#include "uos/spectral.hpp"

namespace py = pybind11;
using namespace uos;

namespace {

model::ObservationPattern pattern_from_masks(
    Index n, const std::vector<IndexList>& masks, const std::string& tag) {
  model::ObservationPattern p;
  p.ambient_dim = n;
  p.masks = masks;
  p.case_tag = model::case_tag_from_string(tag);
  p.validate();
  return p;
}

model::ObservedDataset make_dataset(const Matrix& full,
                                    const std::vector<IndexList>& masks,
                                    const std::string& tag) {
  return model::zero_fill(full, pattern_from_masks(full.rows(), masks, tag));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "subspace clustering and completion with missing data";

  // --- data model -------------------------------------------------------
  m.def(
      "generate_ensemble",
      [](Index n, Index d, Index L, Index points, const std::string& mode,
         std::uint64_t seed) {
        const auto gen = model::generate_ensemble(
            n, d, L, points, model::mode_from_string(mode), seed);
        py::dict out;
        out["full"] = gen.full;
        out["bases"] = gen.ensemble.bases;
        out["coefficients"] = gen.ensemble.coefficients;
        out["labels"] = gen.ensemble.labels();
        return out;
      },
      py::arg("n"), py::arg("d"), py::arg("L"), py::arg("points_per_subspace"),
      py::arg("mode") = "gaussian_product", py::arg("seed") = 1);

  m.def(
      "sample_case1",
      [](Index n, Index N, double p) {
        return model::sample_case1(n, N, p).masks;
      },
      py::arg("n"), py::arg("N"), py::arg("p"));
  m.def(
      "sample_case2",
      [](Index n, Index N, Index d, std::uint64_t seed) {
        return model::sample_case2(n, N, d, seed).masks;
      },
      py::arg("n"), py::arg("N"), py::arg("d"), py::arg("seed") = 1);
  m.def(
      "sample_case3",
      [](Index n, Index N, double p, std::uint64_t seed) {
        return model::sample_case3(n, N, p, seed).masks;
      },
      py::arg("n"), py::arg("N"), py::arg("p"), py::arg("seed") = 1);

  m.def(
      "zero_fill",
      [](const Matrix& full, const std::vector<IndexList>& masks,
         const std::string& tag) {
        return make_dataset(full, masks, tag).zero_filled;
      },
      py::arg("full"), py::arg("masks"), py::arg("case_tag") = "random_per_column");

  // --- l1 core ----------------------------------------------------------
  m.def(
      "solve_bp",
      [](const Matrix& A, const Vector& y, double feas_tol,
         double dual_gap_tol) {
        const auto sol = l1core::solve_bp(A, y, feas_tol, dual_gap_tol);
        py::dict out;
        out["status"] = std::string(l1core::to_string(sol.status));
        out["coefficients"] = sol.coefficients;
        out["objective"] = sol.objective;
        out["dual"] = sol.dual;
        return out;
      },
      py::arg("A"), py::arg("y"), py::arg("feas_tol") = 1e-8,
      py::arg("dual_gap_tol") = 1e-7);

  m.def(
      "solve_lasso",
      [](const Matrix& A, const Vector& y, double lambda_reg, double tol,
         Index max_iter) {
        const auto sol = l1core::solve_lasso(A, y, lambda_reg, tol, max_iter);
        py::dict out;
        out["status"] = std::string(l1core::to_string(sol.status));
        out["coefficients"] = sol.coefficients;
        out["objective"] = sol.objective;
        out["residual_inf"] = sol.residual_inf;
        return out;
      },
      py::arg("A"), py::arg("y"), py::arg("lambda_reg"), py::arg("tol") = 1e-8,
      py::arg("max_iter") = 20000);

  // --- affinities and clustering ----------------------------------------
  m.def(
      "ssc_lp_affinity",
      [](const Matrix& full, const std::vector<IndexList>& masks,
         bool normalize) {
        const auto ds = make_dataset(full, masks, "random_per_column");
        const auto cm = selfrep::ssc_lp_coefficients(ds, normalize);
        py::dict out;
        out["C"] = cm.C;
        out["W"] = selfrep::affinity_from_coefficients(cm);
        out["failures"] = cm.failure_count();
        return out;
      },
      py::arg("full"), py::arg("masks"), py::arg("normalize") = false);

  m.def(
      "ssc_ewzf_affinity",
      [](const Matrix& full, const std::vector<IndexList>& masks,
         double alpha) {
        const auto ds = make_dataset(full, masks, "random_per_column");
        const auto cm = selfrep::ssc_ewzf_coefficients(ds, alpha);
        py::dict out;
        out["C"] = cm.C;
        out["W"] = selfrep::affinity_from_coefficients(cm);
        out["failures"] = cm.failure_count();
        out["lambda_reg"] = cm.lambda_reg;
        return out;
      },
      py::arg("full"), py::arg("masks"), py::arg("alpha") = 7.34);

  m.def(
      "tsc_affinity",
      [](const Matrix& full, const std::vector<IndexList>& masks,
         Index points_per_subspace) {
        const auto ds = make_dataset(full, masks, "random_per_column");
        const auto aff = selfrep::tsc_affinity(ds, points_per_subspace);
        py::dict out;
        out["W"] = aff.W;
        out["q"] = aff.q;
        return out;
      },
      py::arg("full"), py::arg("masks"), py::arg("points_per_subspace"));

  m.def(
      "spectral_cluster",
      [](const Matrix& W, Index L, std::uint64_t seed, Index restarts) {
        const auto a = spectral::spectral_cluster(W, L, seed, restarts);
        py::dict out;
        out["labels"] = a.labels;
        out["inertia"] = a.inertia;
        out["eigenvalues"] = a.laplacian_eigenvalues;
        out["degenerate"] = a.degenerate;
        return out;
      },
      py::arg("W"), py::arg("L"), py::arg("seed") = 1,
      py::arg("kmeans_restarts") = 20);

  // --- completion ---------------------------------------------------------
  m.def(
      "svt_complete",
      [](const Matrix& observed, const std::vector<IndexList>& mask,
         double tau, double delta, double tol, Index max_iter) {
        completion::SvtOptions opts;
        opts.tau = tau;
        opts.delta = delta;
        opts.tol = tol;
        opts.max_iter = max_iter;
        const auto r = completion::svt_complete(observed, mask, opts);
        py::dict out;
        out["completed"] = r.completed;
        out["iterations"] = r.iterations;
        out["residual"] = r.final_residual;
        out["converged"] = r.converged;
        return out;
      },
      py::arg("observed"), py::arg("mask"), py::arg("tau") = 0.0,
      py::arg("delta") = 0.0, py::arg("tol") = 1e-4, py::arg("max_iter") = 500);

  m.def(
      "complete_by_cluster",
      [](const Matrix& full, const std::vector<IndexList>& masks,
         const std::vector<int>& labels, Index L, Index d) {
        const auto ds = make_dataset(full, masks, "random_per_column");
        const auto r = completion::complete_by_cluster(ds, labels, L, d);
        py::dict out;
        out["recovered"] = r.recovered;
        std::vector<Matrix> bases;
        for (const auto& c : r.clusters) bases.push_back(c.basis);
        out["bases"] = bases;
        return out;
      },
      py::arg("full"), py::arg("masks"), py::arg("labels"), py::arg("L"),
      py::arg("d"));

  // --- metrics ------------------------------------------------------------
  m.def("clustering_error", &metrics::clustering_error, py::arg("predicted"),
        py::arg("truth"));
  m.def(
      "completion_error",
      [](const Matrix& recovered, const Matrix& truth) {
        return metrics::completion_error(recovered, truth);
      },
      py::arg("recovered"), py::arg("truth"));
  m.def(
      "subspace_error",
      [](const Matrix& A, const Matrix& B) {
        return metrics::subspace_error(A, B);
      },
      py::arg("A"), py::arg("B"));

  // --- certificates ---------------------------------------------------------
  m.def(
      "inradius",
      [](const Matrix& A, const std::string& method, Index samples) {
        const auto r = certify::inradius(
            A,
            method == "exact" ? certify::InradiusMethod::ExactPolarVertices
                              : certify::InradiusMethod::SampledUpperBound,
            samples);
        py::dict out;
        out["value"] = r.value;
        out["exact"] = r.exact;
        out["rank_deficient"] = r.rank_deficient;
        return out;
      },
      py::arg("A"), py::arg("method") = "exact", py::arg("samples") = 100000);

  m.attr("__all__") =
      py::make_tuple("generate_ensemble", "sample_case1", "sample_case2",
                     "sample_case3", "zero_fill", "solve_bp", "solve_lasso",
                     "ssc_lp_affinity", "ssc_ewzf_affinity", "tsc_affinity",
                     "spectral_cluster", "svt_complete", "complete_by_cluster",
                     "clustering_error", "completion_error", "subspace_error",
                     "inradius");
}
