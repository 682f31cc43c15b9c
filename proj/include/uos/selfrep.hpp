#pragma once

#include "uos/l1core.hpp"
#include "uos/model.hpp"

#include <filesystem>
#include <vector>

namespace uos::selfrep {

enum class Algorithm { SscLp, SscEwzf, Tsc };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

// N x N self-representation matrix with zero diagonal, plus per-column solver
// outcomes and the parameters that produced it.
struct CoefficientMatrix {
  Matrix C;
  std::vector<l1core::SolveStatus> column_status;
  Algorithm algorithm = Algorithm::SscLp;
  double feas_tol = 0.0;
  double lambda_reg = 0.0;
  double alpha_tuning = 0.0;
  bool normalized_columns = false;

  Index failure_count() const;
};

// Step 1 of the LP-based clustering: for each column i, restrict rows to
// Omega_i and solve min ||c||_1 s.t. X_zf[Omega_i, -i] c = X_zf[Omega_i, i].
// threads == 0 uses the global worker count; columns are independent and the
// result does not depend on scheduling.
CoefficientMatrix ssc_lp_coefficients(const model::ObservedDataset& ds,
                                      bool normalize_columns = false,
                                      double feas_tol = 1e-8,
                                      Index threads = 0);

// Lasso baseline: lambda_reg = alpha / max_{i!=j} |X_zf^T X_zf|_{ij}, the
// denominator always over the raw zero-filled columns; each column solves
// the lasso over its own observed rows (entry-wise zero-fill semantics).
// With normalize_columns the dictionary and right-hand side are unit-scaled
// over Omega_i before solving (coefficients rescaled back), mirroring the
// LP variant.  tol is relative; it is scaled per column by 1 + ||A^T y||_inf.
CoefficientMatrix ssc_ewzf_coefficients(const model::ObservedDataset& ds,
                                        double alpha_tuning = 7.34,
                                        double tol = 1e-6, Index threads = 0,
                                        bool normalize_columns = false);

struct TscAffinity {
  Matrix W;
  Index q = 0;
  std::vector<Index> zero_columns;  // unobserved columns, rows/cols left zero
};

// Thresholded-correlation affinity: q = round(sqrt(N_l log N_l)) largest
// |<x_i, x_j>| kept per column of the unit-normalized zero-filled data, raw
// magnitudes as weights, symmetrized by max(W, W^T).
TscAffinity tsc_affinity(const model::ObservedDataset& ds,
                         Index points_per_subspace);

// |C| + |C|^T.
Matrix affinity_from_coefficients(const CoefficientMatrix& cm);

// Writes coeffs.csv plus coeffs_meta.json (algorithm, parameters, statuses).
void write_coefficients(const std::filesystem::path& dir,
                        const CoefficientMatrix& cm);

}  // namespace uos::selfrep
