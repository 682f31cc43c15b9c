#include "uos/selfrep.hpp"

#include "uos/dataset_io.hpp"
#include "uos/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace uos::selfrep {

namespace {

// Dictionary for column i: rows Omega_i of the zero-filled data, column i
// removed.  Returns the restricted right-hand side as well.
void restricted_system(const model::ObservedDataset& ds, Index i, Matrix& D,
                       Vector& y) {
  const auto& omega = ds.pattern.masks[static_cast<std::size_t>(i)];
  const Index r = static_cast<Index>(omega.size());
  const Index N = ds.num_columns();
  D.resize(r, N - 1);
  y.resize(r);
  for (Index t = 0; t < r; ++t) {
    const Index row = omega[static_cast<std::size_t>(t)];
    y[t] = ds.zero_filled(row, i);
    Index c = 0;
    for (Index j = 0; j < N; ++j) {
      if (j == i) continue;
      D(t, c++) = ds.zero_filled(row, j);
    }
  }
}

void place_column(Matrix& C, Index i, const Vector& c) {
  const Index N = C.rows();
  Index t = 0;
  for (Index j = 0; j < N; ++j) {
    if (j == i) continue;
    C(j, i) = c[t++];
  }
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::SscLp: return "ssc-lp";
    case Algorithm::SscEwzf: return "ssc-ewzf";
    case Algorithm::Tsc: return "tsc";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "ssc-lp") return Algorithm::SscLp;
  if (s == "ssc-ewzf") return Algorithm::SscEwzf;
  if (s == "tsc") return Algorithm::Tsc;
  throw std::invalid_argument("unknown algorithm: " + s);
}

Index CoefficientMatrix::failure_count() const {
  return static_cast<Index>(
      std::count_if(column_status.begin(), column_status.end(),
                    [](l1core::SolveStatus s) {
                      return s != l1core::SolveStatus::Optimal;
                    }));
}

CoefficientMatrix ssc_lp_coefficients(const model::ObservedDataset& ds,
                                      bool normalize_columns, double feas_tol,
                                      Index threads) {
  const Index N = ds.num_columns();
  if (N < 2)
    throw std::invalid_argument("ssc_lp_coefficients requires N >= 2");

  CoefficientMatrix out;
  out.algorithm = Algorithm::SscLp;
  out.feas_tol = feas_tol;
  out.normalized_columns = normalize_columns;
  out.C = Matrix::Zero(N, N);
  out.column_status.assign(static_cast<std::size_t>(N),
                           l1core::SolveStatus::NumericalFailure);

  parallel_for(
      N,
      [&](Index i) {
        Matrix D;
        Vector y;
        restricted_system(ds, i, D, y);
        if (D.cwiseAbs().maxCoeff() == 0.0) {
          // Empty effective dictionary; nothing to represent against.
          out.column_status[static_cast<std::size_t>(i)] =
              l1core::SolveStatus::NumericalFailure;
          return;
        }
        Vector scales;
        double y_scale = 1.0;
        if (normalize_columns) {
          scales = D.colwise().norm();
          for (Index j = 0; j < D.cols(); ++j)
            if (scales[j] > 0) D.col(j) /= scales[j];
          y_scale = y.norm();
          if (y_scale > 0) y /= y_scale;
        }
        auto sol = l1core::solve_bp(D, y, feas_tol);
        out.column_status[static_cast<std::size_t>(i)] = sol.status;
        if (sol.status != l1core::SolveStatus::Optimal) return;
        Vector c = sol.coefficients;
        if (normalize_columns)
          for (Index j = 0; j < c.size(); ++j)
            if (scales[j] > 0) c[j] *= y_scale / scales[j];
        place_column(out.C, i, c);
      },
      threads);
  return out;
}

CoefficientMatrix ssc_ewzf_coefficients(const model::ObservedDataset& ds,
                                        double alpha_tuning, double tol,
                                        Index threads,
                                        bool normalize_columns) {
  const Index N = ds.num_columns();
  if (N < 2)
    throw std::invalid_argument("ssc_ewzf_coefficients requires N >= 2");

  // lambda = alpha / max_{i != j} |X_zf^T X_zf|_{ij} over the raw
  // zero-filled columns; 7.34 is an operating point on this scale.
  const Matrix gram = ds.zero_filled.transpose() * ds.zero_filled;
  double gmax = 0.0;
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < N; ++j)
      if (i != j) gmax = std::max(gmax, std::abs(gram(i, j)));
  if (gmax <= 0.0)
    throw std::invalid_argument(
        "ssc_ewzf_coefficients: zero off-diagonal Gram, lambda undefined");
  const double lambda_reg = alpha_tuning / gmax;

  CoefficientMatrix out;
  out.algorithm = Algorithm::SscEwzf;
  out.lambda_reg = lambda_reg;
  out.alpha_tuning = alpha_tuning;
  out.normalized_columns = normalize_columns;
  out.C = Matrix::Zero(N, N);
  out.column_status.assign(static_cast<std::size_t>(N),
                           l1core::SolveStatus::NumericalFailure);

  parallel_for(
      N,
      [&](Index i) {
        Matrix D;
        Vector y;
        restricted_system(ds, i, D, y);
        Vector scales;
        double y_scale = 1.0;
        if (normalize_columns) {
          scales = D.colwise().norm();
          for (Index j = 0; j < D.cols(); ++j)
            if (scales[j] > 0) D.col(j) /= scales[j];
          y_scale = y.norm();
          if (y_scale > 0) y /= y_scale;
        }
        // tol is relative; scale by the gradient magnitude at zero.
        const double tol_abs =
            tol * (1.0 + (D.transpose() * y).cwiseAbs().maxCoeff());
        auto sol = l1core::solve_lasso(D, y, lambda_reg, tol_abs);
        out.column_status[static_cast<std::size_t>(i)] = sol.status;
        if (sol.status != l1core::SolveStatus::Optimal) return;
        Vector c = sol.coefficients;
        if (normalize_columns)
          for (Index j = 0; j < c.size(); ++j)
            if (scales[j] > 0) c[j] *= y_scale / scales[j];
        place_column(out.C, i, c);
      },
      threads);
  return out;
}

TscAffinity tsc_affinity(const model::ObservedDataset& ds,
                         Index points_per_subspace) {
  const Index N = ds.num_columns();
  if (points_per_subspace < 1)
    throw std::invalid_argument("tsc_affinity requires N_l >= 1");

  TscAffinity out;
  const double nl = static_cast<double>(points_per_subspace);
  const Index q_raw =
      static_cast<Index>(std::llround(std::sqrt(nl * std::log(nl))));
  out.q = std::clamp<Index>(q_raw, 1, N - 1);

  Matrix Xn = ds.zero_filled;
  for (Index j = 0; j < N; ++j) {
    const double norm = Xn.col(j).norm();
    if (norm > 0)
      Xn.col(j) /= norm;
    else
      out.zero_columns.push_back(j);
  }
  Matrix corr = (Xn.transpose() * Xn).cwiseAbs();
  corr.diagonal().setZero();

  out.W = Matrix::Zero(N, N);
  std::vector<Index> order(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i) {
    std::iota(order.begin(), order.end(), Index{0});
    // Ties broken by index so the result is scheduling-independent.
    std::partial_sort(order.begin(), order.begin() + out.q, order.end(),
                      [&](Index a, Index b) {
                        if (corr(a, i) != corr(b, i))
                          return corr(a, i) > corr(b, i);
                        return a < b;
                      });
    for (Index t = 0; t < out.q; ++t) {
      const Index j = order[static_cast<std::size_t>(t)];
      out.W(j, i) = corr(j, i);
    }
  }
  out.W = out.W.cwiseMax(out.W.transpose().eval());
  return out;
}

Matrix affinity_from_coefficients(const CoefficientMatrix& cm) {
  return cm.C.cwiseAbs() + cm.C.cwiseAbs().transpose();
}

void write_coefficients(const std::filesystem::path& dir,
                        const CoefficientMatrix& cm) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "coeffs.csv");
    if (!csv) throw std::runtime_error("cannot write coeffs.csv");
    for (Index r = 0; r < cm.C.rows(); ++r) {
      for (Index c = 0; c < cm.C.cols(); ++c) {
        if (c > 0) csv << ',';
        csv << model::format_double(cm.C(r, c));
      }
      csv << '\n';
    }
  }
  nlohmann::ordered_json j;
  j["algorithm"] = to_string(cm.algorithm);
  nlohmann::ordered_json params;
  switch (cm.algorithm) {
    case Algorithm::SscLp:
      params["feas_tol"] = cm.feas_tol;
      params["normalize_columns"] = cm.normalized_columns;
      break;
    case Algorithm::SscEwzf:
      params["alpha_tuning"] = cm.alpha_tuning;
      params["lambda_reg"] = cm.lambda_reg;
      break;
    case Algorithm::Tsc:
      break;
  }
  j["parameters"] = params;
  std::vector<std::string> statuses;
  statuses.reserve(cm.column_status.size());
  for (const auto s : cm.column_status) statuses.emplace_back(l1core::to_string(s));
  j["column_status"] = statuses;
  j["failures"] = cm.failure_count();
  std::ofstream mj(dir / "coeffs_meta.json");
  if (!mj) throw std::runtime_error("cannot write coeffs_meta.json");
  mj << j.dump(2) << '\n';
}

}  // namespace uos::selfrep
