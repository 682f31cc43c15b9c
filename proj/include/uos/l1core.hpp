#pragma once

#include "uos/types.hpp"

#include <string>

namespace uos::l1core {

enum class SolveStatus { Optimal, Infeasible, NumericalFailure };

const char* to_string(SolveStatus s);

// Outcome of an equality-constrained l1 solve.  `dual` holds the equality
// multipliers nu; it is left empty by the brute-force oracle, which has no
// dual path by construction.
struct L1Solution {
  Vector coefficients;
  double objective = 0.0;
  Vector dual;
  SolveStatus status = SolveStatus::NumericalFailure;
  std::string message;
};

// min ||c||_1  s.t.  A c = y, solved as an LP via the split c = c+ - c-.
// Returns an optimal basic solution.  Optimal is only reported after the
// primal feasibility and strong-duality certificates both pass:
//   ||A c - y||_2          <= feas_tol * (1 + ||y||_2)
//   | ||c||_1 - <y, nu> |  <= dual_gap_tol * (1 + ||c||_1)
//   ||A^T nu||_inf         <= 1 + dual_gap_tol
L1Solution solve_bp(const Eigen::Ref<const Matrix>& A,
                    const Eigen::Ref<const Vector>& y, double feas_tol = 1e-8,
                    double dual_gap_tol = 1e-7);

struct DualDirectionResult {
  Vector lambda;
  double value = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  std::string message;
};

// max <a, lambda>  s.t.  ||B^T lambda||_inf <= 1.  This is the LP dual of
// solve_bp(B, a); the returned lambda is the vertex the simplex terminates
// at.  Unbounded objective (a outside the span of B's columns) is reported
// as Infeasible.
DualDirectionResult solve_dual_direction(const Eigen::Ref<const Vector>& a,
                                         const Eigen::Ref<const Matrix>& B,
                                         double tol = 1e-8);

struct LassoResult {
  Vector coefficients;
  double objective = 0.0;
  // Worst-case subgradient optimality residual at the returned point.
  double residual_inf = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  Index iterations = 0;
};

// min  lambda_reg ||c||_1 + 1/2 ||A c - y||_2^2  via accelerated proximal
// gradient with adaptive restart.  Optimal is reported once, for every j,
// |A_j^T A c - A_j^T y + lambda_reg s_j| <= tol for some s_j in sign(c_j).
LassoResult solve_lasso(const Eigen::Ref<const Matrix>& A,
                        const Eigen::Ref<const Vector>& y, double lambda_reg,
                        double tol = 1e-8, Index max_iter = 20000);

// Exhaustive oracle: enumerates all supports of size <= max_support, keeps
// the exactly-feasible least-squares solutions, returns the minimum-l1 one.
// Exact whenever max_support >= rank(A) since some optimal basic solution
// has at most that many nonzeros.  Desk scale only (m <= 15).
L1Solution brute_force_l1(const Eigen::Ref<const Matrix>& A,
                          const Eigen::Ref<const Vector>& y, Index max_support,
                          double feas_tol = 1e-8);

}  // namespace uos::l1core
