#include "uos/l1core.hpp"

#include "uos/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

namespace uos::l1core {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateTol = 1e-11;

// Two-phase primal simplex specialized to basis pursuit,
//   min ||u||_1  s.t.  D u = y,
// on the split u = u+ - u-.  The split matrix [D, -D] is never materialized:
// column ids [0, m) are +D_j, [m, 2m) are -D_{j-m}, [2m, 2m+r) are the
// phase-1 artificials e_{id-2m}.  The basis inverse is kept explicitly
// (r is small) and refactorized periodically and at every phase boundary.
class BpSimplex {
 public:
  enum class Outcome { Optimal, Infeasible, Failure };

  BpSimplex(const Eigen::Ref<const Matrix>& D,
            const Eigen::Ref<const Vector>& y)
      : r_(D.rows()), m_(D.cols()), D_(D), b_(y), rowsign_(Vector::Ones(r_)) {
    for (Index i = 0; i < r_; ++i)
      if (b_[i] < 0) {
        b_[i] = -b_[i];
        D_.row(i) = -D_.row(i);
        rowsign_[i] = -1.0;
      }
    basis_.resize(static_cast<std::size_t>(r_));
    for (Index i = 0; i < r_; ++i)
      basis_[static_cast<std::size_t>(i)] = 2 * m_ + i;
    B_inv_ = Matrix::Identity(r_, r_);
    x_B_ = b_;
    is_basic_.assign(static_cast<std::size_t>(2 * m_), 0);
  }

  Outcome run(double feas_tol, std::string* message) {
    const double b_scale = 1.0 + b_.norm();
    const Index max_iter = 500 + 60 * (r_ + 4);

    if (!iterate(/*phase1=*/true, max_iter, message)) return Outcome::Failure;
    refactorize();
    if (phase1_objective() > feas_tol * b_scale) {
      if (message) *message = "phase-1 optimum positive: system infeasible";
      return Outcome::Infeasible;
    }
    drive_out_artificials();

    if (!iterate(/*phase1=*/false, max_iter, message)) return Outcome::Failure;
    refactorize();
    return Outcome::Optimal;
  }

  Vector primal() const {
    Vector u = Vector::Zero(m_);
    for (Index i = 0; i < r_; ++i) {
      const Index id = basis_[static_cast<std::size_t>(i)];
      if (id < m_)
        u[id] += x_B_[i];
      else if (id < 2 * m_)
        u[id - m_] -= x_B_[i];
    }
    return u;
  }

  // Equality multipliers for the original (unflipped) rows.
  Vector dual() const {
    const Vector y_dual = B_inv_.transpose() * basic_costs(/*phase1=*/false);
    return rowsign_.cwiseProduct(y_dual);
  }

 private:
  Vector basic_costs(bool phase1) const {
    Vector c(r_);
    for (Index i = 0; i < r_; ++i) {
      const Index id = basis_[static_cast<std::size_t>(i)];
      const bool artificial = id >= 2 * m_;
      c[i] = phase1 ? (artificial ? 1.0 : 0.0) : (artificial ? 0.0 : 1.0);
    }
    return c;
  }

  double phase1_objective() const {
    double obj = 0.0;
    for (Index i = 0; i < r_; ++i)
      if (basis_[static_cast<std::size_t>(i)] >= 2 * m_) obj += x_B_[i];
    return obj;
  }

  Vector column(Index id) const {
    if (id < m_) return D_.col(id);
    if (id < 2 * m_) return -D_.col(id - m_);
    Vector e = Vector::Zero(r_);
    e[id - 2 * m_] = 1.0;
    return e;
  }

  void refactorize() {
    Matrix B(r_, r_);
    for (Index i = 0; i < r_; ++i)
      B.col(i) = column(basis_[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Matrix> lu(B);
    B_inv_ = lu.inverse();
    x_B_ = B_inv_ * b_;
    for (Index i = 0; i < r_; ++i)
      if (x_B_[i] < 0 && x_B_[i] > -kDegenerateTol * (1.0 + b_.norm()))
        x_B_[i] = 0.0;
  }

  // Entering column: Dantzig rule (most violating) or Bland (smallest id).
  // Returns -1 at optimality.
  Index price(bool phase1, bool bland) const {
    const Vector y_dual = B_inv_.transpose() * basic_costs(phase1);
    const Vector t = D_.transpose() * y_dual;
    const double cost = phase1 ? 0.0 : 1.0;
    const double tol = kPivotTol * (phase1 ? 1.0 : 1.0 + y_dual.cwiseAbs().maxCoeff());
    if (bland) {
      for (Index j = 0; j < m_; ++j)
        if (!is_basic_[static_cast<std::size_t>(j)] && t[j] - cost > tol)
          return j;
      for (Index j = 0; j < m_; ++j)
        if (!is_basic_[static_cast<std::size_t>(m_ + j)] && -t[j] - cost > tol)
          return m_ + j;
      return -1;
    }
    Index best = -1;
    double best_violation = tol;
    for (Index j = 0; j < m_; ++j) {
      const double vplus = t[j] - cost;
      if (vplus > best_violation && !is_basic_[static_cast<std::size_t>(j)]) {
        best_violation = vplus;
        best = j;
      }
      const double vminus = -t[j] - cost;
      if (vminus > best_violation &&
          !is_basic_[static_cast<std::size_t>(m_ + j)]) {
        best_violation = vminus;
        best = m_ + j;
      }
    }
    return best;
  }

  // One simplex phase; returns false on iteration overrun or numerical
  // breakdown.
  bool iterate(bool phase1, Index max_iter, std::string* message) {
    bool bland = false;
    Index degenerate_run = 0;
    Index since_refactor = 0;
    Index optimality_retries = 0;

    for (Index it = 0; it < max_iter; ++it) {
      const Index entering = price(phase1, bland);
      if (entering < 0) {
        // Confirm optimality against a fresh factorization; drift in the
        // updated inverse can hide violations.
        refactorize();
        since_refactor = 0;
        if (price(phase1, bland) < 0) return true;
        if (++optimality_retries > 4) return true;
        continue;
      }

      const Vector a = column(entering);
      const Vector w = B_inv_ * a;

      Index leaving = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < r_; ++i) {
        if (w[i] > kPivotTol) {
          const double ratio = std::max(x_B_[i], 0.0) / w[i];
          if (ratio < theta - 1e-12 ||
              (ratio < theta + 1e-12 &&
               (leaving < 0 || basis_[static_cast<std::size_t>(i)] <
                                   basis_[static_cast<std::size_t>(leaving)]))) {
            theta = ratio;
            leaving = i;
          }
        }
      }
      if (leaving < 0) {
        if (message)
          *message = phase1 ? "phase-1 ray detected (numerical breakdown)"
                            : "unbounded l1 objective (numerical breakdown)";
        return false;
      }

      pivot(entering, leaving, w, theta);
      if (++since_refactor >= 64) {
        refactorize();
        since_refactor = 0;
      }

      if (theta <= kDegenerateTol) {
        if (++degenerate_run > 2 * (r_ + 8)) bland = true;
      } else {
        degenerate_run = 0;
      }
    }
    if (message) *message = "simplex iteration limit reached";
    return false;
  }

  void pivot(Index entering, Index leaving, const Vector& w, double theta) {
    const Index old_id = basis_[static_cast<std::size_t>(leaving)];
    if (old_id < 2 * m_) is_basic_[static_cast<std::size_t>(old_id)] = 0;
    if (entering < 2 * m_) is_basic_[static_cast<std::size_t>(entering)] = 1;
    basis_[static_cast<std::size_t>(leaving)] = entering;

    x_B_ -= theta * w;
    x_B_[leaving] = theta;
    for (Index i = 0; i < r_; ++i)
      if (i != leaving && x_B_[i] < 0 && x_B_[i] > -1e-10) x_B_[i] = 0.0;

    B_inv_.row(leaving) /= w[leaving];
    for (Index i = 0; i < r_; ++i) {
      if (i == leaving) continue;
      const double f = w[i];
      if (f != 0.0) B_inv_.row(i) -= f * B_inv_.row(leaving);
    }
  }

  // After phase 1, pivot basic artificials onto any usable real column; rows
  // with no usable column are redundant and keep their artificial at zero.
  void drive_out_artificials() {
    for (Index i = 0; i < r_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < 2 * m_) continue;
      const Vector rho = B_inv_.row(i).transpose();
      const Vector s = D_.transpose() * rho;
      Index pick = -1;
      double best = 1e-7;
      for (Index j = 0; j < m_; ++j) {
        if (is_basic_[static_cast<std::size_t>(j)] ||
            is_basic_[static_cast<std::size_t>(m_ + j)])
          continue;
        if (std::abs(s[j]) > best) {
          best = std::abs(s[j]);
          pick = j;
        }
      }
      if (pick < 0) continue;
      const Vector w = B_inv_ * column(pick);
      pivot(pick, i, w, 0.0);
    }
  }

  Index r_, m_;
  Matrix D_;
  Vector b_;
  Vector rowsign_;
  std::vector<Index> basis_;
  std::vector<char> is_basic_;
  Matrix B_inv_;
  Vector x_B_;
};

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

L1Solution solve_bp(const Eigen::Ref<const Matrix>& A,
                    const Eigen::Ref<const Vector>& y, double feas_tol,
                    double dual_gap_tol) {
  const Index r = A.rows();
  const Index m = A.cols();
  if (r < 1 || m < 1)
    throw std::invalid_argument("solve_bp requires r >= 1 and m >= 1");
  if (y.size() != r)
    throw std::invalid_argument("solve_bp: dimension mismatch between A and y");

  L1Solution sol;
  // Degenerate right-hand side short-circuits the LP entirely.
  if (y.norm() == 0.0) {
    sol.coefficients = Vector::Zero(m);
    sol.objective = 0.0;
    sol.dual = Vector::Zero(r);
    sol.status = SolveStatus::Optimal;
    return sol;
  }

  BpSimplex simplex(A, y);
  std::string message;
  const auto outcome = simplex.run(feas_tol, &message);
  if (outcome == BpSimplex::Outcome::Infeasible) {
    sol.status = SolveStatus::Infeasible;
    sol.message = message;
    return sol;
  }
  if (outcome == BpSimplex::Outcome::Failure) {
    sol.status = SolveStatus::NumericalFailure;
    sol.message = message;
    return sol;
  }

  sol.coefficients = simplex.primal();
  sol.dual = simplex.dual();
  sol.objective = sol.coefficients.lpNorm<1>();

  // Certify before reporting Optimal: primal feasibility, strong duality and
  // dual feasibility.  Weak duality <y,nu> <= ||c||_1 is implied by the gap
  // bound below.
  const double feas = (A * sol.coefficients - y).norm();
  if (feas > feas_tol * (1.0 + y.norm())) {
    sol.status = SolveStatus::NumericalFailure;
    sol.message = "feasibility certificate failed (residual " +
                  std::to_string(feas) + ")";
    return sol;
  }
  const double gap = std::abs(sol.objective - y.dot(sol.dual));
  if (gap > dual_gap_tol * (1.0 + sol.objective)) {
    sol.status = SolveStatus::NumericalFailure;
    sol.message = "duality-gap certificate failed (gap " + std::to_string(gap) +
                  ")";
    return sol;
  }
  const double dual_inf = (A.transpose() * sol.dual).cwiseAbs().maxCoeff();
  if (dual_inf > 1.0 + dual_gap_tol) {
    sol.status = SolveStatus::NumericalFailure;
    sol.message = "dual feasibility certificate failed (|A^T nu|_inf " +
                  std::to_string(dual_inf) + ")";
    return sol;
  }
  sol.status = SolveStatus::Optimal;
  return sol;
}

DualDirectionResult solve_dual_direction(const Eigen::Ref<const Vector>& a,
                                         const Eigen::Ref<const Matrix>& B,
                                         double tol) {
  DualDirectionResult out;
  if (B.rows() != a.size())
    throw std::invalid_argument("solve_dual_direction: dimension mismatch");
  if (a.norm() == 0.0) {
    out.lambda = Vector::Zero(a.size());
    out.value = 0.0;
    out.status = SolveStatus::Optimal;
    return out;
  }
  // max <a, l> s.t. ||B^T l||_inf <= 1 is the LP dual of min ||u||_1 s.t.
  // B u = a; the simplex multipliers at the optimal basis are a vertex of
  // the constraint polytope.  An infeasible primal means the dual ray is
  // unbounded, i.e. a is outside the span of B's columns.
  const L1Solution bp = solve_bp(B, a, tol, std::max(tol, 1e-9));
  if (bp.status == SolveStatus::Infeasible) {
    out.status = SolveStatus::Infeasible;
    out.message = "dual objective unbounded: target outside column span";
    return out;
  }
  if (bp.status != SolveStatus::Optimal) {
    out.status = SolveStatus::NumericalFailure;
    out.message = bp.message;
    return out;
  }
  out.lambda = bp.dual;
  out.value = a.dot(bp.dual);
  out.status = SolveStatus::Optimal;
  return out;
}

namespace {

double soft_threshold(double v, double thr) {
  if (v > thr) return v - thr;
  if (v < -thr) return v + thr;
  return 0.0;
}

// Worst-case subgradient optimality residual over the given coordinates.
double lasso_kkt_residual(const Vector& x, const Vector& grad,
                          double lambda_reg) {
  double worst = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    const double g = grad[j];
    double rj;
    if (x[j] > 0.0)
      rj = std::abs(g + lambda_reg);
    else if (x[j] < 0.0)
      rj = std::abs(g - lambda_reg);
    else
      rj = std::max(std::abs(g) - lambda_reg, 0.0);
    worst = std::max(worst, rj);
  }
  return worst;
}

// Accelerated proximal gradient with adaptive restart on a dense problem.
// Returns the iterate and its KKT residual; iterations are appended to
// `iterations`.
std::pair<Vector, double> fista_core(const Matrix& A, const Vector& y,
                                     double lambda_reg, double tol,
                                     Index max_iter, Index& iterations) {
  const Index m = A.cols();
  const Vector Aty = A.transpose() * y;

  double lip;
  {
    RngStream g = RngStream::derive(0x11A550u, rngtag::kPower,
                                    static_cast<std::uint64_t>(A.rows()),
                                    static_cast<std::uint64_t>(m));
    Vector v = g.gaussian_vector(m);
    v.normalize();
    double est = 0.0;
    for (int it = 0; it < 30; ++it) {
      Vector w = A.transpose() * (A * v);
      est = w.norm();
      if (est <= 1e-300) break;
      v = w / est;
    }
    lip = std::max(est * 1.02, 1e-12);
  }
  const double step = 1.0 / lip;

  Vector x = Vector::Zero(m);
  Vector z = x;
  double t = 1.0;
  Vector grad(m), x_new(m);
  double res = lasso_kkt_residual(x, (-Aty).eval(), lambda_reg);
  if (res <= tol) return {x, res};

  for (Index it = 1; it <= max_iter; ++it) {
    grad.noalias() = A.transpose() * (A * z) - Aty;
    for (Index j = 0; j < m; ++j)
      x_new[j] = soft_threshold(z[j] - step * grad[j], step * lambda_reg);

    // Adaptive restart keeps the momentum from overshooting.
    if ((z - x_new).dot(x_new - x) > 0.0) {
      t = 1.0;
      z = x_new;
    } else {
      const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      z = x_new + ((t - 1.0) / t_new) * (x_new - x);
      t = t_new;
    }
    x = x_new;
    ++iterations;

    if (it % 10 == 0 || it == max_iter) {
      const Vector gx = A.transpose() * (A * x) - Aty;
      res = lasso_kkt_residual(x, gx, lambda_reg);
      if (res <= tol) return {x, res};
    }
  }
  return {x, res};
}

// Lasso homotopy (LARS with drops) from lambda_max down to lambda_target.
// Exact on generic data and fast when the active set stays small; returns
// nothing on degeneracy so the caller can fall back to proximal iterations.
std::optional<Vector> lars_lasso(const Matrix& A, const Vector& y,
                                 double lambda_target) {
  const Index r = A.rows();
  const Index m = A.cols();
  const double scale = 1.0 + y.norm();

  Vector c = A.transpose() * y;  // correlations at x = 0
  Index j0 = 0;
  double lambda = c.cwiseAbs().maxCoeff(&j0);
  if (lambda <= lambda_target) return Vector::Zero(m);

  std::vector<Index> active;
  std::vector<double> sign;
  std::vector<char> is_active(static_cast<std::size_t>(m), 0);
  active.push_back(j0);
  sign.push_back(c[j0] > 0 ? 1.0 : -1.0);
  is_active[static_cast<std::size_t>(j0)] = 1;

  Vector x = Vector::Zero(m);
  Matrix Acols(r, std::min(r + 8, m));
  Acols.col(0) = A.col(j0);

  const Index max_events = 30 * std::min(r, m) + 200;
  for (Index event = 0; event < max_events; ++event) {
    const Index k = static_cast<Index>(active.size());
    if (k > std::min(r, m)) return std::nullopt;
    if (k > Acols.cols()) {
      Matrix grown(r, std::min<Index>(2 * Acols.cols(), m));
      grown.leftCols(Acols.cols()) = Acols;
      Acols = std::move(grown);
    }

    const auto Ak = Acols.leftCols(k);
    const Matrix G = Ak.transpose() * Ak;
    Eigen::LLT<Matrix> llt(G);
    if (llt.info() != Eigen::Success) return std::nullopt;
    Vector s(k);
    for (Index t = 0; t < k; ++t) s[t] = sign[static_cast<std::size_t>(t)];
    const Vector d = llt.solve(s);
    const Vector v = Ak * d;
    const Vector w = A.transpose() * v;

    // Largest lambda below the current one at which the active set changes.
    double lambda_next = lambda_target;
    Index join = -1, drop = -1;
    double join_sign = 0.0;
    for (Index j = 0; j < m; ++j) {
      if (is_active[static_cast<std::size_t>(j)]) continue;
      const double denom_p = 1.0 - w[j];
      const double denom_m = 1.0 + w[j];
      if (std::abs(denom_p) > 1e-12) {
        const double cand = (c[j] - lambda * w[j]) / denom_p;
        if (cand > lambda_next && cand < lambda - 1e-12 * scale) {
          lambda_next = cand;
          join = j;
          join_sign = 1.0;
          drop = -1;
        }
      }
      if (std::abs(denom_m) > 1e-12) {
        const double cand = (lambda * w[j] - c[j]) / denom_m;
        if (cand > lambda_next && cand < lambda - 1e-12 * scale) {
          lambda_next = cand;
          join = j;
          join_sign = -1.0;
          drop = -1;
        }
      }
    }
    for (Index t = 0; t < k; ++t) {
      if (d[t] == 0.0) continue;
      const Index j = active[static_cast<std::size_t>(t)];
      const double cand = lambda + x[j] / d[t];
      if (cand > lambda_next && cand < lambda - 1e-12 * scale) {
        lambda_next = cand;
        drop = t;
        join = -1;
      }
    }

    const double step = lambda - lambda_next;
    for (Index t = 0; t < k; ++t)
      x[active[static_cast<std::size_t>(t)]] += step * d[t];
    c -= step * w;
    lambda = lambda_next;

    if (join < 0 && drop < 0) break;  // reached lambda_target
    if (join >= 0) {
      active.push_back(join);
      sign.push_back(join_sign);
      is_active[static_cast<std::size_t>(join)] = 1;
      Acols.col(k) = A.col(join);
    } else {
      const Index j = active[static_cast<std::size_t>(drop)];
      x[j] = 0.0;
      is_active[static_cast<std::size_t>(j)] = 0;
      active.erase(active.begin() + drop);
      sign.erase(sign.begin() + drop);
      for (Index t = drop; t + 1 < k; ++t) Acols.col(t) = Acols.col(t + 1);
    }
  }

  // Polish at the target to remove the accumulated drift: on the final
  // active set, G x = A^T y - lambda s exactly.
  const Index k = static_cast<Index>(active.size());
  if (k > 0) {
    const auto Ak = Acols.leftCols(k);
    Eigen::LLT<Matrix> llt(Matrix(Ak.transpose() * Ak));
    if (llt.info() != Eigen::Success) return std::nullopt;
    Vector rhs = Ak.transpose() * y;
    for (Index t = 0; t < k; ++t)
      rhs[t] -= lambda_target * sign[static_cast<std::size_t>(t)];
    const Vector xa = llt.solve(rhs);
    for (Index t = 0; t < k; ++t) {
      // A polished coefficient whose sign flipped marks a degenerate path.
      if (xa[t] * sign[static_cast<std::size_t>(t)] < -1e-9 * scale)
        return std::nullopt;
      x[active[static_cast<std::size_t>(t)]] = xa[t];
    }
  }
  return x;
}

}  // namespace

LassoResult solve_lasso(const Eigen::Ref<const Matrix>& A,
                        const Eigen::Ref<const Vector>& y, double lambda_reg,
                        double tol, Index max_iter) {
  if (!(lambda_reg > 0.0))
    throw std::invalid_argument("solve_lasso requires lambda_reg > 0");
  if (A.rows() != y.size())
    throw std::invalid_argument("solve_lasso: dimension mismatch");
  const Index m = A.cols();

  LassoResult out;
  out.coefficients = Vector::Zero(m);

  const Vector Aty = A.transpose() * y;
  const double lambda_max = Aty.cwiseAbs().maxCoeff();

  // Full shrinkage: x = 0 is already optimal.
  if (lambda_reg >= lambda_max) {
    out.residual_inf = std::max(lambda_max - lambda_reg, 0.0);
    out.status = SolveStatus::Optimal;
    out.objective = 0.5 * y.squaredNorm();
    return out;
  }

  // Fast path: exact homotopy, accepted only if its full KKT residual
  // certifies.
  if (auto hx = lars_lasso(A, y, lambda_reg)) {
    const Vector grad = A.transpose() * (A * *hx) - Aty;
    const double res = lasso_kkt_residual(*hx, grad, lambda_reg);
    if (res <= tol) {
      out.coefficients = std::move(*hx);
      out.residual_inf = res;
      out.objective = lambda_reg * out.coefficients.lpNorm<1>() +
                      0.5 * (A * out.coefficients - y).squaredNorm();
      out.status = SolveStatus::Optimal;
      return out;
    }
  }

  // Strong-rule screening: solve on a small working set, then verify the
  // subgradient conditions over every coordinate; violators join the set.
  // The final certificate is always the full-problem residual.
  std::vector<char> in_set(static_cast<std::size_t>(m), 0);
  std::vector<Index> working;
  const double strong_cut = 2.0 * lambda_reg - lambda_max;
  for (Index j = 0; j < m; ++j)
    if (std::abs(Aty[j]) >= strong_cut) {
      in_set[static_cast<std::size_t>(j)] = 1;
      working.push_back(j);
    }
  if (working.empty()) {
    Index argmax = 0;
    Aty.cwiseAbs().maxCoeff(&argmax);
    in_set[static_cast<std::size_t>(argmax)] = 1;
    working.push_back(argmax);
  }

  Vector x = Vector::Zero(m);
  for (int round = 0; round < 12; ++round) {
    if (static_cast<Index>(working.size()) == m) break;
    Matrix Aw(A.rows(), static_cast<Index>(working.size()));
    for (std::size_t t = 0; t < working.size(); ++t)
      Aw.col(static_cast<Index>(t)) = A.col(working[t]);
    auto [xw, sub_res] =
        fista_core(Aw, y, lambda_reg, tol, max_iter, out.iterations);
    x.setZero();
    for (std::size_t t = 0; t < working.size(); ++t)
      x[working[t]] = xw[static_cast<Index>(t)];

    const Vector grad = A.transpose() * (A * x) - Aty;
    const double res = lasso_kkt_residual(x, grad, lambda_reg);
    if (res <= tol) {
      out.coefficients = x;
      out.residual_inf = res;
      out.objective =
          lambda_reg * x.lpNorm<1>() + 0.5 * (A * x - y).squaredNorm();
      out.status = SolveStatus::Optimal;
      return out;
    }
    bool grew = false;
    for (Index j = 0; j < m; ++j) {
      if (in_set[static_cast<std::size_t>(j)]) continue;
      if (std::abs(grad[j]) > lambda_reg + 0.5 * tol) {
        in_set[static_cast<std::size_t>(j)] = 1;
        working.push_back(j);
        grew = true;
      }
    }
    if (!grew) break;  // subproblem itself is under-converged; go dense
  }

  // Dense fallback on the full problem.
  auto [xf, res] = fista_core(A, y, lambda_reg, tol, max_iter, out.iterations);
  out.coefficients = xf;
  out.residual_inf = res;
  out.objective =
      lambda_reg * xf.lpNorm<1>() + 0.5 * (A * xf - y).squaredNorm();
  out.status = res <= tol ? SolveStatus::Optimal : SolveStatus::NumericalFailure;
  return out;
}

L1Solution brute_force_l1(const Eigen::Ref<const Matrix>& A,
                          const Eigen::Ref<const Vector>& y, Index max_support,
                          double feas_tol) {
  const Index r = A.rows();
  const Index m = A.cols();
  if (m > 15)
    throw std::invalid_argument("brute_force_l1 is desk scale only (m <= 15)");
  if (max_support > r)
    throw std::invalid_argument("brute_force_l1 requires max_support <= rows");
  if (y.size() != r)
    throw std::invalid_argument("brute_force_l1: dimension mismatch");

  L1Solution best;
  best.status = SolveStatus::Infeasible;
  best.message = "no exactly-feasible support found";
  const double feas_bound = feas_tol * (1.0 + y.norm());

  if (y.norm() <= feas_bound) {
    best.coefficients = Vector::Zero(m);
    best.objective = 0.0;
    best.status = SolveStatus::Optimal;
    best.message.clear();
    return best;
  }

  std::vector<Index> support;
  Matrix As(r, std::max<Index>(max_support, 1));

  // Enumerates supports of each size k via the standard combination walk.
  for (Index k = 1; k <= max_support; ++k) {
    support.resize(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) support[static_cast<std::size_t>(i)] = i;
    for (;;) {
      for (Index i = 0; i < k; ++i)
        As.col(i) = A.col(support[static_cast<std::size_t>(i)]);
      const auto block = As.leftCols(k);
      const Vector z = block.colPivHouseholderQr().solve(y);
      if ((block * z - y).norm() <= feas_bound) {
        const double obj = z.lpNorm<1>();
        if (best.status != SolveStatus::Optimal || obj < best.objective) {
          best.coefficients = Vector::Zero(m);
          for (Index i = 0; i < k; ++i)
            best.coefficients[support[static_cast<std::size_t>(i)]] = z[i];
          best.objective = obj;
          best.status = SolveStatus::Optimal;
          best.message.clear();
        }
      }
      // Next combination.
      Index i = k - 1;
      while (i >= 0 && support[static_cast<std::size_t>(i)] == m - k + i) --i;
      if (i < 0) break;
      ++support[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < k; ++j)
        support[static_cast<std::size_t>(j)] =
            support[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

}  // namespace uos::l1core
