#include "uos/certify.hpp"

#include "uos/l1core.hpp"
#include "uos/parallel.hpp"
#include "uos/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace uos::certify {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kFeasSlack = 1e-9;

// Rows omega_i of U with rows outside omega_j zeroed; no SVD attached.
Matrix masked_restriction(const Eigen::Ref<const Matrix>& U,
                          const IndexList& omega_i, const IndexList& omega_j) {
  Matrix V(static_cast<Index>(omega_i.size()), U.cols());
  std::size_t pj = 0;
  for (std::size_t t = 0; t < omega_i.size(); ++t) {
    const Index row = omega_i[t];
    while (pj < omega_j.size() && omega_j[pj] < row) ++pj;
    if (pj < omega_j.size() && omega_j[pj] == row)
      V.row(static_cast<Index>(t)) = U.row(row);
    else
      V.row(static_cast<Index>(t)).setZero();
  }
  return V;
}

double spectral_norm(const Eigen::Ref<const Matrix>& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(M).singularValues()[0];
}

// Walks all d-subsets of columns and all sign patterns with the first sign
// fixed positive (the polytope is symmetric); fn receives each candidate
// vertex solving a_{j_t}^T lambda = s_t.
template <typename Fn>
void for_each_polar_candidate(const Matrix& A, Index first_col, Fn&& fn) {
  const Index d = A.rows();
  const Index m = A.cols();
  std::vector<Index> subset(static_cast<std::size_t>(d));
  Matrix Mt(d, d);
  Vector s(d), lambda(d);

  auto recurse = [&](auto&& self, Index depth, Index next) -> void {
    if (depth == d) {
      for (Index t = 0; t < d; ++t)
        Mt.row(t) = A.col(subset[static_cast<std::size_t>(t)]).transpose();
      Eigen::FullPivLU<Matrix> lu(Mt);
      lu.setThreshold(1e-10);
      if (!lu.isInvertible()) return;
      const Index patterns = Index{1} << (d - 1);
      for (Index bits = 0; bits < patterns; ++bits) {
        s[0] = 1.0;
        for (Index t = 1; t < d; ++t)
          s[t] = (bits >> (t - 1)) & 1 ? -1.0 : 1.0;
        lambda = lu.solve(s);
        fn(lambda);
      }
      return;
    }
    for (Index j = next; j < m - (d - depth - 1); ++j) {
      subset[static_cast<std::size_t>(depth)] = j;
      self(self, depth + 1, j + 1);
    }
  };

  subset[0] = first_col;
  recurse(recurse, 1, first_col + 1);
}

bool spans_ambient(const Matrix& A) {
  if (A.cols() < A.rows()) return false;
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& sv = svd.singularValues();
  return sv[sv.size() - 1] > kRankTol * std::max(1.0, sv[0]);
}

InradiusResult inradius_exact(const Matrix& A) {
  const Index d = A.rows();
  const Index m = A.cols();
  if (d > 4)
    throw std::invalid_argument(
        "inradius: exact polar enumeration requires d <= 4");
  InradiusResult out;
  out.exact = true;
  if (!spans_ambient(A)) {
    // Empty interior; the largest inscribed ball is a point.
    out.rank_deficient = true;
    out.value = 0.0;
    return out;
  }

  const Matrix At = A.transpose();
  std::atomic<double> best{0.0};
  std::vector<double> per_start(static_cast<std::size_t>(m), 0.0);

  parallel_for(m - d + 1, [&](Index j0) {
    double local = 0.0;
    for_each_polar_candidate(A, j0, [&](const Vector& lambda) {
      const double norm = lambda.norm();
      // Only candidates that could raise the circumradius need the
      // feasibility scan.
      if (norm <= std::max(local, best.load(std::memory_order_relaxed)))
        return;
      if ((At * lambda).cwiseAbs().maxCoeff() <= 1.0 + kFeasSlack) {
        local = norm;
        double cur = best.load(std::memory_order_relaxed);
        while (cur < norm &&
               !best.compare_exchange_weak(cur, norm,
                                           std::memory_order_relaxed)) {
        }
      }
    });
    per_start[static_cast<std::size_t>(j0)] = local;
  });

  const double max_norm =
      *std::max_element(per_start.begin(), per_start.end());
  if (max_norm <= 0.0) {
    // Should not happen for a spanning A; report degenerate rather than lie.
    out.rank_deficient = true;
    out.value = 0.0;
    return out;
  }
  out.value = 1.0 / max_norm;
  return out;
}

InradiusResult inradius_sampled(const Matrix& A, Index samples) {
  if (samples < 1)
    throw std::invalid_argument("inradius: sample count must be positive");
  const Index d = A.rows();
  InradiusResult out;
  out.exact = false;

  // Fixed stream so results are reproducible and nested in `samples`.
  RngStream g = RngStream::derive(0x10AD5EEDull, rngtag::kSphere,
                                  static_cast<std::uint64_t>(d),
                                  static_cast<std::uint64_t>(A.cols()));
  const Index block = 512;
  Matrix U(d, block);
  double best = std::numeric_limits<double>::infinity();
  Index done = 0;
  while (done < samples) {
    const Index take = std::min(block, samples - done);
    for (Index c = 0; c < take; ++c) U.col(c) = g.unit_sphere(d);
    const Matrix S = (A.transpose() * U.leftCols(take)).cwiseAbs();
    for (Index c = 0; c < take; ++c)
      best = std::min(best, S.col(c).maxCoeff());
    done += take;
  }
  out.value = best;
  return out;
}

Vector unit_or_throw(const Vector& v) {
  const double n = v.norm();
  if (n <= 0) throw std::invalid_argument("zero dual direction");
  return v / n;
}

std::string flag(bool b) { return b ? "yes" : "no"; }

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::NotCertified: return "not_certified";
    case Verdict::HypothesisViolated: return "hypothesis_violated";
  }
  return "unknown";
}

RestrictedBasis restricted_basis(const Eigen::Ref<const Matrix>& U,
                                 const IndexList& omega_i,
                                 const IndexList& omega_j,
                                 Index subspace_index) {
  if (omega_i.empty() || omega_j.empty())
    throw std::invalid_argument("restricted_basis: empty mask");
  RestrictedBasis rb;
  rb.V = masked_restriction(U, omega_i, omega_j);
  rb.subspace = subspace_index;
  rb.rows = omega_i;
  Eigen::JacobiSVD<Matrix> svd(rb.V,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  rb.Q = svd.matrixU();
  rb.sigma = svd.singularValues();
  rb.R = svd.matrixV();
  return rb;
}

std::vector<Vector> enumerate_polar_vertices(
    const Eigen::Ref<const Matrix>& A) {
  const Index d = A.rows();
  const Index m = A.cols();
  if (d > 4)
    throw std::invalid_argument(
        "enumerate_polar_vertices requires d <= 4");
  std::vector<Vector> vertices;
  if (!spans_ambient(A)) return vertices;
  const Matrix Amat = A;
  const Matrix At = A.transpose();
  for (Index j0 = 0; j0 + d <= m; ++j0) {
    for_each_polar_candidate(Amat, j0, [&](const Vector& lambda) {
      if ((At * lambda).cwiseAbs().maxCoeff() <= 1.0 + kFeasSlack) {
        // Deduplicate: vertices repeat across subsets when more than d
        // constraints are active.
        for (const auto& v : vertices)
          if ((v - lambda).cwiseAbs().maxCoeff() <= 1e-8) return;
        vertices.push_back(lambda);
      }
    });
  }
  return vertices;
}

InradiusResult inradius(const Eigen::Ref<const Matrix>& A,
                        InradiusMethod method, Index samples) {
  if (A.rows() < 1 || A.cols() < 1)
    throw std::invalid_argument("inradius: empty matrix");
  return method == InradiusMethod::ExactPolarVertices
             ? inradius_exact(A)
             : inradius_sampled(A, samples);
}

TildeDictionary tilde_dictionary(const model::SubspaceEnsemble& ensemble,
                                 const model::ObservationPattern& pattern,
                                 Index i, Index ell) {
  const auto& U = ensemble.bases[static_cast<std::size_t>(ell)];
  const auto& Acoef = ensemble.coefficients[static_cast<std::size_t>(ell)];
  const Index Nl = ensemble.points_per_subspace[static_cast<std::size_t>(ell)];
  const Index gi = ensemble.column_offset(ell) + i;
  const auto& omega_i = pattern.masks[static_cast<std::size_t>(gi)];

  const RestrictedBasis rb = restricted_basis(U, omega_i, omega_i, ell);

  TildeDictionary out;
  out.A_tilde.resize(rb.Q.cols(), Nl - 1);
  out.column_ids.reserve(static_cast<std::size_t>(Nl - 1));
  Index c = 0;
  for (Index j = 0; j < Nl; ++j) {
    if (j == i) continue;
    const Index gj = ensemble.column_offset(ell) + j;
    const Matrix Vij =
        masked_restriction(U, omega_i, pattern.masks[static_cast<std::size_t>(gj)]);
    out.A_tilde.col(c) = rb.Q.transpose() * (Vij * Acoef.col(j));
    out.column_ids.push_back(j);
    ++c;
  }
  out.a_hat = rb.sigma.asDiagonal() * (rb.R.transpose() * Acoef.col(i));
  return out;
}

CertificateEntry check_case1(const model::SubspaceEnsemble& ensemble,
                             const IndexList& omega, Index i, Index ell,
                             const CheckOptions& opts) {
  const Index d = ensemble.subspace_dim;
  CertificateEntry e;
  e.subspace = ell;
  e.point = ensemble.column_offset(ell) + i;

  if (static_cast<Index>(omega.size()) < d) {
    e.verdict = Verdict::HypothesisViolated;
    e.note = "mask smaller than subspace dimension";
    return e;
  }
  const auto& U = ensemble.bases[static_cast<std::size_t>(ell)];
  const RestrictedBasis rb = restricted_basis(U, omega, omega, ell);
  if (rb.sigma[rb.sigma.size() - 1] <= kRankTol * std::max(1.0, rb.sigma[0])) {
    e.verdict = Verdict::HypothesisViolated;
    e.note = "restricted basis rank-deficient";
    return e;
  }

  const auto& Acoef = ensemble.coefficients[static_cast<std::size_t>(ell)];
  const Index Nl = ensemble.points_per_subspace[static_cast<std::size_t>(ell)];
  if (Nl < 2) {
    e.verdict = Verdict::NotCertified;
    e.note = "no co-subspace points";
    return e;
  }
  Matrix A_minus(d, Nl - 1);
  {
    Index c = 0;
    for (Index j = 0; j < Nl; ++j)
      if (j != i) A_minus.col(c++) = Acoef.col(j);
  }

  const auto dd = l1core::solve_dual_direction(Acoef.col(i), A_minus);
  if (dd.status != l1core::SolveStatus::Optimal) {
    e.verdict = Verdict::NotCertified;
    e.note = "dual direction LP: " + dd.message;
    return e;
  }
  const Vector lambda_hat = unit_or_throw(dd.lambda);

  // pinv(V) = R Sigma^+ Q^T.
  Vector sig_inv = rb.sigma;
  for (Index t = 0; t < sig_inv.size(); ++t) sig_inv[t] = 1.0 / sig_inv[t];
  const Matrix pinv = rb.R * sig_inv.asDiagonal() * rb.Q.transpose();

  double max_lhs = 0.0;
  for (Index k = 0; k < ensemble.num_subspaces; ++k) {
    if (k == ell) continue;
    const Matrix Vk =
        masked_restriction(ensemble.bases[static_cast<std::size_t>(k)], omega,
                           omega);
    const Eigen::RowVectorXd row = lambda_hat.transpose() * pinv * Vk;
    const Eigen::RowVectorXd vals =
        (row * ensemble.coefficients[static_cast<std::size_t>(k)]).cwiseAbs();
    for (Index j = 0; j < vals.size(); ++j)
      if (vals[j] > max_lhs) {
        max_lhs = vals[j];
        e.worst_k = k;
        e.worst_j = j;
      }
  }
  e.max_lhs = max_lhs;

  const auto rin = inradius(A_minus, opts.method, opts.samples);
  e.inradius_value = rin.value;
  e.inradius_exact = rin.exact;
  e.verdict = (!rin.rank_deficient && max_lhs < rin.value - opts.cert_margin)
                  ? Verdict::Certified
                  : Verdict::NotCertified;

  if (opts.probe_nonuniqueness) {
    RngStream g = RngStream::derive(0xD0A1u, rngtag::kPerturb,
                                    static_cast<std::uint64_t>(e.point));
    const Vector a2 = Acoef.col(i) + 1e-8 * g.unit_sphere(d);
    const auto dd2 = l1core::solve_dual_direction(a2, A_minus);
    e.lambda_nonunique =
        dd2.status == l1core::SolveStatus::Optimal &&
        (dd2.lambda - dd.lambda).cwiseAbs().maxCoeff() > 1e-4;
  }
  return e;
}

CertificateEntry check_case2(const model::SubspaceEnsemble& ensemble,
                             const model::ObservationPattern& pattern, Index i,
                             Index ell, const CheckOptions& opts) {
  const Index d = ensemble.subspace_dim;
  CertificateEntry e;
  e.subspace = ell;
  e.point = ensemble.column_offset(ell) + i;
  const auto& omega_i = pattern.masks[static_cast<std::size_t>(e.point)];
  if (static_cast<Index>(omega_i.size()) != d)
    throw std::invalid_argument("check_case2 requires |Omega_i| = d");

  const auto& U = ensemble.bases[static_cast<std::size_t>(ell)];
  const RestrictedBasis rb = restricted_basis(U, omega_i, omega_i, ell);
  if (rb.sigma[d - 1] <= kRankTol * std::max(1.0, rb.sigma[0])) {
    e.verdict = Verdict::HypothesisViolated;
    e.note = "Q_i not invertible";
    return e;
  }

  const auto tilde = tilde_dictionary(ensemble, pattern, i, ell);
  if (tilde.A_tilde.cols() < 1) {
    e.verdict = Verdict::NotCertified;
    e.note = "no co-subspace points";
    return e;
  }

  const auto dd = l1core::solve_dual_direction(tilde.a_hat, tilde.A_tilde);
  if (dd.status != l1core::SolveStatus::Optimal) {
    e.verdict = Verdict::NotCertified;
    e.note = "dual direction LP: " + dd.message;
    return e;
  }
  const Vector lambda_hat = unit_or_throw(dd.lambda);
  const Vector g_vec = rb.Q * lambda_hat;  // apply Q_i^T on the left

  double max_lhs = 0.0;
  double max_t1 = 0.0;
  for (Index k = 0; k < ensemble.num_subspaces; ++k) {
    if (k == ell) continue;
    const auto& Uk = ensemble.bases[static_cast<std::size_t>(k)];
    const auto& Ak = ensemble.coefficients[static_cast<std::size_t>(k)];
    const Index offset = ensemble.column_offset(k);
    for (Index j = 0; j < Ak.cols(); ++j) {
      const auto& omega_j =
          pattern.masks[static_cast<std::size_t>(offset + j)];
      const Matrix Vkj = masked_restriction(Uk, omega_i, omega_j);
      const double lhs = std::abs(g_vec.dot(Vkj * Ak.col(j)));
      if (lhs > max_lhs) {
        max_lhs = lhs;
        e.worst_k = k;
        e.worst_j = j;
      }
      max_t1 = std::max(max_t1, spectral_norm(rb.Q.transpose() * Vkj));
    }
  }
  e.max_lhs = max_lhs;
  e.worst_case_t1 = max_t1;

  const auto rin = inradius(tilde.A_tilde, opts.method, opts.samples);
  e.inradius_value = rin.value;
  e.inradius_exact = rin.exact;
  const bool certifiable = !rin.rank_deficient && rin.value > 0;
  e.verdict = (certifiable && max_lhs < rin.value - opts.cert_margin)
                  ? Verdict::Certified
                  : Verdict::NotCertified;
  e.worst_case_pass = certifiable && max_t1 < rin.value - opts.cert_margin;

  if (opts.probe_nonuniqueness) {
    RngStream g = RngStream::derive(0xD0A2u, rngtag::kPerturb,
                                    static_cast<std::uint64_t>(e.point));
    const Vector a2 =
        tilde.a_hat + 1e-8 * g.unit_sphere(tilde.a_hat.size());
    const auto dd2 = l1core::solve_dual_direction(a2, tilde.A_tilde);
    e.lambda_nonunique =
        dd2.status == l1core::SolveStatus::Optimal &&
        (dd2.lambda - dd.lambda).cwiseAbs().maxCoeff() > 1e-4;
  }
  return e;
}

CertificateEntry check_case3(const model::SubspaceEnsemble& ensemble,
                             const model::ObservationPattern& pattern,
                             const model::ObservedDataset& dataset, Index i,
                             Index ell, const CheckOptions& opts) {
  const Index d = ensemble.subspace_dim;
  CertificateEntry e;
  e.subspace = ell;
  e.point = ensemble.column_offset(ell) + i;
  e.note = "in-radius body read as the untransposed column hull";
  const auto& omega_i = pattern.masks[static_cast<std::size_t>(e.point)];
  const Index w = static_cast<Index>(omega_i.size());
  if (w <= d)
    throw std::invalid_argument("check_case3 requires |Omega_i| > d");

  const auto& U = ensemble.bases[static_cast<std::size_t>(ell)];
  const RestrictedBasis rb = restricted_basis(U, omega_i, omega_i, ell);
  if (rb.sigma[d - 1] <= kRankTol * std::max(1.0, rb.sigma[0])) {
    e.verdict = Verdict::HypothesisViolated;
    e.note += "; Q_i rank-deficient";
    return e;
  }

  double max_sum = 0.0;
  double worst_t1 = 0.0, worst_t2 = 0.0;
  for (Index k = 0; k < ensemble.num_subspaces; ++k) {
    if (k == ell) continue;
    const auto& Uk = ensemble.bases[static_cast<std::size_t>(k)];
    const Index offset = ensemble.column_offset(k);
    const Index Nk = ensemble.points_per_subspace[static_cast<std::size_t>(k)];
    for (Index j = 0; j < Nk; ++j) {
      const auto& omega_j =
          pattern.masks[static_cast<std::size_t>(offset + j)];
      const Matrix Vkj = masked_restriction(Uk, omega_i, omega_j);
      const Matrix proj = rb.Q.transpose() * Vkj;
      const double t1 = spectral_norm(proj);
      const double t2 = spectral_norm(Vkj - rb.Q * proj);
      if (t1 + t2 > max_sum) {
        max_sum = t1 + t2;
        worst_t1 = t1;
        worst_t2 = t2;
        e.worst_k = k;
        e.worst_j = j;
      }
    }
  }
  e.max_lhs = max_sum;

  // Same-subspace zero-filled columns restricted to Omega_i.
  const Index Nl = ensemble.points_per_subspace[static_cast<std::size_t>(ell)];
  if (Nl < 2) {
    e.verdict = Verdict::NotCertified;
    e.note += "; no co-subspace points";
    return e;
  }
  Matrix D_same(w, Nl - 1);
  {
    const Index offset = ensemble.column_offset(ell);
    Index c = 0;
    for (Index j = 0; j < Nl; ++j) {
      if (j == i) continue;
      for (Index t = 0; t < w; ++t)
        D_same(t, c) = dataset.zero_filled(omega_i[static_cast<std::size_t>(t)],
                                           offset + j);
      ++c;
    }
  }

  const auto rin = inradius(D_same, opts.method, opts.samples);
  e.inradius_value = rin.value;
  e.inradius_exact = rin.exact;
  if (rin.rank_deficient || rin.value <= 0) {
    e.verdict = Verdict::NotCertified;
    e.note += "; in-radius zero";
    return e;
  }

  const double ratio = max_sum / rin.value;
  if (ratio < 1.0 - opts.cert_margin) {
    e.verdict = Verdict::Certified;
    const double alpha_lo = worst_t1 / rin.value;
    const double alpha_hi = 1.0 - worst_t2 / rin.value;
    e.alpha = std::clamp(0.5 * (alpha_lo + alpha_hi), 0.0, 1.0);
  } else {
    e.verdict = Verdict::NotCertified;
  }
  return e;
}

bool check_lemma1(const Eigen::Ref<const Matrix>& A,
                  const Eigen::Ref<const Vector>& y,
                  const Eigen::Ref<const Vector>& c,
                  const Eigen::Ref<const Vector>& nu, const IndexList& S,
                  const IndexList& T, double tol) {
  const Index N = A.cols();
  if (y.size() != A.rows() || c.size() != N || nu.size() != A.rows())
    throw std::invalid_argument("check_lemma1: dimension mismatch");
  auto sorted_subset = [N](const IndexList& v) {
    for (std::size_t t = 0; t < v.size(); ++t) {
      if (v[t] < 0 || v[t] >= N) return false;
      if (t > 0 && v[t] <= v[t - 1]) return false;
    }
    return true;
  };
  if (!sorted_subset(S) || !sorted_subset(T) ||
      !std::includes(T.begin(), T.end(), S.begin(), S.end()))
    throw std::invalid_argument("check_lemma1 requires sorted S subset of T");
  if ((A * c - y).norm() > tol)
    throw std::invalid_argument("check_lemma1: (A, y, c) triple infeasible");
  {
    std::size_t ps = 0;
    for (Index j = 0; j < N; ++j) {
      while (ps < S.size() && S[ps] < j) ++ps;
      const bool in_S = ps < S.size() && S[ps] == j;
      if (!in_S && std::abs(c[j]) > tol)
        throw std::invalid_argument("check_lemma1: support(c) not within S");
    }
  }

  const Vector corr = A.transpose() * nu;
  for (const Index j : S) {
    const double sgn = c[j] > tol ? 1.0 : (c[j] < -tol ? -1.0 : 0.0);
    if (std::abs(corr[j] - sgn) > tol) return false;
  }
  std::size_t ps = 0, pt = 0;
  for (Index j = 0; j < N; ++j) {
    while (ps < S.size() && S[ps] < j) ++ps;
    while (pt < T.size() && T[pt] < j) ++pt;
    const bool in_S = ps < S.size() && S[ps] == j;
    const bool in_T = pt < T.size() && T[pt] == j;
    if (in_S) continue;
    if (in_T) {
      if (std::abs(corr[j]) > 1.0 + tol) return false;
    } else {
      if (std::abs(corr[j]) >= 1.0 - tol) return false;
    }
  }
  return true;
}

double coherence_diagnostic(const model::SubspaceEnsemble& ensemble,
                            const IndexList& omega, Index ell, Index k) {
  const auto& U = ensemble.bases[static_cast<std::size_t>(ell)];
  const RestrictedBasis rb = restricted_basis(U, omega, omega, ell);
  const double smax = rb.sigma[0];
  const double smin = rb.sigma.size() < ensemble.subspace_dim
                          ? 0.0
                          : rb.sigma[rb.sigma.size() - 1];
  if (smin <= kRankTol * std::max(1.0, smax))
    throw std::invalid_argument(
        "coherence_diagnostic: restricted basis rank-deficient (cond " +
        std::to_string(smax / std::max(smin, 1e-300)) + ")");
  Vector sig_inv = rb.sigma;
  for (Index t = 0; t < sig_inv.size(); ++t) sig_inv[t] = 1.0 / sig_inv[t];
  const Matrix pinv = rb.R * sig_inv.asDiagonal() * rb.Q.transpose();
  const Matrix Vk = masked_restriction(
      ensemble.bases[static_cast<std::size_t>(k)], omega, omega);
  return (pinv * Vk).norm() / static_cast<double>(ensemble.subspace_dim);
}

void write_report(std::ostream& os, const CertificateReport& report) {
  if (!report.instance_summary.empty())
    os << "# " << report.instance_summary << '\n';
  for (const auto& e : report.entries) {
    os << "point=" << e.point << " subspace=" << (e.subspace + 1)
       << " verdict=" << to_string(e.verdict)
       << " inradius=" << e.inradius_value
       << " exact=" << flag(e.inradius_exact) << " max_lhs=" << e.max_lhs
       << " worst_k=" << (e.worst_k >= 0 ? std::to_string(e.worst_k + 1) : "na")
       << " worst_j=" << (e.worst_j >= 0 ? std::to_string(e.worst_j) : "na")
       << " alpha=";
    if (std::isnan(e.alpha))
      os << "na";
    else
      os << e.alpha;
    os << " nonunique=" << flag(e.lambda_nonunique);
    os << " worst_case=";
    if (e.worst_case_pass)
      os << (*e.worst_case_pass ? "pass" : "fail");
    else
      os << "na";
    if (!e.note.empty()) os << " note=\"" << e.note << "\"";
    os << '\n';
  }
}

}  // namespace uos::certify
