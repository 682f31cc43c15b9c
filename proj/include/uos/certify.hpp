#pragma once

#include "uos/model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uos::certify {

// Rows Omega_i of a basis U, with rows outside Omega_j zeroed, together with
// its thin SVD V = Q Sigma R^T.
struct RestrictedBasis {
  Matrix V;      // |Omega_i| x d
  Matrix Q;      // |Omega_i| x k, orthonormal columns
  Vector sigma;  // k, non-increasing
  Matrix R;      // d x k
  Index subspace = -1;
  IndexList rows;  // Omega_i (global row ids)
};

RestrictedBasis restricted_basis(const Eigen::Ref<const Matrix>& U,
                                 const IndexList& omega_i,
                                 const IndexList& omega_j,
                                 Index subspace_index = -1);

enum class InradiusMethod { ExactPolarVertices, SampledUpperBound };

struct InradiusResult {
  double value = 0.0;
  bool exact = false;
  bool rank_deficient = false;
};

// In-radius of the symmetric convex hull of +-columns of A.  Exact mode
// (d <= 4) enumerates the vertices of the polar {l : ||A^T l||_inf <= 1} and
// returns the reciprocal of its circumradius; sampled mode returns
// min over random unit u of max_j |<a_j, u>|, an upper bound.
InradiusResult inradius(const Eigen::Ref<const Matrix>& A,
                        InradiusMethod method, Index samples = 100000);

// Feasible vertices of {l : ||A^T l||_inf <= 1}, one representative per
// antipodal pair.  Requires d <= 4 and full row rank; test oracle for the
// dual-direction LP and the exact in-radius.
std::vector<Vector> enumerate_polar_vertices(const Eigen::Ref<const Matrix>& A);

struct TildeDictionary {
  Matrix A_tilde;  // k x (N_l - 1), columns Q_i^T V_{Omega_{i,j}} a_j
  Vector a_hat;    // Sigma_i R_i^T a_i
  std::vector<Index> column_ids;  // within-subspace j of each column
};

// i and ell identify a point by subspace and within-subspace index.
TildeDictionary tilde_dictionary(const model::SubspaceEnsemble& ensemble,
                                 const model::ObservationPattern& pattern,
                                 Index i, Index ell);

enum class Verdict { Certified, NotCertified, HypothesisViolated };

const char* to_string(Verdict v);

struct CertificateEntry {
  Index point = -1;     // global column id
  Index subspace = -1;  // 0-based
  Verdict verdict = Verdict::NotCertified;
  double inradius_value = 0.0;
  bool inradius_exact = false;
  double max_lhs = 0.0;  // cases 1-2: dual-direction LHS; case 3: max(T1+T2)
  Index worst_k = -1;    // offending subspace (0-based), -1 if none
  Index worst_j = -1;    // offending within-subspace column
  double alpha = std::numeric_limits<double>::quiet_NaN();  // case-3 witness
  bool lambda_nonunique = false;
  // Case-2 operator-norm variant, checked alongside the dual condition.
  std::optional<bool> worst_case_pass;
  double worst_case_t1 = 0.0;
  std::string note;
};

struct CheckOptions {
  InradiusMethod method = InradiusMethod::ExactPolarVertices;
  Index samples = 100000;
  double cert_margin = 1e-6;
  bool probe_nonuniqueness = true;
};

// Same-support condition: |lambda_hat^T pinv(V) V^(k) a_j| < inradius of the
// point's co-subspace coefficient hull, for all k != ell, j.
CertificateEntry check_case1(const model::SubspaceEnsemble& ensemble,
                             const IndexList& omega, Index i, Index ell,
                             const CheckOptions& opts = {});

// |Omega_i| = d condition on the rotated dictionary A~ and hatted target.
CertificateEntry check_case2(const model::SubspaceEnsemble& ensemble,
                             const model::ObservationPattern& pattern, Index i,
                             Index ell, const CheckOptions& opts = {});

// |Omega_i| > d condition: requires an alpha in [0,1] with
// T1 < alpha*r and T2 <= (1-alpha)*r, i.e. (T1+T2)/r < 1.
CertificateEntry check_case3(const model::SubspaceEnsemble& ensemble,
                             const model::ObservationPattern& pattern,
                             const model::ObservedDataset& dataset, Index i,
                             Index ell, const CheckOptions& opts = {});

// Dual-certificate test: true iff A_S^T nu = sign(c_S) within tol,
// ||A_{T cap S^c}^T nu||_inf <= 1 + tol and ||A_{T^c}^T nu||_inf < 1 - tol.
// True implies every l1-optimal solution vanishes on T^c.
bool check_lemma1(const Eigen::Ref<const Matrix>& A,
                  const Eigen::Ref<const Vector>& y,
                  const Eigen::Ref<const Vector>& c,
                  const Eigen::Ref<const Vector>& nu, const IndexList& S,
                  const IndexList& T, double tol);

// ||pinv(V^(ell)) V^(k)||_F / d, the coordinate-restricted coherence between
// subspaces ell and k under the shared mask.
double coherence_diagnostic(const model::SubspaceEnsemble& ensemble,
                            const IndexList& omega, Index ell, Index k);

struct CertificateReport {
  std::vector<CertificateEntry> entries;
  std::string instance_summary;
};

// One structured-text record per point.
void write_report(std::ostream& os, const CertificateReport& report);

}  // namespace uos::certify
