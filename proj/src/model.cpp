#include "uos/model.hpp"

#include "uos/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace uos {

IndexList RngStream::random_subset(Index n, Index k,
                                   std::vector<Index>& scratch) {
  scratch.resize(static_cast<std::size_t>(n));
  std::iota(scratch.begin(), scratch.end(), Index{0});
  for (Index t = 0; t < k; ++t) {
    const Index j =
        t + static_cast<Index>(next_below(static_cast<std::uint64_t>(n - t)));
    std::swap(scratch[static_cast<std::size_t>(t)],
              scratch[static_cast<std::size_t>(j)]);
  }
  IndexList out(scratch.begin(), scratch.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace uos

namespace uos::model {

namespace {

// Thin QR with the sign convention diag(R) >= 0 so the basis is a pure
// function of the input matrix.
std::pair<Matrix, Matrix> thin_qr_positive(const Matrix& G) {
  const Index n = G.rows();
  const Index d = G.cols();
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, d);
  Matrix R = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    if (R(j, j) < 0) {
      R.row(j) = -R.row(j);
      Q.col(j) = -Q.col(j);
    }
  }
  return {std::move(Q), std::move(R)};
}

Matrix gaussian_matrix(RngStream& g, Index rows, Index cols) {
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = g.next_gaussian();
  return M;
}

Index ceil_fraction(double p, Index n) {
  // Guard against p*n landing epsilon above an integer (0.08 * 50).
  return static_cast<Index>(std::ceil(p * static_cast<double>(n) - 1e-9));
}

Index round_half_up(double x) {
  return static_cast<Index>(std::floor(x + 0.5));
}

}  // namespace

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::SameSupport: return "same_support";
    case CaseTag::ExactlyD: return "exactly_d";
    case CaseTag::RandomPerColumn: return "random_per_column";
  }
  return "unknown";
}

const char* to_string(GenerationMode mode) {
  return mode == GenerationMode::OrthonormalUnitSphere
             ? "orthonormal_unit_sphere"
             : "gaussian_product";
}

CaseTag case_tag_from_string(const std::string& s) {
  if (s == "same_support") return CaseTag::SameSupport;
  if (s == "exactly_d") return CaseTag::ExactlyD;
  if (s == "random_per_column") return CaseTag::RandomPerColumn;
  throw std::invalid_argument("unknown case tag: " + s);
}

GenerationMode mode_from_string(const std::string& s) {
  if (s == "orthonormal_unit_sphere")
    return GenerationMode::OrthonormalUnitSphere;
  if (s == "gaussian_product") return GenerationMode::GaussianProduct;
  throw std::invalid_argument("unknown generation mode: " + s);
}

Index SubspaceEnsemble::total_points() const {
  return std::accumulate(points_per_subspace.begin(),
                         points_per_subspace.end(), Index{0});
}

Index SubspaceEnsemble::subspace_of(Index column) const {
  Index acc = 0;
  for (Index l = 0; l < num_subspaces; ++l) {
    acc += points_per_subspace[static_cast<std::size_t>(l)];
    if (column < acc) return l;
  }
  throw std::out_of_range("column index outside ensemble");
}

Index SubspaceEnsemble::column_offset(Index ell) const {
  Index acc = 0;
  for (Index l = 0; l < ell; ++l)
    acc += points_per_subspace[static_cast<std::size_t>(l)];
  return acc;
}

Vector SubspaceEnsemble::model_column(Index column) const {
  const Index ell = subspace_of(column);
  const Index local = column - column_offset(ell);
  return bases[static_cast<std::size_t>(ell)] *
         coefficients[static_cast<std::size_t>(ell)].col(local);
}

std::vector<int> SubspaceEnsemble::labels() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(total_points()));
  for (Index l = 0; l < num_subspaces; ++l)
    out.insert(out.end(),
               static_cast<std::size_t>(points_per_subspace[static_cast<std::size_t>(l)]),
               static_cast<int>(l) + 1);
  return out;
}

void SubspaceEnsemble::validate(double tol) const {
  if (subspace_dim < 1 || subspace_dim > ambient_dim)
    throw std::invalid_argument("ensemble requires 1 <= d <= n");
  if (num_subspaces < 1 ||
      points_per_subspace.size() != static_cast<std::size_t>(num_subspaces) ||
      bases.size() != static_cast<std::size_t>(num_subspaces) ||
      coefficients.size() != static_cast<std::size_t>(num_subspaces))
    throw std::invalid_argument("ensemble per-subspace arrays inconsistent");
  for (Index l = 0; l < num_subspaces; ++l) {
    const auto& U = bases[static_cast<std::size_t>(l)];
    const auto& A = coefficients[static_cast<std::size_t>(l)];
    const Index Nl = points_per_subspace[static_cast<std::size_t>(l)];
    if (Nl < 1) throw std::invalid_argument("ensemble requires N_l >= 1");
    if (U.rows() != ambient_dim || U.cols() != subspace_dim ||
        A.rows() != subspace_dim || A.cols() != Nl)
      throw std::invalid_argument("ensemble matrix shapes inconsistent");
    const double ortho =
        (U.transpose() * U - Matrix::Identity(subspace_dim, subspace_dim))
            .cwiseAbs()
            .maxCoeff();
    if (ortho > tol)
      throw std::invalid_argument("ensemble basis not orthonormal");
    for (Index j = 0; j < Nl; ++j)
      if (std::abs(A.col(j).norm() - 1.0) > tol)
        throw std::invalid_argument("ensemble coefficient column not unit norm");
  }
}

void ObservationPattern::validate() const {
  for (std::size_t c = 0; c < masks.size(); ++c) {
    const auto& m = masks[c];
    if (m.empty())
      throw std::invalid_argument("observation mask empty for column " +
                                  std::to_string(c));
    for (std::size_t t = 0; t < m.size(); ++t) {
      if (m[t] < 0 || m[t] >= ambient_dim)
        throw std::invalid_argument("mask index out of range");
      if (t > 0 && m[t] <= m[t - 1])
        throw std::invalid_argument("mask indices must be sorted and unique");
    }
  }
  if (case_tag == CaseTag::SameSupport)
    for (const auto& m : masks)
      if (m != masks.front())
        throw std::invalid_argument("same-support pattern has unequal masks");
}

GeneratedData generate_ensemble(Index n, Index d, Index L,
                                Index points_per_subspace, GenerationMode mode,
                                std::uint64_t seed) {
  if (n < 1 || d < 1 || d > n || L < 1 || points_per_subspace < 1)
    throw std::invalid_argument(
        "generate_ensemble requires n >= d >= 1, L >= 1, N_l >= 1");

  SubspaceEnsemble ens;
  ens.ambient_dim = n;
  ens.subspace_dim = d;
  ens.num_subspaces = L;
  ens.points_per_subspace.assign(static_cast<std::size_t>(L),
                                 points_per_subspace);
  Matrix X(n, L * points_per_subspace);

  for (Index l = 0; l < L; ++l) {
    RngStream gb = RngStream::derive(seed, rngtag::kBasis,
                                     static_cast<std::uint64_t>(l));
    const Matrix G = gaussian_matrix(gb, n, d);
    auto [U, R] = thin_qr_positive(G);

    Matrix A(d, points_per_subspace);
    if (mode == GenerationMode::OrthonormalUnitSphere) {
      for (Index j = 0; j < points_per_subspace; ++j) {
        RngStream gc = RngStream::derive(seed, rngtag::kCoeff,
                                         static_cast<std::uint64_t>(l),
                                         static_cast<std::uint64_t>(j));
        A.col(j) = gc.unit_sphere(d);
      }
      X.middleCols(l * points_per_subspace, points_per_subspace) = U * A;
    } else {
      Matrix A0(d, points_per_subspace);
      for (Index j = 0; j < points_per_subspace; ++j) {
        RngStream gc = RngStream::derive(seed, rngtag::kCoeff,
                                         static_cast<std::uint64_t>(l),
                                         static_cast<std::uint64_t>(j));
        A0.col(j) = gc.gaussian_vector(d);
      }
      // X = G * A0 verbatim; the record keeps the orthonormalized basis and
      // the unit-norm coefficient directions implied by X = U (R A0).
      X.middleCols(l * points_per_subspace, points_per_subspace) = G * A0;
      A = R * A0;
      for (Index j = 0; j < points_per_subspace; ++j) {
        const double norm = A.col(j).norm();
        if (norm <= 1e-300)
          throw NumericalError("degenerate coefficient draw (zero column)");
        A.col(j) /= norm;
      }
    }
    ens.bases.push_back(std::move(U));
    ens.coefficients.push_back(std::move(A));
  }
  return {std::move(ens), std::move(X)};
}

ObservationPattern sample_case1(Index n, Index N, double p) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("sample_case1 requires 0 < p <= 1");
  const Index k = ceil_fraction(p, n);
  if (k < 1) throw std::invalid_argument("sample_case1: ceil(p*n) is zero");
  IndexList omega(static_cast<std::size_t>(k));
  std::iota(omega.begin(), omega.end(), Index{0});
  ObservationPattern pat;
  pat.ambient_dim = n;
  pat.masks.assign(static_cast<std::size_t>(N), omega);
  pat.case_tag = CaseTag::SameSupport;
  return pat;
}

ObservationPattern sample_case2(Index n, Index N, Index d,
                                std::uint64_t seed) {
  if (d < 1 || d > n)
    throw std::invalid_argument("sample_case2 requires 1 <= d <= n");
  ObservationPattern pat;
  pat.ambient_dim = n;
  pat.masks.resize(static_cast<std::size_t>(N));
  std::vector<Index> scratch;
  for (Index i = 0; i < N; ++i) {
    RngStream g =
        RngStream::derive(seed, rngtag::kMask, static_cast<std::uint64_t>(i));
    pat.masks[static_cast<std::size_t>(i)] = g.random_subset(n, d, scratch);
  }
  pat.case_tag = CaseTag::ExactlyD;
  return pat;
}

ObservationPattern sample_case3(Index n, Index N, double p,
                                std::uint64_t seed) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("sample_case3 requires 0 < p <= 1");
  const Index k = round_half_up(p * static_cast<double>(n));
  if (k < 1) throw std::invalid_argument("sample_case3: round(p*n) is zero");
  ObservationPattern pat;
  pat.ambient_dim = n;
  pat.masks.resize(static_cast<std::size_t>(N));
  std::vector<Index> scratch;
  for (Index i = 0; i < N; ++i) {
    RngStream g =
        RngStream::derive(seed, rngtag::kMask, static_cast<std::uint64_t>(i));
    pat.masks[static_cast<std::size_t>(i)] = g.random_subset(n, k, scratch);
  }
  pat.case_tag = CaseTag::RandomPerColumn;
  return pat;
}

ObservedDataset zero_fill(const Matrix& full, const ObservationPattern& pattern,
                          std::optional<std::vector<int>> labels) {
  if (full.rows() != pattern.ambient_dim ||
      full.cols() != pattern.num_columns())
    throw std::invalid_argument("zero_fill: matrix/pattern shape mismatch");
  if (labels && static_cast<Index>(labels->size()) != full.cols())
    throw std::invalid_argument("zero_fill: label length mismatch");
  pattern.validate();
  ObservedDataset ds;
  ds.full_matrix = full;
  ds.zero_filled = Matrix::Zero(full.rows(), full.cols());
  for (Index i = 0; i < full.cols(); ++i)
    for (const Index k : pattern.masks[static_cast<std::size_t>(i)])
      ds.zero_filled(k, i) = full(k, i);
  ds.pattern = pattern;
  ds.true_labels = std::move(labels);
  return ds;
}

}  // namespace uos::model
