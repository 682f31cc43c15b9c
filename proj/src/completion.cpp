#include "uos/completion.hpp"

#include "uos/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace uos::completion {

namespace {

Index mask_size(const std::vector<IndexList>& mask) {
  Index total = 0;
  for (const auto& m : mask) total += static_cast<Index>(m.size());
  return total;
}

double masked_residual_fro(const Matrix& M, const Matrix& Z,
                           const std::vector<IndexList>& mask) {
  double acc = 0.0;
  for (Index j = 0; j < M.cols(); ++j)
    for (const Index i : mask[static_cast<std::size_t>(j)]) {
      const double d = M(i, j) - Z(i, j);
      acc += d * d;
    }
  return std::sqrt(acc);
}

}  // namespace

// Rank-truncated soft threshold via the Gram eigendecomposition of the
// smaller side; only singular values above tau survive, so the SVD never
// needs the full spectrum.
Matrix shrink_singular_values(const Eigen::Ref<const Matrix>& Y, double tau) {
  const bool tall = Y.rows() > Y.cols();
  const Matrix G = tall ? Matrix(Y.transpose() * Y) : Matrix(Y * Y.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G);
  if (eig.info() != Eigen::Success)
    throw NumericalError("shrink_singular_values: eigensolver failed");

  const Index k = G.rows();
  Matrix Z = Matrix::Zero(Y.rows(), Y.cols());
  // Eigenvalues ascending; walk from the top.
  for (Index t = k - 1; t >= 0; --t) {
    const double lam = eig.eigenvalues()[t];
    if (lam <= tau * tau) break;
    const double sigma = std::sqrt(lam);
    const Vector w = eig.eigenvectors().col(t);
    if (tall) {
      const Vector u = Y * w / sigma;  // left singular vector
      Z.noalias() += (sigma - tau) * u * w.transpose();
    } else {
      const Vector v = Y.transpose() * w / sigma;  // right singular vector
      Z.noalias() += (sigma - tau) * w * v.transpose();
    }
  }
  return Z;
}

SvtResult svt_complete(const Eigen::Ref<const Matrix>& observed,
                       const std::vector<IndexList>& mask, SvtOptions opts) {
  const Index rows = observed.rows();
  const Index cols = observed.cols();
  if (static_cast<Index>(mask.size()) != cols)
    throw std::invalid_argument("svt_complete: mask/matrix column mismatch");
  const Index nnz = mask_size(mask);
  if (nnz < 1) throw std::invalid_argument("svt_complete: empty mask");

  const double tau =
      opts.tau > 0 ? opts.tau
                   : 5.0 * std::sqrt(static_cast<double>(rows) *
                                     static_cast<double>(cols));
  const double delta =
      opts.delta > 0
          ? opts.delta
          : 1.2 * static_cast<double>(rows) * static_cast<double>(cols) /
                static_cast<double>(nnz);

  SvtResult out;
  const double norm0 = masked_residual_fro(observed, Matrix::Zero(rows, cols), mask);
  if (norm0 == 0.0) {
    // All observed entries are zero; Z = 0 is the fixed point.
    out.completed = Matrix::Zero(rows, cols);
    out.converged = true;
    return out;
  }

  Matrix Y = Matrix::Zero(rows, cols);
  Matrix Z;
  for (Index it = 1; it <= opts.max_iter; ++it) {
    Z = shrink_singular_values(Y, tau);
    const double res = masked_residual_fro(observed, Z, mask) / norm0;
    out.residual_trace.push_back(res);
    out.iterations = it;
    out.final_residual = res;
    if (res <= opts.tol) {
      out.converged = true;
      break;
    }
    if (res > 10.0 * out.residual_trace.front()) {
      out.diverged = true;
      break;
    }
    for (Index j = 0; j < cols; ++j)
      for (const Index i : mask[static_cast<std::size_t>(j)])
        Y(i, j) += delta * (observed(i, j) - Z(i, j));
  }
  out.completed = std::move(Z);
  return out;
}

bool CompletionResult::all_converged() const {
  return std::all_of(clusters.begin(), clusters.end(),
                     [](const ClusterCompletion& c) {
                       return c.empty || (c.converged && !c.diverged);
                     });
}

CompletionResult complete_by_cluster(const model::ObservedDataset& ds,
                                     const std::vector<int>& labels, Index L,
                                     Index d, SvtOptions opts, Index threads) {
  const Index n = ds.ambient_dim();
  const Index N = ds.num_columns();
  if (static_cast<Index>(labels.size()) != N)
    throw std::invalid_argument("complete_by_cluster: label length mismatch");
  for (const int g : labels)
    if (g < 1 || g > static_cast<int>(L))
      throw std::invalid_argument("complete_by_cluster: label outside 1..L");

  CompletionResult out;
  out.recovered = Matrix::Zero(n, N);
  out.clusters.resize(static_cast<std::size_t>(L));

  std::vector<std::vector<Index>> members(static_cast<std::size_t>(L));
  for (Index i = 0; i < N; ++i)
    members[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)] - 1)]
        .push_back(i);

  parallel_for(
      L,
      [&](Index g) {
        auto& cluster = out.clusters[static_cast<std::size_t>(g)];
        cluster.label = static_cast<int>(g) + 1;
        const auto& cols = members[static_cast<std::size_t>(g)];
        cluster.size = static_cast<Index>(cols.size());
        if (cols.empty()) {
          cluster.empty = true;
          cluster.rank_deficient = true;
          return;
        }
        Matrix M(n, static_cast<Index>(cols.size()));
        std::vector<IndexList> mask(cols.size());
        for (std::size_t t = 0; t < cols.size(); ++t) {
          M.col(static_cast<Index>(t)) = ds.zero_filled.col(cols[t]);
          mask[t] = ds.pattern.masks[static_cast<std::size_t>(cols[t])];
        }
        auto svt = svt_complete(M, mask, opts);
        cluster.iterations = svt.iterations;
        cluster.final_residual = svt.final_residual;
        cluster.converged = svt.converged;
        cluster.diverged = svt.diverged;
        for (std::size_t t = 0; t < cols.size(); ++t)
          out.recovered.col(cols[t]) = svt.completed.col(static_cast<Index>(t));

        // Basis: top-d left singular vectors of the completed cluster.
        Eigen::BDCSVD<Matrix> svd(svt.completed, Eigen::ComputeThinU);
        const Index avail = svd.singularValues().size();
        Index rank = std::min(d, avail);
        const double smax = avail > 0 ? svd.singularValues()[0] : 0.0;
        while (rank > 0 && svd.singularValues()[rank - 1] <= 1e-12 * (1.0 + smax))
          --rank;
        cluster.rank_deficient = rank < d;
        cluster.basis = svd.matrixU().leftCols(rank);
      },
      threads);
  return out;
}

}  // namespace uos::completion
