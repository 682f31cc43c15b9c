#include "uos/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uos::metrics {

// O(n^3) Hungarian algorithm with row/column potentials (Jonker-style
// shortest augmenting paths).
std::vector<Index> hungarian_min_cost(const Matrix& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n)
    throw std::invalid_argument("hungarian_min_cost: matrix must be square");
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> match(static_cast<std::size_t>(n + 1), 0);  // col -> row
  std::vector<Index> way(static_cast<std::size_t>(n + 1), 0);

  for (Index i = 1; i <= n; ++i) {
    match[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1),
                             std::numeric_limits<double>::infinity());
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = match[static_cast<std::size_t>(j0)];
      double delta = std::numeric_limits<double>::infinity();
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Index> assignment(static_cast<std::size_t>(n), 0);
  for (Index j = 1; j <= n; ++j)
    if (match[static_cast<std::size_t>(j)] > 0)
      assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] =
          j - 1;
  return assignment;
}

ClusteringAlignment align_labels(const std::vector<int>& predicted,
                                 const std::vector<int>& truth) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("align_labels: label vectors differ in length");
  if (predicted.empty())
    throw std::invalid_argument("align_labels: empty label vectors");
  int kmax = 0;
  for (const int g : predicted) {
    if (g < 1) throw std::invalid_argument("align_labels: labels must be >= 1");
    kmax = std::max(kmax, g);
  }
  for (const int g : truth) {
    if (g < 1) throw std::invalid_argument("align_labels: labels must be >= 1");
    kmax = std::max(kmax, g);
  }

  // Confusion matrix padded square; empty labels contribute zero rows.
  Matrix confusion = Matrix::Zero(kmax, kmax);
  for (std::size_t i = 0; i < predicted.size(); ++i)
    confusion(predicted[i] - 1, truth[i] - 1) += 1.0;

  const auto assignment = hungarian_min_cost(-confusion);

  ClusteringAlignment out;
  out.permutation.resize(static_cast<std::size_t>(kmax));
  double agreement = 0.0;
  for (Index g = 0; g < kmax; ++g) {
    out.permutation[static_cast<std::size_t>(g)] =
        static_cast<int>(assignment[static_cast<std::size_t>(g)]) + 1;
    agreement += confusion(g, assignment[static_cast<std::size_t>(g)]);
  }
  const auto N = static_cast<double>(predicted.size());
  out.mismatches = static_cast<Index>(N - agreement + 0.5);
  out.error = (N - agreement) / N;
  return out;
}

double clustering_error(const std::vector<int>& predicted,
                        const std::vector<int>& truth) {
  return align_labels(predicted, truth).error;
}

double completion_error(const Eigen::Ref<const Matrix>& recovered,
                        const Eigen::Ref<const Matrix>& truth) {
  if (recovered.rows() != truth.rows() || recovered.cols() != truth.cols())
    throw std::invalid_argument("completion_error: shape mismatch");
  const double denom = truth.norm();
  if (denom == 0.0)
    throw std::invalid_argument("completion_error: zero truth matrix");
  return (recovered - truth).norm() / denom;
}

double subspace_error(const Eigen::Ref<const Matrix>& A,
                      const Eigen::Ref<const Matrix>& B) {
  auto check_orthonormal = [](const Eigen::Ref<const Matrix>& M,
                              const char* which) {
    const double dev =
        (M.transpose() * M - Matrix::Identity(M.cols(), M.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (dev > 1e-8)
      throw std::invalid_argument(
          std::string("subspace_error: ") + which +
          " matrix does not have orthonormal columns (deviation " +
          std::to_string(dev) + ")");
  };
  check_orthonormal(A, "first");
  check_orthonormal(B, "second");
  if (A.rows() != B.rows())
    throw std::invalid_argument("subspace_error: ambient dimensions differ");

  const Matrix residual = B - A * (A.transpose() * B);
  Eigen::JacobiSVD<Matrix> svd(residual);
  const double s = std::clamp(svd.singularValues()[0], 0.0, 1.0);
  return std::asin(s);
}

}  // namespace uos::metrics
