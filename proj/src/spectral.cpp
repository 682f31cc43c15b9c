#include "uos/spectral.hpp"

#include "uos/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uos::spectral {

namespace {

struct KmeansRun {
  std::vector<int> labels;  // 0-based
  double inertia = 0.0;
  std::vector<int> empty_clusters;  // 0-based
};

// Standard k-means++ seeding plus Lloyd iterations; all randomness comes from
// the provided stream, ties broken by lowest index.
KmeansRun kmeans(const Matrix& X, Index k, RngStream g, Index max_iter = 300) {
  const Index n = X.rows();
  Matrix centroids(k, X.cols());
  Vector d2 = Vector::Constant(n, std::numeric_limits<double>::infinity());

  const Index first = static_cast<Index>(g.next_below(static_cast<std::uint64_t>(n)));
  centroids.row(0) = X.row(first);
  for (Index c = 1; c < k; ++c) {
    for (Index i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (X.row(i) - centroids.row(c - 1)).squaredNorm());
    const double total = d2.sum();
    Index pick = 0;
    if (total > 0) {
      const double target = g.next_unit() * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = static_cast<Index>(g.next_below(static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = X.row(pick);
  }

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::vector<int> prev = labels;
  Vector dist(k);
  for (Index it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      for (Index c = 0; c < k; ++c)
        dist[c] = (X.row(i) - centroids.row(c)).squaredNorm();
      Index best = 0;
      for (Index c = 1; c < k; ++c)
        if (dist[c] < dist[best]) best = c;
      if (labels[static_cast<std::size_t>(i)] != static_cast<int>(best)) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        changed = true;
      }
    }
    if (!changed && it > 0) break;

    centroids.setZero();
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      centroids.row(labels[static_cast<std::size_t>(i)]) += X.row(i);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Re-seed an empty centroid at the point farthest from its own
        // centroid (deterministic argmax).
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double di =
              (X.row(i) -
               centroids.row(labels[static_cast<std::size_t>(i)]))
                  .squaredNorm();
          if (di > far_d) {
            far_d = di;
            far = i;
          }
        }
        centroids.row(c) = X.row(far);
      }
    }
  }

  KmeansRun run;
  run.labels = std::move(labels);
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < n; ++i) {
    const int c = run.labels[static_cast<std::size_t>(i)];
    run.inertia += (X.row(i) - centroids.row(c)).squaredNorm();
    ++counts[static_cast<std::size_t>(c)];
  }
  for (Index c = 0; c < k; ++c)
    if (counts[static_cast<std::size_t>(c)] == 0)
      run.empty_clusters.push_back(static_cast<int>(c));
  return run;
}

}  // namespace

ClusterAssignment spectral_cluster(const Eigen::Ref<const Matrix>& W, Index L,
                                   std::uint64_t seed,
                                   Index kmeans_restarts) {
  const Index N = W.rows();
  if (W.cols() != N)
    throw std::invalid_argument("spectral_cluster: W must be square");
  if (L < 1 || L > N)
    throw std::invalid_argument("spectral_cluster requires 1 <= L <= N");
  if (kmeans_restarts < 1)
    throw std::invalid_argument("spectral_cluster requires restarts >= 1");
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-9 ||
      W.minCoeff() < -1e-12 || W.diagonal().cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument(
        "spectral_cluster: W must be symmetric, nonnegative, zero diagonal");

  ClusterAssignment out;
  out.num_clusters = L;

  const Vector degrees = W.rowwise().sum();
  Vector dinv_sqrt(N);
  for (Index i = 0; i < N; ++i) {
    if (degrees[i] > 0) {
      dinv_sqrt[i] = 1.0 / std::sqrt(degrees[i]);
    } else {
      dinv_sqrt[i] = 0.0;  // zero-degree rows stay zero by convention
      out.isolated.push_back(i);
    }
  }
  if (static_cast<Index>(out.isolated.size()) == N) {
    // Empty graph: the Laplacian is the identity and the embedding carries
    // no information.  Flag instead of clustering eigenvector noise.
    out.labels.assign(static_cast<std::size_t>(N), 1);
    out.degenerate = true;
    out.laplacian_eigenvalues =
        Vector::Ones(std::min<Index>(L + 1, N));
    for (int c = 2; c <= static_cast<int>(L); ++c)
      out.empty_clusters.push_back(c);
    return out;
  }
  Matrix lap = -(dinv_sqrt.asDiagonal() * W * dinv_sqrt.asDiagonal());
  lap.diagonal().array() += 1.0;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(lap);
  if (eig.info() != Eigen::Success)
    throw NumericalError("spectral_cluster: eigen decomposition failed");
  const Index diag_count = std::min<Index>(L + 1, N);
  out.laplacian_eigenvalues = eig.eigenvalues().head(diag_count);

  Matrix embedding = eig.eigenvectors().leftCols(L);
  bool any_nonzero = false;
  for (Index i = 0; i < N; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 1e-300) {
      embedding.row(i) /= norm;
      any_nonzero = true;
    } else {
      embedding.row(i).setZero();
    }
  }
  if (!any_nonzero) {
    out.labels.assign(static_cast<std::size_t>(N), 1);
    out.degenerate = true;
    for (int c = 2; c <= static_cast<int>(L); ++c) out.empty_clusters.push_back(c);
    return out;
  }

  KmeansRun best;
  bool have_best = false;
  for (Index restart = 0; restart < kmeans_restarts; ++restart) {
    auto run = kmeans(embedding, L,
                      RngStream::derive(seed, rngtag::kKmeans,
                                        static_cast<std::uint64_t>(restart)));
    if (!have_best || run.inertia < best.inertia) {
      best = std::move(run);
      have_best = true;
    }
  }

  out.labels.resize(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i)
    out.labels[static_cast<std::size_t>(i)] =
        best.labels[static_cast<std::size_t>(i)] + 1;
  out.inertia = best.inertia;
  for (const int c : best.empty_clusters) out.empty_clusters.push_back(c + 1);
  return out;
}

}  // namespace uos::spectral
