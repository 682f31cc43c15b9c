#pragma once

#include "uos/types.hpp"

#include <cstdint>
#include <vector>

namespace uos::spectral {

struct ClusterAssignment {
  std::vector<int> labels;  // 1..L
  Index num_clusters = 0;
  double inertia = 0.0;
  // First min(L+1, N) eigenvalues of the normalized Laplacian, ascending.
  Vector laplacian_eigenvalues;
  bool degenerate = false;             // all-zero embedding (e.g. W = 0)
  std::vector<Index> isolated;         // zero-degree vertices
  std::vector<int> empty_clusters;     // requested labels left empty

  bool flagged() const {
    return degenerate || !isolated.empty() || !empty_clusters.empty();
  }
};

// Normalized spectral clustering: L_sym = I - D^{-1/2} W D^{-1/2} (rows of
// zero degree stay zero), embedding = L smallest eigenvectors row-normalized,
// then k-means++ with `kmeans_restarts` deterministic restarts keeping the
// lowest inertia.  W must be symmetric and nonnegative with zero diagonal.
ClusterAssignment spectral_cluster(const Eigen::Ref<const Matrix>& W, Index L,
                                   std::uint64_t seed,
                                   Index kmeans_restarts = 20);

}  // namespace uos::spectral
