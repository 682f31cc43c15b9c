#pragma once

#include "uos/model.hpp"
#include "uos/spectral.hpp"

#include <vector>

namespace uos::completion {

struct SvtOptions {
  double tau = 0.0;    // <= 0: 5 * sqrt(rows * cols)
  double delta = 0.0;  // <= 0: 1.2 * rows * cols / |Omega|
  double tol = 1e-4;   // relative residual on observed entries
  Index max_iter = 500;
};

struct SvtResult {
  Matrix completed;
  Index iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  bool diverged = false;
  std::vector<double> residual_trace;
};

// Singular value thresholding: Z = shrink(Y, tau), Y += delta * P_Omega(M - Z)
// until ||P_Omega(M - Z)||_F / ||P_Omega(M)||_F <= tol.  Divergence (residual
// growing 10x above its initial value) stops early with the trace attached.
SvtResult svt_complete(const Eigen::Ref<const Matrix>& observed,
                       const std::vector<IndexList>& mask,
                       SvtOptions opts = {});

// Soft-thresholds the singular values of Y by tau.
Matrix shrink_singular_values(const Eigen::Ref<const Matrix>& Y, double tau);

struct ClusterCompletion {
  int label = 0;
  Index size = 0;
  Matrix basis;  // n x min(d, rank), orthonormal columns
  Index iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  bool diverged = false;
  bool rank_deficient = false;
  bool empty = false;
};

struct CompletionResult {
  Matrix recovered;  // n x N, original column order
  std::vector<ClusterCompletion> clusters;  // one per label 1..L

  bool all_converged() const;
};

// Partitions columns by label, completes each cluster by SVT, reassembles the
// matrix, and extracts the top-d left singular vectors per cluster.
CompletionResult complete_by_cluster(const model::ObservedDataset& ds,
                                     const std::vector<int>& labels, Index L,
                                     Index d, SvtOptions opts = {},
                                     Index threads = 1);

inline CompletionResult complete_by_cluster(
    const model::ObservedDataset& ds,
    const spectral::ClusterAssignment& assignment, Index d,
    SvtOptions opts = {}, Index threads = 1) {
  return complete_by_cluster(ds, assignment.labels, assignment.num_clusters, d,
                             opts, threads);
}

}  // namespace uos::completion
