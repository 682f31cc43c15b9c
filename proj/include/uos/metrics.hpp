#pragma once

#include "uos/types.hpp"

#include <vector>

namespace uos::metrics {

struct ClusteringAlignment {
  double error = 0.0;       // mismatches / N after optimal relabeling
  Index mismatches = 0;
  // permutation[g-1] = true label matched to predicted label g.
  std::vector<int> permutation;
};

// Minimizes mismatches over all label permutations (Hungarian assignment on
// the confusion matrix, padded square when label ranges differ).
ClusteringAlignment align_labels(const std::vector<int>& predicted,
                                 const std::vector<int>& truth);

double clustering_error(const std::vector<int>& predicted,
                        const std::vector<int>& truth);

// ||recovered - truth||_F / ||truth||_F.
double completion_error(const Eigen::Ref<const Matrix>& recovered,
                        const Eigen::Ref<const Matrix>& truth);

// Largest principal angle between equal-dimension column spans:
// arcsin ||B - A A^T B||_2.  Inputs must have orthonormal columns (1e-8).
double subspace_error(const Eigen::Ref<const Matrix>& A,
                      const Eigen::Ref<const Matrix>& B);

// Minimum-cost assignment on a square cost matrix; returns column of each
// row.  Exposed for tests.
std::vector<Index> hungarian_min_cost(const Matrix& cost);

struct EvaluationRecord {
  double clustering_error = 0.0;
  double completion_error = 0.0;
  std::vector<double> subspace_error_per_cluster;  // radians, label order
  double subspace_error_max = 0.0;
  double subspace_error_mean = 0.0;
  std::vector<int> permutation;  // aligning permutation from align_labels
};

}  // namespace uos::metrics
