#pragma once

#include "uos/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace uos::model {

enum class CaseTag { SameSupport, ExactlyD, RandomPerColumn };
enum class GenerationMode { OrthonormalUnitSphere, GaussianProduct };

const char* to_string(CaseTag tag);
const char* to_string(GenerationMode mode);
CaseTag case_tag_from_string(const std::string& s);
GenerationMode mode_from_string(const std::string& s);

// Ground-truth generative model: per subspace an orthonormal basis U (n x d)
// and unit-norm coefficient columns A (d x N_l), so X^(l) = U^(l) A^(l).
struct SubspaceEnsemble {
  Index ambient_dim = 0;    // n
  Index subspace_dim = 0;   // d
  Index num_subspaces = 0;  // L
  std::vector<Index> points_per_subspace;
  std::vector<Matrix> bases;         // each n x d, orthonormal columns
  std::vector<Matrix> coefficients;  // each d x N_l, unit-norm columns

  Index total_points() const;
  // 0-based subspace index of a global column.
  Index subspace_of(Index column) const;
  // First global column id of subspace ell.
  Index column_offset(Index ell) const;
  // Reconstructs column j of the noiseless model, U^(l) a_j.
  Vector model_column(Index column) const;
  // 1..L label per global column.
  std::vector<int> labels() const;

  void validate(double tol = 1e-10) const;
};

// Per-column observation supports Omega_i (sorted, unique, 0-based).
struct ObservationPattern {
  Index ambient_dim = 0;
  std::vector<IndexList> masks;
  CaseTag case_tag = CaseTag::RandomPerColumn;

  Index num_columns() const { return static_cast<Index>(masks.size()); }
  void validate() const;
};

struct ObservedDataset {
  std::optional<Matrix> full_matrix;
  Matrix zero_filled;  // n x N, zeros outside masks
  ObservationPattern pattern;
  std::optional<std::vector<int>> true_labels;  // 1..L

  Index ambient_dim() const { return zero_filled.rows(); }
  Index num_columns() const { return zero_filled.cols(); }
};

struct GeneratedData {
  SubspaceEnsemble ensemble;
  Matrix full;  // n x N, columns grouped by subspace
};

// Draws the union-of-subspaces data.  OrthonormalUnitSphere draws a Gaussian
// basis, orthonormalizes it and puts coefficients on the unit sphere;
// GaussianProduct multiplies two raw Gaussian factors and records the
// orthonormalized basis plus normalized coefficient directions so the
// ensemble invariants still hold.  Pure function of (parameters, seed).
GeneratedData generate_ensemble(Index n, Index d, Index L,
                                Index points_per_subspace, GenerationMode mode,
                                std::uint64_t seed);

// All columns observed at the first ceil(p*n) coordinates.
ObservationPattern sample_case1(Index n, Index N, double p);
// Each column observed at a uniformly random subset of exactly d coordinates.
ObservationPattern sample_case2(Index n, Index N, Index d, std::uint64_t seed);
// Each column observed at a uniformly random subset of round(p*n) coordinates
// (round half up).  Per-column streams derived from (seed, column).
ObservationPattern sample_case3(Index n, Index N, double p, std::uint64_t seed);

ObservedDataset zero_fill(const Matrix& full, const ObservationPattern& pattern,
                          std::optional<std::vector<int>> labels = std::nullopt);

}  // namespace uos::model
