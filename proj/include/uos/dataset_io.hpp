#pragma once

#include "uos/model.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace uos::model {

// Sidecar metadata stored as meta.json next to values.csv / mask.csv.
struct DatasetMeta {
  Index n = 0;
  Index N = 0;
  Index L = 0;
  Index d = 0;
  std::vector<Index> points_per_subspace;
  CaseTag case_tag = CaseTag::RandomPerColumn;
  std::uint64_t seed = 0;
  std::optional<GenerationMode> mode;
  std::optional<std::vector<int>> labels;  // 1..L
};

struct LoadedDataset {
  ObservedDataset data;
  DatasetMeta meta;
};

// Dataset directory layout: values.csv (n rows x N columns, unobserved
// entries as empty fields), mask.csv (0/1, same shape), meta.json.
void write_dataset(const std::filesystem::path& dir, const ObservedDataset& ds,
                   const DatasetMeta& meta);

// Rejects shape mismatches between the three files and observed-but-empty
// value fields.  full_matrix is populated only when every entry is observed.
LoadedDataset read_dataset(const std::filesystem::path& dir);

// Fixed-format float used by every CSV writer; %.17g round-trips doubles and
// keeps outputs byte-identical across runs.
std::string format_double(double v);

}  // namespace uos::model
