#include "uos/dataset_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace uos::model {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_dataset(const std::filesystem::path& dir, const ObservedDataset& ds,
                   const DatasetMeta& meta) {
  const Index n = ds.ambient_dim();
  const Index N = ds.num_columns();
  if (meta.n != n || meta.N != N)
    throw std::invalid_argument("write_dataset: meta shape mismatch");
  if (meta.labels && static_cast<Index>(meta.labels->size()) != N)
    throw std::invalid_argument("write_dataset: label length mismatch");
  std::filesystem::create_directories(dir);

  // Observed-entry indicator, row-major scan.
  std::vector<std::vector<char>> observed(
      static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(N), 0));
  for (Index i = 0; i < N; ++i)
    for (const Index k : ds.pattern.masks[static_cast<std::size_t>(i)])
      observed[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = 1;

  {
    std::ofstream values(dir / "values.csv");
    std::ofstream mask(dir / "mask.csv");
    if (!values || !mask)
      throw std::runtime_error("cannot write dataset files in " + dir.string());
    for (Index r = 0; r < n; ++r) {
      for (Index c = 0; c < N; ++c) {
        if (c > 0) {
          values << ',';
          mask << ',';
        }
        if (observed[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) {
          values << format_double(ds.zero_filled(r, c));
          mask << '1';
        } else {
          mask << '0';
        }
      }
      values << '\n';
      mask << '\n';
    }
  }

  ordered_json j;
  j["n"] = meta.n;
  j["N"] = meta.N;
  j["L"] = meta.L;
  j["d"] = meta.d;
  j["points_per_subspace"] = meta.points_per_subspace;
  j["case_tag"] = to_string(meta.case_tag);
  j["seed"] = meta.seed;
  if (meta.mode) j["mode"] = to_string(*meta.mode);
  if (meta.labels) j["labels"] = *meta.labels;
  std::ofstream mj(dir / "meta.json");
  if (!mj) throw std::runtime_error("cannot write meta.json in " + dir.string());
  mj << j.dump(2) << '\n';
}

LoadedDataset read_dataset(const std::filesystem::path& dir) {
  ordered_json j;
  {
    std::ifstream mj(dir / "meta.json");
    if (!mj) throw std::runtime_error("cannot open " + (dir / "meta.json").string());
    mj >> j;
  }
  DatasetMeta meta;
  meta.n = j.at("n").get<Index>();
  meta.N = j.at("N").get<Index>();
  meta.L = j.at("L").get<Index>();
  meta.d = j.at("d").get<Index>();
  meta.points_per_subspace =
      j.at("points_per_subspace").get<std::vector<Index>>();
  meta.case_tag = case_tag_from_string(j.at("case_tag").get<std::string>());
  meta.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("mode"))
    meta.mode = mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("labels")) {
    meta.labels = j.at("labels").get<std::vector<int>>();
    if (static_cast<Index>(meta.labels->size()) != meta.N)
      throw std::runtime_error("meta.json labels length does not match N");
    for (const int lab : *meta.labels)
      if (lab < 1 || lab > static_cast<int>(meta.L))
        throw std::runtime_error("meta.json label outside 1..L");
  }

  const auto value_lines = read_lines(dir / "values.csv");
  const auto mask_lines = read_lines(dir / "mask.csv");
  if (static_cast<Index>(value_lines.size()) != meta.n ||
      static_cast<Index>(mask_lines.size()) != meta.n)
    throw std::runtime_error("dataset row count does not match meta.json");

  ObservedDataset ds;
  ds.zero_filled = Matrix::Zero(meta.n, meta.N);
  ds.pattern.ambient_dim = meta.n;
  ds.pattern.case_tag = meta.case_tag;
  ds.pattern.masks.assign(static_cast<std::size_t>(meta.N), {});

  for (Index r = 0; r < meta.n; ++r) {
    const auto vals = split_fields(value_lines[static_cast<std::size_t>(r)]);
    const auto bits = split_fields(mask_lines[static_cast<std::size_t>(r)]);
    if (static_cast<Index>(vals.size()) != meta.N ||
        static_cast<Index>(bits.size()) != meta.N)
      throw std::runtime_error("dataset column count does not match meta.json");
    for (Index c = 0; c < meta.N; ++c) {
      const std::string& bit = bits[static_cast<std::size_t>(c)];
      if (bit != "0" && bit != "1")
        throw std::runtime_error("mask.csv entries must be 0 or 1");
      const std::string& field = vals[static_cast<std::size_t>(c)];
      if (bit == "1") {
        if (field.empty())
          throw std::runtime_error("observed entry missing in values.csv");
        ds.zero_filled(r, c) = std::stod(field);
        ds.pattern.masks[static_cast<std::size_t>(c)].push_back(r);
      } else if (!field.empty()) {
        throw std::runtime_error("unobserved entry has a value in values.csv");
      }
    }
  }
  ds.pattern.validate();

  bool fully_observed = true;
  for (const auto& m : ds.pattern.masks)
    if (static_cast<Index>(m.size()) != meta.n) fully_observed = false;
  if (fully_observed) ds.full_matrix = ds.zero_filled;
  ds.true_labels = meta.labels;
  return {std::move(ds), std::move(meta)};
}

}  // namespace uos::model
