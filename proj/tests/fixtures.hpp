#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "compass/advisor.hpp"
#include "compass/csv.hpp"
#include "compass/synthetic.hpp"
#include "compass/synopsis.hpp"

namespace fixtures {

using namespace compass;

/// Table from explicit int64 column vectors.
inline Table int_table(const std::string& name,
                       const std::vector<std::pair<std::string, std::vector<int64_t>>>& cols) {
  std::vector<std::pair<std::string, ColumnType>> schema;
  for (const auto& [n, _] : cols) schema.emplace_back(n, ColumnType::int64());
  Table t = Table::with_schema(name, schema);
  if (!cols.empty()) {
    const size_t rows = cols.front().second.size();
    std::vector<std::string> cells(cols.size());
    for (size_t r = 0; r < rows; ++r) {
      for (size_t c = 0; c < cols.size(); ++c) cells[c] = encode_int64(cols[c].second[r]);
      t.append_row(cells);
    }
  }
  return t;
}

inline SyntheticColumnSpec int_col(std::string name, uint64_t domain, double zipf = 0.0,
                                   double null_fraction = 0.0) {
  return {std::move(name), ColumnType::int64(), domain, zipf, null_fraction, 0};
}

inline SyntheticColumnSpec char_col(std::string name, uint32_t width, uint64_t domain,
                                    double zipf = 0.0, uint32_t prefix_len = 0,
                                    double null_fraction = 0.0) {
  return {std::move(name), ColumnType::char_width(width), domain, zipf, null_fraction, prefix_len};
}

inline Table synth(const std::string& name, uint64_t rows, uint64_t seed,
                   std::vector<SyntheticColumnSpec> cols) {
  SyntheticSpec spec;
  spec.name = name;
  spec.rows = rows;
  spec.seed = seed;
  spec.columns = std::move(cols);
  return generate_synthetic(spec);
}

inline Catalog catalog_of(Table t, const std::vector<std::vector<std::string>>& groups = {}) {
  Catalog c;
  const std::string name = t.name;
  c.add(std::move(t));
  c.stats[name] = compute_stats(c.table(name), groups);
  return c;
}

inline IndexDef index_on(const std::string& table, std::vector<std::string> keys,
                         Method method = Method::kNone,
                         std::vector<std::string> include = {}) {
  IndexDef def;
  def.table = table;
  def.key_columns = std::move(keys);
  def.included_columns = std::move(include);
  def.method = method;
  return def;
}

inline Predicate pred_eq(std::string col, int64_t v) {
  return Predicate{std::move(col), PredOp::kEq, Value::of_int(v), {}};
}

inline Predicate pred_between(std::string col, int64_t lo, int64_t hi) {
  return Predicate{std::move(col), PredOp::kBetween, Value::of_int(lo), Value::of_int(hi)};
}

/// Fractional page count of an actually built index.
inline double built_pages(const BuiltIndex& idx) {
  return static_cast<double>(idx.bytes_compressed) / static_cast<double>(page_size());
}

/// CHAR cell whose bytes all vary with the item: no shared prefixes, so the
/// PAGE codec works through its dictionary rather than prefix suppression.
inline std::string mixed_cell(uint64_t item, uint32_t width) {
  std::string s(width, 'a');
  uint64_t h = item * 0x9e3779b97f4a7c15ull + 12345;
  for (uint32_t j = 0; j < width; ++j) {
    s[j] = static_cast<char>('a' + (h % 23));
    h = h * 6364136223846793005ull + 1442695040888963407ull;
  }
  return s;
}

/// Table of byte-mixed CHAR columns with the given domain sizes, drawn
/// uniformly. Column names are a, b, c, ... in order.
inline Table mixed_char_table(const std::string& name, uint64_t rows, uint32_t width,
                              const std::vector<uint64_t>& domains, uint64_t seed) {
  std::vector<std::pair<std::string, ColumnType>> schema;
  for (size_t c = 0; c < domains.size(); ++c)
    schema.emplace_back(std::string(1, static_cast<char>('a' + c)), ColumnType::char_width(width));
  Table t = Table::with_schema(name, schema);
  Rng rng(seed);
  std::vector<std::string> cells(domains.size());
  for (uint64_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < domains.size(); ++c)
      cells[c] = mixed_cell(rng.next_below(domains[c]) + (c + 1) * 1000000, width);
    t.append_row(cells);
  }
  return t;
}

/// Unique scratch directory, removed on destruction.
struct TmpDir {
  std::filesystem::path path;

  TmpDir() {
    const auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto candidate = base / ("compass-test-" + std::to_string(::getpid()) + "-" +
                               std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create scratch directory");
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

}  // namespace fixtures
