#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "compass/codec.hpp"
#include "compass/predicate.hpp"
#include "compass/stats.hpp"
#include "compass/table.hpp"

namespace compass {

struct IndexDef {
  std::string table;
  std::vector<std::string> key_columns;       // ordered, non-empty
  std::vector<std::string> included_columns;  // disjoint from keys
  std::optional<Predicate> filter;
  Method method = Method::kNone;
  bool clustered = false;

  std::vector<std::string> all_columns() const;
  std::set<std::string> column_set() const;
  bool same_shape(const IndexDef& other) const;  // everything but the method

  /// Canonical identity string used in outputs, files and dedupe.
  std::string signature() const;

  void validate(const Table& t) const;
};

struct BuiltIndex {
  IndexDef def;
  RowLayout layout;
  std::vector<Page> pages;
  GlobalDict dict;  // GDICT only
  uint64_t page_count = 0;
  uint64_t tuple_count = 0;
  uint64_t bytes_raw = 0;         // header + raw payload per page
  uint64_t bytes_compressed = 0;  // accounted page bytes (+ dictionary for GDICT)
};

/// Materializes an index: filter, project to key + included columns, sort
/// lexicographically by the encoded row (keys lead, remaining columns break
/// ties), pack greedily into pages, compress per method, measure exactly.
BuiltIndex build_index(const Table& t, const IndexDef& def);

/// Decompresses every page back to the sorted row sequence (tests, debug).
std::vector<std::string> decode_rows(const BuiltIndex& idx);

RowLayout layout_for(const Table& t, const IndexDef& def);

/// Uncompressed size: ceil(row_count / rows_per_page) with rows_per_page =
/// floor((page_size - header) / row_width). A filter on the index scales
/// row_count by its estimated selectivity.
uint64_t estimate_uncompressed_pages(const Table& t, const TableStats& stats,
                                     const IndexDef& def, uint64_t row_count);

}  // namespace compass
