#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "compass/types.hpp"

namespace compass {

struct Column {
  std::string name;
  ColumnType type;
  std::string data;  // rows * type.width bytes, column-major

  std::string_view value(uint64_t row) const {
    return std::string_view(data).substr(row * type.width, type.width);
  }
};

/// Immutable after construction. All read operations are safe to run
/// concurrently; construction is single-threaded.
struct Table {
  std::string name;
  std::vector<Column> columns;
  uint64_t rows = 0;

  static Table with_schema(std::string name,
                           const std::vector<std::pair<std::string, ColumnType>>& schema);

  /// Index of a column, or fails naming the table and column.
  size_t column_index(std::string_view col) const;
  bool has_column(std::string_view col) const;

  std::string_view value(size_t col, uint64_t row) const { return columns[col].value(row); }

  /// Appends one row given encoded cells, one per column, widths already fixed.
  void append_row(const std::vector<std::string>& cells);

  /// Checks column-length and name-uniqueness invariants.
  void validate() const;
};

/// Column-major copy of the selected rows, preserving order.
Table select_rows(const Table& t, const std::vector<uint64_t>& row_ids);

}  // namespace compass
