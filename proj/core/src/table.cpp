#include "compass/table.hpp"

#include <set>

namespace compass {

Table Table::with_schema(std::string name,
                         const std::vector<std::pair<std::string, ColumnType>>& schema) {
  Table t;
  t.name = std::move(name);
  for (const auto& [col, type] : schema) t.columns.push_back(Column{col, type, {}});
  t.validate();
  return t;
}

size_t Table::column_index(std::string_view col) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == col) return i;
  fail("table '" + name + "' has no column '" + std::string(col) + "'");
}

bool Table::has_column(std::string_view col) const {
  for (const auto& c : columns)
    if (c.name == col) return true;
  return false;
}

void Table::append_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns.size()) fail("row arity mismatch for table '" + name + "'");
  for (size_t i = 0; i < columns.size(); ++i) {
    if (cells[i].size() != columns[i].type.width)
      fail("cell width mismatch in column '" + columns[i].name + "'");
    columns[i].data += cells[i];
  }
  ++rows;
}

void Table::validate() const {
  std::set<std::string> names;
  for (const auto& c : columns) {
    if (!names.insert(c.name).second)
      fail("duplicate column name '" + c.name + "' in table '" + name + "'");
    if (c.data.size() != static_cast<size_t>(rows) * c.type.width)
      fail("column '" + c.name + "' length does not match row count");
  }
}

Table select_rows(const Table& t, const std::vector<uint64_t>& row_ids) {
  Table out;
  out.name = t.name;
  out.rows = row_ids.size();
  out.columns.reserve(t.columns.size());
  for (const auto& col : t.columns) {
    Column c{col.name, col.type, {}};
    c.data.reserve(row_ids.size() * col.type.width);
    for (uint64_t r : row_ids) c.data.append(col.value(r));
    out.columns.push_back(std::move(c));
  }
  return out;
}

}  // namespace compass
