#include "compass/index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace compass {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

}  // namespace

std::vector<std::string> IndexDef::all_columns() const {
  std::vector<std::string> cols = key_columns;
  cols.insert(cols.end(), included_columns.begin(), included_columns.end());
  return cols;
}

std::set<std::string> IndexDef::column_set() const {
  const auto cols = all_columns();
  return {cols.begin(), cols.end()};
}

bool IndexDef::same_shape(const IndexDef& other) const {
  const bool filters_match =
      filter.has_value() == other.filter.has_value() &&
      (!filter || filter->signature() == other.filter->signature());
  return table == other.table && key_columns == other.key_columns &&
         included_columns == other.included_columns && clustered == other.clustered &&
         filters_match;
}

std::string IndexDef::signature() const {
  std::string s = table + "(k=" + join(key_columns);
  if (!included_columns.empty()) s += ";i=" + join(included_columns);
  s += ";m=" + method_name(method);
  if (clustered) s += ";cl";
  if (filter) s += ";f=" + filter->signature();
  s += ")";
  return s;
}

void IndexDef::validate(const Table& t) const {
  if (table != t.name) fail("index on '" + table + "' checked against table '" + t.name + "'");
  if (key_columns.empty()) fail("index must have at least one key column");
  std::set<std::string> seen;
  for (const auto& c : all_columns()) {
    if (!t.has_column(c)) fail("index references unknown column '" + c + "'");
    if (!seen.insert(c).second) fail("index lists column '" + c + "' twice");
  }
  if (filter) {
    const size_t col = t.column_index(filter->column);
    filter->validate(t.columns[col].type);
  }
}

RowLayout layout_for(const Table& t, const IndexDef& def) {
  std::vector<uint32_t> widths;
  for (const auto& c : def.all_columns()) widths.push_back(t.columns[t.column_index(c)].type.width);
  return RowLayout::of(std::move(widths));
}

BuiltIndex build_index(const Table& t, const IndexDef& def) {
  def.validate(t);
  BuiltIndex out;
  out.def = def;
  out.layout = layout_for(t, def);

  std::vector<size_t> col_idx;
  for (const auto& c : def.all_columns()) col_idx.push_back(t.column_index(c));

  std::vector<std::string> rows;
  auto emit = [&](uint64_t r) {
    std::string row;
    row.reserve(out.layout.row_width);
    for (size_t ci : col_idx) row.append(t.value(ci, r));
    rows.push_back(std::move(row));
  };
  if (def.filter) {
    for (uint64_t r : filter_rows(t, *def.filter)) emit(r);
  } else {
    rows.reserve(t.rows);
    for (uint64_t r = 0; r < t.rows; ++r) emit(r);
  }

  // Keys lead the layout, so plain lexicographic order sorts by key with
  // whole-row tie-breaking.
  std::sort(rows.begin(), rows.end());

  if (def.method == Method::kGdict) out.dict = GlobalDict::build(rows, out.layout);
  const GlobalDict* dict = def.method == Method::kGdict ? &out.dict : nullptr;

  const uint32_t cap = out.layout.capacity(def.method);
  for (size_t start = 0; start < rows.size(); start += cap) {
    const size_t n = std::min<size_t>(cap, rows.size() - start);
    Page raw;
    raw.method = def.method;
    raw.tuple_count = static_cast<uint16_t>(n);
    raw.body.reserve(n * out.layout.row_width);
    for (size_t i = 0; i < n; ++i) raw.body += rows[start + i];
    out.bytes_raw += kPageHeaderBytes + raw.body.size();
    Page comp = compress_page(raw, out.layout, def.method, dict);
    out.bytes_compressed += comp.bytes();
    out.pages.push_back(std::move(comp));
  }
  out.page_count = out.pages.size();
  out.tuple_count = rows.size();
  if (def.method == Method::kGdict) out.bytes_compressed += out.dict.bytes();
  return out;
}

std::vector<std::string> decode_rows(const BuiltIndex& idx) {
  const GlobalDict* dict = idx.def.method == Method::kGdict ? &idx.dict : nullptr;
  std::vector<std::string> rows;
  rows.reserve(idx.tuple_count);
  for (const auto& page : idx.pages) {
    const Page raw = decompress_page(page, idx.layout, dict);
    for (uint16_t i = 0; i < raw.tuple_count; ++i)
      rows.push_back(raw.body.substr(static_cast<size_t>(i) * idx.layout.row_width,
                                     idx.layout.row_width));
  }
  return rows;
}

uint64_t estimate_uncompressed_pages(const Table& t, const TableStats& stats,
                                     const IndexDef& def, uint64_t row_count) {
  const RowLayout layout = layout_for(t, def);
  const uint64_t usable = page_size() - kPageHeaderBytes;
  if (layout.row_width > usable)
    fail("row of " + std::to_string(layout.row_width) + " bytes does not fit a page");
  const uint64_t rows_per_page = usable / layout.row_width;

  double effective = static_cast<double>(row_count);
  if (def.filter) {
    const size_t col = t.column_index(def.filter->column);
    effective *= estimate_selectivity(stats.column(def.filter->column), t.columns[col].type,
                                      *def.filter);
  }
  if (effective <= 0) return 0;
  return static_cast<uint64_t>(std::ceil(effective / static_cast<double>(rows_per_page)));
}

}  // namespace compass
