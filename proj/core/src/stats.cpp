#include "compass/stats.hpp"

#include <algorithm>
#include <unordered_set>

namespace compass {

namespace {

std::vector<std::string> canon(std::vector<std::string> cols) {
  std::sort(cols.begin(), cols.end());
  return cols;
}

double shared_prefix_fraction(std::string_view a, std::string_view b) {
  const size_t w = a.size();
  size_t n = 0;
  while (n < w && a[n] == b[n]) ++n;
  return static_cast<double>(n) / static_cast<double>(w);
}

/// First up-to-8 bytes as a big-endian integer; orders like the byte string.
uint64_t key64(std::string_view enc) {
  uint64_t v = 0;
  for (size_t i = 0; i < 8; ++i) {
    v <<= 8;
    if (i < enc.size()) v |= static_cast<uint8_t>(enc[i]);
  }
  return v;
}

}  // namespace

const ColumnStats& TableStats::column(const std::string& name) const {
  const auto it = columns.find(name);
  if (it == columns.end()) fail("no statistics for column '" + name + "'");
  return it->second;
}

uint64_t TableStats::group_distinct(std::vector<std::string> cols) const {
  if (cols.size() == 1) return column(cols[0]).distinct_count;
  const auto it = group_distincts.find(canon(std::move(cols)));
  if (it == group_distincts.end()) fail("missing group distinct statistics");
  return it->second;
}

bool TableStats::has_group(std::vector<std::string> cols) const {
  if (cols.size() == 1) return columns.count(cols[0]) > 0;
  return group_distincts.count(canon(std::move(cols))) > 0;
}

TableStats compute_stats(const Table& t, const std::vector<std::vector<std::string>>& groups) {
  TableStats out;
  out.rows = t.rows;

  for (const auto& col : t.columns) {
    ColumnStats cs;
    cs.total_tuples = t.rows;
    std::unordered_set<std::string_view> distinct;
    distinct.reserve(t.rows);
    uint64_t nulls = 0;
    for (uint64_t r = 0; r < t.rows; ++r) {
      const std::string_view v = col.value(r);
      distinct.insert(v);
      if (is_null_value(v)) {
        ++nulls;
      } else {
        if (!cs.has_bounds) {
          cs.min_enc = cs.max_enc = std::string(v);
          cs.has_bounds = true;
        } else {
          if (v < cs.min_enc) cs.min_enc = std::string(v);
          if (v > cs.max_enc) cs.max_enc = std::string(v);
        }
      }
    }
    cs.distinct_count = distinct.size();
    cs.null_fraction = t.rows == 0 ? 0.0 : static_cast<double>(nulls) / t.rows;

    if (t.rows >= 2) {
      std::vector<std::string_view> sorted;
      sorted.reserve(t.rows);
      for (uint64_t r = 0; r < t.rows; ++r) sorted.push_back(col.value(r));
      std::sort(sorted.begin(), sorted.end());
      double total = 0;
      for (uint64_t r = 0; r + 1 < t.rows; ++r)
        total += shared_prefix_fraction(sorted[r], sorted[r + 1]);
      cs.avg_prefix_share = total / static_cast<double>(t.rows - 1);
    }
    out.columns.emplace(col.name, std::move(cs));
  }

  for (const auto& group : groups) {
    if (group.empty()) continue;
    std::vector<size_t> idx;
    for (const auto& c : group) idx.push_back(t.column_index(c));
    std::unordered_set<std::string> distinct;
    distinct.reserve(t.rows);
    std::string key;
    for (uint64_t r = 0; r < t.rows; ++r) {
      key.clear();
      for (size_t ci : idx) key.append(t.value(ci, r));
      distinct.insert(key);
    }
    out.group_distincts[canon(group)] = distinct.size();
  }
  return out;
}

double estimate_selectivity(const ColumnStats& stats, const ColumnType& type,
                            const Predicate& pred) {
  pred.validate(type);
  if (stats.total_tuples == 0) return 1.0;

  if (pred.op == PredOp::kEq)
    return stats.distinct_count == 0 ? 1.0 : 1.0 / static_cast<double>(stats.distinct_count);

  if (!stats.has_bounds) return 1.0;

  // Uniform fraction of the observed range covered by the predicate window,
  // on the numeric value for INT64/DATE and on the leading bytes for CHAR.
  double min_v, max_v, lo_v, hi_v;
  const ValueInterval iv = predicate_interval(pred, type);
  if (type.numeric()) {
    min_v = static_cast<double>(decode_int64(stats.min_enc));
    max_v = static_cast<double>(decode_int64(stats.max_enc));
    lo_v = iv.lo.infinite ? min_v : static_cast<double>(iv.lo.num) + (iv.lo.inclusive ? 0 : 1);
    hi_v = iv.hi.infinite ? max_v : static_cast<double>(iv.hi.num) - (iv.hi.inclusive ? 0 : 1);
  } else {
    min_v = static_cast<double>(key64(stats.min_enc));
    max_v = static_cast<double>(key64(stats.max_enc));
    lo_v = iv.lo.infinite ? min_v : static_cast<double>(key64(iv.lo.bytes));
    hi_v = iv.hi.infinite ? max_v : static_cast<double>(key64(iv.hi.bytes));
  }
  lo_v = std::max(lo_v, min_v);
  hi_v = std::min(hi_v, max_v);
  if (hi_v < lo_v) return 0.0;
  const double span = max_v - min_v + 1.0;
  return std::clamp((hi_v - lo_v + 1.0) / span, 0.0, 1.0);
}

double estimate_selectivity(const TableStats& stats, const Table& schema,
                            const std::vector<Predicate>& preds) {
  double sel = 1.0;
  for (const auto& p : preds) {
    const size_t col = schema.column_index(p.column);
    sel *= estimate_selectivity(stats.column(p.column), schema.columns[col].type, p);
  }
  return sel;
}

}  // namespace compass
