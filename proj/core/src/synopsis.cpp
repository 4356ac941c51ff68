#include "compass/synopsis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace compass {

namespace {

void index_column(JoinSynopsis& syn, const std::string& col) {
  if (syn.sorted_cols.count(col) || !syn.rows.has_column(col)) return;
  const size_t ci = syn.rows.column_index(col);
  std::vector<uint64_t> order(syn.rows.rows);
  for (uint64_t r = 0; r < syn.rows.rows; ++r) order[r] = r;
  std::sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
    return syn.rows.value(ci, a) < syn.rows.value(ci, b);
  });
  syn.sorted_cols.emplace(col, std::move(order));
}

}  // namespace

JoinSynopsis build_join_synopsis(const Catalog& catalog, const std::string& fact,
                                 const std::vector<DimJoin>& dims, double f, uint64_t seed) {
  const Table& fact_table = catalog.table(fact);
  JoinSynopsis syn;
  syn.fact_table = fact;
  syn.fraction = f;
  syn.seed = seed;
  syn.dims = dims;
  syn.fact_rows = fact_table.rows;

  const Sample fact_sample = build_base_sample(fact_table, f, seed);

  // Lookup per dimension: unique key value -> row. Joining the fact sample
  // against the full dimensions keeps the joined row count equal to the
  // fact sample's.
  struct DimLookup {
    const Table* table;
    size_t key_col;
    std::unordered_map<std::string_view, uint64_t> by_key;
  };
  std::vector<DimLookup> lookups;
  for (const auto& d : dims) {
    const Table& dim = catalog.table(d.dim_table);
    DimLookup lk{&dim, dim.column_index(d.dim_key), {}};
    lk.by_key.reserve(dim.rows);
    for (uint64_t r = 0; r < dim.rows; ++r) {
      if (!lk.by_key.emplace(dim.value(lk.key_col, r), r).second)
        fail("dimension '" + d.dim_table + "' key '" + d.dim_key + "' is not unique");
    }
    lookups.push_back(std::move(lk));
  }

  std::vector<std::pair<std::string, ColumnType>> schema;
  for (const auto& c : fact_sample.rows.columns) schema.emplace_back(c.name, c.type);
  for (size_t di = 0; di < dims.size(); ++di) {
    for (const auto& c : lookups[di].table->columns) {
      if (c.name == dims[di].dim_key) continue;  // duplicate of the foreign key values
      schema.emplace_back(c.name, c.type);
    }
  }
  syn.rows = Table::with_schema(fact + "_synopsis", schema);

  std::vector<size_t> fk_cols;
  for (const auto& d : dims) fk_cols.push_back(fact_sample.rows.column_index(d.foreign_key));

  std::vector<std::string> cells;
  for (uint64_t r = 0; r < fact_sample.rows.rows; ++r) {
    cells.clear();
    for (const auto& c : fact_sample.rows.columns) cells.emplace_back(c.value(r));
    for (size_t di = 0; di < dims.size(); ++di) {
      const std::string_view fk = fact_sample.rows.value(fk_cols[di], r);
      const auto it = lookups[di].by_key.find(fk);
      if (it == lookups[di].by_key.end())
        fail("dangling foreign key '" + dims[di].foreign_key + "' into '" + dims[di].dim_table +
             "'");
      const Table& dim = *lookups[di].table;
      for (size_t ci = 0; ci < dim.columns.size(); ++ci) {
        if (ci == lookups[di].key_col) continue;
        cells.emplace_back(dim.value(ci, it->second));
      }
    }
    syn.rows.append_row(cells);
  }

  // Eager sorted lookups on join keys, used by filter/group evaluation.
  for (const auto& d : dims) index_column(syn, d.foreign_key);
  return syn;
}

void FrequencyStats::validate() const {
  uint64_t sum_kf = 0, sum_f = 0;
  for (const auto& [k, fk] : freq) {
    sum_kf += k * fk;
    sum_f += fk;
  }
  if (sum_kf != r) fail("frequency stats: sum k*f_k != r");
  if (sum_f != d) fail("frequency stats: sum f_k != d");
  if (d > r) fail("frequency stats: d > r");
}

double estimate_distinct(const FrequencyStats& stats) {
  stats.validate();
  if (static_cast<double>(stats.r) > stats.n) fail("distinct estimation: r exceeds n");
  if (stats.r == 0) return 0;
  if (static_cast<double>(stats.r) >= stats.n) return static_cast<double>(stats.d);

  const auto it = stats.freq.find(1);
  const double f1 = it == stats.freq.end() ? 0.0 : static_cast<double>(it->second);
  const double est = std::sqrt(stats.n / static_cast<double>(stats.r)) * f1 +
                     (static_cast<double>(stats.d) - f1);
  return std::clamp(est, static_cast<double>(stats.d), stats.n);
}

double estimate_distinct_multiply(const FrequencyStats& stats, double fraction) {
  if (!(fraction > 0)) fail("multiply estimator needs a positive fraction");
  return static_cast<double>(stats.d) / fraction;
}

namespace {

/// Binary search over a sorted row-id lookup instead of scanning. Usable
/// when the predicate bounds order the same way the lookup was sorted
/// (encoded bytes), which holds for CHAR and for non-negative integers.
bool lookup_usable(const Predicate& p, const ColumnType& type) {
  if (!type.numeric()) return true;
  if (p.lo.i < 0) return false;
  return p.op != PredOp::kBetween || p.hi.i >= 0;
}

std::vector<uint64_t> filter_with_lookup(const Table& t, const Predicate& p,
                                         const std::vector<uint64_t>& sorted_ids) {
  const size_t col = t.column_index(p.column);
  const ColumnType& type = t.columns[col].type;
  p.validate(type);
  const ValueInterval iv = predicate_interval(p, type);
  auto key = [&](uint64_t row) { return t.value(col, row); };

  auto lo_it = sorted_ids.begin();
  if (!iv.lo.infinite) {
    const std::string bound = type.numeric() ? encode_int64(iv.lo.num) : iv.lo.bytes;
    lo_it = std::partition_point(sorted_ids.begin(), sorted_ids.end(), [&](uint64_t row) {
      return iv.lo.inclusive ? key(row) < bound : key(row) <= bound;
    });
  }
  auto hi_it = sorted_ids.end();
  if (!iv.hi.infinite) {
    const std::string bound = type.numeric() ? encode_int64(iv.hi.num) : iv.hi.bytes;
    hi_it = std::partition_point(lo_it, sorted_ids.end(), [&](uint64_t row) {
      return iv.hi.inclusive ? key(row) <= bound : key(row) < bound;
    });
  }
  std::vector<uint64_t> out(lo_it, hi_it);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

MvSampleResult create_mv_sample(const Table& source_rows, double fraction, uint64_t root_tuples,
                                const MvDef& mv, const DistinctEstimator& estimator,
                                const std::map<std::string, std::vector<uint64_t>>* sorted_cols) {
  if (mv.group_by.empty()) fail("grouped view needs at least one group-by column");
  for (const auto& c : mv.group_by) (void)source_rows.column_index(c);

  std::vector<uint64_t> ids;
  if (mv.filter) {
    const size_t fcol = source_rows.column_index(mv.filter->column);
    const auto lookup = sorted_cols != nullptr ? sorted_cols->find(mv.filter->column)
                                               : std::map<std::string, std::vector<uint64_t>>::
                                                     const_iterator{};
    if (sorted_cols != nullptr && lookup != sorted_cols->end() &&
        lookup_usable(*mv.filter, source_rows.columns[fcol].type)) {
      ids = filter_with_lookup(source_rows, *mv.filter, lookup->second);
    } else {
      ids = filter_rows(source_rows, *mv.filter);
    }
  } else {
    ids.resize(source_rows.rows);
    for (uint64_t r = 0; r < source_rows.rows; ++r) ids[r] = r;
  }

  std::vector<size_t> group_cols;
  for (const auto& c : mv.group_by) group_cols.push_back(source_rows.column_index(c));

  std::map<std::string, uint64_t> groups;  // concatenated group key -> count
  std::string key;
  for (uint64_t r : ids) {
    key.clear();
    for (size_t ci : group_cols) key.append(source_rows.value(ci, r));
    ++groups[key];
  }

  MvSampleResult out;
  out.stats.r = ids.size();
  out.stats.d = groups.size();
  const double filter_factor =
      source_rows.rows == 0 ? 0.0
                            : static_cast<double>(ids.size()) / static_cast<double>(source_rows.rows);
  out.stats.n = static_cast<double>(root_tuples) * filter_factor;
  for (const auto& [_, cnt] : groups) ++out.stats.freq[cnt];

  // MV sample table: group-by columns plus the COUNT column.
  std::vector<std::pair<std::string, ColumnType>> schema;
  for (size_t ci : group_cols)
    schema.emplace_back(source_rows.columns[ci].name, source_rows.columns[ci].type);
  schema.emplace_back("cnt", ColumnType::int64());
  Table mv_table = Table::with_schema(source_rows.name + "_mv", schema);
  std::vector<std::string> cells;
  for (const auto& [gk, cnt] : groups) {
    cells.clear();
    size_t off = 0;
    for (size_t ci : group_cols) {
      const uint32_t w = source_rows.columns[ci].type.width;
      cells.push_back(gk.substr(off, w));
      off += w;
    }
    cells.push_back(encode_int64(static_cast<int64_t>(cnt)));
    mv_table.append_row(cells);
  }

  out.sample.source = source_rows.name;
  out.sample.fraction = fraction;
  out.sample.rows = std::move(mv_table);
  out.low_confidence = ids.size() < kLowConfidenceRows;
  if (ids.empty()) {
    out.estimated_tuples = 0;
    return out;
  }
  out.estimated_tuples = estimator ? estimator(out.stats) : estimate_distinct(out.stats);
  return out;
}

MvSampleResult create_mv_sample(const JoinSynopsis& synopsis, const MvDef& mv,
                                const DistinctEstimator& estimator) {
  return create_mv_sample(synopsis.rows, synopsis.fraction, synopsis.fact_rows, mv, estimator,
                          &synopsis.sorted_cols);
}

MvSampleResult create_mv_sample(const Sample& sample, uint64_t root_tuples, const MvDef& mv,
                                const DistinctEstimator& estimator) {
  return create_mv_sample(sample.rows, sample.fraction, root_tuples, mv, estimator, nullptr);
}

}  // namespace compass
