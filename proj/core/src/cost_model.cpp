#include "compass/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace compass {

std::vector<std::string> SelectStatement::referenced_columns() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto put = [&](const std::string& c) {
    if (seen.insert(c).second) out.push_back(c);
  };
  for (const auto& p : predicates) put(p.column);
  for (const auto& c : columns) put(c);
  return out;
}

double statement_weight(const Statement& s) {
  return std::visit([](const auto& st) { return st.weight; }, s);
}

const std::string& statement_table(const Statement& s) {
  return std::visit([](const auto& st) -> const std::string& { return st.table; }, s);
}

double CostModelParams::alpha(Method m) const {
  switch (m) {
    case Method::kNone: return 0;
    case Method::kNs:
    case Method::kGdict: return alpha_row;
    case Method::kPage: return alpha_page;
  }
  return 0;
}

double CostModelParams::beta(Method m) const {
  switch (m) {
    case Method::kNone: return 0;
    case Method::kNs:
    case Method::kGdict: return beta_row;
    case Method::kPage: return beta_page;
  }
  return 0;
}

void CostModelParams::validate() const {
  const double all[] = {io_page_cost,  cpu_tuple_cost, lookup_cost,
                        alpha_row,     alpha_page,     beta_row,
                        beta_page,     maintenance_per_index_tuple};
  for (double v : all)
    if (v < 0) fail("cost model parameters must be >= 0");
  if (alpha_page < alpha_row) fail("alpha for PAGE must be >= alpha for row methods");
  if (beta_page < beta_row) fail("beta for PAGE must be >= beta for row methods");
}

double Configuration::total_pages() const {
  double total = 0;
  for (const auto& ci : indexes) total += ci.size.pages;
  return total;
}

bool Configuration::contains(const std::string& signature) const {
  for (const auto& ci : indexes)
    if (ci.def.signature() == signature) return true;
  return false;
}

bool Configuration::has_clustered(const std::string& table, const std::string& except_sig) const {
  for (const auto& ci : indexes)
    if (ci.def.clustered && ci.def.table == table && ci.def.signature() != except_sig) return true;
  return false;
}

void Configuration::add(ConfiguredIndex idx) {
  const std::string sig = idx.def.signature();
  if (contains(sig)) fail("configuration already contains " + sig);
  if (idx.def.clustered && has_clustered(idx.def.table))
    fail("configuration already has a clustered index on '" + idx.def.table + "'");
  indexes.push_back(std::move(idx));
}

void Configuration::validate() const {
  std::set<std::string> sigs;
  std::set<std::string> clustered_tables;
  for (const auto& ci : indexes) {
    if (!sigs.insert(ci.def.signature()).second)
      fail("duplicate index in configuration: " + ci.def.signature());
    if (ci.def.clustered && !clustered_tables.insert(ci.def.table).second)
      fail("two clustered indexes on table '" + ci.def.table + "'");
  }
}

std::string path_kind_name(PathKind k) {
  switch (k) {
    case PathKind::kHeapScan: return "heap-scan";
    case PathKind::kIndexScan: return "index-scan";
    case PathKind::kIndexSeek: return "index-seek";
  }
  return "?";
}

uint64_t heap_pages(const Table& t) {
  std::vector<uint32_t> widths;
  for (const auto& c : t.columns) widths.push_back(c.type.width);
  const RowLayout layout = RowLayout::of(widths);
  const uint64_t per_page = (page_size() - kPageHeaderBytes) / layout.row_width;
  if (per_page == 0) fail("heap row does not fit a page");
  return (t.rows + per_page - 1) / per_page;
}

namespace {

/// Selectivity of the statement predicates that a seek on this index can
/// consume: predicates on consecutive leading key columns, stopping after
/// the first non-equality predicate.
double seek_selectivity(const SelectStatement& stmt, const IndexDef& def, const Table& t,
                        const TableStats& stats, bool* applicable) {
  double sel = 1.0;
  bool any = false;
  for (const auto& key : def.key_columns) {
    const Predicate* pred = nullptr;
    for (const auto& p : stmt.predicates)
      if (p.column == key) pred = &p;
    if (pred == nullptr) break;
    const size_t col = t.column_index(key);
    sel *= estimate_selectivity(stats.column(key), t.columns[col].type, *pred);
    any = true;
    if (pred->op != PredOp::kEq) break;  // range closes the prefix
  }
  *applicable = any;
  return sel;
}

/// A partial index is applicable only when the statement's predicates imply
/// the index filter, i.e. some statement predicate on the filter column is
/// contained in the filter's range.
bool filter_applicable(const SelectStatement& stmt, const IndexDef& def, const Table& t) {
  if (!def.filter) return true;
  const size_t col = t.column_index(def.filter->column);
  const ColumnType& type = t.columns[col].type;
  const ValueInterval filter_iv = predicate_interval(*def.filter, type);
  for (const auto& p : stmt.predicates) {
    if (p.column != def.filter->column) continue;
    if (interval_contains(filter_iv, predicate_interval(p, type))) return true;
  }
  return false;
}

bool covering(const SelectStatement& stmt, const IndexDef& def) {
  const std::set<std::string> cols = def.column_set();
  for (const auto& c : stmt.referenced_columns())
    if (cols.find(c) == cols.end()) return false;
  return true;
}

uint32_t columns_read_in_index(const SelectStatement& stmt, const IndexDef& def) {
  const std::set<std::string> cols = def.column_set();
  uint32_t n = 0;
  for (const auto& c : stmt.referenced_columns())
    if (cols.count(c)) ++n;
  return n;
}

}  // namespace

namespace {

AccessPath cost_path(const SelectStatement& stmt, const Configuration& config, AccessPath path,
                     const Catalog& catalog, const CostModelParams& params) {
  const Table& t = catalog.table(stmt.table);
  const TableStats& stats = catalog.table_stats(stmt.table);

  if (path.kind == PathKind::kHeapScan) {
    path.delivered_tuples = static_cast<double>(t.rows);
    path.io = static_cast<double>(heap_pages(t)) * params.io_page_cost;
    path.cpu = static_cast<double>(t.rows) * params.cpu_tuple_cost;
    return path;
  }

  const ConfiguredIndex& ci = config.indexes.at(path.index_pos);
  const IndexDef& def = ci.def;
  const double index_pages = ci.size.pages;

  double filter_sel = 1.0;
  if (def.filter) {
    const size_t col = t.column_index(def.filter->column);
    filter_sel = estimate_selectivity(stats.column(def.filter->column), t.columns[col].type,
                                      *def.filter);
  }
  const double index_rows = static_cast<double>(t.rows) * filter_sel;

  double delivered = index_rows;
  double pages_touched = index_pages;
  if (path.kind == PathKind::kIndexSeek) {
    bool applicable = false;
    const double sel = seek_selectivity(stmt, def, t, stats, &applicable);
    if (!applicable) fail("seek path without a leading-prefix predicate");
    // Statement predicates refine rows inside the (already filtered) index.
    const double cond = filter_sel > 0 ? std::min(1.0, sel / filter_sel) : 0.0;
    delivered = index_rows * cond;
    pages_touched = index_pages * cond;
  }

  path.delivered_tuples = delivered;
  path.io = pages_touched * params.io_page_cost;
  path.cpu = delivered * params.cpu_tuple_cost;
  if (!path.covering) path.cpu += delivered * params.lookup_cost;
  path.cpu += params.beta(def.method) * delivered *
              static_cast<double>(columns_read_in_index(stmt, def));
  return path;
}

}  // namespace

double read_cost(const SelectStatement& stmt, const Configuration& config,
                 const AccessPath& path, const Catalog& catalog,
                 const CostModelParams& params) {
  return cost_path(stmt, config, path, catalog, params).total();
}

double update_cost(const InsertStatement& stmt, const IndexDef& index, const Catalog& catalog,
                   const CostModelParams& params) {
  if (index.table != stmt.table)
    fail("insert into '" + stmt.table + "' costed against an index on '" + index.table + "'");
  const Table& t = catalog.table(stmt.table);
  const TableStats& stats = catalog.table_stats(stmt.table);

  double written = static_cast<double>(stmt.rows_per_exec);
  if (index.filter) {
    const size_t col = t.column_index(index.filter->column);
    written *= estimate_selectivity(stats.column(index.filter->column), t.columns[col].type,
                                    *index.filter);
  }
  return written * (params.maintenance_per_index_tuple + params.alpha(index.method));
}

CostedPlan best_plan(const Statement& stmt, const Configuration& config, const Catalog& catalog,
                     const CostModelParams& params) {
  config.validate();
  params.validate();
  CostedPlan plan;

  if (std::holds_alternative<InsertStatement>(stmt)) {
    const auto& ins = std::get<InsertStatement>(stmt);
    (void)catalog.table(ins.table);  // statement/table check
    AccessPath heap;
    heap.kind = PathKind::kHeapScan;
    heap.cpu = static_cast<double>(ins.rows_per_exec) * params.cpu_tuple_cost;
    double total = heap.cpu;
    for (const auto& ci : config.indexes)
      if (ci.def.table == ins.table) total += update_cost(ins, ci.def, catalog, params);
    plan.chosen = heap;
    plan.io_cost = 0;
    plan.cpu_cost = total;
    plan.total = total;
    return plan;
  }

  const auto& sel = std::get<SelectStatement>(stmt);
  const Table& t = catalog.table(sel.table);
  const TableStats& stats = catalog.table_stats(sel.table);

  std::vector<AccessPath> paths;
  {
    AccessPath heap;
    heap.kind = PathKind::kHeapScan;
    heap.covering = true;
    heap.delivered_tuples = static_cast<double>(t.rows);
    paths.push_back(heap);
  }
  for (size_t i = 0; i < config.indexes.size(); ++i) {
    const IndexDef& def = config.indexes[i].def;
    if (def.table != sel.table) continue;
    if (!filter_applicable(sel, def, t)) continue;
    const bool cov = covering(sel, def);

    AccessPath scan;
    scan.kind = PathKind::kIndexScan;
    scan.index_pos = static_cast<int>(i);
    scan.covering = cov;
    paths.push_back(scan);

    bool seekable = false;
    seek_selectivity(sel, def, t, stats, &seekable);
    if (seekable) {
      AccessPath seek;
      seek.kind = PathKind::kIndexSeek;
      seek.index_pos = static_cast<int>(i);
      seek.covering = cov;
      paths.push_back(seek);
    }
  }

  bool first = true;
  for (const auto& p : paths) {
    const AccessPath costed = cost_path(sel, config, p, catalog, params);
    if (first || costed.total() < plan.chosen.total()) {
      plan.chosen = costed;
      first = false;
    }
    plan.considered.push_back(costed);
  }
  plan.io_cost = plan.chosen.io;
  plan.cpu_cost = plan.chosen.cpu;
  plan.total = plan.chosen.total();
  return plan;
}

double workload_cost(const Workload& workload, const Configuration& config,
                     const Catalog& catalog, const CostModelParams& params) {
  double total = 0;
  for (const auto& stmt : workload)
    total += statement_weight(stmt) * best_plan(stmt, config, catalog, params).total;
  return total;
}

}  // namespace compass
