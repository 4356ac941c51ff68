#include "compass/estimation_plan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace compass {

namespace {

struct GNode {
  IndexDef def;
  std::string sig;
  bool existing = false;
  bool is_target = false;
  double exact_pages = 0;
  size_t width = 0;

  // Per-fraction planning state.
  double sample_cost = 0;
  ErrorDist sampled_err;
  enum class St { kNone, kSampled, kDeduced, kUnused } st = St::kNone;
  int ded = -1;
  ErrorDist err;
  bool needed = false;
};

struct GDed {
  DeductionKind kind;
  int parent;
  std::vector<int> children;
};

struct Graph {
  std::vector<GNode> nodes;
  std::vector<GDed> deds;
  std::map<std::string, int> by_sig;
  std::vector<std::vector<int>> node_deds;

  int add_node(const IndexDef& def, bool target, bool existing, double exact_pages) {
    const std::string sig = def.signature();
    auto it = by_sig.find(sig);
    if (it != by_sig.end()) {
      GNode& n = nodes[it->second];
      n.is_target = n.is_target || target;
      if (existing && !n.existing) {
        n.existing = true;
        n.exact_pages = exact_pages;
      }
      return it->second;
    }
    GNode n;
    n.def = def;
    n.sig = sig;
    n.existing = existing;
    n.is_target = target;
    n.exact_pages = exact_pages;
    n.width = def.all_columns().size();
    nodes.push_back(std::move(n));
    node_deds.emplace_back();
    by_sig.emplace(sig, static_cast<int>(nodes.size() - 1));
    return static_cast<int>(nodes.size() - 1);
  }

  void add_deduction(DeductionKind kind, int parent, std::vector<int> children) {
    // Dedupe by (parent, child set).
    for (int d : node_deds[parent]) {
      if (deds[d].kind == kind && deds[d].children == children) return;
    }
    deds.push_back(GDed{kind, parent, std::move(children)});
    node_deds[parent].push_back(static_cast<int>(deds.size() - 1));
  }
};

IndexDef child_def(const IndexDef& parent, std::vector<std::string> keys) {
  IndexDef d;
  d.table = parent.table;
  d.key_columns = std::move(keys);
  d.method = parent.method;
  d.filter = parent.filter;
  d.clustered = false;
  return d;
}

/// Deduction shapes, bounded: ColSet between same-column-set nodes, the
/// longest-proper-prefix split, and the full singleton decomposition.
Graph build_graph(const std::vector<IndexDef>& targets, const std::vector<ExistingIndex>& existing,
                  const Catalog& catalog) {
  Graph g;
  for (const auto& ex : existing) {
    if (ex.def.method == Method::kNone) fail("existing indexes in the graph must be compressed");
    g.add_node(ex.def, false, true, ex.pages);
  }
  for (const auto& t : targets) {
    if (t.method == Method::kNone) fail("size-estimation targets must be compressed");
    t.validate(catalog.table(t.table));
    g.add_node(t, true, false, 0);
  }

  // ColSet groups: same table, column set, method and filter. The earliest
  // node (existing first, then smallest signature) serves as the
  // representative every other member deduces from; the one-way edges keep
  // the graph acyclic.
  std::map<std::string, std::vector<int>> groups;
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const IndexDef& d = g.nodes[i].def;
    if (category_of(d.method) != Category::kOrdInd) continue;
    std::string key = d.table + "|" + method_name(d.method) + "|";
    for (const auto& c : d.column_set()) key += c + ",";
    if (d.filter) key += "|" + d.filter->signature();
    groups[key].push_back(static_cast<int>(i));
  }
  for (auto& [_, members] : groups) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      if (g.nodes[a].existing != g.nodes[b].existing) return g.nodes[a].existing;
      return g.nodes[a].sig < g.nodes[b].sig;
    });
    const int rep = members[0];
    for (size_t i = 1; i < members.size(); ++i)
      g.add_deduction(DeductionKind::kColSet, members[i], {rep});
  }

  // ColExt splits, targets only.
  const size_t initial = g.nodes.size();
  for (size_t i = 0; i < initial; ++i) {
    if (!g.nodes[i].is_target) continue;
    const IndexDef def = g.nodes[i].def;
    const std::vector<std::string> cols = def.all_columns();
    if (cols.size() < 2) continue;
    const Category cat = category_of(def.method);

    if (cat == Category::kOrdInd) {
      // Longest proper prefix + last column.
      std::vector<std::string> prefix(cols.begin(), cols.end() - 1);
      const int c1 = g.add_node(child_def(def, prefix), false, false, 0);
      const int c2 = g.add_node(child_def(def, {cols.back()}), false, false, 0);
      g.add_deduction(DeductionKind::kColExtOrdInd, static_cast<int>(i), {c1, c2});
      if (cols.size() > 2) {
        std::vector<int> singles;
        for (const auto& c : cols) singles.push_back(g.add_node(child_def(def, {c}), false, false, 0));
        g.add_deduction(DeductionKind::kColExtOrdInd, static_cast<int>(i), std::move(singles));
      }
    } else {
      // ORD-DEP extrapolates from the singleton indexes, in column order,
      // and needs distinct counts for every key prefix.
      const TableStats& stats = catalog.table_stats(def.table);
      bool have_groups = true;
      std::vector<std::string> prefix;
      for (const auto& c : cols) {
        prefix.push_back(c);
        if (!stats.has_group(prefix)) {
          have_groups = false;
          break;
        }
      }
      if (!have_groups) continue;
      std::vector<int> singles;
      for (const auto& c : cols) singles.push_back(g.add_node(child_def(def, {c}), false, false, 0));
      g.add_deduction(DeductionKind::kColExtOrdDep, static_cast<int>(i), std::move(singles));
    }
  }
  return g;
}

// Narrow to wide; within a width, existing nodes first so ColSet inputs are
// always resolved before the nodes deducing from them.
std::vector<int> order_nodes(const Graph& g) {
  std::vector<int> order(g.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.nodes[a].width != g.nodes[b].width) return g.nodes[a].width < g.nodes[b].width;
    if (g.nodes[a].existing != g.nodes[b].existing) return g.nodes[a].existing;
    return g.nodes[a].sig < g.nodes[b].sig;
  });
  return order;
}

double node_sample_cost(const GNode& n, double f, const Catalog& catalog) {
  const Table& t = catalog.table(n.def.table);
  const TableStats& stats = catalog.table_stats(n.def.table);
  const uint64_t sample_rows =
      static_cast<uint64_t>(std::llround(static_cast<double>(t.rows) * f));
  return static_cast<double>(estimate_uncompressed_pages(t, stats, n.def, sample_rows));
}

void prepare_fraction(Graph& g, double f, const Catalog& catalog, const ErrorModel& model) {
  for (auto& n : g.nodes) {
    n.st = GNode::St::kNone;
    n.ded = -1;
    n.needed = false;
    if (n.existing) {
      n.st = GNode::St::kSampled;
      n.err = {1.0, 0.0};
      n.sample_cost = 0;
      continue;
    }
    const Table& t = catalog.table(n.def.table);
    const TableStats& stats = catalog.table_stats(n.def.table);
    double sel = 1.0;
    if (n.def.filter) {
      const size_t col = t.column_index(n.def.filter->column);
      sel = estimate_selectivity(stats.column(n.def.filter->column), t.columns[col].type,
                                 *n.def.filter);
    }
    const uint64_t expected_rows = static_cast<uint64_t>(
        std::llround(static_cast<double>(t.rows) * f * sel));
    n.sample_cost = node_sample_cost(n, f, catalog);
    n.sampled_err = model.sample_cf_error(category_of(n.def.method), f, expected_rows);
    n.err = n.sampled_err;
  }
}

ErrorDist deduction_error(const Graph& g, const GDed& d, const ErrorModel& model,
                          const std::vector<ErrorDist>* override_child_errs = nullptr) {
  std::vector<ErrorDist> factors;
  if (override_child_errs != nullptr) {
    factors = *override_child_errs;
  } else {
    for (int c : d.children) factors.push_back(g.nodes[c].err);
  }
  switch (d.kind) {
    case DeductionKind::kColSet:
      factors.push_back(model.colset_error());
      break;
    case DeductionKind::kColExtOrdInd:
      factors.push_back(model.colext_error(Category::kOrdInd, static_cast<int>(d.children.size())));
      break;
    case DeductionKind::kColExtOrdDep:
      factors.push_back(model.colext_error(Category::kOrdDep, static_cast<int>(d.children.size())));
      break;
  }
  return compose_error(factors);
}

bool resolved(const GNode& n) {
  return n.st == GNode::St::kSampled || n.st == GNode::St::kDeduced;
}

/// Wide-to-narrow sweep: drop nodes neither targeted nor used by a parent.
double sweep_and_cost(Graph& g, const std::vector<int>& order) {
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    GNode& n = g.nodes[*it];
    if (n.is_target) n.needed = true;
    if (!n.needed) continue;
    if (n.st == GNode::St::kDeduced && n.ded >= 0)
      for (int c : g.deds[n.ded].children) g.nodes[c].needed = true;
  }
  double total = 0;
  for (auto& n : g.nodes) {
    if (!n.needed && !n.existing) {
      n.st = GNode::St::kUnused;
      continue;
    }
    if (n.needed && n.st == GNode::St::kSampled && !n.existing) total += n.sample_cost;
  }
  return total;
}

EstimationPlan plan_from_graph(const Graph& g, const std::vector<int>& order, double f,
                               double total_cost, const AccuracyRequirement& req) {
  EstimationPlan plan;
  plan.feasible = true;
  plan.f = f;
  plan.total_cost = total_cost;
  plan.req = req;
  for (int i : order) {
    const GNode& n = g.nodes[i];
    if (!n.needed && !n.existing) continue;
    PlanNode pn;
    pn.def = n.def;
    pn.state = n.st == GNode::St::kDeduced ? PlanNode::State::kDeduced : PlanNode::State::kSampled;
    pn.existing = n.existing;
    pn.is_target = n.is_target;
    pn.exact_pages = n.exact_pages;
    pn.cost = (n.existing || n.st != GNode::St::kSampled) ? 0 : n.sample_cost;
    pn.err = n.err;
    pn.prob = prob_within(req.e, n.err);
    if (n.st == GNode::St::kDeduced) {
      pn.ded_kind = g.deds[n.ded].kind;
      for (int c : g.deds[n.ded].children) pn.ded_children.push_back(g.nodes[c].sig);
    }
    plan.nodes.push_back(std::move(pn));
  }
  return plan;
}

bool greedy_assign(Graph& g, const std::vector<int>& order, const AccuracyRequirement& req,
                   const ErrorModel& model, std::string* why_infeasible) {
  // Even sampling directly must satisfy the constraint, otherwise this
  // fraction cannot work at all.
  for (int i : order) {
    const GNode& n = g.nodes[i];
    if (!n.is_target || n.existing) continue;
    if (prob_within(req.e, n.sampled_err) < req.q) {
      *why_infeasible = "even SampleCF on " + n.sig + " misses the accuracy constraint";
      return false;
    }
  }

  for (int i : order) {
    GNode& n = g.nodes[i];
    if (!n.is_target || resolved(n)) continue;

    // Deduce from already-resolved children when some deduction meets the
    // constraint; prefer the highest probability.
    int best_ded = -1;
    double best_prob = -1;
    ErrorDist best_err;
    for (int d : g.node_deds[i]) {
      const GDed& ded = g.deds[d];
      const bool enabled = std::all_of(ded.children.begin(), ded.children.end(),
                                       [&](int c) { return resolved(g.nodes[c]); });
      if (!enabled) continue;
      const ErrorDist err = deduction_error(g, ded, model);
      const double p = prob_within(req.e, err);
      if (p >= req.q && p > best_prob) {
        best_prob = p;
        best_ded = d;
        best_err = err;
      }
    }
    if (best_ded >= 0) {
      n.st = GNode::St::kDeduced;
      n.ded = best_ded;
      n.err = best_err;
      continue;
    }

    // Otherwise sample children to enable a deduction when that costs less
    // than sampling this node; pick the least cost.
    int best_enable = -1;
    double best_cost = n.sample_cost;
    ErrorDist enable_err;
    for (int d : g.node_deds[i]) {
      const GDed& ded = g.deds[d];
      double cost = 0;
      std::vector<ErrorDist> child_errs;
      for (int c : ded.children) {
        const GNode& ch = g.nodes[c];
        if (resolved(ch)) {
          child_errs.push_back(ch.err);
        } else {
          cost += ch.sample_cost;
          child_errs.push_back(ch.sampled_err);
        }
      }
      if (cost >= best_cost) continue;
      const ErrorDist err = deduction_error(g, ded, model, &child_errs);
      if (prob_within(req.e, err) < req.q) continue;
      best_enable = d;
      best_cost = cost;
      enable_err = err;
    }
    if (best_enable >= 0) {
      for (int c : g.deds[best_enable].children) {
        GNode& ch = g.nodes[c];
        if (!resolved(ch)) {
          ch.st = GNode::St::kSampled;
          ch.err = ch.sampled_err;
        }
      }
      n.st = GNode::St::kDeduced;
      n.ded = best_enable;
      n.err = enable_err;
      continue;
    }

    n.st = GNode::St::kSampled;
    n.err = n.sampled_err;
  }
  return true;
}

}  // namespace

std::string deduction_kind_name(DeductionKind k) {
  switch (k) {
    case DeductionKind::kColSet: return "colset";
    case DeductionKind::kColExtOrdInd: return "colext-ordind";
    case DeductionKind::kColExtOrdDep: return "colext-orddep";
  }
  return "?";
}

const PlanNode* EstimationPlan::find(const std::string& signature) const {
  for (const auto& n : nodes)
    if (n.def.signature() == signature) return &n;
  return nullptr;
}

std::vector<double> default_f_grid() { return {0.01, 0.025, 0.05, 0.075, 0.10}; }

double all_sampled_cost(const std::vector<IndexDef>& targets, double f, const Catalog& catalog) {
  double total = 0;
  for (const auto& def : targets) {
    const Table& t = catalog.table(def.table);
    const TableStats& stats = catalog.table_stats(def.table);
    const uint64_t rows = static_cast<uint64_t>(std::llround(static_cast<double>(t.rows) * f));
    total += static_cast<double>(estimate_uncompressed_pages(t, stats, def, rows));
  }
  return total;
}

EstimationPlan plan_greedy(const std::vector<IndexDef>& targets,
                           const std::vector<ExistingIndex>& existing,
                           const AccuracyRequirement& req,
                           const std::vector<double>& f_grid,
                           const Catalog& catalog, const ErrorModel& model) {
  req.validate();
  if (targets.empty()) fail("plan_greedy: no targets");
  if (f_grid.empty()) fail("plan_greedy: empty fraction grid");

  Graph graph = build_graph(targets, existing, catalog);
  const std::vector<int> order = order_nodes(graph);

  EstimationPlan best;
  best.feasible = false;
  std::string last_reason = "no sampling fraction satisfies the accuracy constraint";

  for (double f : f_grid) {
    prepare_fraction(graph, f, catalog, model);
    std::string why;
    const bool ok = greedy_assign(graph, order, req, model, &why);
    if (!ok) {
      last_reason = "f=" + fmt_num(f) + ": " + why;
      continue;
    }
    const double cost = sweep_and_cost(graph, order);
    if (!best.feasible || cost < best.total_cost)
      best = plan_from_graph(graph, order, f, cost, req);
  }
  if (!best.feasible) {
    best.req = req;
    best.infeasible_reason = last_reason;
  }
  return best;
}

namespace {

struct ExactSolver {
  Graph& g;
  const AccuracyRequirement& req;
  const ErrorModel& model;
  const std::vector<int>& cluster;  // narrow-to-wide node order

  double best_cost = -1;
  std::vector<GNode::St> best_st;
  std::vector<int> best_ded;

  void solve() {
    recurse(0, 0.0);
    if (best_cost < 0) return;
    for (size_t i = 0; i < cluster.size(); ++i) {
      g.nodes[cluster[i]].st = best_st[i];
      g.nodes[cluster[i]].ded = best_ded[i];
      GNode& n = g.nodes[cluster[i]];
      if (n.st == GNode::St::kSampled) {
        n.err = n.existing ? ErrorDist{1.0, 0.0} : n.sampled_err;
      }
    }
    // Recompute deduced errors in order now that the assignment is final.
    for (int i : cluster) {
      GNode& n = g.nodes[i];
      if (n.st == GNode::St::kDeduced) n.err = deduction_error(g, g.deds[n.ded], model);
    }
  }

  void snapshot(double cost) {
    if (best_cost >= 0 && cost >= best_cost) return;
    best_cost = cost;
    best_st.clear();
    best_ded.clear();
    for (int i : cluster) {
      best_st.push_back(g.nodes[i].st);
      best_ded.push_back(g.nodes[i].ded);
    }
  }

  void recurse(size_t pos, double cost) {
    if (best_cost >= 0 && cost >= best_cost) return;
    if (pos == cluster.size()) {
      snapshot(cost);
      return;
    }
    GNode& n = g.nodes[cluster[pos]];
    if (n.existing) {
      n.st = GNode::St::kSampled;
      n.err = {1.0, 0.0};
      recurse(pos + 1, cost);
      return;
    }

    // Deductions from already-assigned narrower nodes.
    for (int d : g.node_deds[cluster[pos]]) {
      const GDed& ded = g.deds[d];
      const bool usable = std::all_of(ded.children.begin(), ded.children.end(),
                                      [&](int c) { return resolved(g.nodes[c]); });
      if (!usable) continue;
      const ErrorDist err = deduction_error(g, ded, model);
      if (n.is_target && prob_within(req.e, err) < req.q) continue;
      n.st = GNode::St::kDeduced;
      n.ded = d;
      n.err = err;
      recurse(pos + 1, cost);
    }

    // Sample it.
    if (!n.is_target || prob_within(req.e, n.sampled_err) >= req.q) {
      n.st = GNode::St::kSampled;
      n.ded = -1;
      n.err = n.sampled_err;
      recurse(pos + 1, cost + n.sample_cost);
    }

    // Leave it out entirely (non-targets only).
    if (!n.is_target) {
      n.st = GNode::St::kUnused;
      n.ded = -1;
      recurse(pos + 1, cost);
    }

    n.st = GNode::St::kNone;
    n.ded = -1;
  }
};

}  // namespace

EstimationPlan plan_exact(const std::vector<IndexDef>& targets,
                          const std::vector<ExistingIndex>& existing,
                          const AccuracyRequirement& req,
                          const std::vector<double>& f_grid,
                          const Catalog& catalog, const ErrorModel& model) {
  req.validate();
  if (targets.empty()) fail("plan_exact: no targets");
  if (f_grid.empty()) fail("plan_exact: empty fraction grid");

  Graph graph = build_graph(targets, existing, catalog);
  const std::vector<int> order = order_nodes(graph);

  // Connected components over deduction edges.
  std::vector<int> comp(graph.nodes.size());
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (const auto& d : graph.deds) {
    for (int c : d.children) comp[find(c)] = find(d.parent);
  }
  std::map<int, std::vector<int>> clusters;
  for (int i : order) clusters[find(i)].push_back(i);
  for (const auto& [_, members] : clusters) {
    if (members.size() > kExactPlannerClusterGuard)
      fail("exact planner: subgraph of " + std::to_string(members.size()) +
           " indexes exceeds the guard of " + std::to_string(kExactPlannerClusterGuard));
  }

  EstimationPlan best;
  best.feasible = false;
  std::string last_reason = "no sampling fraction satisfies the accuracy constraint";

  for (double f : f_grid) {
    prepare_fraction(graph, f, catalog, model);
    bool feasible = true;
    for (auto& [root, members] : clusters) {
      (void)root;
      ExactSolver solver{graph, req, model, members};
      solver.solve();
      if (solver.best_cost < 0) {
        feasible = false;
        last_reason = "f=" + fmt_num(f) + ": no satisfying assignment for a subgraph";
        break;
      }
    }
    if (!feasible) continue;
    const double cost = sweep_and_cost(graph, order);
    if (!best.feasible || cost < best.total_cost)
      best = plan_from_graph(graph, order, f, cost, req);
  }
  if (!best.feasible) {
    best.req = req;
    best.infeasible_reason = last_reason;
  }
  return best;
}

std::map<std::string, SizeEstimate> execute_plan(const EstimationPlan& plan,
                                                 const Catalog& catalog,
                                                 SampleManager& samples,
                                                 const ErrorModel& model) {
  if (!plan.feasible) fail("cannot execute an infeasible plan: " + plan.infeasible_reason);
  std::map<std::string, SizeEstimate> out;

  for (const auto& node : plan.nodes) {
    const std::string sig = node.def.signature();
    const Table& t = catalog.table(node.def.table);
    const TableStats& stats = catalog.table_stats(node.def.table);
    const uint64_t full_unc = estimate_uncompressed_pages(t, stats, node.def, t.rows);

    if (node.existing) {
      out.emplace(sig, SizeEstimate::exact(node.exact_pages));
      continue;
    }
    if (node.state == PlanNode::State::kSampled) {
      const Sample& s = node.def.filter
                            ? samples.filtered(node.def.table, plan.f, *node.def.filter)
                            : samples.base(node.def.table, plan.f);
      out.emplace(sig, sample_cf(node.def, s, full_unc, model));
      continue;
    }

    // Deduced: children run first (nodes are in dependency order).
    std::vector<SizeEstimate> parts;
    std::vector<IndexDef> part_defs;
    std::vector<uint64_t> part_unc;
    for (const auto& child_sig : node.ded_children) {
      const auto it = out.find(child_sig);
      if (it == out.end()) fail("plan executes '" + sig + "' before its input '" + child_sig + "'");
      parts.push_back(it->second);
      const PlanNode* child = plan.find(child_sig);
      if (child == nullptr) fail("plan is missing node '" + child_sig + "'");
      part_defs.push_back(child->def);
      part_unc.push_back(estimate_uncompressed_pages(catalog.table(child->def.table),
                                                     catalog.table_stats(child->def.table),
                                                     child->def, catalog.table(child->def.table).rows));
    }
    SizeEstimate est;
    switch (node.ded_kind) {
      case DeductionKind::kColSet:
        est = deduce_colset(node.def, part_defs[0], parts[0], model);
        break;
      case DeductionKind::kColExtOrdInd:
        est = deduce_colext_ordind(node.def, parts, part_unc, full_unc, model);
        break;
      case DeductionKind::kColExtOrdDep:
        est = deduce_colext_orddep(node.def, parts, t, stats, part_unc, full_unc, model);
        break;
    }
    out.emplace(sig, std::move(est));
  }
  return out;
}

}  // namespace compass
