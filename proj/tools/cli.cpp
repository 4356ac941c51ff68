#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cli_json.hpp"
#include "compass/advisor.hpp"

namespace compass::cli {

namespace {

enum class Format { kHuman, kRecords, kBoth };

Format parse_format(const std::string& s) {
  if (s == "human") return Format::kHuman;
  if (s == "records") return Format::kRecords;
  if (s == "both") return Format::kBoth;
  fail("unknown format '" + s + "'");
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

/// Aligned table printer for the human rendering.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out, const std::string& indent = "  ") const {
    std::vector<size_t> widths(header_.size());
    for (size_t i = 0; i < header_.size(); ++i) widths[i] = header_[i].size();
    for (const auto& r : rows_)
      for (size_t i = 0; i < r.size() && i < widths.size(); ++i)
        widths[i] = std::max(widths[i], r[i].size());
    auto line = [&](const std::vector<std::string>& r) {
      out << indent;
      for (size_t i = 0; i < r.size(); ++i) {
        out << r[i];
        if (i + 1 < r.size()) out << std::string(widths[i] - r[i].size() + 2, ' ');
      }
      out << "\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

double parse_budget_pages(const std::string& text) {
  std::string s = text;
  double multiplier = 0;  // 0 means plain pages
  auto ends_with = [&](const char* sfx) {
    const size_t n = std::strlen(sfx);
    if (s.size() < n) return false;
    for (size_t i = 0; i < n; ++i)
      if (std::toupper(s[s.size() - n + i]) != sfx[i]) return false;
    return true;
  };
  if (ends_with("KB")) multiplier = 1024.0;
  else if (ends_with("MB")) multiplier = 1024.0 * 1024;
  else if (ends_with("GB")) multiplier = 1024.0 * 1024 * 1024;
  if (multiplier > 0) s = s.substr(0, s.size() - 2);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || v < 0)
    fail("cannot parse budget '" + text + "' (pages or KB/MB/GB)");
  if (multiplier == 0) return v;
  return v * multiplier / static_cast<double>(page_size());
}

AccuracyRequirement parse_accuracy(const std::string& text) {
  const size_t comma = text.find(',');
  if (comma == std::string::npos) fail("accuracy must be 'e,q', e.g. 0.5,0.9");
  AccuracyRequirement req;
  req.e = std::stod(text.substr(0, comma));
  req.q = std::stod(text.substr(comma + 1));
  req.validate();
  return req;
}

std::string base_dir_of(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

// --- renderers ---

void render_table_summary(std::ostream& out, Format fmt, const Table& t, const TableStats& stats) {
  if (fmt != Format::kRecords) {
    out << "table " << t.name << ": " << t.rows << " rows, " << t.columns.size() << " columns\n";
    TextTable tt({"COLUMN", "TYPE", "DISTINCT", "NULL_FRACTION", "PREFIX_SHARE"});
    for (const auto& c : t.columns) {
      const ColumnStats& cs = stats.column(c.name);
      tt.add_row({c.name, c.type.to_string(), std::to_string(cs.distinct_count),
                  fmt_num(cs.null_fraction), fmt_num(cs.avg_prefix_share)});
    }
    tt.print(out);
  }
  if (fmt != Format::kHuman) {
    out << "table name=" << quoted(t.name) << " rows=" << t.rows
        << " columns=" << t.columns.size() << "\n";
    for (const auto& c : t.columns) {
      const ColumnStats& cs = stats.column(c.name);
      out << "column name=" << quoted(c.name) << " type=" << c.type.to_string()
          << " distinct=" << cs.distinct_count << " null_fraction=" << fmt_num(cs.null_fraction)
          << " prefix_share=" << fmt_num(cs.avg_prefix_share) << "\n";
    }
  }
}

void render_plan(std::ostream& out, Format fmt, const EstimationPlan& plan,
                 const std::map<std::string, SizeEstimate>& estimates, bool exact_mode) {
  if (fmt != Format::kRecords) {
    out << "estimation plan: f=" << fmt_num(plan.f) << " e=" << fmt_num(plan.req.e)
        << " q=" << fmt_num(plan.req.q) << " total_cost=" << fmt_num(plan.total_cost)
        << " pages (" << (exact_mode ? "exact" : "greedy") << ")\n";
    TextTable tt({"STATE", "TARGET", "PAGES", "+-95%", "PROB", "INDEX", "VIA"});
    for (const auto& node : plan.nodes) {
      const std::string sig = node.def.signature();
      const SizeEstimate& est = estimates.at(sig);
      const double band = 1.96 * std::sqrt(est.err_var) * est.pages;
      std::string via = "-";
      if (node.state == PlanNode::State::kDeduced) {
        via = deduction_kind_name(node.ded_kind) + ":";
        for (const auto& c : node.ded_children) via += " " + c;
      }
      tt.add_row({node.existing ? "EXACT" : (node.state == PlanNode::State::kDeduced ? "DEDUCED"
                                                                                     : "SAMPLED"),
                  node.is_target ? "yes" : "aux", fmt_num(est.pages), fmt_num(band),
                  fmt_num(node.prob), sig, via});
    }
    tt.print(out);
  }
  if (fmt != Format::kHuman) {
    out << "plan f=" << fmt_num(plan.f) << " e=" << fmt_num(plan.req.e)
        << " q=" << fmt_num(plan.req.q) << " total_cost=" << fmt_num(plan.total_cost)
        << " feasible=1 mode=" << (exact_mode ? "exact" : "greedy") << "\n";
    for (const auto& node : plan.nodes) {
      const std::string sig = node.def.signature();
      const SizeEstimate& est = estimates.at(sig);
      std::string via;
      if (node.state == PlanNode::State::kDeduced) {
        via = deduction_kind_name(node.ded_kind);
        for (const auto& c : node.ded_children) via += "+" + c;
      }
      out << "node index=" << quoted(sig)
          << " state=" << (node.existing ? "EXACT"
                                         : (node.state == PlanNode::State::kDeduced ? "DEDUCED"
                                                                                    : "SAMPLED"))
          << " target=" << (node.is_target ? 1 : 0) << " pages=" << fmt_num(est.pages)
          << " cf=" << fmt_num(est.cf) << " err_mean=" << fmt_num(est.err_mean)
          << " err_var=" << fmt_num(est.err_var) << " prob=" << fmt_num(node.prob)
          << " cost=" << fmt_num(node.cost) << " via=" << quoted(via) << "\n";
    }
  }
}

void render_recommendation(std::ostream& out, Format fmt, const Recommendation& rec) {
  if (fmt != Format::kRecords) {
    out << "recommendation: " << rec.config.indexes.size() << " indexes, "
        << fmt_num(rec.config.total_pages()) << " of " << fmt_num(rec.budget_pages)
        << " budget pages\n";
    out << "workload cost: before=" << fmt_num(rec.cost_before)
        << " after=" << fmt_num(rec.cost_after) << " improvement=" << fmt_num(rec.improvement)
        << "\n";
    if (rec.estimation_f > 0)
      out << "size estimation: f=" << fmt_num(rec.estimation_f)
          << " cost=" << fmt_num(rec.estimation_cost) << " pages\n";
    TextTable tt({"INDEX", "METHOD", "PAGES", "ERR_MEAN", "ERR_VAR", "PROVENANCE"});
    for (const auto& ci : rec.config.indexes)
      tt.add_row({ci.def.signature(), method_name(ci.def.method), fmt_num(ci.size.pages),
                  fmt_num(ci.size.err_mean), fmt_num(ci.size.err_var),
                  provenance_name(ci.size.provenance)});
    tt.print(out);
    if (!rec.trace.empty()) {
      out << "search trace:\n";
      TextTable tr({"STEP", "ACTION", "INDEX", "BENEFIT", "DENSITY", "SIZE", "COST_AFTER"});
      for (const auto& ts : rec.trace)
        tr.add_row({std::to_string(ts.step), ts.action, ts.index, fmt_num(ts.benefit),
                    fmt_num(ts.density), fmt_num(ts.size), fmt_num(ts.cost_after)});
      tr.print(out);
    }
  }
  if (fmt != Format::kHuman) {
    out << "recommendation budget_pages=" << fmt_num(rec.budget_pages)
        << " total_pages=" << fmt_num(rec.config.total_pages())
        << " cost_before=" << fmt_num(rec.cost_before) << " cost_after=" << fmt_num(rec.cost_after)
        << " improvement=" << fmt_num(rec.improvement)
        << " estimation_f=" << fmt_num(rec.estimation_f)
        << " estimation_cost=" << fmt_num(rec.estimation_cost)
        << " indexes=" << rec.config.indexes.size() << "\n";
    for (const auto& ci : rec.config.indexes)
      out << "index sig=" << quoted(ci.def.signature()) << " method=" << method_name(ci.def.method)
          << " clustered=" << (ci.def.clustered ? 1 : 0) << " pages=" << fmt_num(ci.size.pages)
          << " cf=" << fmt_num(ci.size.cf) << " err_mean=" << fmt_num(ci.size.err_mean)
          << " err_var=" << fmt_num(ci.size.err_var)
          << " provenance=" << provenance_name(ci.size.provenance) << "\n";
    for (const auto& ts : rec.trace)
      out << "trace step=" << ts.step << " action=" << ts.action << " index=" << quoted(ts.index)
          << " benefit=" << fmt_num(ts.benefit) << " density=" << fmt_num(ts.density)
          << " size=" << fmt_num(ts.size) << " cost_after=" << fmt_num(ts.cost_after) << "\n";
  }
}

// --- subcommand drivers ---

struct CommonOpts {
  std::string config_path;
  Format format = Format::kBoth;
};

ConfigFile apply_config(const CommonOpts& common) {
  ConfigFile cfg;
  if (!common.config_path.empty()) cfg = load_config_file(common.config_path);
  if (cfg.page_size != page_size()) set_page_size(cfg.page_size);
  return cfg;
}

int cmd_ingest(const std::string& csv_path, const std::string& schema_path,
               const std::string& table_name, const CommonOpts& common, std::ostream& out) {
  apply_config(common);
  const Schema schema = read_schema_file(schema_path);
  const Table t = ingest_csv(csv_path, schema, table_name);
  const TableStats stats = compute_stats(t);
  render_table_summary(out, common.format, t, stats);
  return kExitOk;
}

int cmd_generate(const std::string& spec_path, const std::string& out_csv,
                 const CommonOpts& common, std::ostream& out) {
  apply_config(common);
  const json j = load_json_file(spec_path);
  const SyntheticSpec spec =
      synthetic_spec_from_json(j, std::filesystem::path(spec_path).stem().string());
  const Table t = generate_synthetic(spec);
  const TableStats stats = compute_stats(t);
  render_table_summary(out, common.format, t, stats);

  if (!out_csv.empty()) {
    std::ofstream f(out_csv);
    if (!f) fail("cannot write CSV to '" + out_csv + "'");
    for (size_t i = 0; i < t.columns.size(); ++i) f << (i ? "," : "") << t.columns[i].name;
    f << "\n";
    for (uint64_t r = 0; r < t.rows; ++r) {
      for (size_t c = 0; c < t.columns.size(); ++c) {
        if (c) f << ",";
        const std::string_view cell = t.value(c, r);
        if (is_null_value(cell)) continue;  // NULL -> empty field
        if (t.columns[c].type.numeric()) {
          f << decode_int64(cell);
        } else {
          f << std::string(cell.substr(0, cell.find_last_not_of('\0') + 1));
        }
      }
      f << "\n";
    }
    out << "wrote " << t.rows << " rows to " << out_csv << "\n";
  }
  return kExitOk;
}

int cmd_estimate_size(const std::string& indexes_path, double e, double q, bool exact,
                      const CommonOpts& common, std::ostream& out, std::ostream& err) {
  const ConfigFile cfg = apply_config(common);
  const json j = load_json_file(indexes_path);

  Catalog catalog;
  load_tables(j, catalog, base_dir_of(indexes_path));

  std::vector<IndexDef> targets;
  for (const auto& tj : j.at("targets")) targets.push_back(index_def_from_json(tj));
  std::vector<ExistingIndex> existing;
  if (j.contains("existing"))
    for (const auto& ej : j["existing"])
      existing.push_back({index_def_from_json(ej), ej.at("pages").get<double>()});

  // Group-distinct stats for every key prefix of every index in play.
  std::map<std::string, std::vector<std::vector<std::string>>> groups;
  auto collect = [&](const IndexDef& def) {
    const auto cols = def.all_columns();
    for (size_t len = 2; len <= cols.size(); ++len)
      groups[def.table].emplace_back(cols.begin(), cols.begin() + len);
  };
  for (const auto& t : targets) collect(t);
  for (const auto& ex : existing) collect(ex.def);
  for (const auto& [name, table] : catalog.tables)
    catalog.stats[name] = compute_stats(table, groups[name]);

  const AccuracyRequirement req{e, q};
  req.validate();

  EstimationPlan plan;
  bool exact_mode = exact;
  if (exact) {
    try {
      plan = plan_exact(targets, existing, req, cfg.f_grid, catalog, cfg.error_model);
    } catch (const Error& ex_err) {
      err << "exact planner unavailable (" << ex_err.what() << "); falling back to greedy\n";
      exact_mode = false;
    }
  }
  if (!exact_mode) plan = plan_greedy(targets, existing, req, cfg.f_grid, catalog, cfg.error_model);

  if (!plan.feasible) {
    err << "infeasible accuracy requirement: " << plan.infeasible_reason
        << "\nhint: relax --error-tolerance, lower --confidence, or extend f_grid in the config\n";
    return kExitInfeasible;
  }

  SampleManager samples(catalog, cfg.seed);
  const auto estimates = execute_plan(plan, catalog, samples, cfg.error_model);
  render_plan(out, common.format, plan, estimates, exact_mode);
  return kExitOk;
}

int cmd_tune(const std::string& workload_path, const std::string& budget,
             const std::string& selection, const std::string& enumeration, bool staged,
             const std::string& accuracy, const std::string& state_path, const CommonOpts& common,
             std::ostream& out, std::ostream& err) {
  const ConfigFile cfg = apply_config(common);
  const json j = load_json_file(workload_path);

  Catalog catalog;
  load_tables(j, catalog, base_dir_of(workload_path));

  Workload workload;
  for (const auto& sj : j.at("statements")) workload.push_back(statement_from_json(sj));

  AdvisorOptions options;
  options.budget_pages = parse_budget_pages(budget);
  options.selection = parse_selection_mode(selection);
  if (selection.rfind("topk:", 0) == 0) options.topk = std::stoi(selection.substr(5));
  options.enumeration = parse_enumeration_mode(enumeration);
  options.staged = staged;
  if (!accuracy.empty()) options.accuracy = parse_accuracy(accuracy);
  options.seed = cfg.seed;
  options.f_grid = cfg.f_grid;
  if (j.contains("size_overrides"))
    for (const auto& [sig, pages] : j["size_overrides"].items())
      options.size_overrides[sig] = pages.get<double>();

  Recommendation rec;
  try {
    rec = tune(workload, catalog, options, cfg.cost_model, cfg.error_model);
  } catch (const InfeasibleError& ie) {
    err << "infeasible accuracy requirement: " << ie.what() << "\n";
    return kExitInfeasible;
  }

  render_recommendation(out, common.format, rec);

  std::ofstream state(state_path);
  if (!state) fail("cannot write state file '" + state_path + "'");
  state << recommendation_to_json(rec).dump(2) << "\n";
  return kExitOk;
}

int cmd_report(const std::string& state_path, const CommonOpts& common, std::ostream& out) {
  apply_config(common);
  const Recommendation rec = recommendation_from_json(load_json_file(state_path));
  render_recommendation(out, common.format, rec);
  return kExitOk;
}

/// Refits the SampleCF error curves against actual builds on a synthetic
/// mix, least squares through the origin on x = -ln f.
int cmd_calibrate(uint64_t rows, int seeds, const CommonOpts& common, std::ostream& out) {
  const ConfigFile cfg = apply_config(common);

  SyntheticSpec spec;
  spec.name = "calib";
  spec.rows = rows;
  spec.seed = cfg.seed;
  spec.columns = {
      {"a", ColumnType::int64(), 200, 0.0, 0.0, 0},
      {"b", ColumnType::int64(), 5000, 1.0, 0.1, 0},
      {"c", ColumnType::char_width(12), 400, 0.5, 0.0, 4},
  };
  const Table t = generate_synthetic(spec);
  const TableStats stats = compute_stats(t);

  struct Fit {
    double sum_xy = 0, sum_xx = 0, sum_xb = 0;
  };
  Fit ns_fit, ld_fit;
  std::vector<IndexDef> defs;
  for (const char* col : {"a", "b", "c"}) {
    IndexDef d;
    d.table = "calib";
    d.key_columns = {col};
    defs.push_back(d);
  }

  for (Method m : {Method::kNs, Method::kPage}) {
    for (auto def : defs) {
      def.method = m;
      const BuiltIndex full = build_index(t, def);
      const double true_cf = full.bytes_raw == 0
                                 ? 1.0
                                 : static_cast<double>(full.bytes_compressed) / full.bytes_raw;
      const uint64_t unc = estimate_uncompressed_pages(t, stats, def, t.rows);
      for (double f : cfg.f_grid) {
        const double x = -std::log(f);
        double sum = 0, sum2 = 0;
        for (int s = 0; s < seeds; ++s) {
          const Sample sample = build_base_sample(t, f, cfg.seed + 1000 + s);
          const SizeEstimate est = sample_cf(def, sample, unc, cfg.error_model);
          const double ratio = est.cf / true_cf - 1.0;
          sum += ratio;
          sum2 += ratio * ratio;
        }
        const double mean = sum / seeds;
        const double stddev = std::sqrt(std::max(0.0, sum2 / seeds - mean * mean));
        Fit& fit = m == Method::kNs ? ns_fit : ld_fit;
        fit.sum_xy += x * stddev;
        fit.sum_xx += x * x;
        fit.sum_xb += x * mean;
      }
    }
  }

  const double ns_stddev = ns_fit.sum_xy / ns_fit.sum_xx;
  const double ld_stddev = ld_fit.sum_xy / ld_fit.sum_xx;
  const double ld_bias = ld_fit.sum_xb / ld_fit.sum_xx;

  if (common.format != Format::kRecords) {
    out << "fitted SampleCF error curves (coefficient of -ln f):\n";
    TextTable tt({"CURVE", "COEFFICIENT"});
    tt.add_row({"samplecf_ns_stddev", fmt_num(ns_stddev)});
    tt.add_row({"samplecf_ld_bias", fmt_num(ld_bias)});
    tt.add_row({"samplecf_ld_stddev", fmt_num(ld_stddev)});
    tt.print(out);
    out << "config snippet:\n"
        << "  {\"error_model\": {\"samplecf_ns_stddev\": " << fmt_num(ns_stddev)
        << ", \"samplecf_ld_bias\": " << fmt_num(ld_bias)
        << ", \"samplecf_ld_stddev\": " << fmt_num(ld_stddev) << "}}\n";
  }
  if (common.format != Format::kHuman) {
    out << "calibration samplecf_ns_stddev=" << fmt_num(ns_stddev)
        << " samplecf_ld_bias=" << fmt_num(ld_bias)
        << " samplecf_ld_stddev=" << fmt_num(ld_stddev) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"compass: compression-aware physical database design advisor"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  CommonOpts common;
  std::string format_str = "both";
  app.add_option("--config", common.config_path, "config file (cost model, error model, f_grid)");
  app.add_option("--format", format_str, "output format: human|records|both");

  // ingest
  std::string csv_path, schema_path, table_name;
  auto* ingest = app.add_subcommand("ingest", "load and validate a CSV table");
  ingest->add_option("csv", csv_path, "CSV file")->required();
  ingest->add_option("schema", schema_path, "schema file (name:type per line)")->required();
  ingest->add_option("--table", table_name, "table name (default: file stem)");

  // generate
  std::string spec_path, out_csv;
  auto* generate = app.add_subcommand("generate", "generate a synthetic table");
  generate->add_option("spec", spec_path, "synthetic spec JSON")->required();
  generate->add_option("--out", out_csv, "write the table as CSV");

  // estimate-size
  std::string indexes_path;
  double tol = 0.5, conf = 0.9;
  bool exact_plan = false;
  auto* estimate = app.add_subcommand("estimate-size", "plan and run compressed-size estimation");
  estimate->add_option("--indexes", indexes_path, "targets/existing indexes JSON")->required();
  estimate->add_option("--error-tolerance", tol, "tolerable error ratio e");
  estimate->add_option("--confidence", conf, "confidence q");
  estimate->add_flag("--exact-plan", exact_plan, "use the exact planner (small graphs)");

  // tune
  std::string workload_path, budget, selection = "skyline", enumeration = "backtrack";
  std::string accuracy, state_path = "compass-state.json";
  bool staged = false;
  auto* tune_cmd = app.add_subcommand("tune", "recommend indexes for a workload and budget");
  tune_cmd->add_option("--workload", workload_path, "workload JSON")->required();
  tune_cmd->add_option("--budget", budget, "storage bound (pages or KB/MB/GB)")->required();
  tune_cmd->add_option("--selection", selection, "skyline | topk:k");
  tune_cmd->add_option("--enumeration", enumeration, "pure | density | backtrack");
  tune_cmd->add_flag("--staged", staged, "decoupled baseline: select, then compress");
  tune_cmd->add_option("--accuracy", accuracy, "size-estimation accuracy 'e,q'");
  tune_cmd->add_option("--state", state_path, "where to persist the recommendation");

  // report
  std::string report_state = "compass-state.json";
  auto* report = app.add_subcommand("report", "re-render the last recommendation");
  report->add_option("--state", report_state, "state file written by tune");

  // calibrate
  uint64_t calib_rows = 20000;
  int calib_seeds = 20;
  auto* calibrate = app.add_subcommand("calibrate", "refit SampleCF error coefficients");
  calibrate->add_option("--rows", calib_rows, "synthetic rows");
  calibrate->add_option("--seeds", calib_seeds, "sample seeds per fraction");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInputError;
  }

  try {
    common.format = parse_format(format_str);
    if (ingest->parsed()) return cmd_ingest(csv_path, schema_path, table_name, common, out);
    if (generate->parsed()) return cmd_generate(spec_path, out_csv, common, out);
    if (estimate->parsed())
      return cmd_estimate_size(indexes_path, tol, conf, exact_plan, common, out, err);
    if (tune_cmd->parsed())
      return cmd_tune(workload_path, budget, selection, enumeration, staged, accuracy, state_path,
                      common, out, err);
    if (report->parsed()) return cmd_report(report_state, common, out);
    if (calibrate->parsed()) return cmd_calibrate(calib_rows, calib_seeds, common, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible accuracy requirement: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  err << "error: no subcommand\n";
  return kExitInputError;
}

}  // namespace compass::cli
