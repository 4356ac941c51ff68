#include "cli_json.hpp"

#include <filesystem>
#include <fstream>

namespace compass::cli {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  return j;
}

Value value_from_json(const json& j) {
  if (j.is_number_integer() || j.is_number_unsigned())
    return Value::of_int(j.get<int64_t>());
  if (j.is_string()) return Value::of_string(j.get<std::string>());
  fail("predicate constants must be integers or strings");
}

json value_to_json(const Value& v) {
  if (v.kind == TypeKind::kChar) return v.s;
  return v.i;
}

Predicate predicate_from_json(const json& j) {
  Predicate p;
  p.column = j.at("column").get<std::string>();
  p.op = parse_pred_op(j.at("op").get<std::string>());
  if (p.op == PredOp::kBetween) {
    p.lo = value_from_json(j.at("lo"));
    p.hi = value_from_json(j.at("hi"));
  } else {
    p.lo = value_from_json(j.at("value"));
  }
  return p;
}

json predicate_to_json(const Predicate& p) {
  json j;
  j["column"] = p.column;
  j["op"] = pred_op_name(p.op);
  if (p.op == PredOp::kBetween) {
    j["lo"] = value_to_json(p.lo);
    j["hi"] = value_to_json(p.hi);
  } else {
    j["value"] = value_to_json(p.lo);
  }
  return j;
}

SyntheticSpec synthetic_spec_from_json(const json& j, const std::string& default_name) {
  SyntheticSpec spec;
  spec.name = j.value("name", default_name);
  spec.rows = j.at("rows").get<uint64_t>();
  spec.seed = j.value("seed", 0ull);
  for (const auto& cj : j.at("columns")) {
    SyntheticColumnSpec cs;
    cs.name = cj.at("name").get<std::string>();
    cs.type = ColumnType::parse(cj.at("type").get<std::string>());
    cs.domain = cj.at("distinct").get<uint64_t>();
    cs.zipf = cj.value("zipf", 0.0);
    cs.null_fraction = cj.value("null_fraction", 0.0);
    cs.prefix_len = cj.value("prefix_len", 0u);
    spec.columns.push_back(std::move(cs));
  }
  return spec;
}

IndexDef index_def_from_json(const json& j) {
  IndexDef def;
  def.table = j.at("table").get<std::string>();
  def.key_columns = j.at("keys").get<std::vector<std::string>>();
  if (j.contains("include")) def.included_columns = j["include"].get<std::vector<std::string>>();
  def.method = parse_method(j.value("method", "none"));
  def.clustered = j.value("clustered", false);
  if (j.contains("filter") && !j["filter"].is_null())
    def.filter = predicate_from_json(j["filter"]);
  return def;
}

json index_def_to_json(const IndexDef& def) {
  json j;
  j["table"] = def.table;
  j["keys"] = def.key_columns;
  j["include"] = def.included_columns;
  j["method"] = method_name(def.method);
  j["clustered"] = def.clustered;
  j["filter"] = def.filter ? predicate_to_json(*def.filter) : json(nullptr);
  return j;
}

SelectStatement select_from_json(const json& j) {
  SelectStatement s;
  s.table = j.at("table").get<std::string>();
  if (j.contains("predicates"))
    for (const auto& pj : j["predicates"]) s.predicates.push_back(predicate_from_json(pj));
  if (j.contains("columns")) s.columns = j["columns"].get<std::vector<std::string>>();
  if (j.contains("aggregate") && !j["aggregate"].is_null())
    s.aggregate = j["aggregate"].get<std::string>();
  s.weight = j.value("weight", 1.0);
  return s;
}

InsertStatement insert_from_json(const json& j) {
  InsertStatement s;
  s.table = j.at("table").get<std::string>();
  s.rows_per_exec = j.value("rows_per_exec", 1ull);
  s.weight = j.value("weight", 1.0);
  return s;
}

Statement statement_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "select") return select_from_json(j);
  if (kind == "insert") return insert_from_json(j);
  fail("statement kind must be 'select' or 'insert', got '" + kind + "'");
}

void load_tables(const json& j, Catalog& catalog, const std::string& base_dir) {
  if (!j.contains("tables")) return;
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    if (path.is_absolute() || base_dir.empty()) return p;
    return (std::filesystem::path(base_dir) / path).string();
  };
  for (const auto& tj : j["tables"]) {
    const std::string name = tj.at("name").get<std::string>();
    if (tj.contains("synthetic")) {
      catalog.add(generate_synthetic(synthetic_spec_from_json(tj["synthetic"], name)));
    } else if (tj.contains("csv")) {
      const Schema schema = read_schema_file(resolve(tj.at("schema").get<std::string>()));
      catalog.add(ingest_csv(resolve(tj.at("csv").get<std::string>()), schema, name));
    } else {
      fail("table '" + name + "' needs either a 'csv'+'schema' source or a 'synthetic' spec");
    }
  }
}

ConfigFile config_from_json(const json& j) {
  ConfigFile cfg;
  if (j.contains("cost_model")) {
    const auto& c = j["cost_model"];
    auto& p = cfg.cost_model;
    p.io_page_cost = c.value("io_page_cost", p.io_page_cost);
    p.cpu_tuple_cost = c.value("cpu_tuple_cost", p.cpu_tuple_cost);
    p.lookup_cost = c.value("lookup_cost", p.lookup_cost);
    p.alpha_row = c.value("alpha_row", p.alpha_row);
    p.alpha_page = c.value("alpha_page", p.alpha_page);
    p.beta_row = c.value("beta_row", p.beta_row);
    p.beta_page = c.value("beta_page", p.beta_page);
    p.maintenance_per_index_tuple =
        c.value("maintenance_per_index_tuple", p.maintenance_per_index_tuple);
    p.validate();
  }
  if (j.contains("error_model")) {
    const auto& e = j["error_model"];
    auto& m = cfg.error_model;
    m.samplecf_ns_stddev_lnf = e.value("samplecf_ns_stddev", m.samplecf_ns_stddev_lnf);
    m.samplecf_ld_bias_lnf = e.value("samplecf_ld_bias", m.samplecf_ld_bias_lnf);
    m.samplecf_ld_stddev_lnf = e.value("samplecf_ld_stddev", m.samplecf_ld_stddev_lnf);
    m.colset_stddev = e.value("colset_stddev", m.colset_stddev);
    m.colext_ns_bias_a = e.value("colext_ns_bias", m.colext_ns_bias_a);
    m.colext_ns_stddev_a = e.value("colext_ns_stddev", m.colext_ns_stddev_a);
    m.colext_ld_bias_a = e.value("colext_ld_bias", m.colext_ld_bias_a);
    m.colext_ld_stddev_a = e.value("colext_ld_stddev", m.colext_ld_stddev_a);
    m.var_ceiling = e.value("var_ceiling", m.var_ceiling);
  }
  if (j.contains("f_grid")) cfg.f_grid = j["f_grid"].get<std::vector<double>>();
  if (j.contains("page_size")) cfg.page_size = j["page_size"].get<uint64_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  return cfg;
}

ConfigFile load_config_file(const std::string& path) {
  return config_from_json(load_json_file(path));
}

json recommendation_to_json(const Recommendation& rec) {
  json j;
  j["budget_pages"] = rec.budget_pages;
  j["cost_before"] = rec.cost_before;
  j["cost_after"] = rec.cost_after;
  j["improvement"] = rec.improvement;
  j["estimation_f"] = rec.estimation_f;
  j["estimation_cost"] = rec.estimation_cost;
  json indexes = json::array();
  for (const auto& ci : rec.config.indexes) {
    json ij = index_def_to_json(ci.def);
    ij["pages"] = ci.size.pages;
    ij["cf"] = ci.size.cf;
    ij["err_mean"] = ci.size.err_mean;
    ij["err_var"] = ci.size.err_var;
    ij["provenance"] = provenance_name(ci.size.provenance);
    ij["note"] = ci.size.note;
    indexes.push_back(std::move(ij));
  }
  j["indexes"] = std::move(indexes);
  json trace = json::array();
  for (const auto& ts : rec.trace) {
    trace.push_back({{"step", ts.step},
                     {"action", ts.action},
                     {"index", ts.index},
                     {"benefit", ts.benefit},
                     {"density", ts.density},
                     {"size", ts.size},
                     {"cost_after", ts.cost_after},
                     {"note", ts.note}});
  }
  j["trace"] = std::move(trace);
  return j;
}

Recommendation recommendation_from_json(const json& j) {
  Recommendation rec;
  rec.budget_pages = j.at("budget_pages").get<double>();
  rec.cost_before = j.at("cost_before").get<double>();
  rec.cost_after = j.at("cost_after").get<double>();
  rec.improvement = j.at("improvement").get<double>();
  rec.estimation_f = j.value("estimation_f", 0.0);
  rec.estimation_cost = j.value("estimation_cost", 0.0);
  for (const auto& ij : j.at("indexes")) {
    ConfiguredIndex ci;
    ci.def = index_def_from_json(ij);
    ci.size.pages = ij.at("pages").get<double>();
    ci.size.cf = ij.value("cf", 1.0);
    ci.size.err_mean = ij.value("err_mean", 1.0);
    ci.size.err_var = ij.value("err_var", 0.0);
    const std::string prov = ij.value("provenance", "EXACT");
    ci.size.provenance = prov == "SAMPLED"   ? Provenance::kSampled
                         : prov == "DEDUCED" ? Provenance::kDeduced
                                             : Provenance::kExact;
    ci.size.note = ij.value("note", "");
    rec.config.indexes.push_back(std::move(ci));
  }
  for (const auto& tj : j.value("trace", json::array())) {
    TraceStep ts;
    ts.step = tj.value("step", 0);
    ts.action = tj.value("action", "");
    ts.index = tj.value("index", "");
    ts.benefit = tj.value("benefit", 0.0);
    ts.density = tj.value("density", 0.0);
    ts.size = tj.value("size", 0.0);
    ts.cost_after = tj.value("cost_after", 0.0);
    ts.note = tj.value("note", "");
    rec.trace.push_back(std::move(ts));
  }
  return rec;
}

}  // namespace compass::cli
