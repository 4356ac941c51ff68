#pragma once

#include <json.hpp>

#include "compass/advisor.hpp"
#include "compass/csv.hpp"
#include "compass/synthetic.hpp"

// JSON (de)serialization for the file formats the CLI consumes and the
// recommendation state it persists.

namespace compass::cli {

using nlohmann::json;

Value value_from_json(const json& j);
json value_to_json(const Value& v);

Predicate predicate_from_json(const json& j);
json predicate_to_json(const Predicate& p);

SyntheticSpec synthetic_spec_from_json(const json& j, const std::string& default_name);

IndexDef index_def_from_json(const json& j);
json index_def_to_json(const IndexDef& def);

SelectStatement select_from_json(const json& j);
InsertStatement insert_from_json(const json& j);
Statement statement_from_json(const json& j);

/// Loads the "tables" array of a workload/indexes file into the catalog.
/// Entries are {"name", "csv", "schema"} or {"name", "synthetic": {...}}.
void load_tables(const json& j, Catalog& catalog, const std::string& base_dir);

struct ConfigFile {
  CostModelParams cost_model;
  ErrorModel error_model;
  std::vector<double> f_grid = default_f_grid();
  uint64_t page_size = kDefaultPageSize;
  uint64_t seed = 42;
};

ConfigFile config_from_json(const json& j);
ConfigFile load_config_file(const std::string& path);

json recommendation_to_json(const Recommendation& rec);
Recommendation recommendation_from_json(const json& j);

json load_json_file(const std::string& path);

}  // namespace compass::cli
