#pragma once

#include <string>
#include <utility>
#include <vector>

#include "compass/table.hpp"

namespace compass {

using Schema = std::vector<std::pair<std::string, ColumnType>>;

/// Parses a schema file: one "name:type" per line, blank lines ignored.
Schema read_schema_file(const std::string& path);

/// Loads a comma-separated file. First line must be a header matching the
/// schema names; no quoting or escaping is supported. Empty fields load as
/// NULL. Parse failures report the 1-based line number.
Table ingest_csv(const std::string& path, const Schema& schema, std::string table_name = "");

}  // namespace compass
