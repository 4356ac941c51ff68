#pragma once

#include <map>
#include <string>

#include "compass/stats.hpp"
#include "compass/table.hpp"

namespace compass {

/// Loaded tables plus their computed statistics.
struct Catalog {
  std::map<std::string, Table> tables;
  std::map<std::string, TableStats> stats;

  void add(Table t) {
    if (tables.count(t.name)) fail("catalog already has a table named '" + t.name + "'");
    tables.emplace(t.name, std::move(t));
  }

  const Table& table(const std::string& name) const {
    const auto it = tables.find(name);
    if (it == tables.end()) fail("unknown table '" + name + "'");
    return it->second;
  }

  const TableStats& table_stats(const std::string& name) const {
    const auto it = stats.find(name);
    if (it == stats.end()) fail("no statistics computed for table '" + name + "'");
    return it->second;
  }

  bool has_stats(const std::string& name) const { return stats.count(name) > 0; }
};

}  // namespace compass
