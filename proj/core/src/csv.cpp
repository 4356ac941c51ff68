#include "compass/csv.hpp"

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace compass {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::string parse_cell(const std::string& field, const ColumnType& type, const std::string& path,
                       size_t line_no) {
  if (field.empty()) return std::string(type.width, '\0');  // NULL
  if (type.numeric()) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(field.c_str(), &end, 10);
    if (errno != 0 || end != field.c_str() + field.size())
      fail(path + ": line " + std::to_string(line_no) + ": cannot parse '" + field + "' as " +
           type.to_string());
    return encode_int64(v);
  }
  if (field.size() > type.width)
    fail(path + ": line " + std::to_string(line_no) + ": value '" + field + "' exceeds " +
         type.to_string());
  return encode_char(field, type.width);
}

}  // namespace

Schema read_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open schema file '" + path + "'");
  Schema schema;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const size_t colon = line.find(':');
    if (colon == std::string::npos)
      fail(path + ": line " + std::to_string(line_no) + ": expected 'name:type'");
    schema.emplace_back(line.substr(0, colon), ColumnType::parse(line.substr(colon + 1)));
  }
  if (schema.empty()) fail("schema file '" + path + "' is empty");
  return schema;
}

Table ingest_csv(const std::string& path, const Schema& schema, std::string table_name) {
  std::ifstream in(path);
  if (!in) fail("cannot open CSV file '" + path + "'");
  if (table_name.empty()) table_name = std::filesystem::path(path).stem().string();

  Table t = Table::with_schema(table_name, schema);

  std::string line;
  if (!std::getline(in, line)) fail(path + ": missing header line");
  const auto header = split_fields(strip_cr(line));
  if (header.size() != schema.size())
    fail(path + ": header has " + std::to_string(header.size()) + " fields, schema expects " +
         std::to_string(schema.size()));
  for (size_t i = 0; i < schema.size(); ++i)
    if (header[i] != schema[i].first)
      fail(path + ": header field '" + header[i] + "' does not match schema name '" +
           schema[i].first + "'");

  size_t line_no = 1;
  std::vector<std::string> cells(schema.size());
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != schema.size())
      fail(path + ": line " + std::to_string(line_no) + ": expected " +
           std::to_string(schema.size()) + " fields, got " + std::to_string(fields.size()));
    for (size_t i = 0; i < schema.size(); ++i)
      cells[i] = parse_cell(fields[i], schema[i].second, path, line_no);
    t.append_row(cells);
  }
  return t;
}

}  // namespace compass
