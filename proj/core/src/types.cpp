#include "compass/types.hpp"

#include <algorithm>
#include <cctype>

namespace compass {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

ColumnType ColumnType::char_width(uint32_t n) {
  if (n < 1) fail("CHAR width must be >= 1");
  return {TypeKind::kChar, n};
}

ColumnType ColumnType::parse(std::string_view token) {
  std::string t = lower(token);
  while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
  size_t start = 0;
  while (start < t.size() && (t[start] == ' ' || t[start] == '\t')) ++start;
  t = t.substr(start);
  if (t == "int64") return int64();
  if (t == "date") return date();
  if (t.rfind("char(", 0) == 0 && t.back() == ')') {
    const std::string digits = t.substr(5, t.size() - 6);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      fail("bad CHAR width in type '" + std::string(token) + "'");
    return char_width(static_cast<uint32_t>(std::stoul(digits)));
  }
  fail("unknown column type '" + std::string(token) + "'");
}

std::string ColumnType::to_string() const {
  switch (kind) {
    case TypeKind::kInt64:
      return "int64";
    case TypeKind::kDate:
      return "date";
    case TypeKind::kChar:
      return "char(" + std::to_string(width) + ")";
  }
  return "?";
}

std::string encode_int64(int64_t v) {
  std::string out(8, '\0');
  store_be64(out.data(), static_cast<uint64_t>(v));
  return out;
}

int64_t decode_int64(std::string_view bytes) {
  if (bytes.size() != 8) fail("int64 cell must be 8 bytes");
  return static_cast<int64_t>(load_be64(bytes.data()));
}

std::string encode_char(std::string_view s, uint32_t width) {
  if (s.size() > width)
    fail("value '" + std::string(s) + "' longer than CHAR(" + std::to_string(width) + ")");
  std::string out(width, '\0');
  std::copy(s.begin(), s.end(), out.begin());
  return out;
}

bool is_null_value(std::string_view cell) {
  return std::all_of(cell.begin(), cell.end(), [](char c) { return c == '\0'; });
}

std::string Value::encode(const ColumnType& type) const {
  if (type.numeric()) {
    if (kind == TypeKind::kChar)
      fail("string constant used with numeric column type " + type.to_string());
    return encode_int64(i);
  }
  if (kind != TypeKind::kChar)
    fail("numeric constant used with CHAR column");
  return encode_char(s, type.width);
}

std::string Value::to_display() const {
  if (kind == TypeKind::kChar) return s;
  return std::to_string(i);
}

}  // namespace compass
