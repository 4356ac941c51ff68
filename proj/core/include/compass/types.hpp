#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "compass/common.hpp"

namespace compass {

enum class TypeKind { kInt64, kChar, kDate };

/// Fixed-width column type. Every value of a column occupies exactly
/// `width` bytes:
///   INT64  8 bytes, big-endian two's complement
///   CHAR(n) n bytes, short values padded with trailing NUL bytes
///   DATE   8 bytes, the day number stored like an INT64
/// SQL NULL is the all-NUL-byte value of the column's width.
struct ColumnType {
  TypeKind kind = TypeKind::kInt64;
  uint32_t width = 8;

  static ColumnType int64() { return {TypeKind::kInt64, 8}; }
  static ColumnType date() { return {TypeKind::kDate, 8}; }
  static ColumnType char_width(uint32_t n);

  /// Parses "int64", "date" or "char(n)" (case-insensitive).
  static ColumnType parse(std::string_view token);

  bool numeric() const { return kind != TypeKind::kChar; }
  std::string to_string() const;

  bool operator==(const ColumnType&) const = default;
};

/// Encodes an int64 into the 8-byte big-endian representation.
std::string encode_int64(int64_t v);
int64_t decode_int64(std::string_view bytes);

/// Encodes a character string into a fixed CHAR(width) cell (NUL padded).
/// Fails if the string is longer than the width.
std::string encode_char(std::string_view s, uint32_t width);

/// True when the cell is the all-NUL value (the SQL NULL model).
bool is_null_value(std::string_view cell);

/// Typed constant used in predicates and file formats.
struct Value {
  TypeKind kind = TypeKind::kInt64;
  int64_t i = 0;
  std::string s;

  static Value of_int(int64_t v) { return Value{TypeKind::kInt64, v, {}}; }
  static Value of_string(std::string v) { return Value{TypeKind::kChar, 0, std::move(v)}; }

  /// Encodes the constant into the cell representation of `type`.
  /// Fails on kind/width mismatches.
  std::string encode(const ColumnType& type) const;

  std::string to_display() const;
};

}  // namespace compass
