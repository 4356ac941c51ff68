#pragma once

#include <string>
#include <vector>

#include "compass/page.hpp"

namespace compass {

/// Per-index, per-column dictionary for GDICT. Entries are the sorted
/// distinct values of the column across the whole index, so the dictionary
/// is independent of tuple order. Pointer width is the smallest of 1/2/4
/// bytes that addresses the entries.
struct GlobalDict {
  std::vector<std::vector<std::string>> columns;  // sorted entries per column
  std::vector<uint32_t> ptr_widths;

  static GlobalDict build(const std::vector<std::string>& rows, const RowLayout& layout);

  /// Stored-once size, counted into an index's compressed bytes:
  /// 4-byte entry count + entries, per column.
  uint64_t bytes() const;

  uint32_t lookup(size_t col, std::string_view value) const;  // fails if absent
};

/// Encodes an uncompressed page. Codecs never share state across columns.
/// If the encoded body is not smaller than the raw body the page is stored
/// raw with the stored-raw flag, so a compressed page never exceeds the raw
/// page size + 1 byte.
Page compress_page(const Page& raw, const RowLayout& layout, Method method,
                   const GlobalDict* dict = nullptr);

/// Inverse of compress_page; the result is byte-identical to the original
/// uncompressed page. GDICT pages fail without their dictionary.
Page decompress_page(const Page& page, const RowLayout& layout,
                     const GlobalDict* dict = nullptr);

/// Null-suppression encoding of a single value, exposed for tests:
/// a maximal run of leading NUL bytes becomes escape 0x00 + run length
/// (runs over 255 split); values without leading NULs are stored verbatim.
std::string ns_encode_value(std::string_view value);

}  // namespace compass
