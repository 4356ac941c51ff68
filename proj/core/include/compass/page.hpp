#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "compass/common.hpp"

namespace compass {

/// Compression methods.
///   NONE  no codec
///   NS    null suppression: leading NUL runs per value (ORD-IND)
///   GDICT per-index, per-column global dictionary (ORD-IND)
///   PAGE  per-page column prefix suppression + local dictionary (ORD-DEP)
enum class Method { kNone, kNs, kGdict, kPage };

enum class Category { kOrdInd, kOrdDep };

/// NONE has no category and fails here.
Category category_of(Method m);

Method parse_method(std::string_view s);
std::string method_name(Method m);

/// Page geometry. The header is 16 bytes: method tag (1), tuple count (2),
/// flags (1), 12 reserved. Compressed methods additionally account one flag
/// byte in the body so a page stored raw costs exactly raw size + 1.
inline constexpr uint32_t kPageHeaderBytes = 16;
inline constexpr uint64_t kDefaultPageSize = 8192;

uint64_t page_size();

/// Testing-only override (config file PAGE_SIZE). Accepts [256, 65536].
void set_page_size(uint64_t bytes);

struct PageSizeGuard {
  explicit PageSizeGuard(uint64_t bytes) : saved_(page_size()) { set_page_size(bytes); }
  ~PageSizeGuard() { set_page_size(saved_); }

 private:
  uint64_t saved_;
};

/// Fixed widths of the projected row, key columns first.
struct RowLayout {
  std::vector<uint32_t> widths;
  uint32_t row_width = 0;

  static RowLayout of(std::vector<uint32_t> widths);

  /// Rows per page: floor((page_size - header - flag) / row_width) where the
  /// flag byte is reserved only for compressed methods. Fails when a row
  /// does not fit a page.
  uint32_t capacity(Method m) const;
};

struct Page {
  Method method = Method::kNone;
  uint16_t tuple_count = 0;
  bool compressed = false;  // body went through the codec (or its raw fallback)
  bool stored_raw = false;  // fallback: body is the raw rows
  std::string body;

  /// Accounted size: header + flag byte (compressed methods) + body.
  uint64_t bytes() const {
    return kPageHeaderBytes + (method == Method::kNone ? 0 : 1) + body.size();
  }
};

}  // namespace compass
