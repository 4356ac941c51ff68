#include "compass/page.hpp"

#include <numeric>

namespace compass {

Category category_of(Method m) {
  switch (m) {
    case Method::kNs:
    case Method::kGdict:
      return Category::kOrdInd;
    case Method::kPage:
      return Category::kOrdDep;
    case Method::kNone:
      break;
  }
  fail("method NONE has no compression category");
}

Method parse_method(std::string_view s) {
  if (s == "none" || s == "NONE") return Method::kNone;
  if (s == "ns" || s == "NS") return Method::kNs;
  if (s == "gdict" || s == "GDICT") return Method::kGdict;
  if (s == "page" || s == "PAGE") return Method::kPage;
  fail("unknown compression method '" + std::string(s) + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kNone: return "none";
    case Method::kNs: return "ns";
    case Method::kGdict: return "gdict";
    case Method::kPage: return "page";
  }
  return "?";
}

namespace {
uint64_t g_page_size = kDefaultPageSize;
}

uint64_t page_size() { return g_page_size; }

void set_page_size(uint64_t bytes) {
  if (bytes < 256 || bytes > 65536) fail("page size override must be in [256, 65536]");
  g_page_size = bytes;
}

RowLayout RowLayout::of(std::vector<uint32_t> widths) {
  RowLayout l;
  l.widths = std::move(widths);
  l.row_width = std::accumulate(l.widths.begin(), l.widths.end(), 0u);
  if (l.row_width == 0) fail("row layout must have at least one column");
  return l;
}

uint32_t RowLayout::capacity(Method m) const {
  const uint64_t reserved = kPageHeaderBytes + (m == Method::kNone ? 0 : 1);
  if (page_size() <= reserved) fail("page too small for its header");
  const uint64_t cap = (page_size() - reserved) / row_width;
  if (cap == 0)
    fail("row of " + std::to_string(row_width) + " bytes does not fit a page");
  return static_cast<uint32_t>(cap);
}

}  // namespace compass
