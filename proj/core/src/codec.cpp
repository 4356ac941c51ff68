#include "compass/codec.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace compass {

namespace {

uint32_t pointer_width(size_t entries) {
  if (entries <= 0xffull) return 1;
  if (entries <= 0xffffull) return 2;
  return 4;
}

void append_pointer(std::string& out, uint32_t idx, uint32_t width) {
  for (int b = static_cast<int>(width) - 1; b >= 0; --b)
    out += static_cast<char>((idx >> (8 * b)) & 0xff);
}

uint32_t read_pointer(const std::string& body, size_t& pos, uint32_t width) {
  if (pos + width > body.size()) fail("corrupt page: truncated dictionary pointer");
  uint32_t v = 0;
  for (uint32_t b = 0; b < width; ++b) v = (v << 8) | static_cast<uint8_t>(body[pos++]);
  return v;
}

void check_method_tag(Method m) {
  switch (m) {
    case Method::kNone:
    case Method::kNs:
    case Method::kGdict:
    case Method::kPage:
      return;
  }
  fail("corrupt page: unknown method tag");
}

// --- NS ---

std::string ns_encode_body(const std::string& rows, const RowLayout& layout, uint16_t tuples) {
  std::string out;
  out.reserve(rows.size());
  size_t pos = 0;
  for (uint16_t t = 0; t < tuples; ++t) {
    for (uint32_t w : layout.widths) {
      out += ns_encode_value(std::string_view(rows).substr(pos, w));
      pos += w;
    }
  }
  return out;
}

std::string ns_decode_body(const std::string& body, const RowLayout& layout, uint16_t tuples) {
  std::string out;
  size_t pos = 0;
  for (uint16_t t = 0; t < tuples; ++t) {
    for (uint32_t w : layout.widths) {
      uint32_t nuls = 0;
      while (nuls < w && pos < body.size() && body[pos] == '\0') {
        ++pos;
        if (pos >= body.size()) fail("corrupt page: truncated NS run");
        nuls += static_cast<uint8_t>(body[pos++]);
        if (nuls > w) fail("corrupt page: NS run exceeds value width");
      }
      const uint32_t literal = w - nuls;
      if (pos + literal > body.size()) fail("corrupt page: truncated NS value");
      out.append(nuls, '\0');
      out.append(body, pos, literal);
      pos += literal;
    }
  }
  if (pos != body.size()) fail("corrupt page: trailing NS bytes");
  return out;
}

// --- GDICT ---

std::string gdict_encode_body(const std::string& rows, const RowLayout& layout, uint16_t tuples,
                              const GlobalDict& dict) {
  std::string out;
  size_t pos = 0;
  for (uint16_t t = 0; t < tuples; ++t) {
    for (size_t c = 0; c < layout.widths.size(); ++c) {
      const uint32_t w = layout.widths[c];
      const uint32_t idx = dict.lookup(c, std::string_view(rows).substr(pos, w));
      append_pointer(out, idx, dict.ptr_widths[c]);
      pos += w;
    }
  }
  return out;
}

std::string gdict_decode_body(const std::string& body, const RowLayout& layout, uint16_t tuples,
                              const GlobalDict& dict) {
  std::string out;
  size_t pos = 0;
  for (uint16_t t = 0; t < tuples; ++t) {
    for (size_t c = 0; c < layout.widths.size(); ++c) {
      const uint32_t idx = read_pointer(body, pos, dict.ptr_widths[c]);
      if (idx >= dict.columns[c].size()) fail("corrupt page: dictionary pointer out of range");
      out += dict.columns[c][idx];
    }
  }
  if (pos != body.size()) fail("corrupt page: trailing GDICT bytes");
  return out;
}

// --- PAGE: per-column common-prefix suppression + local dictionary ---
//
// Section layout per column:
//   u16 prefix_len, prefix bytes,
//   u16 dict_count, dict entries (suffix bytes each),
//   per tuple: u16 pointer (1-based) or 0x0000 followed by the literal suffix.
// A column whose suffix width is zero (all values equal) stores no tokens.
// An empty dictionary (no suffix repeats, or suffixes no wider than the
// 2-byte pointer, where replacement can never pay) stores the suffixes bare.

std::string page_encode_body(const std::string& rows, const RowLayout& layout, uint16_t tuples) {
  std::string out;
  size_t col_off = 0;
  for (uint32_t w : layout.widths) {
    std::vector<std::string_view> values;
    values.reserve(tuples);
    for (uint16_t t = 0; t < tuples; ++t)
      values.push_back(std::string_view(rows).substr(t * layout.row_width + col_off, w));

    uint32_t prefix = w;
    for (uint16_t t = 1; t < tuples && prefix > 0; ++t) {
      uint32_t n = 0;
      while (n < prefix && values[t][n] == values[0][n]) ++n;
      prefix = n;
    }
    if (tuples == 0) prefix = 0;
    const uint32_t suffix = w - prefix;

    append_be16(out, static_cast<uint16_t>(prefix));
    if (tuples > 0) out.append(values[0].substr(0, prefix));

    if (suffix == 0) {  // constant column within the page
      append_be16(out, 0);
      col_off += w;
      continue;
    }

    // Admit suffixes occurring at least twice, in first-occurrence order.
    std::map<std::string_view, uint32_t> dict_ids;
    std::vector<std::string_view> entries;
    if (suffix > 2) {
      std::map<std::string_view, uint32_t> counts;
      for (const auto& v : values) ++counts[v.substr(prefix)];
      for (const auto& v : values) {
        const std::string_view sfx = v.substr(prefix);
        if (counts[sfx] >= 2 && dict_ids.find(sfx) == dict_ids.end()) {
          dict_ids[sfx] = static_cast<uint32_t>(entries.size() + 1);
          entries.push_back(sfx);
        }
      }
      if (entries.size() > 0xffff) fail("page dictionary overflow");
    }

    append_be16(out, static_cast<uint16_t>(entries.size()));
    for (const auto& e : entries) out.append(e);

    if (entries.empty()) {
      for (const auto& v : values) out.append(v.substr(prefix));
    } else {
      for (const auto& v : values) {
        const std::string_view sfx = v.substr(prefix);
        const auto it = dict_ids.find(sfx);
        if (it != dict_ids.end()) {
          append_be16(out, static_cast<uint16_t>(it->second));
        } else {
          append_be16(out, 0);
          out.append(sfx);
        }
      }
    }
    col_off += w;
  }
  return out;
}

std::string page_decode_body(const std::string& body, const RowLayout& layout, uint16_t tuples) {
  std::vector<std::vector<std::string>> cols(layout.widths.size());
  size_t pos = 0;
  auto need = [&](size_t n) {
    if (pos + n > body.size()) fail("corrupt page: truncated PAGE section");
  };
  for (size_t c = 0; c < layout.widths.size(); ++c) {
    const uint32_t w = layout.widths[c];
    need(2);
    const uint16_t prefix = load_be16(body.data() + pos);
    pos += 2;
    if (prefix > w) fail("corrupt page: prefix longer than value");
    need(prefix);
    const std::string pfx = body.substr(pos, prefix);
    pos += prefix;
    const uint32_t suffix = w - prefix;

    need(2);
    const uint16_t dict_count = load_be16(body.data() + pos);
    pos += 2;

    if (suffix == 0) {
      if (dict_count != 0) fail("corrupt page: dictionary on constant column");
      cols[c].assign(tuples, pfx);
      continue;
    }

    std::vector<std::string> entries(dict_count);
    for (auto& e : entries) {
      need(suffix);
      e = body.substr(pos, suffix);
      pos += suffix;
    }
    cols[c].reserve(tuples);
    if (entries.empty()) {
      for (uint16_t t = 0; t < tuples; ++t) {
        need(suffix);
        cols[c].push_back(pfx + body.substr(pos, suffix));
        pos += suffix;
      }
    } else {
      for (uint16_t t = 0; t < tuples; ++t) {
        need(2);
        const uint16_t ptr = load_be16(body.data() + pos);
        pos += 2;
        if (ptr == 0) {
          need(suffix);
          cols[c].push_back(pfx + body.substr(pos, suffix));
          pos += suffix;
        } else {
          if (ptr > entries.size()) fail("corrupt page: local dictionary pointer out of range");
          cols[c].push_back(pfx + entries[ptr - 1]);
        }
      }
    }
  }
  if (pos != body.size()) fail("corrupt page: trailing PAGE bytes");

  std::string out;
  out.reserve(static_cast<size_t>(tuples) * layout.row_width);
  for (uint16_t t = 0; t < tuples; ++t)
    for (size_t c = 0; c < layout.widths.size(); ++c) out += cols[c][t];
  return out;
}

}  // namespace

std::string ns_encode_value(std::string_view value) {
  size_t k = 0;
  while (k < value.size() && value[k] == '\0') ++k;
  if (k == 0) return std::string(value);
  std::string out;
  size_t run = k;
  while (run > 0) {
    const size_t chunk = std::min<size_t>(run, 255);
    out += '\0';
    out += static_cast<char>(chunk);
    run -= chunk;
  }
  out.append(value.substr(k));
  return out;
}

GlobalDict GlobalDict::build(const std::vector<std::string>& rows, const RowLayout& layout) {
  GlobalDict dict;
  dict.columns.resize(layout.widths.size());
  dict.ptr_widths.resize(layout.widths.size());
  size_t off = 0;
  for (size_t c = 0; c < layout.widths.size(); ++c) {
    const uint32_t w = layout.widths[c];
    std::set<std::string_view> distinct;
    for (const auto& row : rows) distinct.insert(std::string_view(row).substr(off, w));
    dict.columns[c].assign(distinct.begin(), distinct.end());  // sorted by std::set
    dict.ptr_widths[c] = pointer_width(std::max<size_t>(dict.columns[c].size(), 1));
    off += w;
  }
  return dict;
}

uint64_t GlobalDict::bytes() const {
  uint64_t total = 0;
  for (const auto& col : columns) {
    total += 4;
    for (const auto& e : col) total += e.size();
  }
  return total;
}

uint32_t GlobalDict::lookup(size_t col, std::string_view value) const {
  const auto& entries = columns[col];
  const auto it = std::lower_bound(entries.begin(), entries.end(), value);
  if (it == entries.end() || *it != value) fail("value missing from global dictionary");
  return static_cast<uint32_t>(it - entries.begin());
}

Page compress_page(const Page& raw, const RowLayout& layout, Method method,
                   const GlobalDict* dict) {
  check_method_tag(method);
  if (raw.compressed) fail("compress_page: page already compressed");
  if (raw.body.size() != static_cast<size_t>(raw.tuple_count) * layout.row_width)
    fail("compress_page: body does not match tuple count");

  Page out;
  out.method = method;
  out.tuple_count = raw.tuple_count;
  out.compressed = true;

  if (method == Method::kNone) {
    out.body = raw.body;
    return out;
  }

  std::string enc;
  switch (method) {
    case Method::kNs:
      enc = ns_encode_body(raw.body, layout, raw.tuple_count);
      break;
    case Method::kGdict:
      if (dict == nullptr) fail("GDICT compression requires a global dictionary");
      enc = gdict_encode_body(raw.body, layout, raw.tuple_count, *dict);
      break;
    case Method::kPage:
      enc = page_encode_body(raw.body, layout, raw.tuple_count);
      break;
    default:
      break;
  }

  if (enc.size() >= raw.body.size()) {
    out.stored_raw = true;
    out.body = raw.body;
  } else {
    out.body = std::move(enc);
  }
  return out;
}

Page decompress_page(const Page& page, const RowLayout& layout, const GlobalDict* dict) {
  check_method_tag(page.method);
  if (!page.compressed) fail("decompress_page: page is not compressed");

  Page out;
  out.method = page.method;
  out.tuple_count = page.tuple_count;
  out.compressed = false;

  if (page.method == Method::kNone || page.stored_raw) {
    if (page.body.size() != static_cast<size_t>(page.tuple_count) * layout.row_width)
      fail("corrupt page: raw body does not match tuple count");
    out.body = page.body;
    return out;
  }

  switch (page.method) {
    case Method::kNs:
      out.body = ns_decode_body(page.body, layout, page.tuple_count);
      break;
    case Method::kGdict:
      if (dict == nullptr) fail("GDICT decompression requires the global dictionary");
      out.body = gdict_decode_body(page.body, layout, page.tuple_count, *dict);
      break;
    case Method::kPage:
      out.body = page_decode_body(page.body, layout, page.tuple_count);
      break;
    default:
      break;
  }
  return out;
}

}  // namespace compass
