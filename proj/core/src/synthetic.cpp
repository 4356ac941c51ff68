#include "compass/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace compass {

namespace {

constexpr char kBase36[] = "0123456789abcdefghijklmnopqrstuvwxyz";

/// Item i (1-based) rendered into the suffix bytes of a CHAR cell.
std::string char_cell(uint64_t item, uint32_t width, uint32_t prefix_len) {
  std::string out(width, '\0');
  for (uint32_t p = 0; p < prefix_len; ++p) out[p] = 'a';
  const uint32_t digits = width - prefix_len;
  uint64_t v = item - 1;
  for (uint32_t d = 0; d < digits; ++d) {
    out[width - 1 - d] = kBase36[v % 36];
    v /= 36;
  }
  if (v != 0) fail("domain too large for CHAR suffix in synthetic column");
  return out;
}

/// Cumulative Zipf(z) weights over items 1..domain.
std::vector<double> zipf_cdf(uint64_t domain, double z) {
  std::vector<double> cdf(domain);
  double total = 0;
  for (uint64_t i = 0; i < domain; ++i) {
    total += (z == 0.0) ? 1.0 : std::pow(static_cast<double>(i + 1), -z);
    cdf[i] = total;
  }
  for (auto& v : cdf) v /= total;
  cdf.back() = 1.0;
  return cdf;
}

uint64_t draw_item(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const size_t idx = std::min<size_t>(cdf.size() - 1, static_cast<size_t>(it - cdf.begin()));
  return idx + 1;
}

}  // namespace

Table generate_synthetic(const SyntheticSpec& spec) {
  std::vector<std::pair<std::string, ColumnType>> schema;
  for (const auto& c : spec.columns) {
    if (c.domain < 1) fail("synthetic column '" + c.name + "': domain size must be >= 1");
    if (c.zipf < 0) fail("synthetic column '" + c.name + "': negative Zipf exponent");
    if (c.null_fraction < 0 || c.null_fraction > 1)
      fail("synthetic column '" + c.name + "': null fraction outside [0,1]");
    if (c.type.kind == TypeKind::kChar && c.prefix_len >= c.type.width)
      fail("synthetic column '" + c.name + "': prefix leaves no suffix bytes");
    schema.emplace_back(c.name, c.type);
  }
  Table t = Table::with_schema(spec.name, schema);
  t.rows = spec.rows;

  for (size_t ci = 0; ci < spec.columns.size(); ++ci) {
    const auto& cs = spec.columns[ci];
    Column& col = t.columns[ci];
    col.data.reserve(spec.rows * cs.type.width);

    // Independent stream per column; null placement gets its own stream so
    // value draws are unaffected by the null fraction.
    Rng values(mix64(spec.seed ^ mix64(ci + 1)));
    Rng nulls(mix64(spec.seed ^ mix64((ci + 1) * 0x9e3779b9ull)));

    const auto cdf = zipf_cdf(cs.domain, cs.zipf);
    const std::string null_cell(cs.type.width, '\0');

    // Exact null count, positions chosen by sequential selection.
    uint64_t nulls_left = static_cast<uint64_t>(std::llround(
        static_cast<double>(spec.rows) * cs.null_fraction));

    for (uint64_t r = 0; r < spec.rows; ++r) {
      const uint64_t remaining = spec.rows - r;
      const bool is_null = nulls_left > 0 &&
                           nulls.next_unit() * static_cast<double>(remaining) <
                               static_cast<double>(nulls_left);
      const uint64_t item = draw_item(cdf, values.next_unit());
      if (is_null) {
        --nulls_left;
        col.data += null_cell;
      } else if (cs.type.kind == TypeKind::kChar) {
        col.data += char_cell(item, cs.type.width, cs.prefix_len);
      } else {
        col.data += encode_int64(static_cast<int64_t>(item));
      }
    }
  }
  t.validate();
  return t;
}

}  // namespace compass
