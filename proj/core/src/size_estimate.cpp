#include "compass/size_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace compass {

namespace {

SizeEstimate clamp_pages(SizeEstimate est) {
  // Extrapolation can overshoot; a silent negative would corrupt the cost
  // math downstream, so clamp to one page and flag it.
  if (est.pages <= 0) {
    est.pages = 1;
    est.clamped = true;
  }
  return est;
}

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kExact: return "EXACT";
    case Provenance::kSampled: return "SAMPLED";
    case Provenance::kDeduced: return "DEDUCED";
  }
  return "?";
}

SizeEstimate SizeEstimate::exact(double pages) {
  SizeEstimate e;
  e.pages = pages;
  e.cf = 1.0;
  e.err_mean = 1.0;
  e.err_var = 0.0;
  e.provenance = Provenance::kExact;
  return e;
}

SizeEstimate sample_cf(const IndexDef& def, const Sample& sample,
                       uint64_t full_uncompressed_pages, const ErrorModel& model) {
  if (def.method == Method::kNone) fail("SampleCF applies to compressed indexes only");
  if (sample.rows.name != def.table && sample.source != def.table)
    fail("sample for table '" + sample.source + "' used with index on '" + def.table + "'");

  SizeEstimate est;
  est.provenance = Provenance::kSampled;

  if (sample.rows.rows == 0) {
    est.cf = 1.0;
    est.pages = static_cast<double>(full_uncompressed_pages);
    est.err_mean = 1.0;
    est.err_var = model.var_ceiling;
    est.low_confidence = true;
    return est;
  }

  const BuiltIndex built = build_index(sample.rows, def);
  est.cf = built.bytes_raw == 0
               ? 1.0
               : std::min(1.0, static_cast<double>(built.bytes_compressed) /
                                   static_cast<double>(built.bytes_raw));
  est.pages = est.cf * static_cast<double>(full_uncompressed_pages);

  const ErrorDist err =
      model.sample_cf_error(category_of(def.method), sample.fraction, built.tuple_count);
  est.err_mean = err.mean;
  est.err_var = err.var;
  est.low_confidence = built.tuple_count < kLowConfidenceRows;
  if (est.low_confidence) est.err_var = std::max(est.err_var, model.var_ceiling);
  return est;
}

SizeEstimate deduce_colset(const IndexDef& target, const IndexDef& known_def,
                           const SizeEstimate& known, const ErrorModel& model) {
  if (category_of(target.method) != Category::kOrdInd)
    fail("ColSet deduction applies to order-independent methods only");
  if (target.method != known_def.method) fail("ColSet deduction requires the same method");
  if (target.table != known_def.table) fail("ColSet deduction requires the same table");
  if (target.column_set() != known_def.column_set())
    fail("ColSet deduction requires the same column set");

  SizeEstimate est;
  est.pages = known.pages;
  est.cf = known.cf;
  const ErrorDist factors[] = {known.error(), model.colset_error()};
  const ErrorDist err = compose_error(factors);
  est.err_mean = err.mean;
  est.err_var = err.var;
  est.provenance = Provenance::kDeduced;
  est.note = "colset <- " + known_def.signature();
  est.low_confidence = known.low_confidence;
  return est;
}

SizeEstimate deduce_colext_ordind(const IndexDef& target,
                                  std::span<const SizeEstimate> parts,
                                  std::span<const uint64_t> part_uncompressed_pages,
                                  uint64_t target_uncompressed_pages,
                                  const ErrorModel& model) {
  if (category_of(target.method) != Category::kOrdInd)
    fail("this ColExt form applies to order-independent methods only");
  if (parts.empty() || parts.size() != part_uncompressed_pages.size())
    fail("ColExt needs one uncompressed size per part");

  double reduction = 0;
  bool low_conf = false;
  std::vector<ErrorDist> factors;
  for (size_t i = 0; i < parts.size(); ++i) {
    reduction += static_cast<double>(part_uncompressed_pages[i]) - parts[i].pages;
    factors.push_back(parts[i].error());
    low_conf = low_conf || parts[i].low_confidence;
  }
  factors.push_back(model.colext_error(Category::kOrdInd, static_cast<int>(parts.size())));

  SizeEstimate est;
  est.pages = static_cast<double>(target_uncompressed_pages) - reduction;
  est.cf = target_uncompressed_pages == 0
               ? 1.0
               : std::clamp(est.pages / static_cast<double>(target_uncompressed_pages), 0.0, 1.0);
  const ErrorDist err = compose_error(factors);
  est.err_mean = err.mean;
  est.err_var = err.var;
  est.provenance = Provenance::kDeduced;
  est.note = "colext(ord-ind), a=" + std::to_string(parts.size());
  est.low_confidence = low_conf;
  return clamp_pages(est);
}

uint64_t avg_run_length(uint64_t total_tuples, uint64_t distinct) {
  if (distinct == 0) fail("run length needs a positive distinct count");
  return (total_tuples + distinct - 1) / distinct;
}

uint64_t fragmented_run_length(uint64_t run, uint64_t distinct, uint64_t prefix_distinct) {
  if (prefix_distinct < distinct)
    fail("group distinct count smaller than the column's own distinct count");
  if (prefix_distinct == 0) fail("fragmented run length needs a positive group distinct");
  const uint64_t num = run * distinct;
  return (num + prefix_distinct - 1) / prefix_distinct;
}

uint64_t page_distinct_values(uint64_t tuples_per_page, uint64_t run_length, uint64_t distinct) {
  if (tuples_per_page == 0) return 0;
  if (run_length > 1)
    return (tuples_per_page + run_length - 1) / run_length;
  // Expected distinct faces when throwing a |Y|-sided dice T times.
  const double y = static_cast<double>(distinct);
  const double t = static_cast<double>(tuples_per_page);
  return static_cast<uint64_t>(std::ceil(y - y * std::pow(1.0 - 1.0 / y, t)));
}

double replaced_fraction(uint64_t tuples_per_page, uint64_t dv) {
  if (tuples_per_page == 0) return 0;
  if (dv > tuples_per_page) dv = tuples_per_page;
  return static_cast<double>(tuples_per_page - dv) / static_cast<double>(tuples_per_page);
}

SizeEstimate deduce_colext_orddep(const IndexDef& target,
                                  std::span<const SizeEstimate> parts,
                                  const Table& table, const TableStats& stats,
                                  std::span<const uint64_t> part_uncompressed_pages,
                                  uint64_t target_uncompressed_pages,
                                  const ErrorModel& model) {
  if (category_of(target.method) != Category::kOrdDep)
    fail("this ColExt form applies to order-dependent methods only");
  const std::vector<std::string> cols = target.all_columns();
  if (parts.size() != cols.size() || parts.size() != part_uncompressed_pages.size())
    fail("ORD-DEP ColExt needs one singleton part per target column");

  const uint64_t total = stats.rows;
  const RowLayout target_layout = layout_for(table, target);
  const uint64_t target_tpp =
      std::min<uint64_t>(target_layout.capacity(target.method), std::max<uint64_t>(total, 1));

  double reduction = 0;
  bool low_conf = false;
  std::vector<ErrorDist> factors;
  std::vector<std::string> prefix;

  for (size_t i = 0; i < cols.size(); ++i) {
    prefix.push_back(cols[i]);
    const uint64_t distinct = std::max<uint64_t>(stats.column(cols[i]).distinct_count, 1);
    const uint64_t prefix_distinct = stats.group_distinct(prefix);

    // Standalone index on this column alone.
    IndexDef single;
    single.table = target.table;
    single.key_columns = {cols[i]};
    single.method = target.method;
    single.filter = target.filter;
    const RowLayout single_layout = layout_for(table, single);
    const uint64_t single_tpp =
        std::min<uint64_t>(single_layout.capacity(single.method), std::max<uint64_t>(total, 1));

    const uint64_t run_single = avg_run_length(std::max<uint64_t>(total, 1), distinct);
    const uint64_t run_target = fragmented_run_length(run_single, distinct, prefix_distinct);

    const uint64_t dv_single = page_distinct_values(single_tpp, run_single, distinct);
    const uint64_t dv_target = page_distinct_values(target_tpp, run_target, distinct);

    const double f_single = replaced_fraction(single_tpp, dv_single);
    const double f_target = replaced_fraction(target_tpp, dv_target);

    // Savings scale with the fraction of values the dictionary replaces.
    // No replacement in the standalone index means no information to
    // rescale, so the part's reduction carries over unscaled.
    const double ratio = f_single > 0 ? std::clamp(f_target / f_single, 0.0, 1.0) : 1.0;
    const double part_reduction =
        static_cast<double>(part_uncompressed_pages[i]) - parts[i].pages;
    reduction += part_reduction * ratio;

    factors.push_back(parts[i].error());
    low_conf = low_conf || parts[i].low_confidence;
  }
  factors.push_back(model.colext_error(Category::kOrdDep, static_cast<int>(parts.size())));

  SizeEstimate est;
  est.pages = static_cast<double>(target_uncompressed_pages) - reduction;
  est.cf = target_uncompressed_pages == 0
               ? 1.0
               : std::clamp(est.pages / static_cast<double>(target_uncompressed_pages), 0.0, 1.0);
  const ErrorDist err = compose_error(factors);
  est.err_mean = err.mean;
  est.err_var = err.var;
  est.provenance = Provenance::kDeduced;
  est.note = "colext(ord-dep), a=" + std::to_string(parts.size());
  est.low_confidence = low_conf;
  return clamp_pages(est);
}

}  // namespace compass
