#pragma once

#include <span>
#include <string>

#include "compass/error_model.hpp"
#include "compass/index.hpp"
#include "compass/sample.hpp"

namespace compass {

enum class Provenance { kExact, kSampled, kDeduced };

std::string provenance_name(Provenance p);

/// Estimated compressed size of an index, with its error distribution.
struct SizeEstimate {
  double pages = 0;         // estimated compressed page count
  double cf = 1.0;          // compression fraction, in (0, 1]
  double err_mean = 1.0;    // E(estimate / truth)
  double err_var = 0.0;     // V(estimate / truth)
  Provenance provenance = Provenance::kExact;
  std::string note;         // deduction method and inputs, for reports
  bool low_confidence = false;
  bool clamped = false;     // deduced size went negative and was clamped

  ErrorDist error() const { return {err_mean, err_var}; }

  static SizeEstimate exact(double pages);
};

/// SampleCF: builds the index on the sample, takes cf = compressed/raw bytes
/// and scales the full uncompressed page count. Error comes from the model
/// at the sample's fraction. Empty samples yield a low-confidence estimate
/// with the variance ceiling.
SizeEstimate sample_cf(const IndexDef& def, const Sample& sample,
                       uint64_t full_uncompressed_pages, const ErrorModel& model);

/// ColSet: two ORD-IND indexes over the same column set have the same
/// compressed size, so the known estimate transfers directly.
SizeEstimate deduce_colset(const IndexDef& target, const IndexDef& known_def,
                           const SizeEstimate& known, const ErrorModel& model);

/// ColExt for ORD-IND: the size reduction of disjoint parts adds up.
///   R(part) = uncompressed(part) - compressed(part)
///   pages(target) = uncompressed(target) - sum R(part)
SizeEstimate deduce_colext_ordind(const IndexDef& target,
                                  std::span<const SizeEstimate> parts,
                                  std::span<const uint64_t> part_uncompressed_pages,
                                  uint64_t target_uncompressed_pages,
                                  const ErrorModel& model);

// --- ORD-DEP extrapolation helpers (exposed for the worked-example tests) ---

/// Average run length of a value: ceil(total_tuples / distinct).
uint64_t avg_run_length(uint64_t total_tuples, uint64_t distinct);

/// Run length after fragmentation by the key prefix ahead of the column:
/// ceil(run * |Y| / |prefix+Y|).
uint64_t fragmented_run_length(uint64_t run, uint64_t distinct, uint64_t prefix_distinct);

/// Average distinct values of a column per page. With runs longer than one
/// tuple this is ceil(T / L); otherwise the dice expectation
/// ceil(|Y| - |Y| (1 - 1/|Y|)^T).
uint64_t page_distinct_values(uint64_t tuples_per_page, uint64_t run_length, uint64_t distinct);

/// Fraction of a column's values replaced by the page dictionary:
/// (T - DV) / T.
double replaced_fraction(uint64_t tuples_per_page, uint64_t dv);

/// ColExt for ORD-DEP (PAGE): per-column reductions of the singleton parts,
/// rescaled by the ratio of replaced fractions between the composite and the
/// standalone index. Parts must be the singleton indexes of the target's
/// columns, in target order; the required group distinct counts come from
/// the stats.
SizeEstimate deduce_colext_orddep(const IndexDef& target,
                                  std::span<const SizeEstimate> parts,
                                  const Table& table, const TableStats& stats,
                                  std::span<const uint64_t> part_uncompressed_pages,
                                  uint64_t target_uncompressed_pages,
                                  const ErrorModel& model);

}  // namespace compass
