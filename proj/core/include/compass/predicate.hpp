#pragma once

#include <optional>
#include <string>

#include "compass/table.hpp"
#include "compass/types.hpp"

namespace compass {

enum class PredOp { kLt, kLe, kEq, kGe, kGt, kBetween };

PredOp parse_pred_op(std::string_view s);
std::string pred_op_name(PredOp op);

/// Single-column comparison predicate. BETWEEN is inclusive on both ends;
/// all other operators use `lo` as the constant.
struct Predicate {
  std::string column;
  PredOp op = PredOp::kEq;
  Value lo;
  Value hi;

  std::string signature() const;

  /// Type-checks the constant(s) against the column type.
  void validate(const ColumnType& type) const;

  /// Evaluates against an encoded cell. Numeric kinds compare numerically,
  /// CHAR compares padded bytes.
  bool eval(const ColumnType& type, std::string_view cell) const;
};

/// Closed/open interval over column values, used for range containment.
struct Bound {
  bool infinite = true;
  bool inclusive = true;
  int64_t num = 0;     // numeric kinds
  std::string bytes;   // CHAR kinds (padded)
};

struct ValueInterval {
  TypeKind kind = TypeKind::kInt64;
  Bound lo, hi;
};

ValueInterval predicate_interval(const Predicate& p, const ColumnType& type);

/// True when every value satisfying `inner` also satisfies `outer`.
bool interval_contains(const ValueInterval& outer, const ValueInterval& inner);

/// Row-level evaluation against a table; fails on unknown column or a
/// constant whose type does not match the column.
bool eval_predicate(const Predicate& p, const Table& t, uint64_t row);

/// All matching row ids, in order.
std::vector<uint64_t> filter_rows(const Table& t, const Predicate& p);

}  // namespace compass
