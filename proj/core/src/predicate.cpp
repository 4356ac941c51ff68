#include "compass/predicate.hpp"

#include <limits>

namespace compass {

PredOp parse_pred_op(std::string_view s) {
  if (s == "lt" || s == "<") return PredOp::kLt;
  if (s == "le" || s == "<=") return PredOp::kLe;
  if (s == "eq" || s == "=") return PredOp::kEq;
  if (s == "ge" || s == ">=") return PredOp::kGe;
  if (s == "gt" || s == ">") return PredOp::kGt;
  if (s == "between") return PredOp::kBetween;
  fail("unknown predicate operator '" + std::string(s) + "'");
}

std::string pred_op_name(PredOp op) {
  switch (op) {
    case PredOp::kLt: return "lt";
    case PredOp::kLe: return "le";
    case PredOp::kEq: return "eq";
    case PredOp::kGe: return "ge";
    case PredOp::kGt: return "gt";
    case PredOp::kBetween: return "between";
  }
  return "?";
}

std::string Predicate::signature() const {
  std::string s = column + " " + pred_op_name(op) + " " + lo.to_display();
  if (op == PredOp::kBetween) s += ".." + hi.to_display();
  return s;
}

void Predicate::validate(const ColumnType& type) const {
  auto check = [&](const Value& v) {
    if (type.numeric() && v.kind == TypeKind::kChar)
      fail("predicate on '" + column + "': string constant against numeric column");
    if (!type.numeric() && v.kind != TypeKind::kChar)
      fail("predicate on '" + column + "': numeric constant against CHAR column");
    (void)v.encode(type);  // width check for CHAR
  };
  check(lo);
  if (op == PredOp::kBetween) {
    check(hi);
  }
}

bool Predicate::eval(const ColumnType& type, std::string_view cell) const {
  if (type.numeric()) {
    const int64_t v = decode_int64(cell);
    switch (op) {
      case PredOp::kLt: return v < lo.i;
      case PredOp::kLe: return v <= lo.i;
      case PredOp::kEq: return v == lo.i;
      case PredOp::kGe: return v >= lo.i;
      case PredOp::kGt: return v > lo.i;
      case PredOp::kBetween: return v >= lo.i && v <= hi.i;
    }
    return false;
  }
  const std::string lo_enc = lo.encode(type);
  switch (op) {
    case PredOp::kLt: return cell < lo_enc;
    case PredOp::kLe: return cell <= lo_enc;
    case PredOp::kEq: return cell == lo_enc;
    case PredOp::kGe: return cell >= lo_enc;
    case PredOp::kGt: return cell > lo_enc;
    case PredOp::kBetween: return cell >= lo_enc && cell <= hi.encode(type);
  }
  return false;
}

ValueInterval predicate_interval(const Predicate& p, const ColumnType& type) {
  ValueInterval iv;
  iv.kind = type.numeric() ? TypeKind::kInt64 : TypeKind::kChar;
  auto bound = [&](const Value& v, bool inclusive) {
    Bound b;
    b.infinite = false;
    b.inclusive = inclusive;
    if (type.numeric())
      b.num = v.i;
    else
      b.bytes = v.encode(type);
    return b;
  };
  switch (p.op) {
    case PredOp::kLt: iv.hi = bound(p.lo, false); break;
    case PredOp::kLe: iv.hi = bound(p.lo, true); break;
    case PredOp::kEq: iv.lo = bound(p.lo, true); iv.hi = bound(p.lo, true); break;
    case PredOp::kGe: iv.lo = bound(p.lo, true); break;
    case PredOp::kGt: iv.lo = bound(p.lo, false); break;
    case PredOp::kBetween:
      iv.lo = bound(p.lo, true);
      iv.hi = bound(p.hi, true);
      break;
  }
  return iv;
}

namespace {

// Returns <0, 0, >0 comparing two like-side bounds; `low_side` selects which
// side of the interval the bounds sit on.
int compare_bounds(const Bound& a, const Bound& b, TypeKind kind, bool low_side) {
  if (a.infinite && b.infinite) return 0;
  if (a.infinite) return low_side ? -1 : 1;
  if (b.infinite) return low_side ? 1 : -1;
  int cmp;
  if (kind == TypeKind::kChar)
    cmp = a.bytes.compare(b.bytes) < 0 ? -1 : (a.bytes == b.bytes ? 0 : 1);
  else
    cmp = a.num < b.num ? -1 : (a.num == b.num ? 0 : 1);
  if (cmp != 0) return cmp;
  if (a.inclusive == b.inclusive) return 0;
  // Same point: an inclusive low bound reaches further down; an inclusive
  // high bound reaches further up.
  if (low_side) return a.inclusive ? -1 : 1;
  return a.inclusive ? 1 : -1;
}

}  // namespace

bool interval_contains(const ValueInterval& outer, const ValueInterval& inner) {
  if (outer.kind != inner.kind) return false;
  return compare_bounds(outer.lo, inner.lo, outer.kind, true) <= 0 &&
         compare_bounds(outer.hi, inner.hi, outer.kind, false) >= 0;
}

bool eval_predicate(const Predicate& p, const Table& t, uint64_t row) {
  const size_t col = t.column_index(p.column);
  const ColumnType& type = t.columns[col].type;
  p.validate(type);
  return p.eval(type, t.value(col, row));
}

std::vector<uint64_t> filter_rows(const Table& t, const Predicate& p) {
  const size_t col = t.column_index(p.column);
  const ColumnType& type = t.columns[col].type;
  p.validate(type);
  std::vector<uint64_t> out;
  for (uint64_t r = 0; r < t.rows; ++r)
    if (p.eval(type, t.value(col, r))) out.push_back(r);
  return out;
}

}  // namespace compass
