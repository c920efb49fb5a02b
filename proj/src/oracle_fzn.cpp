// FlatZinc reference semantics for the brute-force oracle.

#include <algorithm>
#include <unordered_map>

#include "oracle_engine.hpp"
#include "zinc_bridge/builtins.hpp"

namespace zb::oracle {

using namespace detail;
using fzn::Builtin;

namespace {

constexpr std::size_t kMaxSetUniverse = 20;

/// A constraint argument after resolving identifiers: either a constant or a
/// variable slot in the environment.
struct Scalar {
  int var = -1;
  Value constant;
};

struct Arg {
  bool is_array = false;
  Scalar s;
  std::vector<Scalar> elems;
};

inline const Value& val(const Scalar& s, const Env& e) {
  return s.var >= 0 ? e[static_cast<std::size_t>(s.var)] : s.constant;
}
inline bool B(const Scalar& s, const Env& e) { return std::get<bool>(val(s, e)); }
inline std::int64_t I(const Scalar& s, const Env& e) {
  const Value& v = val(s, e);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? 1 : 0;
  return std::get<std::int64_t>(v);
}
inline Rational F(const Scalar& s, const Env& e) {
  const Value& v = val(s, e);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return Rational(*i);
  return std::get<Rational>(v);
}
inline const IntSet& S(const Scalar& s, const Env& e) { return std::get<IntSet>(val(s, e)); }

bool subset(const IntSet& a, const IntSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

IntSet set_op(const IntSet& a, const IntSet& b, Builtin op) {
  IntSet r;
  switch (op) {
    case Builtin::SetUnion: std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r)); break;
    case Builtin::SetIntersect:
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
      break;
    case Builtin::SetDiff: std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r)); break;
    default:
      std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
      break;
  }
  return r;
}

template <class T>
bool cmp_rel(const T& a, const T& b, char rel) {
  switch (rel) {
    case '=': return a == b;
    case '!': return a != b;
    case '<': return a < b;
    default: return a <= b;
  }
}

char rel_of(Builtin b) {
  switch (b) {
    case Builtin::IntEq: case Builtin::IntEqReif: case Builtin::FloatEq: case Builtin::FloatEqReif:
    case Builtin::IntLinEq: case Builtin::IntLinEqReif: case Builtin::FloatLinEq: case Builtin::FloatLinEqReif:
    case Builtin::BoolEq: case Builtin::BoolEqReif: case Builtin::BoolLinEq:
      return '=';
    case Builtin::IntNe: case Builtin::IntNeReif: case Builtin::FloatNe: case Builtin::FloatNeReif:
    case Builtin::IntLinNe: case Builtin::IntLinNeReif: case Builtin::FloatLinNe: case Builtin::FloatLinNeReif:
      return '!';
    case Builtin::IntLt: case Builtin::IntLtReif: case Builtin::FloatLt: case Builtin::FloatLtReif:
    case Builtin::FloatLinLt: case Builtin::FloatLinLtReif: case Builtin::BoolLt: case Builtin::BoolLtReif:
      return '<';
    default:
      return 'l';
  }
}

std::int64_t lin_int(const Arg& coeffs, const Arg& xs, const Env& e) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < xs.elems.size(); ++i) sum = add64(sum, mul64(I(coeffs.elems[i], e), I(xs.elems[i], e)));
  return sum;
}

Rational lin_float(const Arg& coeffs, const Arg& xs, const Env& e) {
  Rational sum;
  for (std::size_t i = 0; i < xs.elems.size(); ++i) sum += F(coeffs.elems[i], e) * F(xs.elems[i], e);
  return sum;
}

/// FlatZinc int_div truncates toward zero; int_mod takes the sign of the dividend.
std::optional<std::int64_t> trunc_div(std::int64_t a, std::int64_t b) {
  if (b == 0) return std::nullopt;
  if (a == INT64_MIN && b == -1) throw Overflow();
  return a / b;
}

std::optional<std::int64_t> trunc_mod(std::int64_t a, std::int64_t b) {
  if (b == 0) return std::nullopt;
  if (b == -1) return 0;
  return a % b;
}

/// Truth of a constraint under a total assignment of its arguments. Reified
/// forms compare the condition with their control literal.
bool holds(Builtin b, const std::vector<Arg>& a, const Env& e) {
  auto s = [&](std::size_t i) -> const Scalar& { return a[i].s; };
  switch (b) {
    case Builtin::ArrayBoolAnd: {
      bool all = true;
      for (const auto& x : a[0].elems) all = all && B(x, e);
      return all == B(s(1), e);
    }
    case Builtin::ArrayBoolOr: {
      bool any = false;
      for (const auto& x : a[0].elems) any = any || B(x, e);
      return any == B(s(1), e);
    }
    case Builtin::ArrayBoolXor: {
      bool parity = false;
      for (const auto& x : a[0].elems) parity ^= B(x, e);
      return parity;
    }
    case Builtin::ArrayBoolElement:
    case Builtin::ArrayVarBoolElement:
    case Builtin::ArrayIntElement:
    case Builtin::ArrayVarIntElement:
    case Builtin::ArrayFloatElement:
    case Builtin::ArrayVarFloatElement: {
      const std::int64_t i = I(s(0), e);
      if (i < 1 || i > static_cast<std::int64_t>(a[1].elems.size())) return false;
      const Scalar& pick = a[1].elems[static_cast<std::size_t>(i - 1)];
      if (b == Builtin::ArrayBoolElement || b == Builtin::ArrayVarBoolElement) return B(pick, e) == B(s(2), e);
      if (b == Builtin::ArrayIntElement || b == Builtin::ArrayVarIntElement) return I(pick, e) == I(s(2), e);
      return F(pick, e) == F(s(2), e);
    }
    case Builtin::Bool2Int: return (B(s(0), e) ? 1 : 0) == I(s(1), e);
    case Builtin::BoolAnd: return (B(s(0), e) && B(s(1), e)) == B(s(2), e);
    case Builtin::BoolOr: return (B(s(0), e) || B(s(1), e)) == B(s(2), e);
    case Builtin::BoolXor: return (B(s(0), e) != B(s(1), e)) == B(s(2), e);
    case Builtin::BoolNot: return B(s(0), e) != B(s(1), e);
    case Builtin::BoolEq: case Builtin::BoolLe: case Builtin::BoolLt:
      return cmp_rel(B(s(0), e), B(s(1), e), rel_of(b));
    case Builtin::BoolEqReif: case Builtin::BoolLeReif: case Builtin::BoolLtReif:
      return cmp_rel(B(s(0), e), B(s(1), e), rel_of(b)) == B(s(2), e);
    case Builtin::BoolClause: {
      for (const auto& x : a[0].elems)
        if (B(x, e)) return true;
      for (const auto& x : a[1].elems)
        if (!B(x, e)) return true;
      return false;
    }
    case Builtin::BoolLinEq: return lin_int(a[0], a[1], e) == I(s(2), e);
    case Builtin::BoolLinLe: return lin_int(a[0], a[1], e) <= I(s(2), e);
    case Builtin::IntAbs: {
      const std::int64_t x = I(s(0), e);
      if (x == INT64_MIN) throw Overflow();
      return (x < 0 ? -x : x) == I(s(1), e);
    }
    case Builtin::IntDiv: {
      auto q = trunc_div(I(s(0), e), I(s(1), e));
      return q && *q == I(s(2), e);
    }
    case Builtin::IntMod: {
      auto r = trunc_mod(I(s(0), e), I(s(1), e));
      return r && *r == I(s(2), e);
    }
    case Builtin::IntTimes: return mul64(I(s(0), e), I(s(1), e)) == I(s(2), e);
    case Builtin::IntPlus: return add64(I(s(0), e), I(s(1), e)) == I(s(2), e);
    case Builtin::IntMin: return std::min(I(s(0), e), I(s(1), e)) == I(s(2), e);
    case Builtin::IntMax: return std::max(I(s(0), e), I(s(1), e)) == I(s(2), e);
    case Builtin::IntEq: case Builtin::IntNe: case Builtin::IntLe: case Builtin::IntLt:
      return cmp_rel(I(s(0), e), I(s(1), e), rel_of(b));
    case Builtin::IntEqReif: case Builtin::IntNeReif: case Builtin::IntLeReif: case Builtin::IntLtReif:
      return cmp_rel(I(s(0), e), I(s(1), e), rel_of(b)) == B(s(2), e);
    case Builtin::IntLinEq: case Builtin::IntLinLe: case Builtin::IntLinNe:
      return cmp_rel(lin_int(a[0], a[1], e), I(s(2), e), rel_of(b));
    case Builtin::IntLinEqReif: case Builtin::IntLinLeReif: case Builtin::IntLinNeReif:
      return cmp_rel(lin_int(a[0], a[1], e), I(s(2), e), rel_of(b)) == B(s(3), e);
    case Builtin::ArrayIntMaximum: case Builtin::ArrayIntMinimum: {
      if (a[1].elems.empty()) return false;
      std::int64_t m = I(a[1].elems[0], e);
      for (const auto& x : a[1].elems)
        m = b == Builtin::ArrayIntMaximum ? std::max(m, I(x, e)) : std::min(m, I(x, e));
      return m == I(s(0), e);
    }
    case Builtin::FloatAbs: return F(s(0), e).abs() == F(s(1), e);
    case Builtin::FloatDiv: {
      const Rational d = F(s(1), e);
      return !d.is_zero() && F(s(0), e) / d == F(s(2), e);
    }
    case Builtin::FloatTimes: return F(s(0), e) * F(s(1), e) == F(s(2), e);
    case Builtin::FloatPlus: return F(s(0), e) + F(s(1), e) == F(s(2), e);
    case Builtin::FloatMin: return std::min(F(s(0), e), F(s(1), e)) == F(s(2), e);
    case Builtin::FloatMax: return std::max(F(s(0), e), F(s(1), e)) == F(s(2), e);
    case Builtin::FloatEq: case Builtin::FloatNe: case Builtin::FloatLe: case Builtin::FloatLt:
      return cmp_rel(F(s(0), e), F(s(1), e), rel_of(b));
    case Builtin::FloatEqReif: case Builtin::FloatNeReif: case Builtin::FloatLeReif: case Builtin::FloatLtReif:
      return cmp_rel(F(s(0), e), F(s(1), e), rel_of(b)) == B(s(2), e);
    case Builtin::FloatLinEq: case Builtin::FloatLinLe: case Builtin::FloatLinLt: case Builtin::FloatLinNe:
      return cmp_rel(lin_float(a[0], a[1], e), F(s(2), e), rel_of(b));
    case Builtin::FloatLinEqReif: case Builtin::FloatLinLeReif: case Builtin::FloatLinLtReif:
    case Builtin::FloatLinNeReif:
      return cmp_rel(lin_float(a[0], a[1], e), F(s(2), e), rel_of(b)) == B(s(3), e);
    case Builtin::Int2Float: return Rational(I(s(0), e)) == F(s(1), e);
    case Builtin::ArrayFloatMaximum: case Builtin::ArrayFloatMinimum: {
      if (a[1].elems.empty()) return false;
      Rational m = F(a[1].elems[0], e);
      for (const auto& x : a[1].elems)
        m = b == Builtin::ArrayFloatMaximum ? std::max(m, F(x, e)) : std::min(m, F(x, e));
      return m == F(s(0), e);
    }
    case Builtin::SetIn: {
      const IntSet& set = S(s(1), e);
      return std::binary_search(set.begin(), set.end(), I(s(0), e));
    }
    case Builtin::SetInReif: {
      const IntSet& set = S(s(1), e);
      return std::binary_search(set.begin(), set.end(), I(s(0), e)) == B(s(2), e);
    }
    case Builtin::SetCard: return static_cast<std::int64_t>(S(s(0), e).size()) == I(s(1), e);
    case Builtin::SetSubset: return subset(S(s(0), e), S(s(1), e));
    case Builtin::SetSuperset: return subset(S(s(1), e), S(s(0), e));
    case Builtin::SetEq: return S(s(0), e) == S(s(1), e);
    case Builtin::SetNe: return S(s(0), e) != S(s(1), e);
    case Builtin::SetUnion: case Builtin::SetIntersect: case Builtin::SetDiff: case Builtin::SetSymDiff:
      return set_op(S(s(0), e), S(s(1), e), b) == S(s(2), e);
    case Builtin::AllDifferentInt: {
      std::vector<std::int64_t> xs;
      for (const auto& x : a[0].elems) xs.push_back(I(x, e));
      std::sort(xs.begin(), xs.end());
      return std::adjacent_find(xs.begin(), xs.end()) == xs.end();
    }
    case Builtin::CountEq: {
      const std::int64_t v = I(s(1), e);
      std::int64_t c = 0;
      for (const auto& x : a[0].elems) c += I(x, e) == v;
      return c == I(s(2), e);
    }
    case Builtin::TableInt: case Builtin::TableBool: {
      const std::size_t w = a[0].elems.size();
      if (w == 0) return !a[1].elems.empty();
      for (std::size_t row = 0; row + w <= a[1].elems.size(); row += w) {
        bool match = true;
        for (std::size_t j = 0; j < w && match; ++j) match = I(a[0].elems[j], e) == I(a[1].elems[row + j], e);
        if (match) return true;
      }
      return false;
    }
  }
  return false;
}

// Position of a functionally determined argument. `slot` indexes the
// argument, `elem` the array element (or -1 for a scalar argument).
struct Position {
  std::size_t slot;
  int elem = -1;
};

/// Positions that a constraint determines from its other arguments. The
/// first entry is the natural output; the rest are only used for variables
/// that cannot be enumerated.
std::vector<Position> functional_positions(Builtin b, const std::vector<Arg>& a) {
  switch (b) {
    case Builtin::ArrayBoolAnd: case Builtin::ArrayBoolOr: return {{1}};
    case Builtin::ArrayBoolElement: case Builtin::ArrayVarBoolElement: case Builtin::ArrayIntElement:
    case Builtin::ArrayVarIntElement: case Builtin::ArrayFloatElement: case Builtin::ArrayVarFloatElement:
      return {{2}};
    case Builtin::Bool2Int: case Builtin::Int2Float: return {{1}};
    case Builtin::BoolNot: case Builtin::BoolEq: case Builtin::IntEq: case Builtin::FloatEq: case Builtin::SetEq:
      return {{1}, {0}};
    case Builtin::BoolAnd: case Builtin::BoolOr: case Builtin::BoolXor: case Builtin::IntTimes:
    case Builtin::IntDiv: case Builtin::IntMod: case Builtin::IntMin: case Builtin::IntMax:
    case Builtin::FloatTimes: case Builtin::FloatDiv: case Builtin::FloatMin: case Builtin::FloatMax:
    case Builtin::SetUnion: case Builtin::SetIntersect: case Builtin::SetDiff: case Builtin::SetSymDiff:
    case Builtin::BoolEqReif: case Builtin::BoolLeReif: case Builtin::BoolLtReif: case Builtin::IntEqReif:
    case Builtin::IntNeReif: case Builtin::IntLeReif: case Builtin::IntLtReif: case Builtin::FloatEqReif:
    case Builtin::FloatNeReif: case Builtin::FloatLeReif: case Builtin::FloatLtReif: case Builtin::SetInReif:
    case Builtin::CountEq:
      return {{2}};
    case Builtin::IntPlus: case Builtin::FloatPlus: return {{2}, {0}, {1}};
    case Builtin::IntAbs: case Builtin::FloatAbs: case Builtin::SetCard: return {{1}};
    case Builtin::BoolLinEq: return {{2}};
    case Builtin::IntLinEqReif: case Builtin::IntLinLeReif: case Builtin::IntLinNeReif:
    case Builtin::FloatLinEqReif: case Builtin::FloatLinLeReif: case Builtin::FloatLinLtReif:
    case Builtin::FloatLinNeReif:
      return {{3}};
    case Builtin::ArrayIntMaximum: case Builtin::ArrayIntMinimum: case Builtin::ArrayFloatMaximum:
    case Builtin::ArrayFloatMinimum:
      return {{0}};
    case Builtin::IntLinEq: case Builtin::FloatLinEq: {
      std::vector<Position> ps;
      for (std::size_t i = 0; i < a[1].elems.size(); ++i) ps.push_back({1, static_cast<int>(i)});
      return ps;
    }
    default: return {};
  }
}

/// Computes the value at `pos` from the other arguments, or nullopt when no
/// value satisfies the constraint.
std::optional<Value> compute_at(Builtin b, const std::vector<Arg>& a, Position pos, const Env& e) {
  auto s = [&](std::size_t i) -> const Scalar& { return a[i].s; };
  switch (b) {
    case Builtin::ArrayBoolAnd: {
      bool all = true;
      for (const auto& x : a[0].elems) all = all && B(x, e);
      return Value{all};
    }
    case Builtin::ArrayBoolOr: {
      bool any = false;
      for (const auto& x : a[0].elems) any = any || B(x, e);
      return Value{any};
    }
    case Builtin::ArrayBoolElement: case Builtin::ArrayVarBoolElement: case Builtin::ArrayIntElement:
    case Builtin::ArrayVarIntElement: case Builtin::ArrayFloatElement: case Builtin::ArrayVarFloatElement: {
      const std::int64_t i = I(s(0), e);
      if (i < 1 || i > static_cast<std::int64_t>(a[1].elems.size())) return std::nullopt;
      return val(a[1].elems[static_cast<std::size_t>(i - 1)], e);
    }
    case Builtin::Bool2Int: return Value{std::int64_t{B(s(0), e) ? 1 : 0}};
    case Builtin::Int2Float: return Value{Rational(I(s(0), e))};
    case Builtin::BoolNot: return Value{!B(s(1 - pos.slot), e)};
    case Builtin::BoolEq: case Builtin::IntEq: case Builtin::FloatEq: case Builtin::SetEq:
      return val(s(1 - pos.slot), e);
    case Builtin::BoolAnd: return Value{B(s(0), e) && B(s(1), e)};
    case Builtin::BoolOr: return Value{B(s(0), e) || B(s(1), e)};
    case Builtin::BoolXor: return Value{B(s(0), e) != B(s(1), e)};
    case Builtin::IntTimes: return Value{mul64(I(s(0), e), I(s(1), e))};
    case Builtin::IntDiv: {
      auto q = trunc_div(I(s(0), e), I(s(1), e));
      if (!q) return std::nullopt;
      return Value{*q};
    }
    case Builtin::IntMod: {
      auto r = trunc_mod(I(s(0), e), I(s(1), e));
      if (!r) return std::nullopt;
      return Value{*r};
    }
    case Builtin::IntMin: return Value{std::min(I(s(0), e), I(s(1), e))};
    case Builtin::IntMax: return Value{std::max(I(s(0), e), I(s(1), e))};
    case Builtin::FloatTimes: return Value{F(s(0), e) * F(s(1), e)};
    case Builtin::FloatDiv: {
      const Rational d = F(s(1), e);
      if (d.is_zero()) return std::nullopt;
      return Value{F(s(0), e) / d};
    }
    case Builtin::FloatMin: return Value{std::min(F(s(0), e), F(s(1), e))};
    case Builtin::FloatMax: return Value{std::max(F(s(0), e), F(s(1), e))};
    case Builtin::SetUnion: case Builtin::SetIntersect: case Builtin::SetDiff: case Builtin::SetSymDiff:
      return Value{set_op(S(s(0), e), S(s(1), e), b)};
    case Builtin::BoolEqReif: case Builtin::BoolLeReif: case Builtin::BoolLtReif:
      return Value{cmp_rel(B(s(0), e), B(s(1), e), rel_of(b))};
    case Builtin::IntEqReif: case Builtin::IntNeReif: case Builtin::IntLeReif: case Builtin::IntLtReif:
      return Value{cmp_rel(I(s(0), e), I(s(1), e), rel_of(b))};
    case Builtin::FloatEqReif: case Builtin::FloatNeReif: case Builtin::FloatLeReif: case Builtin::FloatLtReif:
      return Value{cmp_rel(F(s(0), e), F(s(1), e), rel_of(b))};
    case Builtin::SetInReif: {
      const IntSet& set = S(s(1), e);
      return Value{std::binary_search(set.begin(), set.end(), I(s(0), e))};
    }
    case Builtin::CountEq: {
      const std::int64_t v = I(s(1), e);
      std::int64_t c = 0;
      for (const auto& x : a[0].elems) c += I(x, e) == v;
      return Value{c};
    }
    case Builtin::IntPlus: {
      if (pos.slot == 2) return Value{add64(I(s(0), e), I(s(1), e))};
      return Value{sub64(I(s(2), e), I(s(1 - pos.slot), e))};
    }
    case Builtin::FloatPlus: {
      if (pos.slot == 2) return Value{F(s(0), e) + F(s(1), e)};
      return Value{F(s(2), e) - F(s(1 - pos.slot), e)};
    }
    case Builtin::IntAbs: {
      const std::int64_t x = I(s(0), e);
      if (x == INT64_MIN) throw Overflow();
      return Value{x < 0 ? -x : x};
    }
    case Builtin::FloatAbs: return Value{F(s(0), e).abs()};
    case Builtin::SetCard: return Value{static_cast<std::int64_t>(S(s(0), e).size())};
    case Builtin::BoolLinEq: return Value{lin_int(a[0], a[1], e)};
    case Builtin::IntLinEqReif: case Builtin::IntLinLeReif: case Builtin::IntLinNeReif:
      return Value{cmp_rel(lin_int(a[0], a[1], e), I(s(2), e), rel_of(b))};
    case Builtin::FloatLinEqReif: case Builtin::FloatLinLeReif: case Builtin::FloatLinLtReif:
    case Builtin::FloatLinNeReif:
      return Value{cmp_rel(lin_float(a[0], a[1], e), F(s(2), e), rel_of(b))};
    case Builtin::ArrayIntMaximum: case Builtin::ArrayIntMinimum: {
      if (a[1].elems.empty()) return std::nullopt;
      std::int64_t m = I(a[1].elems[0], e);
      for (const auto& x : a[1].elems)
        m = b == Builtin::ArrayIntMaximum ? std::max(m, I(x, e)) : std::min(m, I(x, e));
      return Value{m};
    }
    case Builtin::ArrayFloatMaximum: case Builtin::ArrayFloatMinimum: {
      if (a[1].elems.empty()) return std::nullopt;
      Rational m = F(a[1].elems[0], e);
      for (const auto& x : a[1].elems)
        m = b == Builtin::ArrayFloatMaximum ? std::max(m, F(x, e)) : std::min(m, F(x, e));
      return Value{m};
    }
    case Builtin::IntLinEq: {
      const auto j = static_cast<std::size_t>(pos.elem);
      std::int64_t rest = I(s(2), e);
      for (std::size_t i = 0; i < a[1].elems.size(); ++i)
        if (i != j) rest = sub64(rest, mul64(I(a[0].elems[i], e), I(a[1].elems[i], e)));
      const std::int64_t c = I(a[0].elems[j], e);
      if (c == 0 || rest % c != 0) return std::nullopt;
      return Value{rest / c};
    }
    case Builtin::FloatLinEq: {
      const auto j = static_cast<std::size_t>(pos.elem);
      Rational rest = F(s(2), e);
      for (std::size_t i = 0; i < a[1].elems.size(); ++i)
        if (i != j) rest -= F(a[0].elems[i], e) * F(a[1].elems[i], e);
      const Rational c = F(a[0].elems[j], e);
      if (c.is_zero()) return std::nullopt;
      return Value{rest / c};
    }
    default: return std::nullopt;
  }
}

class FznBuilder {
 public:
  FznBuilder(const fzn::FznModel& m, const OracleOptions& o) : m_(m), opts_(o) {}

  OracleResult build_and_run() {
    for (const auto& v : m_.vars) {
      if (v.type.is_array()) continue;
      if (auto why = declare(v)) return OracleResult::inapplicable(*why);
    }
    for (const auto& c : m_.constraints) {
      Item it;
      it.builtin = *fzn::lookup_builtin(c.name);
      for (const auto& e : c.args) it.args.push_back(resolve(e));
      it.defines = c.defined_var();
      items_.push_back(std::move(it));
    }
    add_definitions();
    for (std::size_t v = 0; v < p_.vars.size(); ++v) {
      if (has_def_[v] || !p_.vars[v].defined) continue;
      return OracleResult::inapplicable("variable '" + p_.vars[v].name + "' has an infinite or unbounded domain");
    }
    for (auto& it : items_) {
      Problem::Check c;
      c.inputs = inputs_of(it.args);
      c.holds = [b = it.builtin, args = it.args](const Env& e) { return holds(b, args, e); };
      p_.checks.push_back(std::move(c));
    }
    for (const auto& g : m_.solve_items) {
      if (g.kind == fzn::SolveKind::Satisfy) continue;
      Problem::Goal goal;
      goal.maximize = g.kind == fzn::SolveKind::Maximize;
      Scalar s = resolve(*g.objective).s;
      if (s.var >= 0) goal.inputs.push_back(s.var);
      goal.value = [s](const Env& e) { return to_rational(val(s, e)); };
      p_.goals.push_back(std::move(goal));
    }
    p_.combination = opts_.fzn_multi;
    for (const auto& name : opts_.projection) {
      auto it = index_.find(name);
      if (it == index_.end()) throw ValidationError("projection variable '" + name + "' is not a scalar variable");
      p_.projection.emplace_back(it->second, false);
    }
    for (const auto& v : m_.vars) {
      if (!v.is_output()) continue;
      if (auto it = index_.find(v.name); it != index_.end()) p_.witness_vars.push_back(it->second);
    }
    return run(p_, opts_);
  }

 private:
  struct Item {
    Builtin builtin;
    std::vector<Arg> args;
    std::optional<std::string> defines;
  };

  std::optional<std::string> declare(const fzn::FznVarDecl& v) {
    std::vector<Value> dom;
    bool enumerable = true;
    const auto& t = v.type;
    switch (t.base) {
      case fzn::BaseType::Bool: dom = {Value{false}, Value{true}}; break;
      case fzn::BaseType::Int:
        if (const auto* r = std::get_if<fzn::IntInterval>(&t.domain)) {
          if (static_cast<long double>(r->hi) - static_cast<long double>(r->lo) >= static_cast<long double>(opts_.budget)) {
            enumerable = false;
          } else {
            for (std::int64_t x = r->lo; x <= r->hi; ++x) dom.emplace_back(x);
          }
        } else if (const auto* s = std::get_if<fzn::IntSetValue>(&t.domain)) {
          for (auto x : s->elems) dom.emplace_back(x);
        } else {
          enumerable = false;
        }
        break;
      case fzn::BaseType::Float:
        if (const auto* r = std::get_if<fzn::FloatInterval>(&t.domain); r && r->lo == r->hi) dom.emplace_back(r->lo);
        else enumerable = false;
        break;
      case fzn::BaseType::SetOfInt: {
        std::vector<std::int64_t> universe;
        if (const auto* r = std::get_if<fzn::IntInterval>(&t.domain)) {
          if (r->hi - r->lo + 1 > static_cast<std::int64_t>(kMaxSetUniverse)) {
            enumerable = false;
            break;
          }
          for (std::int64_t x = r->lo; x <= r->hi; ++x) universe.push_back(x);
        } else if (const auto* s = std::get_if<fzn::IntSetValue>(&t.domain)) {
          universe = s->elems;
        }
        if (!enumerable) break;
        if (universe.empty() && std::holds_alternative<std::monostate>(t.domain)) {
          enumerable = false;
          break;
        }
        if (universe.size() > kMaxSetUniverse) {
          enumerable = false;
          break;
        }
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe.size()); ++mask) {
          IntSet s;
          for (std::size_t i = 0; i < universe.size(); ++i)
            if ((mask >> i) & 1) s.push_back(universe[i]);
          dom.emplace_back(std::move(s));
        }
        break;
      }
    }
    const int id = p_.add_var(v.name, std::move(dom), !enumerable);
    index_.emplace(v.name, id);
    decls_.push_back(&v);
    has_def_.push_back(false);
    return std::nullopt;
  }

  Scalar constant_of(const fzn::Expr& e) {
    Scalar s;
    if (e.is_bool()) s.constant = e.as_bool();
    else if (e.is_int()) s.constant = e.as_int();
    else if (e.is_float()) s.constant = e.as_float();
    else if (e.is_set()) s.constant = e.as_set().elems;
    return s;
  }

  Scalar scalar(const fzn::Expr& e) {
    if (e.is_ident()) {
      if (auto it = index_.find(e.as_ident()); it != index_.end()) return Scalar{it->second, Value{false}};
      if (const auto* p = m_.find_param(e.as_ident())) return scalar(p->value);
      throw ValidationError("undeclared identifier '" + e.as_ident() + "'");
    }
    if (e.is_access()) {
      const Arg arr = resolve(fzn::Expr::ident(e.as_access().name));
      const auto i = e.as_access().index;
      if (i < 1 || i > static_cast<std::int64_t>(arr.elems.size()))
        throw ValidationError("index out of range in access to '" + e.as_access().name + "'");
      return arr.elems[static_cast<std::size_t>(i - 1)];
    }
    return constant_of(e);
  }

  Arg resolve(const fzn::Expr& e) {
    Arg a;
    if (e.is_array()) {
      a.is_array = true;
      for (const auto& x : e.as_array()) a.elems.push_back(scalar(x));
      return a;
    }
    if (e.is_ident()) {
      const std::string& name = e.as_ident();
      if (const auto* p = m_.find_param(name); p && p->type.is_array()) return resolve(p->value);
      if (const auto* v = m_.find_var(name); v && v->type.is_array()) return resolve(*v->assignment);
    }
    a.s = scalar(e);
    return a;
  }

  static void collect(const Arg& a, std::vector<int>& out) {
    if (a.is_array) {
      for (const auto& s : a.elems)
        if (s.var >= 0) out.push_back(s.var);
    } else if (a.s.var >= 0) {
      out.push_back(a.s.var);
    }
  }

  static std::vector<int> inputs_of(const std::vector<Arg>& args) {
    std::vector<int> v;
    for (const auto& a : args) collect(a, v);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  static int var_at(const std::vector<Arg>& args, Position p) {
    const Arg& a = args[p.slot];
    if (p.elem < 0) return a.is_array ? -1 : a.s.var;
    if (!a.is_array || static_cast<std::size_t>(p.elem) >= a.elems.size()) return -1;
    return a.elems[static_cast<std::size_t>(p.elem)].var;
  }

  // Adds target := f(others) if the target occurs once and the result stays acyclic.
  bool try_define(const Item& it, Position pos) {
    const int target = var_at(it.args, pos);
    if (target < 0 || has_def_[static_cast<std::size_t>(target)]) return false;
    std::vector<int> all;
    for (const auto& a : it.args) collect(a, all);
    if (std::count(all.begin(), all.end(), target) != 1) return false;
    if (it.builtin == Builtin::IntLinEq || it.builtin == Builtin::FloatLinEq) {
      // Coefficient must be usable as a divisor.
      const Scalar& c = it.args[0].elems[static_cast<std::size_t>(pos.elem)];
      if (c.var >= 0 || to_rational(c.constant).is_zero()) return false;
      if (it.builtin == Builtin::IntLinEq && !p_.vars[static_cast<std::size_t>(target)].defined) {
        const auto k = std::get<std::int64_t>(c.constant);
        if (k != 1 && k != -1) return false;
      }
    }
    std::vector<int> inputs;
    for (int v : inputs_of(it.args))
      if (v != target) inputs.push_back(v);
    if (!acyclic_with(p_.defs, p_.vars.size(), target, inputs)) return false;
    Problem::Def d;
    d.target = target;
    d.inputs = inputs;
    const bool to_float = decls_[static_cast<std::size_t>(target)]->type.base == fzn::BaseType::Float;
    d.compute = [b = it.builtin, args = it.args, pos, to_float](const Env& e) -> std::optional<Value> {
      auto v = compute_at(b, args, pos, e);
      if (v && to_float)
        if (const auto* i = std::get_if<std::int64_t>(&*v)) return Value{Rational(*i)};
      return v;
    };
    p_.defs.push_back(std::move(d));
    has_def_[static_cast<std::size_t>(target)] = true;
    add_domain_check(target);
    return true;
  }

  void define_by_assignment(const fzn::FznVarDecl& v) {
    const int target = index_.at(v.name);
    const Scalar src = scalar(*v.assignment);
    std::vector<int> inputs;
    if (src.var >= 0) inputs.push_back(src.var);
    if (src.var == target || !acyclic_with(p_.defs, p_.vars.size(), target, inputs)) {
      Problem::Check c;
      c.inputs = {target};
      if (src.var >= 0) c.inputs.push_back(src.var);
      c.holds = [target, src](const Env& e) { return e[static_cast<std::size_t>(target)] == val(src, e); };
      p_.checks.push_back(std::move(c));
      return;
    }
    Problem::Def d;
    d.target = target;
    d.inputs = inputs;
    const bool to_float = v.type.base == fzn::BaseType::Float;
    d.compute = [src, to_float](const Env& e) -> std::optional<Value> {
      if (to_float) return Value{F(src, e)};
      return val(src, e);
    };
    p_.defs.push_back(std::move(d));
    has_def_[static_cast<std::size_t>(target)] = true;
    add_domain_check(target);
  }

  void add_domain_check(int target) {
    const auto& t = decls_[static_cast<std::size_t>(target)]->type;
    Problem::Check c;
    c.inputs = {target};
    const auto idx = static_cast<std::size_t>(target);
    if (t.base == fzn::BaseType::Int) {
      if (const auto* r = std::get_if<fzn::IntInterval>(&t.domain)) {
        c.holds = [idx, lo = r->lo, hi = r->hi](const Env& e) {
          const auto x = std::get<std::int64_t>(e[idx]);
          return lo <= x && x <= hi;
        };
      } else if (const auto* s = std::get_if<fzn::IntSetValue>(&t.domain)) {
        c.holds = [idx, set = *s](const Env& e) { return set.contains(std::get<std::int64_t>(e[idx])); };
      }
    } else if (t.base == fzn::BaseType::Float) {
      if (const auto* r = std::get_if<fzn::FloatInterval>(&t.domain)) {
        c.holds = [idx, lo = r->lo, hi = r->hi](const Env& e) {
          const Rational& x = std::get<Rational>(e[idx]);
          return lo <= x && x <= hi;
        };
      }
    } else if (t.base == fzn::BaseType::SetOfInt) {
      if (const auto* r = std::get_if<fzn::IntInterval>(&t.domain)) {
        c.holds = [idx, lo = r->lo, hi = r->hi](const Env& e) {
          const IntSet& s = std::get<IntSet>(e[idx]);
          return s.empty() || (s.front() >= lo && s.back() <= hi);
        };
      } else if (const auto* s = std::get_if<fzn::IntSetValue>(&t.domain)) {
        c.holds = [idx, u = s->elems](const Env& e) { return subset(std::get<IntSet>(e[idx]), u); };
      }
    }
    if (c.holds) p_.checks.push_back(std::move(c));
  }

  void add_definitions() {
    for (const auto* v : decls_)
      if (v->assignment) define_by_assignment(*v);
    // Annotated definitions, at any functional position.
    for (const auto& it : items_) {
      if (!it.defines) continue;
      auto target = index_.find(*it.defines);
      if (target == index_.end()) continue;
      for (Position pos : functional_positions(it.builtin, it.args))
        if (var_at(it.args, pos) == target->second && try_define(it, pos)) break;
    }
    // Variables without a finite domain, until nothing changes.
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& it : items_) {
        for (Position pos : functional_positions(it.builtin, it.args)) {
          const int t = var_at(it.args, pos);
          if (t >= 0 && p_.vars[static_cast<std::size_t>(t)].defined && try_define(it, pos)) changed = true;
        }
      }
    }
    // Natural outputs of the remaining constraints.
    for (const auto& it : items_) {
      auto ps = functional_positions(it.builtin, it.args);
      if (ps.empty()) continue;
      if (it.builtin == Builtin::IntLinEq || it.builtin == Builtin::FloatLinEq) {
        for (Position pos : ps)
          if (try_define(it, pos)) break;
      } else {
        try_define(it, ps.front());
      }
    }
  }

  const fzn::FznModel& m_;
  const OracleOptions& opts_;
  Problem p_;
  std::unordered_map<std::string, int> index_;
  std::vector<const fzn::FznVarDecl*> decls_;
  std::vector<bool> has_def_;
  std::vector<Item> items_;
};

}  // namespace

OracleResult solve_fzn(const fzn::FznModel& model, const OracleOptions& options) {
  return FznBuilder(model, options).build_and_run();
}

}  // namespace zb::oracle
