#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zinc_bridge/errors.hpp"
#include "zinc_bridge/rational.hpp"

namespace zb::fzn {

/// Finite set of integers, kept sorted and duplicate-free.
struct IntSetValue {
  std::vector<std::int64_t> elems;

  static IntSetValue range(std::int64_t lo, std::int64_t hi);
  static IntSetValue of(std::vector<std::int64_t> values);
  bool contains(std::int64_t v) const;
  friend bool operator==(const IntSetValue&, const IntSetValue&) = default;
};

struct Ident {
  std::string name;
  friend bool operator==(const Ident&, const Ident&) = default;
};

/// `name[index]`, index 1-based as in FlatZinc.
struct ArrayAccess {
  std::string name;
  std::int64_t index = 1;
  friend bool operator==(const ArrayAccess&, const ArrayAccess&) = default;
};

struct Expr;
using ArrayLit = std::vector<Expr>;

/// Constraint argument / initialiser expression.
struct Expr {
  std::variant<bool, std::int64_t, Rational, IntSetValue, Ident, ArrayAccess, ArrayLit> node;

  Expr() : node(false) {}
  Expr(bool b) : node(b) {}                   // NOLINT
  Expr(std::int64_t i) : node(i) {}           // NOLINT
  Expr(int i) : node(std::int64_t{i}) {}      // NOLINT
  Expr(Rational r) : node(std::move(r)) {}    // NOLINT
  Expr(IntSetValue s) : node(std::move(s)) {} // NOLINT
  Expr(Ident i) : node(std::move(i)) {}       // NOLINT
  Expr(ArrayAccess a) : node(std::move(a)) {} // NOLINT
  Expr(ArrayLit a) : node(std::move(a)) {}    // NOLINT

  static Expr ident(std::string name) { return Expr(Ident{std::move(name)}); }

  bool is_bool() const { return std::holds_alternative<bool>(node); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(node); }
  bool is_float() const { return std::holds_alternative<Rational>(node); }
  bool is_set() const { return std::holds_alternative<IntSetValue>(node); }
  bool is_ident() const { return std::holds_alternative<Ident>(node); }
  bool is_access() const { return std::holds_alternative<ArrayAccess>(node); }
  bool is_array() const { return std::holds_alternative<ArrayLit>(node); }

  bool as_bool() const { return std::get<bool>(node); }
  std::int64_t as_int() const { return std::get<std::int64_t>(node); }
  const Rational& as_float() const { return std::get<Rational>(node); }
  const IntSetValue& as_set() const { return std::get<IntSetValue>(node); }
  const std::string& as_ident() const { return std::get<Ident>(node).name; }
  const ArrayAccess& as_access() const { return std::get<ArrayAccess>(node); }
  const ArrayLit& as_array() const { return std::get<ArrayLit>(node); }

  friend bool operator==(const Expr&, const Expr&) = default;
};

enum class BaseType { Bool, Int, Float, SetOfInt };

struct IntInterval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  friend bool operator==(const IntInterval&, const IntInterval&) = default;
};

struct FloatInterval {
  Rational lo;
  Rational hi;
  friend bool operator==(const FloatInterval&, const FloatInterval&) = default;
};

/// Declared domain. For set-of-int variables the domain is the universe of
/// possible elements (an interval or explicit set).
using Domain = std::variant<std::monostate, IntInterval, IntSetValue, FloatInterval>;

struct FznType {
  BaseType base = BaseType::Int;
  bool is_var = false;
  /// Arrays are always indexed 1..array_size.
  std::optional<std::int64_t> array_size;
  Domain domain;

  bool is_array() const { return array_size.has_value(); }
  friend bool operator==(const FznType&, const FznType&) = default;
};

/// Annotation kept verbatim; only the name and, for defines_var, the target
/// identifier are interpreted.
struct Annotation {
  std::string name;
  std::string text;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct ParamDecl {
  std::string name;
  FznType type;
  Expr value;
  friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};

struct FznVarDecl {
  std::string name;
  FznType type;
  std::optional<Expr> assignment;
  std::vector<Annotation> annotations;

  bool is_output() const;
  friend bool operator==(const FznVarDecl&, const FznVarDecl&) = default;
};

struct FznConstraint {
  std::string name;
  std::vector<Expr> args;
  std::vector<Annotation> annotations;

  /// Target of a `defines_var(x)` annotation, if any.
  std::optional<std::string> defined_var() const;
  friend bool operator==(const FznConstraint& a, const FznConstraint& b) {
    return a.name == b.name && a.args == b.args && a.annotations == b.annotations;
  }
};

enum class SolveKind { Satisfy, Minimize, Maximize };

struct FznSolveGoal {
  SolveKind kind = SolveKind::Satisfy;
  std::optional<Expr> objective;
  std::vector<Annotation> annotations;
  friend bool operator==(const FznSolveGoal&, const FznSolveGoal&) = default;
};

struct FznModel {
  /// `predicate ...;` items, verbatim.
  std::vector<std::string> predicates;
  std::vector<ParamDecl> params;
  std::vector<FznVarDecl> vars;
  std::vector<FznConstraint> constraints;
  std::vector<FznSolveGoal> solve_items;
  /// Names carrying output_var / output_array annotations, in declaration order.
  std::vector<std::string> output_annotations;

  const FznVarDecl* find_var(std::string_view name) const;
  const ParamDecl* find_param(std::string_view name) const;
  friend bool operator==(const FznModel&, const FznModel&) = default;
};

struct FznParseOptions {
  bool allow_multi_objective = false;
};

/// Parses and validates a FlatZinc document. Throws ParseError on malformed
/// text and ValidationError on semantic violations.
FznModel parse_fzn(std::string_view text, const FznParseOptions& options = {});

inline FznModel parse_fzn(std::string_view text, bool allow_multi_objective) {
  return parse_fzn(text, FznParseOptions{allow_multi_objective});
}

/// Re-checks every model invariant. Throws ValidationError naming the item.
void validate(const FznModel& model, const FznParseOptions& options = {});

struct FznPrintOptions {
  /// Refuse float values without a terminating decimal expansion.
  bool lossless = false;
  /// Significant digits used for non-terminating values when not lossless.
  int approx_digits = 40;
};

/// Raised by print_fzn in lossless mode.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string print_fzn(const FznModel& model, const FznPrintOptions& options = {});

std::string print_expr(const Expr& e, const FznPrintOptions& options = {});
std::string print_float(const Rational& r, const FznPrintOptions& options = {});

}  // namespace zb::fzn
