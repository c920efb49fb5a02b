#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zinc_bridge/errors.hpp"
#include "zinc_bridge/rational.hpp"

namespace zb::smt {

struct Sort {
  enum class Kind { Bool, Int, Real, BitVec };
  Kind kind = Kind::Bool;
  unsigned width = 0;  // BitVec only

  static Sort boolean() { return {Kind::Bool, 0}; }
  static Sort integer() { return {Kind::Int, 0}; }
  static Sort real() { return {Kind::Real, 0}; }
  static Sort bitvec(unsigned w);

  bool is_bool() const { return kind == Kind::Bool; }
  bool is_int() const { return kind == Kind::Int; }
  bool is_real() const { return kind == Kind::Real; }
  bool is_bv() const { return kind == Kind::BitVec; }
  bool is_arith() const { return is_int() || is_real(); }
  bool is_numeric() const { return is_arith() || is_bv(); }

  std::string to_string() const;
  friend bool operator==(const Sort&, const Sort&) = default;
};

/// Largest bit-vector width representable by the term manager.
inline constexpr unsigned kMaxBvWidth = 64;

struct TermId {
  std::uint32_t v = UINT32_MAX;
  bool valid() const { return v != UINT32_MAX; }
  friend bool operator==(TermId, TermId) = default;
  friend auto operator<=>(TermId, TermId) = default;
};

struct TermIdHash {
  std::size_t operator()(TermId t) const noexcept { return std::hash<std::uint32_t>{}(t.v); }
};

enum class Op {
  Var,
  BoolConst,
  NumConst,  // Int or Real
  BvConst,
  Not,
  And,
  Or,
  Xor,
  Implies,
  Ite,
  Eq,
  Distinct,
  Le,
  Lt,
  Ge,
  Gt,
  Add,
  Sub,
  Neg,
  Mul,
  Div,     // real division
  IntDiv,  // SMT-LIB div (Euclidean)
  Mod,     // SMT-LIB mod (Euclidean)
  Abs,
  ToReal,
  BvNot,
  BvNeg,
  BvAnd,
  BvOr,
  BvXor,
  BvAdd,
  BvSub,
  BvMul,
  BvUdiv,
  BvUrem,
  BvSdiv,
  BvSrem,
  BvSmod,
  BvShl,
  BvLshr,
  BvAshr,
  BvUlt,
  BvUle,
  BvUgt,
  BvUge,
  BvSlt,
  BvSle,
  BvSgt,
  BvSge,
  Concat,
  Extract,     // indices {hi, lo}
  ZeroExtend,  // indices {k}
  SignExtend,  // indices {k}
};

/// SMT-LIB spelling of an operator (Var and constants have none).
std::string_view op_name(Op op);

struct Node {
  Op op = Op::Var;
  Sort sort;
  std::vector<TermId> children;
  std::vector<unsigned> indices;
  std::string name;      // Var
  Rational value;        // NumConst
  std::uint64_t bits{};  // BvConst; BoolConst uses 0/1

  bool is_leaf() const { return children.empty(); }
  bool is_const() const { return op == Op::BoolConst || op == Op::NumConst || op == Op::BvConst; }
};

/// Hash-consing store for terms. Structurally equal terms built through this
/// interface receive the same id. Not thread-safe while building.
class TermManager {
 public:
  TermId mk_var(const std::string& name, Sort sort);
  TermId mk_bool(bool b);
  TermId mk_int(const Rational& v);
  TermId mk_real(const Rational& v);
  TermId mk_bv(std::uint64_t value, unsigned width);
  /// Checks operand sorts and throws ValidationError on mismatch.
  TermId mk(Op op, std::vector<TermId> children, std::vector<unsigned> indices = {});

  // Convenience builders.
  TermId mk_not(TermId a) { return mk(Op::Not, {a}); }
  TermId mk_and(std::vector<TermId> xs);
  TermId mk_or(std::vector<TermId> xs);
  TermId mk_eq(TermId a, TermId b) { return mk(Op::Eq, {a, b}); }
  TermId mk_le(TermId a, TermId b) { return mk(Op::Le, {a, b}); }
  TermId mk_lt(TermId a, TermId b) { return mk(Op::Lt, {a, b}); }
  TermId mk_ite(TermId c, TermId t, TermId e) { return mk(Op::Ite, {c, t, e}); }
  TermId mk_implies(TermId a, TermId b) { return mk(Op::Implies, {a, b}); }
  /// n-ary sum; a single operand is returned as is, no operand yields 0.
  TermId mk_add(std::vector<TermId> xs, Sort sort);
  /// Int to Real coercion; constants are converted directly.
  TermId to_real(TermId t);

  const Node& node(TermId t) const { return nodes_.at(t.v); }
  Sort sort(TermId t) const { return node(t).sort; }
  std::size_t size() const { return nodes_.size(); }

 private:
  TermId intern(Node n);
  static std::size_t hash_node(const Node& n);
  static bool same_node(const Node& a, const Node& b);

  std::vector<Node> nodes_;
  std::unordered_map<std::size_t, std::vector<TermId>> table_;
};

struct SoftAssertion {
  TermId formula;
  Rational weight;
  std::string group;
};

enum class Direction { Minimize, Maximize };

/// A minimize/maximize goal. Either over a numeric term, or over the total
/// violated weight of a soft-assertion group.
struct Objective {
  Direction dir = Direction::Minimize;
  std::optional<TermId> term;
  std::optional<std::string> soft_group;
  bool bv_signed = false;
  std::optional<std::string> id;
};

enum class Combination { Lexicographic, Independent, Pareto };

std::string_view combination_name(Combination c);

/// Ordered SMT-LIB script. Terms live in the shared term manager.
struct SmtScript {
  std::shared_ptr<TermManager> tm = std::make_shared<TermManager>();
  std::vector<std::pair<std::string, Sort>> declarations;
  std::vector<TermId> assertions;
  std::vector<SoftAssertion> soft_assertions;
  std::vector<Objective> objectives;
  std::optional<std::string> logic;
  /// Mode for scripts with several objectives.
  Combination combination = Combination::Lexicographic;
  /// Set when the script selects the mode itself.
  bool combination_explicit = false;
  /// Inert trailing commands (check-sat, get-objectives, ...), in order.
  std::vector<std::string> commands;

  std::optional<Sort> find_decl(std::string_view name) const;
  TermId declare(const std::string& name, Sort sort);
};

/// Parses an SMT-LIB v2 script with the optimization extensions.
/// Throws ParseError, ValidationError (sort errors), UnsupportedError
/// (symbols outside Bool/LIRA/BV).
SmtScript parse_smt2(std::string_view text);

enum class Dialect { Default, Z3, Bclt };

std::optional<Dialect> dialect_from_string(std::string_view s);
std::string_view dialect_name(Dialect d);

std::string print_smt2(const SmtScript& script, Dialect dialect = Dialect::Default);
std::string print_term(const TermManager& tm, TermId t);
std::string print_sort(Sort s);

/// Number of distinct (parent, child slot) edges into each node reachable from
/// the script roots (assertions, soft formulas, objective terms).
std::unordered_map<TermId, std::size_t, TermIdHash> father_counts(const SmtScript& script);

/// Root terms in script order: assertions, soft formulas, objective terms.
std::vector<TermId> script_roots(const SmtScript& script);

/// Structural equality across term managers.
bool structurally_equal(const SmtScript& a, const SmtScript& b);

}  // namespace zb::smt
