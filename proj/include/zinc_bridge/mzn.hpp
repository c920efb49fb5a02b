#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zinc_bridge/errors.hpp"
#include "zinc_bridge/rational.hpp"

namespace zb::mzn {

// ------------------------------------------------------------------ lexing

enum class TokKind { Ident, Int, Float, String, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  /// Byte offset of the first character in the source.
  std::size_t offset = 0;
  SourceLoc loc;
};

/// Splits MiniZinc text into tokens, skipping whitespace and comments.
/// Throws ParseError on unterminated strings or block comments.
std::vector<Token> tokenize(std::string_view text);

// ------------------------------------------------------------- expressions

enum class ExprKind { Bool, Int, Float, Ident, Unary, Binary, Ite, Call, Array };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. `name` holds the identifier, operator or
/// callee; `args` the operands (Ite: condition, then, else).
struct Expr {
  ExprKind kind = ExprKind::Bool;
  bool b = false;
  Integer i;
  Rational f;
  std::string name;
  std::vector<ExprPtr> args;
};

ExprPtr lit(bool b);
ExprPtr lit_int(const Integer& v);
ExprPtr lit_float(const Rational& v);
ExprPtr ident(std::string name);
ExprPtr unary(std::string op, ExprPtr a);
ExprPtr binary(std::string op, ExprPtr a, ExprPtr b);
ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr e);
ExprPtr call(std::string name, std::vector<ExprPtr> args);
ExprPtr array(std::vector<ExprPtr> elems);

/// Number of expression nodes; identifiers and literals count one each.
std::size_t node_count(const ExprPtr& e);

/// Float literal text: plain decimal when exact within 25 significant
/// digits, scientific for large round values, else "(n.0/d.0)".
std::string float_literal(const Rational& v);

std::string print_expr(const ExprPtr& e);

// ------------------------------------------------------------------ models

enum class BaseType { Bool, Int, Float };

struct TypeInst {
  BaseType base = BaseType::Int;
  bool is_var = false;
  std::optional<std::pair<Integer, Integer>> int_range;
  std::optional<std::vector<Integer>> int_set;
  std::optional<std::pair<Rational, Rational>> float_range;
};

struct VarDecl {
  TypeInst type;
  std::string name;
  ExprPtr init;
  /// Declared output variable (taken into the output item).
  bool output = false;
};

struct SolveItem {
  enum class Kind { Satisfy, Minimize, Maximize, LexMinimize };
  Kind kind = Kind::Satisfy;
  ExprPtr objective;
  /// LexMinimize: objectives in priority order, all minimized.
  std::vector<ExprPtr> lex;
};

struct Model {
  std::vector<std::string> comments;
  std::vector<std::string> includes;
  /// Verbatim items (function definitions) emitted after the includes.
  std::vector<std::string> preamble;
  std::vector<VarDecl> decls;
  std::vector<ExprPtr> constraints;
  SolveItem solve;
};

std::string print_model(const Model& m);

/// Expression nodes over constraints, initialisers and the solve item.
std::size_t node_count(const Model& m);

/// Parses the MiniZinc subset produced by omt2mzn and by the emzn2fzn
/// rewriter: declarations, constraints, one solve item (including the
/// lexicographic search combinator), includes; function definitions and
/// output items are skipped.
Model parse_model(std::string_view text);

// -------------------------------------------------------------- evaluation

using Value = std::variant<bool, Integer, Rational>;

/// Raised when an integer intermediate leaves the 64-bit range MiniZinc
/// integers have, or on division by zero.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact evaluation with MiniZinc semantics (div and mod truncate toward
/// zero). `env` resolves identifiers.
Value evaluate(const ExprPtr& e, const std::function<Value(const std::string&)>& env);

/// True when `name` cannot be used as a MiniZinc identifier as is.
bool is_reserved(std::string_view name);

}  // namespace zb::mzn
