#include "zinc_bridge/mzn.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>

namespace zb::mzn {

// ================================================================== lexer

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view p) { return text.substr(i, p.size()) == p; };
  static const char* const multi[] = {"<->", "->", "<-", "\\/", "/\\", "..", "==", "!=", "<=", ">=", "::", "++"};
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (starts("/*")) {
      const SourceLoc at{line, col};
      const auto end = text.find("*/", i + 2);
      if (end == std::string_view::npos) throw ParseError("unterminated block comment", at);
      advance(end + 2 - i);
      continue;
    }
    Token t;
    t.offset = i;
    t.loc = SourceLoc{line, col};
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"') {
        if (text[j] == '\\') ++j;
        if (j < text.size() && text[j] == '\n') throw ParseError("newline in string literal", t.loc);
        ++j;
      }
      if (j >= text.size()) throw ParseError("unterminated string literal", t.loc);
      t.kind = TokKind::String;
      t.text = std::string(text.substr(i, j + 1 - i));
      advance(j + 1 - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      t.kind = TokKind::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      t.kind = TokKind::Int;
      if (starts("0x") || starts("0o")) {
        j += 2;
        while (j < text.size() && std::isxdigit(static_cast<unsigned char>(text[j]))) ++j;
      } else {
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
          t.kind = TokKind::Float;
          ++j;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
        if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
          if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
            t.kind = TokKind::Float;
            j = k;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
          }
        }
      }
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      t.kind = TokKind::Punct;
      std::size_t n = 1;
      for (const char* m : multi)
        if (starts(m)) {
          n = std::string_view(m).size();
          break;
        }
      t.text = std::string(text.substr(i, n));
      advance(n);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokKind::End;
  end.offset = text.size();
  end.loc = SourceLoc{line, col};
  out.push_back(end);
  return out;
}

// ============================================================== builders

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

ExprPtr lit(bool b) {
  Expr e;
  e.kind = ExprKind::Bool;
  e.b = b;
  return make(std::move(e));
}

ExprPtr lit_int(const Integer& v) {
  Expr e;
  e.kind = ExprKind::Int;
  e.i = v;
  return make(std::move(e));
}

ExprPtr lit_float(const Rational& v) {
  Expr e;
  e.kind = ExprKind::Float;
  e.f = v;
  return make(std::move(e));
}

ExprPtr ident(std::string name) {
  Expr e;
  e.kind = ExprKind::Ident;
  e.name = std::move(name);
  return make(std::move(e));
}

ExprPtr unary(std::string op, ExprPtr a) {
  Expr e;
  e.kind = ExprKind::Unary;
  e.name = std::move(op);
  e.args = {std::move(a)};
  return make(std::move(e));
}

ExprPtr binary(std::string op, ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.name = std::move(op);
  e.args = {std::move(a), std::move(b)};
  return make(std::move(e));
}

ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr f) {
  Expr e;
  e.kind = ExprKind::Ite;
  e.args = {std::move(c), std::move(t), std::move(f)};
  return make(std::move(e));
}

ExprPtr call(std::string name, std::vector<ExprPtr> args) {
  Expr e;
  e.kind = ExprKind::Call;
  e.name = std::move(name);
  e.args = std::move(args);
  return make(std::move(e));
}

ExprPtr array(std::vector<ExprPtr> elems) {
  Expr e;
  e.kind = ExprKind::Array;
  e.args = std::move(elems);
  return make(std::move(e));
}

std::size_t node_count(const ExprPtr& e) {
  if (!e) return 0;
  std::size_t n = 1;
  for (const auto& a : e->args) n += node_count(a);
  return n;
}

// ============================================================== printing

std::string float_literal(const Rational& v) {
  if (v.is_integer()) {
    const Integer n = v.numerator();
    std::string s = Integer(abs(n)).get_str();
    const std::string sign = n < 0 ? "-" : "";
    if (s.size() <= 25) return sign + s + ".0";
    std::size_t sig = s.find_last_not_of('0') + 1;
    if (sig <= 25) {
      const std::size_t exp = s.size() - 1;
      std::string mant = s.substr(0, 1) + "." + (sig > 1 ? s.substr(1, sig - 1) : "0");
      return sign + mant + "e+" + std::to_string(exp);
    }
  } else if (auto d = v.to_exact_decimal(25)) {
    return *d;
  }
  const Integer num = v.numerator(), den = v.denominator();
  return "(" + num.get_str() + ".0/" + den.get_str() + ".0)";
}

namespace {

bool needs_parens(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Unary:
    case ExprKind::Binary: return true;
    case ExprKind::Int: return e->i < 0;
    case ExprKind::Float: return e->f.sign() < 0;
    default: return false;
  }
}

void print_to(std::ostringstream& os, const ExprPtr& e);

void print_child(std::ostringstream& os, const ExprPtr& e) {
  if (needs_parens(e)) {
    os << "(";
    print_to(os, e);
    os << ")";
  } else {
    print_to(os, e);
  }
}

void print_to(std::ostringstream& os, const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Bool: os << (e->b ? "true" : "false"); break;
    case ExprKind::Int: os << e->i.get_str(); break;
    case ExprKind::Float: os << float_literal(e->f); break;
    case ExprKind::Ident: os << e->name; break;
    case ExprKind::Unary:
      os << e->name << (e->name == "not" ? " " : "");
      print_child(os, e->args[0]);
      break;
    case ExprKind::Binary:
      print_child(os, e->args[0]);
      os << " " << e->name << " ";
      print_child(os, e->args[1]);
      break;
    case ExprKind::Ite:
      os << "if ";
      print_to(os, e->args[0]);
      os << " then ";
      print_to(os, e->args[1]);
      os << " else ";
      print_to(os, e->args[2]);
      os << " endif";
      break;
    case ExprKind::Call:
    case ExprKind::Array: {
      os << (e->kind == ExprKind::Call ? e->name + "(" : "[");
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (i) os << ", ";
        print_to(os, e->args[i]);
      }
      os << (e->kind == ExprKind::Call ? ")" : "]");
      break;
    }
  }
}

std::string print_type(const TypeInst& t) {
  std::string s = t.is_var ? "var " : "";
  if (t.int_range) return s + t.int_range->first.get_str() + ".." + t.int_range->second.get_str();
  if (t.int_set) {
    s += "{";
    for (std::size_t i = 0; i < t.int_set->size(); ++i) s += (i ? ", " : "") + (*t.int_set)[i].get_str();
    return s + "}";
  }
  if (t.float_range) return s + float_literal(t.float_range->first) + ".." + float_literal(t.float_range->second);
  switch (t.base) {
    case BaseType::Bool: return s + "bool";
    case BaseType::Int: return s + "int";
    case BaseType::Float: return s + "float";
  }
  return s;
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print_to(os, e);
  return os.str();
}

std::string print_model(const Model& m) {
  std::ostringstream os;
  for (const auto& c : m.comments) os << "% " << c << "\n";
  for (const auto& inc : m.includes) os << "include \"" << inc << "\";\n";
  for (const auto& p : m.preamble) os << p << "\n";
  for (const auto& d : m.decls) {
    os << print_type(d.type) << ": " << d.name;
    if (d.init) os << " = " << print_expr(d.init);
    os << ";\n";
  }
  for (const auto& c : m.constraints) os << "constraint " << print_expr(c) << ";\n";
  switch (m.solve.kind) {
    case SolveItem::Kind::Satisfy: os << "solve satisfy;\n"; break;
    case SolveItem::Kind::Minimize: os << "solve minimize " << print_expr(m.solve.objective) << ";\n"; break;
    case SolveItem::Kind::Maximize: os << "solve maximize " << print_expr(m.solve.objective) << ";\n"; break;
    case SolveItem::Kind::LexMinimize:
      os << "solve search zb_lex_minimize(" << print_expr(array(m.solve.lex)) << ");\n";
      break;
  }
  std::vector<std::string> outs;
  for (const auto& d : m.decls)
    if (d.output) outs.push_back(d.name);
  if (!outs.empty()) {
    os << "output [";
    for (std::size_t i = 0; i < outs.size(); ++i)
      os << (i ? ", " : "") << "\"" << outs[i] << " = \", show(" << outs[i] << "), \";\\n\"";
    os << "];\n";
  }
  return os.str();
}

std::size_t node_count(const Model& m) {
  std::size_t n = 0;
  for (const auto& d : m.decls) n += node_count(d.init);
  for (const auto& c : m.constraints) n += node_count(c);
  n += node_count(m.solve.objective);
  for (const auto& o : m.solve.lex) n += node_count(o);
  return n;
}

bool is_reserved(std::string_view name) {
  static const std::set<std::string_view> words = {
      "ann",     "annotation", "any",       "array",    "bool",  "case",     "constraint", "default",
      "diff",    "div",        "else",      "elseif",   "endif", "enum",     "false",      "float",
      "function", "if",        "in",        "include",  "int",   "intersect", "let",       "list",
      "maximize", "minimize",  "mod",       "not",      "of",    "op",       "opt",        "output",
      "par",     "predicate",  "record",    "satisfy",  "set",   "solve",    "string",     "subset",
      "superset", "symdiff",   "test",      "then",     "true",  "tuple",    "type",       "union",
      "var",     "where",      "xor",       "search",   "abs",   "min",      "max",        "show",
      "bool2int", "int2float", "sum",       "product",  "forall", "exists",  "sol",        "lex_less"};
  if (name.empty() || words.count(name)) return true;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])))) return true;
  return !std::all_of(name.begin(), name.end(),
                      [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// ================================================================ parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Model model() {
    Model m;
    bool have_solve = false;
    while (!at_end()) {
      const Token& t = peek();
      if (is("include")) {
        next();
        const Token s = expect_kind(TokKind::String, "include file name");
        m.includes.push_back(s.text.substr(1, s.text.size() - 2));
        expect(";");
      } else if (is("constraint")) {
        next();
        m.constraints.push_back(expr());
        skip_annotations();
        expect(";");
      } else if (is("solve")) {
        if (have_solve) throw ParseError("more than one solve item", t.loc);
        have_solve = true;
        next();
        m.solve = solve();
      } else if (is("output") || is("function") || is("predicate") || is("test") || is("annotation")) {
        skip_item();
      } else {
        m.decls.push_back(decl());
      }
    }
    if (!have_solve) throw ParseError("missing solve item", peek().loc);
    return m;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == TokKind::End; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool is(std::string_view s, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == TokKind::Ident || t.kind == TokKind::Punct) && t.text == s;
  }
  bool accept(std::string_view s) {
    if (!is(s)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg + (t.kind == TokKind::End ? " at end of input" : " near '" + t.text + "'"), t.loc);
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }
  Token expect_kind(TokKind k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return next();
  }

  void skip_item() {
    int depth = 0;
    while (!at_end()) {
      const Token& t = next();
      if (t.kind != TokKind::Punct) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      else if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
      else if (t.text == ";" && depth == 0) return;
    }
    fail("unterminated item");
  }

  void skip_annotations() {
    while (accept("::")) {
      expect_kind(TokKind::Ident, "annotation name");
      if (is("(")) {
        int depth = 0;
        do {
          const Token& t = next();
          if (t.text == "(") ++depth;
          else if (t.text == ")") --depth;
        } while (depth > 0 && !at_end());
      }
    }
  }

  SolveItem solve() {
    SolveItem s;
    skip_annotations();
    if (accept("satisfy")) {
      s.kind = SolveItem::Kind::Satisfy;
    } else if (accept("minimize")) {
      s.kind = SolveItem::Kind::Minimize;
      s.objective = expr();
    } else if (accept("maximize")) {
      s.kind = SolveItem::Kind::Maximize;
      s.objective = expr();
    } else if (accept("search")) {
      const ExprPtr e = expr();
      if (e->kind != ExprKind::Call || e->name != "zb_lex_minimize" || e->args.size() != 1 ||
          e->args[0]->kind != ExprKind::Array)
        fail("unsupported search combinator");
      s.kind = SolveItem::Kind::LexMinimize;
      s.lex = e->args[0]->args;
    } else {
      fail("expected satisfy, minimize, maximize or search");
    }
    expect(";");
    return s;
  }

  Integer const_int() {
    const ExprPtr e = unary_expr();
    const Value v = evaluate(e, [&](const std::string& n) -> Value { fail("non-constant bound '" + n + "'"); });
    if (const auto* i = std::get_if<Integer>(&v)) return *i;
    fail("expected an integer bound");
  }

  Rational const_number(const ExprPtr& e) {
    const Value v = evaluate(e, [&](const std::string& n) -> Value { fail("non-constant bound '" + n + "'"); });
    if (const auto* i = std::get_if<Integer>(&v)) return Rational(*i);
    if (const auto* r = std::get_if<Rational>(&v)) return *r;
    fail("expected a numeric bound");
  }

  VarDecl decl() {
    VarDecl d;
    if (accept("var")) d.type.is_var = true;
    else accept("par");
    if (accept("bool")) {
      d.type.base = BaseType::Bool;
    } else if (accept("int")) {
      d.type.base = BaseType::Int;
    } else if (accept("float")) {
      d.type.base = BaseType::Float;
    } else if (is("{")) {
      next();
      std::vector<Integer> xs;
      if (!is("}")) {
        do xs.push_back(const_int());
        while (accept(","));
      }
      expect("}");
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      d.type.base = BaseType::Int;
      d.type.int_set = std::move(xs);
    } else {
      const ExprPtr lo = unary_expr();
      expect("..");
      const ExprPtr hi = unary_expr();
      const Rational l = const_number(lo), h = const_number(hi);
      const bool is_float = lo->kind == ExprKind::Float || hi->kind == ExprKind::Float || !l.is_integer() ||
                            !h.is_integer() || contains_float(lo) || contains_float(hi);
      if (is_float) {
        d.type.base = BaseType::Float;
        d.type.float_range = std::pair{l, h};
      } else {
        d.type.base = BaseType::Int;
        d.type.int_range = std::pair{l.numerator(), h.numerator()};
      }
    }
    expect(":");
    d.name = expect_kind(TokKind::Ident, "a variable name").text;
    skip_annotations();
    if (accept("=")) d.init = expr();
    expect(";");
    return d;
  }

  static bool contains_float(const ExprPtr& e) {
    if (e->kind == ExprKind::Float) return true;
    return std::any_of(e->args.begin(), e->args.end(), contains_float);
  }

  // Precedence climbing, lowest first.
  ExprPtr expr() { return equiv(); }

  ExprPtr equiv() {
    ExprPtr a = implication();
    while (accept("<->")) a = binary("<->", a, implication());
    return a;
  }

  ExprPtr implication() {
    ExprPtr a = disjunction();
    for (;;) {
      if (accept("->")) a = binary("->", a, disjunction());
      else if (accept("<-")) a = binary("->", disjunction(), a);
      else return a;
    }
  }

  ExprPtr disjunction() {
    ExprPtr a = conjunction();
    for (;;) {
      if (accept("\\/")) a = binary("\\/", a, conjunction());
      else if (accept("xor")) a = binary("xor", a, conjunction());
      else return a;
    }
  }

  ExprPtr conjunction() {
    ExprPtr a = comparison();
    while (accept("/\\")) a = binary("/\\", a, comparison());
    return a;
  }

  ExprPtr comparison() {
    ExprPtr a = additive();
    for (const char* op : {"==", "=", "!=", "<=", ">=", "<", ">"}) {
      if (accept(op)) return binary(std::string(op) == "==" ? "=" : op, a, additive());
    }
    return a;
  }

  ExprPtr additive() {
    ExprPtr a = multiplicative();
    for (;;) {
      if (accept("+")) a = binary("+", a, multiplicative());
      else if (accept("-")) a = binary("-", a, multiplicative());
      else return a;
    }
  }

  ExprPtr multiplicative() {
    ExprPtr a = unary_expr();
    for (;;) {
      if (accept("*")) a = binary("*", a, unary_expr());
      else if (accept("/")) a = binary("/", a, unary_expr());
      else if (accept("div")) a = binary("div", a, unary_expr());
      else if (accept("mod")) a = binary("mod", a, unary_expr());
      else return a;
    }
  }

  ExprPtr unary_expr() {
    if (accept("-")) {
      ExprPtr a = unary_expr();
      if (a->kind == ExprKind::Int) return lit_int(-a->i);
      if (a->kind == ExprKind::Float) return lit_float(-a->f);
      return unary("-", a);
    }
    if (accept("+")) return unary_expr();
    if (accept("not")) return unary("not", unary_expr());
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (t.kind == TokKind::Int) {
      next();
      Integer v;
      if (t.text.rfind("0x", 0) == 0) v = Integer(t.text.substr(2), 16);
      else if (t.text.rfind("0o", 0) == 0) v = Integer(t.text.substr(2), 8);
      else v = Integer(t.text, 10);
      return lit_int(v);
    }
    if (t.kind == TokKind::Float) {
      next();
      return lit_float(Rational::parse_decimal(t.text));
    }
    if (accept("(")) {
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    if (accept("[")) {
      std::vector<ExprPtr> xs;
      if (!is("]")) {
        do xs.push_back(expr());
        while (accept(","));
      }
      expect("]");
      return array(std::move(xs));
    }
    if (accept("true")) return lit(true);
    if (accept("false")) return lit(false);
    if (accept("if")) return if_rest();
    if (t.kind == TokKind::Ident) {
      const std::string name = next().text;
      if (accept("(")) {
        std::vector<ExprPtr> args;
        if (!is(")")) {
          do args.push_back(expr());
          while (accept(","));
        }
        expect(")");
        return call(name, std::move(args));
      }
      return ident(name);
    }
    fail("expected an expression");
  }

  // After "if" or "elseif": the branches share a single endif.
  ExprPtr if_rest() {
    ExprPtr c = expr();
    expect("then");
    ExprPtr a = expr();
    if (accept("elseif")) return ite(c, a, if_rest());
    expect("else");
    ExprPtr b = expr();
    expect("endif");
    return ite(c, a, b);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Model parse_model(std::string_view text) { return Parser(text).model(); }

// ============================================================= evaluation

namespace {

const Integer& int64_min() {
  static const Integer v(std::to_string(std::numeric_limits<std::int64_t>::min()), 10);
  return v;
}
const Integer& int64_max() {
  static const Integer v(std::to_string(std::numeric_limits<std::int64_t>::max()), 10);
  return v;
}

Integer checked(Integer v) {
  if (v < int64_min() || v > int64_max()) throw EvalError("integer overflow: " + v.get_str());
  return v;
}

Rational as_rational(const Value& v) {
  if (const auto* i = std::get_if<Integer>(&v)) return Rational(*i);
  if (const auto* r = std::get_if<Rational>(&v)) return *r;
  throw EvalError("expected a number");
}

bool as_bool(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw EvalError("expected a Boolean");
}

const Integer& as_int(const Value& v) {
  if (const auto* i = std::get_if<Integer>(&v)) return *i;
  throw EvalError("expected an integer");
}

bool is_int(const Value& v) { return std::holds_alternative<Integer>(v); }

int compare(const Value& a, const Value& b) {
  if (is_int(a) && is_int(b)) return cmp(as_int(a), as_int(b));
  if (std::holds_alternative<bool>(a) && std::holds_alternative<bool>(b))
    return static_cast<int>(as_bool(a)) - static_cast<int>(as_bool(b));
  const Rational x = as_rational(a), y = as_rational(b);
  return x < y ? -1 : (y < x ? 1 : 0);
}

}  // namespace

Value evaluate(const ExprPtr& e, const std::function<Value(const std::string&)>& env) {
  auto ev = [&](std::size_t k) { return evaluate(e->args[k], env); };
  switch (e->kind) {
    case ExprKind::Bool: return e->b;
    case ExprKind::Int: return checked(e->i);
    case ExprKind::Float: return e->f;
    case ExprKind::Ident: return env(e->name);
    case ExprKind::Unary: {
      const Value a = ev(0);
      if (e->name == "not") return !as_bool(a);
      if (is_int(a)) return checked(-as_int(a));
      return -as_rational(a);
    }
    case ExprKind::Ite: return as_bool(ev(0)) ? ev(1) : ev(2);
    case ExprKind::Array: throw EvalError("array in scalar context");
    case ExprKind::Call: {
      const std::string& f = e->name;
      if (f == "abs" && e->args.size() == 1) {
        const Value a = ev(0);
        if (is_int(a)) return checked(abs(as_int(a)));
        return as_rational(a).abs();
      }
      if ((f == "min" || f == "max") && e->args.size() == 2) {
        const Value a = ev(0), b = ev(1);
        const bool first = f == "min" ? compare(a, b) <= 0 : compare(a, b) >= 0;
        return first ? a : b;
      }
      if (f == "bool2int" && e->args.size() == 1) return Integer(as_bool(ev(0)) ? 1 : 0);
      if (f == "int2float" && e->args.size() == 1) return Rational(as_int(ev(0)));
      throw EvalError("unknown function '" + f + "'");
    }
    case ExprKind::Binary: break;
  }
  const std::string& op = e->name;
  if (op == "/\\") return as_bool(ev(0)) && as_bool(ev(1));
  if (op == "\\/") return as_bool(ev(0)) || as_bool(ev(1));
  if (op == "->") return !as_bool(ev(0)) || as_bool(ev(1));
  if (op == "<->") return as_bool(ev(0)) == as_bool(ev(1));
  if (op == "xor") return as_bool(ev(0)) != as_bool(ev(1));
  const Value a = ev(0), b = ev(1);
  if (op == "=") return compare(a, b) == 0;
  if (op == "!=") return compare(a, b) != 0;
  if (op == "<") return compare(a, b) < 0;
  if (op == "<=") return compare(a, b) <= 0;
  if (op == ">") return compare(a, b) > 0;
  if (op == ">=") return compare(a, b) >= 0;
  if (is_int(a) && is_int(b)) {
    const Integer& x = as_int(a);
    const Integer& y = as_int(b);
    if (op == "+") return checked(x + y);
    if (op == "-") return checked(x - y);
    if (op == "*") return checked(x * y);
    if (op == "div" || op == "mod") {
      if (y == 0) throw EvalError("integer division by zero");
      Integer r;
      if (op == "div") mpz_tdiv_q(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      else mpz_tdiv_r(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      return checked(r);
    }
  }
  const Rational x = as_rational(a), y = as_rational(b);
  if (op == "+") return x + y;
  if (op == "-") return x - y;
  if (op == "*") return x * y;
  if (op == "/") {
    if (y.is_zero()) throw EvalError("float division by zero");
    return x / y;
  }
  throw EvalError("unknown operator '" + op + "'");
}

}  // namespace zb::mzn
