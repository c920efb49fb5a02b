#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

#include "zinc_bridge/builtins.hpp"
#include "zinc_bridge/fzn.hpp"

namespace zb::fzn {

IntSetValue IntSetValue::range(std::int64_t lo, std::int64_t hi) {
  IntSetValue s;
  for (std::int64_t v = lo; v <= hi; ++v) s.elems.push_back(v);
  return s;
}

IntSetValue IntSetValue::of(std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return IntSetValue{std::move(values)};
}

bool IntSetValue::contains(std::int64_t v) const { return std::binary_search(elems.begin(), elems.end(), v); }

bool FznVarDecl::is_output() const {
  return std::any_of(annotations.begin(), annotations.end(),
                     [](const Annotation& a) { return a.name == "output_var" || a.name == "output_array"; });
}

std::optional<std::string> FznConstraint::defined_var() const {
  for (const auto& a : annotations) {
    if (a.name != "defines_var") continue;
    auto open = a.text.find('(');
    auto close = a.text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close <= open) continue;
    std::string inner = a.text.substr(open + 1, close - open - 1);
    inner.erase(std::remove_if(inner.begin(), inner.end(), [](unsigned char c) { return std::isspace(c); }),
                inner.end());
    return inner;
  }
  return std::nullopt;
}

const FznVarDecl* FznModel::find_var(std::string_view name) const {
  for (const auto& v : vars)
    if (v.name == name) return &v;
  return nullptr;
}

const ParamDecl* FznModel::find_param(std::string_view name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

namespace {

enum class Tok { Ident, Int, Float, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLoc loc;
  std::size_t begin = 0;
  std::size_t end = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      t.begin = pos_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        t.end = pos_;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.kind = Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number(t);
      } else if (c == '"') {
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"') {
          if (src_[pos_] == '\\') advance();
          if (pos_ < src_.size()) advance();
        }
        if (pos_ >= src_.size()) throw ParseError("unterminated string literal", t.loc);
        advance();
        t.kind = Tok::String;
      } else if (c == ':' && peek(1) == ':') {
        advance();
        advance();
        t.kind = Tok::Punct;
      } else if (c == '.' && peek(1) == '.') {
        advance();
        advance();
        t.kind = Tok::Punct;
      } else if (std::string_view(";:,[](){}=").find(c) != std::string_view::npos) {
        advance();
        t.kind = Tok::Punct;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", t.loc);
      }
      t.end = pos_;
      t.text = std::string(src_.substr(t.begin, t.end - t.begin));
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_number(Token& t) {
    if (src_[pos_] == '-') advance();
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    };
    digits();
    t.kind = Tok::Int;
    // A '.' starts a fraction only when followed by a digit ("1..3" is a range).
    if (peek(0) == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      digits();
      t.kind = Tok::Float;
    }
    if (peek(0) == 'e' || peek(0) == 'E') {
      const char n1 = peek(1);
      const bool sign = n1 == '+' || n1 == '-';
      if (std::isdigit(static_cast<unsigned char>(sign ? peek(2) : n1))) {
        advance();
        if (sign) advance();
        digits();
        t.kind = Tok::Float;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> toks) : src_(src), toks_(std::move(toks)) {}

  FznModel run() {
    FznModel m;
    while (cur().kind != Tok::End) {
      const Token& t = cur();
      if (t.kind != Tok::Ident) throw error("expected an item");
      if (t.text == "predicate") {
        m.predicates.push_back(skip_item());
      } else if (t.text == "constraint") {
        m.constraints.push_back(parse_constraint());
      } else if (t.text == "solve") {
        m.solve_items.push_back(parse_solve());
      } else {
        parse_decl(m);
      }
    }
    for (const auto& v : m.vars)
      if (v.is_output()) m.output_annotations.push_back(v.name);
    return m;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }

  ParseError error(const std::string& msg) const {
    return ParseError(msg + (cur().kind == Tok::End ? " at end of input" : " near '" + cur().text + "'"),
                      cur().loc);
  }

  bool is_punct(std::string_view p) const { return cur().kind == Tok::Punct && cur().text == p; }
  bool is_word(std::string_view w) const { return cur().kind == Tok::Ident && cur().text == w; }

  void expect(std::string_view p) {
    if (!is_punct(p)) throw error("expected '" + std::string(p) + "'");
    ++i_;
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) throw error("expected '" + std::string(w) + "'");
    ++i_;
  }

  std::string skip_item() {
    const std::size_t begin = cur().begin;
    int depth = 0;
    while (cur().kind != Tok::End) {
      if (is_punct("(") || is_punct("[") || is_punct("{")) ++depth;
      if (is_punct(")") || is_punct("]") || is_punct("}")) --depth;
      if (depth == 0 && is_punct(";")) {
        const std::size_t end = cur().begin;
        ++i_;
        return std::string(src_.substr(begin, end - begin));
      }
      ++i_;
    }
    throw error("unterminated item");
  }

  std::int64_t parse_int_token() {
    if (cur().kind != Tok::Int) throw error("expected an integer");
    std::int64_t v = 0;
    const std::string& s = cur().text;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw error("integer literal out of 64-bit range");
    ++i_;
    return v;
  }

  Rational parse_float_token() {
    if (cur().kind != Tok::Float) throw error("expected a float");
    Rational r = Rational::parse_decimal(cur().text);
    ++i_;
    return r;
  }

  IntSetValue parse_set_braces() {
    expect("{");
    std::vector<std::int64_t> vals;
    if (!is_punct("}")) {
      vals.push_back(parse_int_token());
      while (is_punct(",")) {
        ++i_;
        vals.push_back(parse_int_token());
      }
    }
    expect("}");
    return IntSetValue::of(std::move(vals));
  }

  // Domain part of a type after 'var'/'par' or directly.
  void parse_base(FznType& ty) {
    if (is_word("bool")) {
      ++i_;
      ty.base = BaseType::Bool;
    } else if (is_word("int")) {
      ++i_;
      ty.base = BaseType::Int;
    } else if (is_word("float")) {
      ++i_;
      ty.base = BaseType::Float;
    } else if (is_word("set")) {
      ++i_;
      expect_word("of");
      ty.base = BaseType::SetOfInt;
      if (is_word("int")) {
        ++i_;
      } else if (is_punct("{")) {
        ty.domain = parse_set_braces();
      } else {
        const std::int64_t lo = parse_int_token();
        expect("..");
        const std::int64_t hi = parse_int_token();
        ty.domain = IntInterval{lo, hi};
      }
    } else if (is_punct("{")) {
      ty.base = BaseType::Int;
      ty.domain = parse_set_braces();
    } else if (cur().kind == Tok::Int) {
      ty.base = BaseType::Int;
      const std::int64_t lo = parse_int_token();
      expect("..");
      const std::int64_t hi = parse_int_token();
      ty.domain = IntInterval{lo, hi};
    } else if (cur().kind == Tok::Float) {
      ty.base = BaseType::Float;
      Rational lo = parse_float_token();
      expect("..");
      Rational hi = parse_float_token();
      ty.domain = FloatInterval{std::move(lo), std::move(hi)};
    } else {
      throw error("expected a type");
    }
  }

  FznType parse_type() {
    FznType ty;
    if (is_word("array")) {
      ++i_;
      expect("[");
      const std::int64_t one = parse_int_token();
      if (one != 1) throw error("array index sets must start at 1");
      expect("..");
      ty.array_size = parse_int_token();
      if (*ty.array_size < 0) throw error("negative array size");
      expect("]");
      expect_word("of");
    }
    if (is_word("var")) {
      ++i_;
      ty.is_var = true;
    } else if (is_word("par")) {
      ++i_;
    }
    parse_base(ty);
    return ty;
  }

  std::string parse_ident() {
    if (cur().kind != Tok::Ident) throw error("expected an identifier");
    return next().text;
  }

  std::vector<Annotation> parse_annotations() {
    std::vector<Annotation> anns;
    while (is_punct("::")) {
      ++i_;
      const std::size_t begin = cur().begin;
      if (cur().kind != Tok::Ident) throw error("expected an annotation name");
      Annotation a;
      a.name = cur().text;
      skip_ann_expr();
      a.text = std::string(src_.substr(begin, toks_[i_ - 1].end - begin));
      anns.push_back(std::move(a));
    }
    return anns;
  }

  void skip_ann_expr() {
    if (cur().kind == Tok::Ident) {
      ++i_;
      if (is_punct("(")) {
        ++i_;
        if (!is_punct(")")) {
          skip_ann_expr();
          while (is_punct(",")) {
            ++i_;
            skip_ann_expr();
          }
        }
        expect(")");
      } else if (is_punct("[")) {
        ++i_;
        parse_int_token();
        expect("]");
      }
      return;
    }
    if (is_punct("[")) {
      ++i_;
      if (!is_punct("]")) {
        skip_ann_expr();
        while (is_punct(",")) {
          ++i_;
          skip_ann_expr();
        }
      }
      expect("]");
      return;
    }
    if (is_punct("{")) {
      parse_set_braces();
      return;
    }
    if (cur().kind == Tok::Int || cur().kind == Tok::Float || cur().kind == Tok::String) {
      ++i_;
      if (is_punct("..")) {
        ++i_;
        ++i_;
      }
      return;
    }
    throw error("malformed annotation");
  }

  Expr parse_expr() {
    if (is_word("true")) {
      ++i_;
      return Expr(true);
    }
    if (is_word("false")) {
      ++i_;
      return Expr(false);
    }
    if (cur().kind == Tok::Int) {
      const std::int64_t v = parse_int_token();
      if (is_punct("..")) {
        ++i_;
        const std::int64_t hi = parse_int_token();
        return Expr(IntSetValue::range(v, hi));
      }
      return Expr(v);
    }
    if (cur().kind == Tok::Float) return Expr(parse_float_token());
    if (is_punct("{")) return Expr(parse_set_braces());
    if (is_punct("[")) {
      ++i_;
      ArrayLit elems;
      if (!is_punct("]")) {
        elems.push_back(parse_expr());
        while (is_punct(",")) {
          ++i_;
          elems.push_back(parse_expr());
        }
      }
      expect("]");
      return Expr(std::move(elems));
    }
    if (cur().kind == Tok::Ident) {
      std::string name = next().text;
      if (is_punct("[")) {
        ++i_;
        const std::int64_t idx = parse_int_token();
        expect("]");
        return Expr(ArrayAccess{std::move(name), idx});
      }
      return Expr::ident(std::move(name));
    }
    throw error("expected an expression");
  }

  void parse_decl(FznModel& m) {
    const SourceLoc loc = cur().loc;
    FznType ty = parse_type();
    expect(":");
    std::string name = parse_ident();
    std::vector<Annotation> anns = parse_annotations();
    std::optional<Expr> value;
    if (is_punct("=")) {
      ++i_;
      value = parse_expr();
    }
    expect(";");
    if (ty.is_var) {
      m.vars.push_back(FznVarDecl{std::move(name), std::move(ty), std::move(value), std::move(anns)});
    } else {
      if (!value) throw ParseError("parameter '" + name + "' lacks a value", loc);
      m.params.push_back(ParamDecl{std::move(name), std::move(ty), std::move(*value)});
    }
  }

  FznConstraint parse_constraint() {
    expect_word("constraint");
    FznConstraint c;
    c.name = parse_ident();
    expect("(");
    if (!is_punct(")")) {
      c.args.push_back(parse_expr());
      while (is_punct(",")) {
        ++i_;
        c.args.push_back(parse_expr());
      }
    }
    expect(")");
    c.annotations = parse_annotations();
    expect(";");
    return c;
  }

  FznSolveGoal parse_solve() {
    expect_word("solve");
    FznSolveGoal g;
    g.annotations = parse_annotations();
    if (is_word("satisfy")) {
      ++i_;
      g.kind = SolveKind::Satisfy;
    } else if (is_word("minimize") || is_word("maximize")) {
      g.kind = is_word("minimize") ? SolveKind::Minimize : SolveKind::Maximize;
      ++i_;
      g.objective = parse_expr();
    } else {
      throw error("expected satisfy, minimize or maximize");
    }
    expect(";");
    return g;
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// Validation

struct ExprType {
  BaseType base = BaseType::Int;
  bool is_array = false;
  bool is_var = false;
  bool any_elem = false;  // empty array literal
  std::optional<std::int64_t> size;
};

class Validator {
 public:
  Validator(const FznModel& m, const FznParseOptions& opts) : m_(m), opts_(opts) {}

  void run() {
    for (const auto& p : m_.params) declare(p.name, p.type, "parameter '" + p.name + "'");
    for (const auto& v : m_.vars) declare(v.name, v.type, "variable '" + v.name + "'");
    for (const auto& p : m_.params) {
      const std::string item = "parameter '" + p.name + "'";
      check_domain(p.type, item);
      check_assignment(p.type, p.value, item, false);
    }
    for (const auto& v : m_.vars) {
      const std::string item = "variable '" + v.name + "'";
      check_domain(v.type, item);
      if (v.assignment) check_assignment(v.type, *v.assignment, item, true);
      if (v.type.is_array() && !v.assignment) throw ValidationError(item + ": array variable without initialiser");
    }
    for (std::size_t i = 0; i < m_.constraints.size(); ++i) check_constraint(m_.constraints[i], i);
    if (m_.solve_items.empty()) throw ValidationError("model has no solve item");
    if (m_.solve_items.size() > 1 && !opts_.allow_multi_objective)
      throw ValidationError("solve item #2: multiple solve items require the multi-objective extension");
    for (std::size_t i = 0; i < m_.solve_items.size(); ++i) check_solve(m_.solve_items[i], i);
  }

 private:
  void declare(const std::string& name, const FznType& ty, const std::string& item) {
    if (!types_.emplace(name, ty).second) throw ValidationError(item + ": duplicate identifier '" + name + "'");
  }

  static void check_domain(const FznType& ty, const std::string& item) {
    if (const auto* iv = std::get_if<IntInterval>(&ty.domain)) {
      if (iv->lo > iv->hi) throw ValidationError(item + ": empty integer domain");
    } else if (const auto* s = std::get_if<IntSetValue>(&ty.domain)) {
      if (s->elems.empty()) throw ValidationError(item + ": empty set domain");
    } else if (const auto* fv = std::get_if<FloatInterval>(&ty.domain)) {
      if (fv->lo > fv->hi) throw ValidationError(item + ": empty float domain");
    }
  }

  ExprType infer(const Expr& e, const std::string& item) const {
    ExprType t;
    if (e.is_bool()) {
      t.base = BaseType::Bool;
    } else if (e.is_int()) {
      t.base = BaseType::Int;
    } else if (e.is_float()) {
      t.base = BaseType::Float;
    } else if (e.is_set()) {
      t.base = BaseType::SetOfInt;
    } else if (e.is_ident()) {
      const FznType& ty = lookup(e.as_ident(), item);
      t.base = ty.base;
      t.is_var = ty.is_var;
      t.is_array = ty.is_array();
      t.size = ty.array_size;
    } else if (e.is_access()) {
      const auto& acc = e.as_access();
      const FznType& ty = lookup(acc.name, item);
      if (!ty.is_array()) throw ValidationError(item + ": '" + acc.name + "' is not an array");
      if (acc.index < 1 || acc.index > *ty.array_size)
        throw ValidationError(item + ": index " + std::to_string(acc.index) + " out of bounds for '" + acc.name +
                              "' [1.." + std::to_string(*ty.array_size) + "]");
      t.base = ty.base;
      t.is_var = ty.is_var;
    } else {
      const auto& arr = e.as_array();
      t.is_array = true;
      t.size = static_cast<std::int64_t>(arr.size());
      if (arr.empty()) {
        t.any_elem = true;
        return t;
      }
      bool first = true;
      for (const auto& el : arr) {
        ExprType et = infer(el, item);
        if (et.is_array) throw ValidationError(item + ": nested arrays are not allowed");
        if (first) {
          t.base = et.base;
          first = false;
        } else if (et.base != t.base) {
          throw ValidationError(item + ": array literal mixes element types");
        }
        t.is_var = t.is_var || et.is_var;
      }
    }
    return t;
  }

  const FznType& lookup(const std::string& name, const std::string& item) const {
    auto it = types_.find(name);
    if (it == types_.end()) throw ValidationError(item + ": undeclared identifier '" + name + "'");
    return it->second;
  }

  void check_assignment(const FznType& ty, const Expr& value, const std::string& item, bool is_var) const {
    ExprType vt = infer(value, item);
    if (vt.is_array != ty.is_array()) throw ValidationError(item + ": initialiser shape does not match the type");
    if (!vt.any_elem && vt.base != ty.base) throw ValidationError(item + ": initialiser type does not match");
    if (!is_var && vt.is_var) throw ValidationError(item + ": parameter initialised with a variable");
    if (ty.is_array() && vt.size && *vt.size != *ty.array_size)
      throw ValidationError(item + ": array initialiser has " + std::to_string(*vt.size) + " elements, expected " +
                            std::to_string(*ty.array_size));
  }

  bool matches(ArgKind k, const ExprType& t) const {
    auto scalar = [&](BaseType b) { return !t.is_array && t.base == b; };
    auto array = [&](BaseType b) { return t.is_array && (t.any_elem || t.base == b); };
    switch (k) {
      case ArgKind::VarBool: return scalar(BaseType::Bool);
      case ArgKind::VarInt: return scalar(BaseType::Int);
      case ArgKind::VarFloat: return scalar(BaseType::Float);
      case ArgKind::VarSet: return scalar(BaseType::SetOfInt);
      case ArgKind::ArrVarBool: return array(BaseType::Bool);
      case ArgKind::ArrVarInt: return array(BaseType::Int);
      case ArgKind::ArrVarFloat: return array(BaseType::Float);
      case ArgKind::ParInt: return scalar(BaseType::Int) && !t.is_var;
      case ArgKind::ParFloat: return scalar(BaseType::Float) && !t.is_var;
      case ArgKind::ArrParBool: return array(BaseType::Bool) && !t.is_var;
      case ArgKind::ArrParInt: return array(BaseType::Int) && !t.is_var;
      case ArgKind::ArrParFloat: return array(BaseType::Float) && !t.is_var;
    }
    return false;
  }

  void check_constraint(const FznConstraint& c, std::size_t index) const {
    const std::string item = "constraint #" + std::to_string(index + 1) + " (" + c.name + ")";
    if (is_known_unsupported(c.name))
      throw ValidationError(item + ": unsupported builtin '" + c.name + "' (non-linear)");
    auto b = lookup_builtin(c.name);
    if (!b) throw ValidationError(item + ": unknown builtin '" + c.name + "'");
    const BuiltinInfo& info = builtin_info(*b);
    if (info.args.size() != c.args.size())
      throw ValidationError(item + ": expected " + std::to_string(info.args.size()) + " arguments, got " +
                            std::to_string(c.args.size()));
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      ExprType t = infer(c.args[i], item);
      if (!matches(info.args[i], t))
        throw ValidationError(item + ": argument " + std::to_string(i + 1) + " has the wrong type");
    }
  }

  void check_solve(const FznSolveGoal& g, std::size_t index) const {
    const std::string item = "solve item #" + std::to_string(index + 1);
    if (g.kind == SolveKind::Satisfy) {
      if (g.objective) throw ValidationError(item + ": satisfy carries no objective");
      if (m_.solve_items.size() > 1) throw ValidationError(item + ": satisfy cannot be combined with other goals");
      return;
    }
    if (!g.objective) throw ValidationError(item + ": missing objective");
    ExprType t = infer(*g.objective, item);
    if (t.is_array || (t.base != BaseType::Int && t.base != BaseType::Float))
      throw ValidationError(item + ": objective must be a numeric scalar");
  }

  const FznModel& m_;
  const FznParseOptions& opts_;
  std::unordered_map<std::string, FznType> types_;
};

}  // namespace

FznModel parse_fzn(std::string_view text, const FznParseOptions& options) {
  Lexer lex(text);
  Parser p(text, lex.run());
  FznModel m = p.run();
  validate(m, options);
  return m;
}

void validate(const FznModel& model, const FznParseOptions& options) { Validator(model, options).run(); }

}  // namespace zb::fzn
