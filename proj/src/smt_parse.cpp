#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "zinc_bridge/smt.hpp"

namespace zb::smt {

namespace {

struct SExpr {
  enum class Kind { Symbol, Keyword, Numeral, Decimal, Hex, Binary, String, List };
  Kind kind = Kind::List;
  std::string text;
  std::vector<SExpr> items;
  SourceLoc loc;

  bool is_list() const { return kind == Kind::List; }
  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
  bool is_symbol() const { return kind == Kind::Symbol; }
};

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    for (;;) {
      skip();
      if (pos_ >= src_.size()) return out;
      out.push_back(read());
    }
  }

 private:
  SourceLoc here() const { return {line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_[pos_] == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  static bool symbol_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
  }

  SExpr read() {
    skip();
    SExpr e;
    e.loc = here();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", e.loc);
    const char c = src_[pos_];
    if (c == '(') {
      advance();
      e.kind = SExpr::Kind::List;
      for (;;) {
        skip();
        if (pos_ >= src_.size()) throw ParseError("unbalanced parenthesis", e.loc);
        if (src_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError("unexpected ')'", e.loc);
    const std::size_t begin = pos_;
    if (c == '|') {
      advance();
      while (pos_ < src_.size() && src_[pos_] != '|') advance();
      if (pos_ >= src_.size()) throw ParseError("unterminated quoted symbol", e.loc);
      advance();
      e.kind = SExpr::Kind::Symbol;
      e.text = std::string(src_.substr(begin + 1, pos_ - begin - 2));
      return e;
    }
    if (c == '"') {
      advance();
      for (;;) {
        if (pos_ >= src_.size()) throw ParseError("unterminated string", e.loc);
        if (src_[pos_] == '"') {
          advance();
          if (pos_ < src_.size() && src_[pos_] == '"') {
            advance();
            continue;
          }
          break;
        }
        advance();
      }
      e.kind = SExpr::Kind::String;
      e.text = std::string(src_.substr(begin + 1, pos_ - begin - 2));
      return e;
    }
    if (c == '#') {
      advance();
      if (pos_ >= src_.size()) throw ParseError("malformed literal", e.loc);
      const char base = src_[pos_];
      advance();
      const std::size_t digits = pos_;
      while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      e.text = std::string(src_.substr(digits, pos_ - digits));
      if (e.text.empty()) throw ParseError("empty bit-vector literal", e.loc);
      if (base == 'b') {
        if (e.text.find_first_not_of("01") != std::string::npos) throw ParseError("malformed binary literal", e.loc);
        e.kind = SExpr::Kind::Binary;
      } else if (base == 'x') {
        e.kind = SExpr::Kind::Hex;
      } else {
        throw ParseError("unknown literal prefix '#" + std::string(1, base) + "'", e.loc);
      }
      return e;
    }
    if (c == ':') {
      advance();
      while (pos_ < src_.size() && symbol_char(src_[pos_])) advance();
      e.kind = SExpr::Kind::Keyword;
      e.text = std::string(src_.substr(begin, pos_ - begin));
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      e.kind = SExpr::Kind::Numeral;
      if (pos_ < src_.size() && src_[pos_] == '.') {
        advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        e.kind = SExpr::Kind::Decimal;
      }
      e.text = std::string(src_.substr(begin, pos_ - begin));
      return e;
    }
    if (symbol_char(c)) {
      while (pos_ < src_.size() && symbol_char(src_[pos_])) advance();
      e.kind = SExpr::Kind::Symbol;
      e.text = std::string(src_.substr(begin, pos_ - begin));
      return e;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", e.loc);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

const std::set<std::string, std::less<>>& out_of_scope_symbols() {
  static const std::set<std::string, std::less<>> s = {
      "select",   "store",     "const",     "forall",   "exists",    "to_int",   "is_int",   "fp",
      "fp.add",   "fp.sub",    "fp.mul",    "fp.div",   "fp.lt",     "fp.leq",   "fp.eq",    "fp.abs",
      "fp.neg",   "fp.sqrt",   "fp.isNaN",  "to_fp",    "str.++",    "str.len",  "str.at",   "seq.len",
      "bv2nat",   "nat2bv",    "int2bv",    "bv2int",   "declare-datatype", "declare-datatypes",
      "match",    "RoundingMode", "roundNearestTiesToEven", "RNE", "RTZ"};
  return s;
}

struct Macro {
  std::vector<std::pair<std::string, Sort>> params;
  SExpr body;
  Sort sort;
};

class Interpreter {
 public:
  SmtScript run(const std::vector<SExpr>& cmds) {
    for (const auto& c : cmds) command(c);
    return std::move(script_);
  }

 private:
  TermManager& tm() { return *script_.tm; }

  [[noreturn]] static void fail(const SExpr& e, const std::string& msg) { throw ParseError(msg, e.loc); }

  static const std::string& symbol(const SExpr& e, const char* what) {
    if (!e.is_symbol()) fail(e, std::string("expected ") + what);
    return e.text;
  }

  static unsigned numeral(const SExpr& e) {
    if (e.kind != SExpr::Kind::Numeral) fail(e, "expected a numeral");
    if (e.text.size() > 9) fail(e, "numeral too large");
    return static_cast<unsigned>(std::stoul(e.text));
  }

  Sort parse_sort(const SExpr& e) {
    if (e.is_symbol("Bool")) return Sort::boolean();
    if (e.is_symbol("Int")) return Sort::integer();
    if (e.is_symbol("Real")) return Sort::real();
    if (e.is_list() && e.items.size() == 3 && e.items[0].is_symbol("_") && e.items[1].is_symbol("BitVec")) {
      const unsigned w = numeral(e.items[2]);
      if (w == 0) fail(e, "bit-vector width must be positive");
      if (w > kMaxBvWidth) throw UnsupportedError("bit-vector width " + std::to_string(w) + " is out of scope");
      return Sort::bitvec(w);
    }
    std::string head = e.is_list() && !e.items.empty() ? e.items[0].text : e.text;
    if (e.is_list() && e.items.size() >= 2 && e.items[0].is_symbol("_")) head = e.items[1].text;
    if (head == "Array") throw UnsupportedError("out-of-scope theory: sort 'Array' has no MiniZinc counterpart");
    if (head == "FloatingPoint" || head == "Float16" || head == "Float32" || head == "Float64" ||
        head == "Float128" || head == "RoundingMode")
      throw UnsupportedError("out-of-scope theory: sort '" + head + "' (floating point) is not supported");
    if (head == "String" || head == "Seq" || head == "Set")
      throw UnsupportedError("out-of-scope theory: sort '" + head + "' is not supported");
    throw ValidationError(e.loc.to_string() + ": unknown sort '" + head + "'");
  }

  void command(const SExpr& c) {
    if (!c.is_list() || c.items.empty() || !c.items[0].is_symbol()) fail(c, "expected a command");
    const std::string& name = c.items[0].text;
    const auto& a = c.items;
    if (name == "set-logic") {
      if (a.size() != 2) fail(c, "set-logic expects one argument");
      script_.logic = symbol(a[1], "a logic name");
    } else if (name == "set-option") {
      set_option(c);
    } else if (name == "set-info") {
      // Metadata only.
    } else if (name == "declare-const") {
      if (a.size() != 3) fail(c, "declare-const expects a name and a sort");
      declare(a[1], parse_sort(a[2]));
    } else if (name == "declare-fun") {
      if (a.size() != 4 || !a[2].is_list()) fail(c, "malformed declare-fun");
      if (!a[2].items.empty())
        throw UnsupportedError("uninterpreted function '" + a[1].text + "' is out of scope");
      declare(a[1], parse_sort(a[3]));
    } else if (name == "define-fun") {
      define_fun(c);
    } else if (name == "assert") {
      if (a.size() != 2) fail(c, "assert expects one term");
      TermId t = term(a[1]);
      if (!tm().sort(t).is_bool()) fail(a[1], "asserted term is not Bool");
      script_.assertions.push_back(t);
    } else if (name == "assert-soft") {
      assert_soft(c);
    } else if (name == "minimize" || name == "maximize") {
      objective(c, name == "minimize" ? Direction::Minimize : Direction::Maximize);
    } else if (name == "check-sat" || name == "get-objectives" || name == "get-model" || name == "get-value" ||
               name == "get-info" || name == "exit" || name == "get-assignment") {
      script_.commands.push_back(name);
    } else if (name == "push" || name == "pop" || name == "reset" || name == "reset-assertions" ||
               name == "check-sat-assuming") {
      throw UnsupportedError("command '" + name + "' is not supported");
    } else if (name == "declare-sort" || name == "define-sort" || name == "declare-datatype" ||
               name == "declare-datatypes") {
      throw UnsupportedError("command '" + name + "' is out of scope");
    } else {
      fail(c, "unknown command '" + name + "'");
    }
  }

  void declare(const SExpr& name_expr, Sort sort) {
    const std::string& name = symbol(name_expr, "a symbol name");
    if (script_.find_decl(name) || macros_.count(name)) fail(name_expr, "symbol '" + name + "' declared twice");
    script_.declare(name, sort);
  }

  void set_option(const SExpr& c) {
    if (c.items.size() != 3 || c.items[1].kind != SExpr::Kind::Keyword) fail(c, "malformed set-option");
    const std::string& key = c.items[1].text;
    if (key == ":opt.priority" || key == ":opt.combination" || key == ":opt.multi_objective") {
      const std::string& v = c.items[2].text;
      if (v == "lex" || v == "lexicographic") {
        script_.combination = Combination::Lexicographic;
      } else if (v == "box" || v == "independent") {
        script_.combination = Combination::Independent;
      } else if (v == "pareto") {
        script_.combination = Combination::Pareto;
      } else {
        fail(c.items[2], "unknown objective combination '" + v + "'");
      }
      script_.combination_explicit = true;
    }
  }

  void define_fun(const SExpr& c) {
    if (c.items.size() != 5 || !c.items[2].is_list()) fail(c, "malformed define-fun");
    const std::string& name = symbol(c.items[1], "a function name");
    if (script_.find_decl(name) || macros_.count(name)) fail(c.items[1], "symbol '" + name + "' declared twice");
    Macro m;
    for (const auto& p : c.items[2].items) {
      if (!p.is_list() || p.items.size() != 2) fail(p, "malformed parameter");
      m.params.emplace_back(symbol(p.items[0], "a parameter name"), parse_sort(p.items[1]));
    }
    m.sort = parse_sort(c.items[3]);
    m.body = c.items[4];
    if (m.params.empty()) {
      TermId body = coerce(term(m.body), m.sort, m.body);
      constants_.emplace(name, body);
    } else {
      macros_.emplace(name, std::move(m));
    }
  }

  TermId coerce(TermId t, Sort s, const SExpr& where) {
    if (tm().sort(t) == s) return t;
    if (s.is_real() && tm().sort(t).is_int()) return tm().to_real(t);
    fail(where, "expected a term of sort " + print_sort(s));
  }

  Rational parse_weight(const SExpr& e) {
    if (e.kind == SExpr::Kind::Numeral || e.kind == SExpr::Kind::Decimal) return Rational::parse_decimal(e.text);
    TermId t = term(e);
    const Node& n = tm().node(t);
    if (n.op != Op::NumConst) fail(e, "soft-assertion weight must be a constant");
    return n.value;
  }

  void assert_soft(const SExpr& c) {
    if (c.items.size() < 2) fail(c, "assert-soft expects a term");
    TermId t = term(c.items[1]);
    if (!tm().sort(t).is_bool()) fail(c.items[1], "soft assertion is not Bool");
    Rational weight(1);
    std::string group = "I";
    for (std::size_t i = 2; i < c.items.size(); i += 2) {
      if (c.items[i].kind != SExpr::Kind::Keyword || i + 1 >= c.items.size()) fail(c.items[i], "malformed attribute");
      const std::string& key = c.items[i].text;
      const SExpr& val = c.items[i + 1];
      if (key == ":weight" || key == ":dweight") {
        weight = parse_weight(val);
      } else if (key == ":id") {
        group = val.text;
      } else {
        fail(c.items[i], "unknown assert-soft attribute '" + key + "'");
      }
    }
    if (weight.sign() <= 0) fail(c, "soft-assertion weight must be positive");
    script_.soft_assertions.push_back(SoftAssertion{t, weight, group});
    ensure_soft_objective(group);
  }

  void ensure_soft_objective(const std::string& group) {
    for (const auto& o : script_.objectives)
      if (o.soft_group == group) return;
    Objective o;
    o.dir = Direction::Minimize;
    o.soft_group = group;
    o.id = group;
    script_.objectives.push_back(std::move(o));
  }

  void objective(const SExpr& c, Direction dir) {
    if (c.items.size() < 2) fail(c, "objective expects a term");
    Objective o;
    o.dir = dir;
    for (std::size_t i = 2; i < c.items.size(); i += 2) {
      if (c.items[i].kind != SExpr::Kind::Keyword) fail(c.items[i], "malformed attribute");
      const std::string& key = c.items[i].text;
      if (key == ":signed") {
        o.bv_signed = true;
        --i;  // flag without value
        continue;
      }
      if (i + 1 >= c.items.size()) fail(c.items[i], "attribute without value");
      if (key == ":id") {
        o.id = c.items[i + 1].text;
      } else if (key == ":lower" || key == ":upper") {
        // Solver hints; no effect on the optimum.
      } else {
        fail(c.items[i], "unknown objective attribute '" + key + "'");
      }
    }
    const SExpr& target = c.items[1];
    // A bare soft-group id refers to the group's penalty.
    if (target.is_symbol() && !script_.find_decl(target.text) && !constants_.count(target.text) &&
        has_soft_group(target.text)) {
      if (dir != Direction::Minimize) fail(c, "soft-group objectives can only be minimized");
      return;
    }
    TermId t = term(target);
    if (!tm().sort(t).is_numeric()) fail(target, "objective must be Int, Real or BitVec");
    o.term = t;
    script_.objectives.push_back(std::move(o));
  }

  bool has_soft_group(const std::string& g) const {
    for (const auto& s : script_.soft_assertions)
      if (s.group == g) return true;
    return false;
  }

  // ------------------------------------------------------------------ terms

  TermId lookup_symbol(const SExpr& e) {
    const std::string& s = e.text;
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(s);
      if (f != it->end()) return f->second;
    }
    if (s == "true") return tm().mk_bool(true);
    if (s == "false") return tm().mk_bool(false);
    if (auto c = constants_.find(s); c != constants_.end()) return c->second;
    if (auto d = script_.find_decl(s)) return tm().mk_var(s, *d);
    if (out_of_scope_symbols().count(s)) throw UnsupportedError("out-of-scope symbol '" + s + "'");
    throw ValidationError(e.loc.to_string() + ": undeclared symbol '" + s + "'");
  }

  TermId bv_literal(const SExpr& e) {
    unsigned width = 0;
    std::uint64_t value = 0;
    if (e.kind == SExpr::Kind::Binary) {
      width = static_cast<unsigned>(e.text.size());
      if (width > kMaxBvWidth) throw UnsupportedError("bit-vector literal wider than 64 bits");
      for (char ch : e.text) value = (value << 1) | static_cast<std::uint64_t>(ch - '0');
    } else {
      width = static_cast<unsigned>(e.text.size() * 4);
      if (width > kMaxBvWidth) throw UnsupportedError("bit-vector literal wider than 64 bits");
      value = std::stoull(e.text, nullptr, 16);
    }
    return tm().mk_bv(value, width);
  }

  TermId term(const SExpr& e) {
    switch (e.kind) {
      case SExpr::Kind::Numeral: return tm().mk_int(Rational::parse_decimal(e.text));
      case SExpr::Kind::Decimal: return tm().mk_real(Rational::parse_decimal(e.text));
      case SExpr::Kind::Hex:
      case SExpr::Kind::Binary: return bv_literal(e);
      case SExpr::Kind::Symbol: return lookup_symbol(e);
      case SExpr::Kind::Keyword:
      case SExpr::Kind::String: fail(e, "unexpected literal in term position");
      case SExpr::Kind::List: break;
    }
    if (e.items.empty()) fail(e, "empty application");
    const SExpr& head = e.items[0];
    if (head.is_symbol("_")) return indexed_constant(e);
    if (head.is_symbol("let")) return let(e);
    if (head.is_symbol("!")) {
      if (e.items.size() < 2) fail(e, "malformed annotation");
      TermId t = term(e.items[1]);
      for (std::size_t i = 2; i + 1 < e.items.size(); i += 2)
        if (e.items[i].text == ":named") constants_.emplace(e.items[i + 1].text, t);
      return t;
    }
    if (head.is_symbol("forall") || head.is_symbol("exists"))
      throw UnsupportedError("quantifier '" + head.text + "' is out of scope");
    std::vector<unsigned> indices;
    std::string op;
    if (head.is_list()) {
      if (head.items.size() < 3 || !head.items[0].is_symbol("_")) fail(head, "malformed indexed operator");
      op = symbol(head.items[1], "an operator name");
      for (std::size_t i = 2; i < head.items.size(); ++i) indices.push_back(numeral(head.items[i]));
    } else {
      op = symbol(head, "an operator name");
    }
    std::vector<TermId> args;
    args.reserve(e.items.size() - 1);
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term(e.items[i]));
    return apply(e, op, std::move(args), indices);
  }

  TermId indexed_constant(const SExpr& e) {
    if (e.items.size() == 3 && e.items[1].is_symbol() && e.items[1].text.rfind("bv", 0) == 0) {
      const std::string digits = e.items[1].text.substr(2);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        fail(e, "malformed bit-vector constant");
      const unsigned w = numeral(e.items[2]);
      if (w == 0) fail(e, "bit-vector width must be positive");
      if (w > kMaxBvWidth) throw UnsupportedError("bit-vector width " + std::to_string(w) + " is out of scope");
      Integer v(digits, 10);
      Integer mod = Integer(1) << w;
      v %= mod;
      return tm().mk_bv(std::stoull(v.get_str()), w);
    }
    fail(e, "unknown indexed constant");
  }

  TermId let(const SExpr& e) {
    if (e.items.size() != 3 || !e.items[1].is_list()) fail(e, "malformed let");
    std::map<std::string, TermId, std::less<>> scope;
    for (const auto& b : e.items[1].items) {
      if (!b.is_list() || b.items.size() != 2) fail(b, "malformed let binding");
      scope[symbol(b.items[0], "a binder name")] = term(b.items[1]);
    }
    scopes_.push_back(std::move(scope));
    TermId body = term(e.items[2]);
    scopes_.pop_back();
    return body;
  }

  // Int operands mixed with Real ones are promoted.
  void promote(std::vector<TermId>& args) {
    bool any_real = false;
    for (TermId a : args) any_real = any_real || tm().sort(a).is_real();
    if (!any_real) return;
    for (TermId& a : args)
      if (tm().sort(a).is_int()) a = tm().to_real(a);
  }

  bool is_constant_arith(TermId t) const { return script_.tm->node(t).op == Op::NumConst; }

  TermId left_assoc(Op op, const std::vector<TermId>& args) {
    TermId acc = args[0];
    for (std::size_t i = 1; i < args.size(); ++i) acc = tm().mk(op, {acc, args[i]});
    return acc;
  }

  TermId chain(Op op, const std::vector<TermId>& args) {
    if (args.size() == 2) return tm().mk(op, args);
    std::vector<TermId> parts;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) parts.push_back(tm().mk(op, {args[i], args[i + 1]}));
    return tm().mk(Op::And, parts);
  }

  TermId apply(const SExpr& e, const std::string& op, std::vector<TermId> args, const std::vector<unsigned>& idx) {
    auto need = [&](std::size_t n) {
      if (args.size() != n) fail(e, "'" + op + "' expects " + std::to_string(n) + " operands");
    };
    auto at_least = [&](std::size_t n) {
      if (args.size() < n) fail(e, "'" + op + "' expects at least " + std::to_string(n) + " operands");
    };
    if (auto m = macros_.find(op); m != macros_.end()) return expand(e, m->second, args);
    if (!idx.empty() || op == "extract" || op == "zero_extend" || op == "sign_extend" || op == "repeat" ||
        op == "rotate_left" || op == "rotate_right")
      return apply_indexed(e, op, args, idx);

    static const std::map<std::string, Op, std::less<>> simple = {
        {"not", Op::Not},       {"ite", Op::Ite},       {"abs", Op::Abs},       {"to_real", Op::ToReal},
        {"bvnot", Op::BvNot},   {"bvneg", Op::BvNeg},   {"bvudiv", Op::BvUdiv}, {"bvurem", Op::BvUrem},
        {"bvsdiv", Op::BvSdiv}, {"bvsrem", Op::BvSrem}, {"bvsmod", Op::BvSmod}, {"bvshl", Op::BvShl},
        {"bvlshr", Op::BvLshr}, {"bvashr", Op::BvAshr}, {"bvult", Op::BvUlt},   {"bvule", Op::BvUle},
        {"bvugt", Op::BvUgt},   {"bvuge", Op::BvUge},   {"bvslt", Op::BvSlt},   {"bvsle", Op::BvSle},
        {"bvsgt", Op::BvSgt},   {"bvsge", Op::BvSge},   {"bvsub", Op::BvSub}};
    static const std::map<std::string, Op, std::less<>> assoc = {
        {"bvadd", Op::BvAdd}, {"bvmul", Op::BvMul}, {"bvand", Op::BvAnd},
        {"bvor", Op::BvOr},   {"bvxor", Op::BvXor}, {"concat", Op::Concat}};

    if (op == "and" || op == "or") {
      if (args.empty()) return tm().mk_bool(op == "and");
      if (args.size() == 1) return args[0];
      return tm().mk(op == "and" ? Op::And : Op::Or, std::move(args));
    }
    if (op == "xor") {
      at_least(2);
      return tm().mk(Op::Xor, std::move(args));
    }
    if (op == "=>") {
      at_least(2);
      TermId acc = args.back();
      for (std::size_t i = args.size() - 1; i-- > 0;) acc = tm().mk(Op::Implies, {args[i], acc});
      return acc;
    }
    if (op == "=") {
      at_least(2);
      promote(args);
      return chain(Op::Eq, args);
    }
    if (op == "distinct") {
      at_least(2);
      promote(args);
      return tm().mk(Op::Distinct, std::move(args));
    }
    if (op == "<=" || op == "<" || op == ">=" || op == ">") {
      at_least(2);
      promote(args);
      const Op o = op == "<=" ? Op::Le : op == "<" ? Op::Lt : op == ">=" ? Op::Ge : Op::Gt;
      return chain(o, args);
    }
    if (op == "+") {
      at_least(1);
      promote(args);
      if (args.size() == 1) return args[0];
      return tm().mk(Op::Add, std::move(args));
    }
    if (op == "-") {
      at_least(1);
      promote(args);
      if (args.size() == 1) {
        const Node& n = tm().node(args[0]);
        if (n.op == Op::NumConst) return n.sort.is_int() ? tm().mk_int(-n.value) : tm().mk_real(-n.value);
        return tm().mk(Op::Neg, std::move(args));
      }
      return tm().mk(Op::Sub, std::move(args));
    }
    if (op == "*") {
      at_least(2);
      promote(args);
      std::size_t non_const = 0;
      for (TermId a : args) non_const += is_constant_arith(a) ? 0 : 1;
      if (non_const > 1) throw UnsupportedError("non-linear multiplication is out of scope");
      return tm().mk(Op::Mul, std::move(args));
    }
    if (op == "/") {
      need(2);
      for (TermId& a : args)
        if (tm().sort(a).is_int()) a = tm().to_real(a);
      const Node& n0 = tm().node(args[0]);
      const Node& n1 = tm().node(args[1]);
      if (n1.op != Op::NumConst) throw UnsupportedError("division by a non-constant is out of scope");
      if (n1.value.is_zero()) fail(e, "division by zero");
      if (n0.op == Op::NumConst) return tm().mk_real(n0.value / n1.value);
      return tm().mk(Op::Div, std::move(args));
    }
    if (op == "div" || op == "mod") {
      need(2);
      const Node& n1 = tm().node(args[1]);
      if (n1.op != Op::NumConst) throw UnsupportedError("'" + op + "' by a non-constant is out of scope");
      if (n1.value.is_zero()) fail(e, "division by zero");
      return tm().mk(op == "div" ? Op::IntDiv : Op::Mod, std::move(args));
    }
    if (op == "ite" && args.size() == 3) {
      std::vector<TermId> branches{args[1], args[2]};
      promote(branches);
      return tm().mk_ite(args[0], branches[0], branches[1]);
    }
    if (auto it = simple.find(op); it != simple.end()) {
      if (it->second == Op::BvSub && args.size() > 2) return left_assoc(Op::BvSub, args);
      return tm().mk(it->second, std::move(args));
    }
    if (auto it = assoc.find(op); it != assoc.end()) {
      at_least(2);
      return left_assoc(it->second, args);
    }
    if (op == "bvnand" || op == "bvnor" || op == "bvxnor") {
      need(2);
      const Op inner = op == "bvnand" ? Op::BvAnd : op == "bvnor" ? Op::BvOr : Op::BvXor;
      return tm().mk(Op::BvNot, {tm().mk(inner, std::move(args))});
    }
    if (op == "bvcomp") {
      need(2);
      return tm().mk_ite(tm().mk_eq(args[0], args[1]), tm().mk_bv(1, 1), tm().mk_bv(0, 1));
    }
    if (out_of_scope_symbols().count(op)) throw UnsupportedError("out-of-scope symbol '" + op + "'");
    if (script_.find_decl(op) || constants_.count(op)) fail(e, "'" + op + "' is not a function");
    fail(e, "unknown operator '" + op + "'");
  }

  TermId apply_indexed(const SExpr& e, const std::string& op, const std::vector<TermId>& args,
                       const std::vector<unsigned>& idx) {
    if (args.size() != 1) fail(e, "'" + op + "' expects one operand");
    const Sort s = tm().sort(args[0]);
    if (!s.is_bv()) fail(e, "'" + op + "' expects a bit-vector operand");
    if (op == "extract") {
      if (idx.size() != 2) fail(e, "extract expects two indices");
      return tm().mk(Op::Extract, {args[0]}, idx);
    }
    if (idx.size() != 1) fail(e, "'" + op + "' expects one index");
    if (op == "zero_extend" || op == "sign_extend") {
      if (s.width + idx[0] > kMaxBvWidth) throw UnsupportedError("extension beyond 64 bits is out of scope");
      if (idx[0] == 0) return args[0];
      return tm().mk(op == "zero_extend" ? Op::ZeroExtend : Op::SignExtend, {args[0]}, idx);
    }
    if (op == "repeat") {
      if (idx[0] == 0) fail(e, "repeat count must be positive");
      if (s.width * idx[0] > kMaxBvWidth) throw UnsupportedError("repeat beyond 64 bits is out of scope");
      TermId acc = args[0];
      for (unsigned i = 1; i < idx[0]; ++i) acc = tm().mk(Op::Concat, {acc, args[0]});
      return acc;
    }
    if (op == "rotate_left" || op == "rotate_right") {
      const unsigned w = s.width;
      unsigned r = idx[0] % w;
      if (op == "rotate_right") r = (w - r) % w;
      if (r == 0) return args[0];
      // rotate_left by r: x[w-r-1:0] ++ x[w-1:w-r]
      TermId lo = tm().mk(Op::Extract, {args[0]}, {w - r - 1, 0});
      TermId hi = tm().mk(Op::Extract, {args[0]}, {w - 1, w - r});
      return tm().mk(Op::Concat, {lo, hi});
    }
    fail(e, "unknown indexed operator '" + op + "'");
  }

  TermId expand(const SExpr& e, const Macro& m, std::vector<TermId> args) {
    if (args.size() != m.params.size()) fail(e, "wrong number of arguments for defined function");
    std::map<std::string, TermId, std::less<>> scope;
    for (std::size_t i = 0; i < args.size(); ++i) scope[m.params[i].first] = coerce(args[i], m.params[i].second, e);
    // Macro bodies see only their parameters and global symbols.
    std::vector<std::map<std::string, TermId, std::less<>>> saved;
    saved.swap(scopes_);
    scopes_.push_back(std::move(scope));
    TermId body = term(m.body);
    scopes_.swap(saved);
    return coerce(body, m.sort, e);
  }

  SmtScript script_;
  std::map<std::string, TermId, std::less<>> constants_;
  std::map<std::string, Macro, std::less<>> macros_;
  std::vector<std::map<std::string, TermId, std::less<>>> scopes_;
};

}  // namespace

SmtScript parse_smt2(std::string_view text) {
  Reader r(text);
  return Interpreter().run(r.read_all());
}

}  // namespace zb::smt
