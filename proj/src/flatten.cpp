#include "zinc_bridge/flatten.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <unordered_map>

namespace zb::flatten {

using mzn::Expr;
using mzn::ExprKind;
using mzn::ExprPtr;

namespace {

enum class Ty { Bool, Int, Float };

struct VarInfo {
  Ty ty = Ty::Int;
  std::optional<Rational> lo, hi;
};

/// Linear combination plus constant.
struct Lin {
  Ty ty = Ty::Int;
  std::map<std::string, Rational> c;
  Rational k;

  bool is_const() const { return c.empty(); }
};

/// Boolean constant or variable.
struct BoolT {
  std::optional<bool> c;
  std::string v;
};

[[noreturn]] void unsupported(const std::string& what) { throw UnsupportedError(what); }

bool is_cmp(const std::string& op) {
  return op == "=" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=";
}

bool is_logic(const std::string& op) {
  return op == "/\\" || op == "\\/" || op == "->" || op == "<->" || op == "xor";
}

std::int64_t to_i64(const Rational& r, const char* what) {
  if (!r.is_integer() || !r.fits_int64()) unsupported(std::string(what) + " " + r.to_string() + " exceeds 64 bits");
  return r.to_int64();
}

Rational trunc_div(const Rational& a, const Rational& b) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.numerator().get_mpz_t(), b.numerator().get_mpz_t());
  return Rational(q);
}

Rational trunc_mod(const Rational& a, const Rational& b) {
  Integer r;
  mpz_tdiv_r(r.get_mpz_t(), a.numerator().get_mpz_t(), b.numerator().get_mpz_t());
  return Rational(r);
}

/// Constant float division as a binary64 compiler performs it.
Rational double_div(const Rational& a, const Rational& b) {
  const double q = a.to_double() / b.to_double();
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, q);
  return Rational::parse_decimal(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

class Flattener {
 public:
  fzn::FznModel run(const mzn::Model& m) {
    declare_all(m);
    std::vector<ExprPtr> roots;
    for (const auto& c : m.constraints) split(c, roots);
    std::vector<bool> consumed(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) consumed[i] = harvest_bound(roots[i]);
    // A Boolean asserted at top level and defined as a bound also bounds its variable.
    for (const auto& r : roots)
      if (r->kind == ExprKind::Ident)
        if (auto it = inits_.find(r->name); it != inits_.end()) harvest_bound(it->second);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (!consumed[i]) continue;
      // A bound only becomes a domain when both ends are known.
      const std::string& name = bound_var(roots[i]);
      const VarInfo& v = vars_.at(name);
      if (!(v.lo && v.hi) || (v.ty == Ty::Int && !(v.lo->fits_int64() && v.hi->fits_int64()))) consumed[i] = false;
    }
    bool empty = false;
    for (const auto& name : user_) {
      VarInfo& v = vars_.at(name);
      if (v.lo && v.hi && *v.lo > *v.hi) {
        v.hi = v.lo;
        empty = true;
      }
    }
    emit_declarations(m);
    if (empty) post_false();
    for (const auto& d : m.decls)
      if (d.init && defined_.count(d.name)) define(d.name, d.init);
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (!consumed[i]) root(roots[i]);
    solve(m.solve);
    for (const auto& v : out_.vars)
      if (v.is_output()) out_.output_annotations.push_back(v.name);
    return std::move(out_);
  }

 private:
  // ------------------------------------------------------------- declarations

  void declare_all(const mzn::Model& m) {
    for (const auto& d : m.decls) {
      if (vars_.count(d.name) || pars_.count(d.name)) unsupported("duplicate declaration of '" + d.name + "'");
      Ty ty = d.type.base == mzn::BaseType::Bool ? Ty::Bool : d.type.base == mzn::BaseType::Int ? Ty::Int : Ty::Float;
      if (!d.type.is_var) {
        if (!d.init) unsupported("parameter '" + d.name + "' has no value (data files are not supported)");
        // A parameter bound to a variable expression is read as a variable.
        if (only_constants(d.init)) {
          if (ty == Ty::Bool) {
            pars_.emplace(d.name, mzn::evaluate(d.init, [&](const std::string& n) { return par_value(n); }));
            continue;
          }
          auto c = constant(d.init);
          if (!c) unsupported("cannot evaluate parameter '" + d.name + "'");
          if (ty == Ty::Int) pars_.emplace(d.name, c->numerator());
          else pars_.emplace(d.name, *c);
          continue;
        }
      }
      VarInfo v;
      v.ty = ty;
      if (d.type.int_range) {
        v.lo = Rational(d.type.int_range->first);
        v.hi = Rational(d.type.int_range->second);
      } else if (d.type.int_set && !d.type.int_set->empty()) {
        v.lo = Rational(d.type.int_set->front());
        v.hi = Rational(d.type.int_set->back());
        sets_.emplace(d.name, *d.type.int_set);
      } else if (d.type.float_range) {
        v.lo = d.type.float_range->first;
        v.hi = d.type.float_range->second;
      }
      vars_.emplace(d.name, v);
      if (d.init) {
        defined_.emplace(d.name, true);
        if (ty == Ty::Bool) inits_.emplace(d.name, d.init);
      }
      user_.push_back(d.name);
    }
  }

  mzn::Value par_value(const std::string& n) const {
    auto it = pars_.find(n);
    if (it == pars_.end()) throw mzn::EvalError("not a parameter: " + n);
    return it->second;
  }

  void emit_declarations(const mzn::Model&) {
    for (const auto& name : user_) {
      fzn::FznVarDecl d = make_decl(name, vars_.at(name));
      if (auto s = sets_.find(name); s != sets_.end()) {
        std::vector<std::int64_t> el;
        for (const auto& x : s->second) el.push_back(to_i64(Rational(x), "domain value"));
        d.type.domain = fzn::IntSetValue::of(el);
      }
      d.annotations.push_back({"output_var", "output_var"});
      out_.vars.push_back(std::move(d));
    }
  }

  static fzn::FznVarDecl make_decl(const std::string& name, const VarInfo& v) {
    fzn::FznVarDecl d;
    d.name = name;
    d.type.is_var = true;
    switch (v.ty) {
      case Ty::Bool: d.type.base = fzn::BaseType::Bool; break;
      case Ty::Int:
        d.type.base = fzn::BaseType::Int;
        if (v.lo && v.hi && v.lo->fits_int64() && v.hi->fits_int64())
          d.type.domain = fzn::IntInterval{v.lo->to_int64(), v.hi->to_int64()};
        break;
      case Ty::Float:
        d.type.base = fzn::BaseType::Float;
        if (v.lo && v.hi) d.type.domain = fzn::FloatInterval{*v.lo, *v.hi};
        break;
    }
    return d;
  }

  std::string fresh(Ty ty, std::optional<Rational> lo = std::nullopt, std::optional<Rational> hi = std::nullopt) {
    std::string name;
    do name = "X_INTRODUCED_" + std::to_string(counter_++) + "_";
    while (vars_.count(name) || pars_.count(name));
    VarInfo v;
    v.ty = ty;
    if (ty == Ty::Int) {
      if (lo) lo = Rational(lo->ceil());
      if (hi) hi = Rational(hi->floor());
    }
    if (ty != Ty::Bool) {
      v.lo = lo;
      v.hi = hi;
    }
    vars_.emplace(name, v);
    out_.vars.push_back(make_decl(name, v));
    return name;
  }

  void post(std::string name, std::vector<fzn::Expr> args, const std::string& defines = {}) {
    fzn::FznConstraint c;
    c.name = std::move(name);
    c.args = std::move(args);
    if (!defines.empty()) c.annotations.push_back({"defines_var", "defines_var(" + defines + ")"});
    out_.constraints.push_back(std::move(c));
  }

  void post_false() { post("bool_clause", {fzn::ArrayLit{}, fzn::ArrayLit{}}); }

  // ------------------------------------------------------------ bound harvest

  static void split(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (e->kind == ExprKind::Binary && e->name == "/\\") {
      split(e->args[0], out);
      split(e->args[1], out);
    } else {
      out.push_back(e);
    }
  }

  bool only_constants(const ExprPtr& e) const {
    if (e->kind == ExprKind::Ident) return pars_.count(e->name) != 0;
    if (e->kind == ExprKind::Array) return false;
    for (const auto& a : e->args)
      if (!only_constants(a)) return false;
    return true;
  }

  /// Value of a variable-free numeric expression, folded as in num().
  std::optional<Rational> constant(const ExprPtr& e) {
    if (!only_constants(e) || type_of(e) == Ty::Bool) return std::nullopt;
    try {
      Lin l = num(e);
      if (l.is_const()) return l.k;
    } catch (const UnsupportedError&) {
    }
    return std::nullopt;
  }

  bool plain_var(const ExprPtr& e) const {
    return e->kind == ExprKind::Ident && vars_.count(e->name) && !defined_.count(e->name) &&
           vars_.at(e->name).ty != Ty::Bool && !sets_.count(e->name);
  }

  const std::string& bound_var(const ExprPtr& e) const {
    return e->args[0]->kind == ExprKind::Ident && vars_.count(e->args[0]->name) ? e->args[0]->name : e->args[1]->name;
  }

  bool harvest_bound(const ExprPtr& e) {
    if (e->kind != ExprKind::Binary || !is_cmp(e->name) || e->name == "!=") return false;
    std::string op = e->name;
    ExprPtr x = e->args[0];
    ExprPtr cexpr = e->args[1];
    if (!plain_var(x)) {
      std::swap(x, cexpr);
      if (!plain_var(x)) return false;
      if (op == "<") op = ">";
      else if (op == "<=") op = ">=";
      else if (op == ">") op = "<";
      else if (op == ">=") op = "<=";
    }
    auto c = constant(cexpr);
    if (!c) return false;
    VarInfo& v = vars_.at(x->name);
    if (v.ty == Ty::Float && (op == "<" || op == ">")) return false;
    Rational lo = *c, hi = *c;
    if (v.ty == Ty::Int) {
      lo = Rational(c->ceil());
      hi = Rational(c->floor());
      if (op == "<") hi = Rational(Integer(c->ceil() - 1));
      if (op == ">") lo = Rational(Integer(c->floor() + 1));
    }
    if (op == "=" || op == ">=" || op == ">") v.lo = v.lo ? std::max(*v.lo, lo) : lo;
    if (op == "=" || op == "<=" || op == "<") v.hi = v.hi ? std::min(*v.hi, hi) : hi;
    return true;
  }

  // ---------------------------------------------------------------- typing

  Ty type_of(const ExprPtr& e) const {
    switch (e->kind) {
      case ExprKind::Bool: return Ty::Bool;
      case ExprKind::Int: return Ty::Int;
      case ExprKind::Float: return Ty::Float;
      case ExprKind::Ident: {
        if (auto it = vars_.find(e->name); it != vars_.end()) return it->second.ty;
        if (auto it = pars_.find(e->name); it != pars_.end()) {
          if (std::holds_alternative<bool>(it->second)) return Ty::Bool;
          if (std::holds_alternative<Integer>(it->second)) return Ty::Int;
          return Ty::Float;
        }
        unsupported("undeclared identifier '" + e->name + "'");
      }
      case ExprKind::Unary: return e->name == "not" ? Ty::Bool : type_of(e->args[0]);
      case ExprKind::Binary: {
        const std::string& op = e->name;
        if (is_cmp(op) || is_logic(op)) return Ty::Bool;
        if (op == "/") return Ty::Float;
        if (op == "div" || op == "mod") return Ty::Int;
        const Ty a = type_of(e->args[0]);
        const Ty b = type_of(e->args[1]);
        return a == Ty::Float || b == Ty::Float ? Ty::Float : Ty::Int;
      }
      case ExprKind::Ite: return type_of(e->args[1]);
      case ExprKind::Call:
        if (e->name == "bool2int") return Ty::Int;
        if (e->name == "int2float") return Ty::Float;
        if (e->args.empty()) unsupported("call to '" + e->name + "' without arguments");
        return type_of(e->args[0]);
      case ExprKind::Array: unsupported("array expressions are not supported");
    }
    return Ty::Int;
  }

  // ------------------------------------------------------------ arithmetic

  std::optional<Rational> lo_of(const Lin& l) const { return bound(l, false); }
  std::optional<Rational> hi_of(const Lin& l) const { return bound(l, true); }

  std::optional<Rational> bound(const Lin& l, bool upper) const {
    Rational acc = l.k;
    for (const auto& [name, coef] : l.c) {
      const VarInfo& v = vars_.at(name);
      const bool want_hi = (coef.sign() > 0) == upper;
      const auto& b = want_hi ? v.hi : v.lo;
      if (v.ty == Ty::Bool) {
        acc += want_hi ? coef : Rational(0);
        continue;
      }
      if (!b) return std::nullopt;
      acc += coef * *b;
    }
    return acc;
  }

  static Lin constant_lin(Ty ty, Rational k) {
    Lin l;
    l.ty = ty;
    l.k = std::move(k);
    return l;
  }

  static Lin var_lin(Ty ty, const std::string& v) {
    Lin l;
    l.ty = ty;
    l.c[v] = Rational(1);
    return l;
  }

  static Lin scaled(Lin l, const Rational& s) {
    if (s.is_zero()) return constant_lin(l.ty, 0);
    for (auto& [_, c] : l.c) c *= s;
    l.k *= s;
    return l;
  }

  static Lin added(Lin a, const Lin& b, const Rational& sb) {
    for (const auto& [v, c] : b.c) {
      Rational& x = a.c[v];
      x += c * sb;
      if (x.is_zero()) a.c.erase(v);
    }
    a.k += b.k * sb;
    if (b.ty == Ty::Float) a.ty = Ty::Float;
    return a;
  }

  static fzn::Expr number(Ty ty, const Rational& v) {
    if (ty == Ty::Int) return fzn::Expr(to_i64(v, "integer"));
    return fzn::Expr(v);
  }

  /// Variable or constant argument.
  fzn::Expr arg(const Lin& l) {
    if (l.is_const()) return number(l.ty, l.k);
    if (l.c.size() == 1 && l.k.is_zero() && l.c.begin()->second == 1) return fzn::Expr::ident(l.c.begin()->first);
    return fzn::Expr::ident(materialize(l));
  }

  std::string var_of(const Lin& l) {
    if (!l.is_const() && l.c.size() == 1 && l.k.is_zero() && l.c.begin()->second == 1) return l.c.begin()->first;
    return materialize(l);
  }

  std::string materialize(const Lin& l, const std::string& target = {}) {
    const std::string r = target.empty() ? fresh(l.ty, lo_of(l), hi_of(l)) : target;
    std::vector<fzn::Expr> coefs{number(l.ty, -1)}, xs{fzn::Expr::ident(r)};
    for (const auto& [v, c] : l.c) {
      if (vars_.at(v).ty == Ty::Bool) unsupported("Boolean '" + v + "' used as a number");
      coefs.push_back(number(l.ty, c));
      xs.push_back(fzn::Expr::ident(v));
    }
    post(l.ty == Ty::Int ? "int_lin_eq" : "float_lin_eq", {fzn::ArrayLit(coefs), fzn::ArrayLit(xs), number(l.ty, -l.k)},
         r);
    return r;
  }

  Lin num(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Int: return constant_lin(Ty::Int, Rational(e->i));
      case ExprKind::Float: return constant_lin(Ty::Float, e->f);
      case ExprKind::Bool: unsupported("Boolean literal used as a number");
      case ExprKind::Ident: {
        if (auto it = pars_.find(e->name); it != pars_.end()) {
          if (const auto* i = std::get_if<Integer>(&it->second)) return constant_lin(Ty::Int, Rational(*i));
          if (const auto* q = std::get_if<Rational>(&it->second)) return constant_lin(Ty::Float, *q);
          unsupported("Boolean parameter '" + e->name + "' used as a number");
        }
        const Ty ty = type_of(e);
        if (ty == Ty::Bool) unsupported("Boolean '" + e->name + "' used as a number");
        return var_lin(ty, e->name);
      }
      case ExprKind::Unary:
        if (e->name == "-") return scaled(num(e->args[0]), Rational(-1));
        if (e->name == "+") return num(e->args[0]);
        unsupported("operator '" + e->name + "' in a numeric context");
      case ExprKind::Binary: return binary(e);
      case ExprKind::Ite: return numeric_ite(e);
      case ExprKind::Call: return call(e);
      case ExprKind::Array: unsupported("array expressions are not supported");
    }
    unsupported("unexpected expression");
  }

  Lin binary(const ExprPtr& e) {
    const std::string& op = e->name;
    if (is_cmp(op) || is_logic(op)) unsupported("Boolean operator '" + op + "' in a numeric context");
    Lin a = num(e->args[0]);
    Lin b = num(e->args[1]);
    const Ty ty = a.ty == Ty::Float || b.ty == Ty::Float ? Ty::Float : Ty::Int;
    if (op == "+") return added(a, b, 1);
    if (op == "-") return added(a, b, -1);
    if (op == "*") {
      if (b.is_const()) return scaled(a, b.k);
      if (a.is_const()) return scaled(b, a.k);
      auto [lo, hi] = product_bounds(a, b);
      const std::string r = fresh(ty, lo, hi);
      post(ty == Ty::Int ? "int_times" : "float_times", {arg(a), arg(b), fzn::Expr::ident(r)}, r);
      return var_lin(ty, r);
    }
    if (op == "/") {
      if (b.is_const()) {
        if (b.k.is_zero()) unsupported("float division by the constant zero");
        if (a.is_const()) return constant_lin(Ty::Float, double_div(a.k, b.k));
        const Rational inv = Rational(1) / b.k;
        if (inv.to_exact_decimal(60)) return scaled(a, inv);
      }
      const std::string r = fresh(Ty::Float);
      post("float_div", {arg(a), arg(b), fzn::Expr::ident(r)}, r);
      return var_lin(Ty::Float, r);
    }
    if (op == "div" || op == "mod") {
      const bool is_div = op == "div";
      if (b.is_const() && b.k.is_zero()) unsupported("integer division by the constant zero");
      if (a.is_const() && b.is_const()) return constant_lin(Ty::Int, is_div ? trunc_div(a.k, b.k) : trunc_mod(a.k, b.k));
      fzn::Expr divisor = safe_divisor(b);
      auto alo = lo_of(a), ahi = hi_of(a);
      std::optional<Rational> lo, hi;
      std::optional<Rational> amax;
      if (alo && ahi) amax = std::max(alo->abs(), ahi->abs());
      if (is_div) {
        if (b.is_const() && alo && ahi) {
          const Rational x = trunc_div(*alo, b.k), y = trunc_div(*ahi, b.k);
          lo = std::min(x, y);
          hi = std::max(x, y);
        } else if (amax) {
          lo = -*amax;
          hi = *amax;
        }
      } else {
        std::optional<Rational> m;
        auto blo = lo_of(b), bhi = hi_of(b);
        if (blo && bhi) m = std::max(blo->abs(), bhi->abs()) - 1;
        if (amax && (!m || *amax < *m)) m = amax;
        if (m) {
          lo = alo && alo->sign() >= 0 ? Rational(0) : -*m;
          hi = ahi && ahi->sign() <= 0 ? Rational(0) : *m;
        }
      }
      const std::string r = fresh(Ty::Int, lo, hi);
      post(is_div ? "int_div" : "int_mod", {arg(a), divisor, fzn::Expr::ident(r)}, r);
      return var_lin(Ty::Int, r);
    }
    unsupported("operator '" + op + "' is not supported");
  }

  /// Divisor that cannot be zero: y + bool2int(y = 0) when zero is possible.
  fzn::Expr safe_divisor(const Lin& b) {
    if (b.is_const()) return arg(b);
    auto lo = lo_of(b), hi = hi_of(b);
    if ((lo && lo->sign() > 0) || (hi && hi->sign() < 0)) return arg(b);
    const std::string y = var_of(b);
    const std::string z = fresh(Ty::Bool);
    post("int_eq_reif", {fzn::Expr::ident(y), fzn::Expr(0), fzn::Expr::ident(z)}, z);
    const std::string zi = fresh(Ty::Int, Rational(0), Rational(1));
    post("bool2int", {fzn::Expr::ident(z), fzn::Expr::ident(zi)}, zi);
    Lin s = added(var_lin(Ty::Int, y), var_lin(Ty::Int, zi), 1);
    return fzn::Expr::ident(materialize(s));
  }

  std::pair<std::optional<Rational>, std::optional<Rational>> product_bounds(const Lin& a, const Lin& b) const {
    auto al = lo_of(a), ah = hi_of(a), bl = lo_of(b), bh = hi_of(b);
    if (!(al && ah && bl && bh)) return {std::nullopt, std::nullopt};
    Rational c[4] = {*al * *bl, *al * *bh, *ah * *bl, *ah * *bh};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
  }

  Lin numeric_ite(const ExprPtr& e) {
    BoolT c = boolean(e->args[0]);
    if (c.c) return num(*c.c ? e->args[1] : e->args[2]);
    Lin t = num(e->args[1]);
    Lin f = num(e->args[2]);
    const Ty ty = t.ty == Ty::Float || f.ty == Ty::Float ? Ty::Float : Ty::Int;
    t.ty = f.ty = ty;
    std::optional<Rational> lo, hi;
    auto tl = lo_of(t), th = hi_of(t), fl = lo_of(f), fh = hi_of(f);
    if (tl && fl) lo = std::min(*tl, *fl);
    if (th && fh) hi = std::max(*th, *fh);
    const std::string idx = selector(c.v);
    const std::string r = fresh(ty, lo, hi);
    post(ty == Ty::Int ? "array_var_int_element" : "array_var_float_element",
         {fzn::Expr::ident(idx), fzn::ArrayLit{arg(f), arg(t)}, fzn::Expr::ident(r)}, r);
    return var_lin(ty, r);
  }

  /// 1 + bool2int(c): index 2 selects the then-branch.
  std::string selector(const std::string& c) {
    const std::string ci = fresh(Ty::Int, Rational(0), Rational(1));
    post("bool2int", {fzn::Expr::ident(c), fzn::Expr::ident(ci)}, ci);
    Lin l = var_lin(Ty::Int, ci);
    l.k = Rational(1);
    return materialize(l);
  }

  Lin call(const ExprPtr& e) {
    const std::string& f = e->name;
    if (f == "bool2int" && e->args.size() == 1) {
      BoolT b = boolean(e->args[0]);
      if (b.c) return constant_lin(Ty::Int, *b.c ? 1 : 0);
      const std::string r = fresh(Ty::Int, Rational(0), Rational(1));
      post("bool2int", {fzn::Expr::ident(b.v), fzn::Expr::ident(r)}, r);
      return var_lin(Ty::Int, r);
    }
    if (f == "int2float" && e->args.size() == 1) {
      Lin a = num(e->args[0]);
      if (a.is_const()) return constant_lin(Ty::Float, a.k);
      const std::string r = fresh(Ty::Float, lo_of(a), hi_of(a));
      post("int2float", {arg(a), fzn::Expr::ident(r)}, r);
      return var_lin(Ty::Float, r);
    }
    if (f == "abs" && e->args.size() == 1) {
      Lin a = num(e->args[0]);
      if (a.is_const()) return constant_lin(a.ty, a.k.abs());
      std::optional<Rational> hi;
      auto l = lo_of(a), h = hi_of(a);
      if (l && h) hi = std::max(l->abs(), h->abs());
      const std::string r = fresh(a.ty, Rational(0), hi);
      post(a.ty == Ty::Int ? "int_abs" : "float_abs", {arg(a), fzn::Expr::ident(r)}, r);
      return var_lin(a.ty, r);
    }
    if ((f == "min" || f == "max") && e->args.size() == 2) {
      Lin a = num(e->args[0]);
      Lin b = num(e->args[1]);
      const Ty ty = a.ty == Ty::Float || b.ty == Ty::Float ? Ty::Float : Ty::Int;
      if (a.is_const() && b.is_const()) return constant_lin(ty, f == "min" ? std::min(a.k, b.k) : std::max(a.k, b.k));
      auto al = lo_of(a), ah = hi_of(a), bl = lo_of(b), bh = hi_of(b);
      std::optional<Rational> lo, hi;
      const bool is_min = f == "min";
      if (al && bl) lo = is_min ? std::min(*al, *bl) : std::max(*al, *bl);
      if (ah && bh) hi = is_min ? std::min(*ah, *bh) : std::max(*ah, *bh);
      const std::string r = fresh(ty, lo, hi);
      post(std::string(ty == Ty::Int ? "int_" : "float_") + f, {arg(a), arg(b), fzn::Expr::ident(r)}, r);
      return var_lin(ty, r);
    }
    unsupported("function '" + f + "' is not supported");
  }

  // --------------------------------------------------------------- Booleans

  static fzn::Expr barg(const BoolT& b) { return b.c ? fzn::Expr(*b.c) : fzn::Expr::ident(b.v); }

  static BoolT bconst(bool v) {
    BoolT b;
    b.c = v;
    return b;
  }

  static BoolT bvar(std::string v) {
    BoolT b;
    b.v = std::move(v);
    return b;
  }

  /// Relation of `lhs op rhs` as `sum(c*x) rel bound` with rel in {eq, ne, le, lt}.
  struct LinRel {
    Lin lhs;
    std::string rel;
  };

  LinRel linear_relation(const ExprPtr& e) {
    std::string op = e->name;
    Lin a = num(e->args[0]);
    Lin b = num(e->args[1]);
    Lin d = (op == ">" || op == ">=") ? added(b, a, -1) : added(a, b, -1);
    if (a.ty == Ty::Float || b.ty == Ty::Float) d.ty = Ty::Float;
    std::string rel = op == "=" ? "eq" : op == "!=" ? "ne" : (op == "<" || op == ">") ? "lt" : "le";
    if (d.ty == Ty::Int && rel == "lt") {
      d.k += 1;
      rel = "le";
    }
    return {d, rel};
  }

  static bool holds(const Rational& k, const std::string& rel) {
    // sum is empty: 0 + k rel 0
    if (rel == "eq") return k.is_zero();
    if (rel == "ne") return !k.is_zero();
    if (rel == "le") return k.sign() <= 0;
    return k.sign() < 0;
  }

  std::vector<fzn::Expr> lin_args(const Lin& d) {
    std::vector<fzn::Expr> cs, xs;
    for (const auto& [v, c] : d.c) {
      cs.push_back(number(d.ty, c));
      xs.push_back(fzn::Expr::ident(v));
    }
    return {fzn::ArrayLit(cs), fzn::ArrayLit(xs), number(d.ty, -d.k)};
  }

  BoolT compare(const ExprPtr& e, bool reified) {
    const Ty ta = type_of(e->args[0]);
    if (ta == Ty::Bool) {
      if (e->name != "=" && e->name != "!=") unsupported("ordering on Booleans is not supported");
      return logic(e->name == "=" ? "<->" : "xor", e->args[0], e->args[1], reified);
    }
    LinRel lr = linear_relation(e);
    if (lr.lhs.is_const()) {
      const bool v = holds(lr.lhs.k, lr.rel);
      if (!reified && !v) post_false();
      return bconst(v);
    }
    const std::string base = std::string(lr.lhs.ty == Ty::Int ? "int_lin_" : "float_lin_") + lr.rel;
    std::vector<fzn::Expr> args = lin_args(lr.lhs);
    if (!reified) {
      post(base, args);
      return bconst(true);
    }
    const std::string r = fresh(Ty::Bool);
    args.push_back(fzn::Expr::ident(r));
    post(base + "_reif", args, r);
    return bvar(r);
  }

  void leaves(const ExprPtr& e, const std::string& op, std::vector<ExprPtr>& out) {
    if (e->kind == ExprKind::Binary && e->name == op) {
      leaves(e->args[0], op, out);
      leaves(e->args[1], op, out);
    } else {
      out.push_back(e);
    }
  }

  BoolT logic(const std::string& op, const ExprPtr& x, const ExprPtr& y, bool reified) {
    if (op == "/\\" || op == "\\/") {
      const bool conj = op == "/\\";
      std::vector<ExprPtr> ls;
      leaves(x, op, ls);
      leaves(y, op, ls);
      if (!reified && conj) {
        for (const auto& l : ls) root(l);
        return bconst(true);
      }
      std::vector<fzn::Expr> pos, neg;
      for (const auto& l : ls) {
        const bool negated = !conj && !reified && l->kind == ExprKind::Unary && l->name == "not";
        BoolT b = boolean(negated ? l->args[0] : l);
        if (b.c) {
          const bool val = negated ? !*b.c : *b.c;
          if (val != conj) {
            return bconst(val);
          }
          continue;
        }
        (negated ? neg : pos).push_back(fzn::Expr::ident(b.v));
      }
      if (pos.empty() && neg.empty()) {
        if (!reified && !conj) post_false();
        return bconst(conj);
      }
      if (!reified) {
        post("bool_clause", {fzn::ArrayLit(pos), fzn::ArrayLit(neg)});
        return bconst(true);
      }
      if (pos.size() == 1) return bvar(pos[0].as_ident());
      const std::string r = fresh(Ty::Bool);
      post(conj ? "array_bool_and" : "array_bool_or", {fzn::ArrayLit(pos), fzn::Expr::ident(r)}, r);
      return bvar(r);
    }
    BoolT a = boolean(x);
    BoolT b = boolean(y);
    if (a.c && b.c) {
      bool v = op == "->" ? (!*a.c || *b.c) : op == "<->" ? (*a.c == *b.c) : (*a.c != *b.c);
      if (!reified && !v) post_false();
      return bconst(v);
    }
    if (!reified) {
      if (op == "->") post("bool_clause", {fzn::ArrayLit{barg(b)}, fzn::ArrayLit{barg(a)}});
      else if (op == "<->") post("bool_eq", {barg(a), barg(b)});
      else post("bool_not", {barg(a), barg(b)});
      return bconst(true);
    }
    const std::string r = fresh(Ty::Bool);
    if (op == "->") post("bool_le_reif", {barg(a), barg(b), fzn::Expr::ident(r)}, r);
    else if (op == "<->") post("bool_eq_reif", {barg(a), barg(b), fzn::Expr::ident(r)}, r);
    else post("bool_xor", {barg(a), barg(b), fzn::Expr::ident(r)}, r);
    return bvar(r);
  }

  BoolT negate(const BoolT& b) {
    if (b.c) return bconst(!*b.c);
    const std::string r = fresh(Ty::Bool);
    post("bool_not", {fzn::Expr::ident(b.v), fzn::Expr::ident(r)}, r);
    return bvar(r);
  }

  BoolT boolean(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Bool: return bconst(e->b);
      case ExprKind::Ident: {
        if (auto it = pars_.find(e->name); it != pars_.end()) {
          if (const bool* b = std::get_if<bool>(&it->second)) return bconst(*b);
          unsupported("numeric parameter '" + e->name + "' used as a Boolean");
        }
        if (type_of(e) != Ty::Bool) unsupported("'" + e->name + "' used as a Boolean");
        return bvar(e->name);
      }
      case ExprKind::Unary:
        if (e->name == "not") return negate(boolean(e->args[0]));
        break;
      case ExprKind::Binary:
        if (is_cmp(e->name)) return compare(e, true);
        if (is_logic(e->name)) return logic(e->name, e->args[0], e->args[1], true);
        break;
      case ExprKind::Ite: {
        BoolT c = boolean(e->args[0]);
        if (c.c) return boolean(*c.c ? e->args[1] : e->args[2]);
        BoolT t = boolean(e->args[1]);
        BoolT f = boolean(e->args[2]);
        const std::string idx = selector(c.v);
        const std::string r = fresh(Ty::Bool);
        post("array_var_bool_element", {fzn::Expr::ident(idx), fzn::ArrayLit{barg(f), barg(t)}, fzn::Expr::ident(r)},
             r);
        return bvar(r);
      }
      default: break;
    }
    unsupported("expression is not Boolean: " + mzn::print_expr(e));
  }

  void root(const ExprPtr& e) {
    if (e->kind == ExprKind::Binary && is_cmp(e->name)) {
      compare(e, false);
      return;
    }
    if (e->kind == ExprKind::Binary && is_logic(e->name)) {
      logic(e->name, e->args[0], e->args[1], false);
      return;
    }
    if (e->kind == ExprKind::Unary && e->name == "not") {
      BoolT b = boolean(e->args[0]);
      if (b.c) {
        if (*b.c) post_false();
      } else {
        post("bool_eq", {fzn::Expr::ident(b.v), fzn::Expr(false)});
      }
      return;
    }
    BoolT b = boolean(e);
    if (b.c) {
      if (!*b.c) post_false();
    } else {
      post("bool_eq", {fzn::Expr::ident(b.v), fzn::Expr(true)});
    }
  }

  // ------------------------------------------------------------ definitions

  void define(const std::string& name, const ExprPtr& init) {
    const VarInfo& v = vars_.at(name);
    if (v.ty == Ty::Bool) {
      BoolT b = boolean(init);
      post("bool_eq", {fzn::Expr::ident(name), barg(b)}, name);
      return;
    }
    Lin l = num(init);
    if (v.ty == Ty::Float) l.ty = Ty::Float;
    if (l.ty == Ty::Float && v.ty == Ty::Int) unsupported("float value assigned to integer '" + name + "'");
    materialize(l, name);
  }

  void solve(const mzn::SolveItem& s) {
    using K = mzn::SolveItem::Kind;
    auto goal = [&](const ExprPtr& e, fzn::SolveKind kind) {
      fzn::FznSolveGoal g;
      g.kind = kind;
      Lin l = num(e);
      std::string v = l.is_const() ? materialize(l) : var_of(l);
      g.objective = fzn::Expr::ident(v);
      out_.solve_items.push_back(std::move(g));
    };
    switch (s.kind) {
      case K::Satisfy: out_.solve_items.push_back({}); break;
      case K::Minimize: goal(s.objective, fzn::SolveKind::Minimize); break;
      case K::Maximize: goal(s.objective, fzn::SolveKind::Maximize); break;
      case K::LexMinimize:
        for (const auto& o : s.lex) goal(o, fzn::SolveKind::Minimize);
        break;
    }
  }

  fzn::FznModel out_;
  std::unordered_map<std::string, VarInfo> vars_;
  std::unordered_map<std::string, mzn::Value> pars_;
  std::unordered_map<std::string, std::vector<Integer>> sets_;
  std::unordered_map<std::string, bool> defined_;
  std::unordered_map<std::string, ExprPtr> inits_;
  std::vector<std::string> user_;
  std::size_t counter_ = 0;
};

}  // namespace

fzn::FznModel flatten(const mzn::Model& model) { return Flattener().run(model); }

std::string flatten_text(std::string_view mzn_text) {
  return fzn::print_fzn(flatten(mzn::parse_model(mzn_text)));
}

}  // namespace zb::flatten
