#include "zinc_bridge/fzn2omt.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "zinc_bridge/builtins.hpp"

namespace zb::fzn2omt {

using fzn::Builtin;
using fzn::Expr;
using smt::Op;
using smt::Sort;
using smt::TermId;

std::string_view int_mode_name(IntMode m) { return m == IntMode::La ? "la" : "bv"; }

std::optional<IntMode> int_mode_from_string(std::string_view s) {
  if (s == "la") return IntMode::La;
  if (s == "bv") return IntMode::Bv;
  return std::nullopt;
}

namespace {

Integer big(std::int64_t v) { return Integer(static_cast<long>(v)); }

Integer pow2(unsigned k) {
  Integer r = 1;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), k);
  return r;
}

/// Smallest two's-complement width holding every value of [lo, hi].
unsigned signed_bits(const Integer& lo, const Integer& hi) {
  unsigned w = 2;
  while (lo < -pow2(w - 1) || hi > pow2(w - 1) - 1) ++w;
  return w;
}

std::optional<std::pair<std::int64_t, std::int64_t>> int_bounds(const fzn::Domain& d) {
  if (const auto* i = std::get_if<fzn::IntInterval>(&d)) return std::pair{i->lo, i->hi};
  if (const auto* s = std::get_if<fzn::IntSetValue>(&d); s && !s->elems.empty())
    return std::pair{s->elems.front(), s->elems.back()};
  return std::nullopt;
}

/// Integer-valued term with its value range when known. In bv mode the range
/// is always known and decides the width of derived terms.
struct Num {
  TermId t;
  std::optional<Integer> lo, hi;
  bool bounded() const { return lo.has_value(); }
};

/// Membership view of a set argument over the union of the universes involved.
struct SetTerm {
  std::map<std::int64_t, TermId> in;
};

class Encoder {
 public:
  Encoder(const fzn::FznModel& m, const EncodeConfig& cfg, smt::SmtScript& s)
      : m_(m), cfg_(cfg), s_(s), tm_(*s.tm), bv_(cfg.int_mode == IntMode::Bv) {
    if (bv_) {
      width_ = cfg.bv_width ? *cfg.bv_width : default_bv_width(m);
      if (width_ < 2 || width_ > 63)
        throw ValidationError("bv width " + std::to_string(width_) + " outside [2, 63]");
    }
    for (const auto& v : m.vars) var_index_.emplace(v.name, &v);
    for (const auto& p : m.params) param_index_.emplace(p.name, &p);
    for (const auto& v : m.vars) taken_.insert(v.name);
    for (const auto& p : m.params) taken_.insert(p.name);
  }

  void set_markers(const MarkedModel* mm) { markers_ = mm; }

  void declare_all() {
    for (const auto& v : m_.vars)
      if (!v.type.is_array()) declare(v, true);
  }

  void constraints() {
    for (std::size_t i = 0; i < m_.constraints.size(); ++i) {
      const PbMarker* mk = markers_ ? markers_->marker_for(i) : nullptr;
      if (mk && cfg_.pb_rewrite) encode_pb(*mk);
      else constraint(m_.constraints[i]);
    }
  }

  void objectives() {
    std::size_t goals = 0;
    for (const auto& g : m_.solve_items) {
      if (g.kind == fzn::SolveKind::Satisfy || !g.objective) continue;
      smt::Objective o;
      o.dir = g.kind == fzn::SolveKind::Minimize ? smt::Direction::Minimize : smt::Direction::Maximize;
      if (is_float_expr(*g.objective)) {
        o.term = real(*g.objective);
      } else {
        o.term = integer(*g.objective).t;
        o.bv_signed = bv_;
      }
      s_.objectives.push_back(o);
      ++goals;
    }
    if (m_.solve_items.size() > 1) {
      if (cfg_.multi_objective == smt::Combination::Pareto)
        throw UnsupportedError("Pareto combination of FlatZinc solve items is not supported");
      s_.combination = cfg_.multi_objective;
      s_.combination_explicit = goals > 1;
    }
  }

  void constraint(const fzn::FznConstraint& c);

  std::vector<TermId> take_assertions() { return std::move(out_); }

 private:
  // ---------------------------------------------------------------- symbols

  std::string fresh_name(const std::string& base) {
    std::string name = base;
    while (taken_.count(name)) name += "_";
    taken_.insert(name);
    return name;
  }

  std::string aux_name() {
    for (;;) {
      std::string n = "zb__cn" + std::to_string(aux_counter_++);
      if (!taken_.count(n)) {
        taken_.insert(n);
        return n;
      }
    }
  }

  Sort int_sort() const { return bv_ ? Sort::bitvec(width_) : Sort::integer(); }

  void declare(const fzn::FznVarDecl& v, bool with_domain) {
    if (declared_.count(v.name)) return;
    declared_.insert(v.name);
    switch (v.type.base) {
      case fzn::BaseType::Bool: scalars_[v.name] = s_.declare(v.name, Sort::boolean()); break;
      case fzn::BaseType::Float:
        if (bv_) throw UnsupportedError("float variable '" + v.name + "' cannot be encoded in bv mode");
        scalars_[v.name] = s_.declare(v.name, Sort::real());
        break;
      case fzn::BaseType::Int: {
        auto b = int_bounds(v.type.domain);
        if (bv_) {
          if (!b)
            throw UnsupportedError("int variable '" + v.name + "' has no finite domain, required in bv mode");
          if (signed_bits(big(b->first), big(b->second)) > width_)
            throw UnsupportedError("domain of '" + v.name + "' does not fit in " + std::to_string(width_) +
                                   "-bit two's complement");
        }
        scalars_[v.name] = s_.declare(v.name, int_sort());
        break;
      }
      case fzn::BaseType::SetOfInt: {
        std::vector<std::int64_t> universe;
        if (const auto* i = std::get_if<fzn::IntInterval>(&v.type.domain)) {
          for (auto e = i->lo; e <= i->hi; ++e) universe.push_back(e);
        } else if (const auto* st = std::get_if<fzn::IntSetValue>(&v.type.domain)) {
          universe = st->elems;
        } else {
          throw UnsupportedError("set variable '" + v.name + "' has no finite universe");
        }
        SetTerm st;
        for (auto e : universe) {
          const std::string base = v.name + (e < 0 ? "__inm" + std::to_string(-e) : "__in" + std::to_string(e));
          st.in[e] = s_.declare(fresh_name(base), Sort::boolean());
        }
        sets_[v.name] = std::move(st);
        break;
      }
    }
    if (with_domain) domain_assertions(v);
    if (v.assignment && !v.type.is_array()) {
      if (v.type.base == fzn::BaseType::SetOfInt) {
        set_equal(set_of(Expr::ident(v.name)), set_of(*v.assignment));
      } else {
        add(equal_exprs(Expr::ident(v.name), *v.assignment, v.type.base));
      }
    }
  }

  void domain_assertions(const fzn::FznVarDecl& v) {
    if (v.type.base == fzn::BaseType::Int) {
      const TermId x = scalars_.at(v.name);
      if (auto b = int_bounds(v.type.domain)) {
        add(le(int_const(big(b->first)), num_of_var(v)));
        add(le(num_of_var(v), int_const(big(b->second))));
      }
      if (const auto* st = std::get_if<fzn::IntSetValue>(&v.type.domain)) {
        if (st->elems.empty()) {
          add(tm_.mk_bool(false));
        } else if (st->elems.back() - st->elems.front() + 1 != static_cast<std::int64_t>(st->elems.size())) {
          std::vector<TermId> alts;
          for (auto e : st->elems) alts.push_back(tm_.mk_eq(x, int_const(big(e)).t));
          add(tm_.mk_or(alts));
        }
      }
    } else if (v.type.base == fzn::BaseType::Float) {
      if (const auto* f = std::get_if<fzn::FloatInterval>(&v.type.domain)) {
        const TermId x = scalars_.at(v.name);
        add(tm_.mk_le(tm_.mk_real(f->lo), x));
        add(tm_.mk_le(x, tm_.mk_real(f->hi)));
      }
    }
  }

  void add(TermId t) {
    const auto& n = tm_.node(t);
    if (n.op == Op::BoolConst && n.bits == 1) return;
    out_.push_back(t);
  }

  // -------------------------------------------------------------- arguments

  /// Follows identifiers and array accesses down to a scalar expression.
  Expr scalar(const Expr& e) const {
    if (e.is_ident()) {
      if (auto it = param_index_.find(e.as_ident()); it != param_index_.end()) return it->second->value;
      return e;
    }
    if (e.is_access()) {
      const auto& a = e.as_access();
      return scalar(elements(Expr::ident(a.name)).at(static_cast<std::size_t>(a.index - 1)));
    }
    return e;
  }

  fzn::ArrayLit elements(const Expr& e) const {
    if (e.is_array()) return e.as_array();
    if (e.is_ident()) {
      if (auto it = param_index_.find(e.as_ident()); it != param_index_.end()) return it->second->value.as_array();
      if (auto it = var_index_.find(e.as_ident()); it != var_index_.end() && it->second->assignment)
        return it->second->assignment->as_array();
    }
    throw ValidationError("expected an array argument");
  }

  const fzn::FznVarDecl* var_decl(const Expr& e) const {
    const Expr s = scalar(e);
    if (!s.is_ident()) return nullptr;
    auto it = var_index_.find(s.as_ident());
    if (it == var_index_.end()) throw ValidationError("undeclared identifier '" + s.as_ident() + "'");
    return it->second;
  }

  TermId var_term(const fzn::FznVarDecl& v) {
    if (!declared_.count(v.name)) declare(v, false);
    return scalars_.at(v.name);
  }

  bool is_float_expr(const Expr& e) const {
    const Expr s = scalar(e);
    if (s.is_float()) return true;
    if (const auto* v = var_decl(s)) return v->type.base == fzn::BaseType::Float;
    return false;
  }

  TermId boolean(const Expr& e) {
    const Expr s = scalar(e);
    if (s.is_bool()) return tm_.mk_bool(s.as_bool());
    if (const auto* v = var_decl(s)) return var_term(*v);
    throw ValidationError("expected a Boolean argument");
  }

  Num num_of_var(const fzn::FznVarDecl& v) {
    Num n{var_term(v), std::nullopt, std::nullopt};
    if (auto b = int_bounds(v.type.domain)) {
      n.lo = big(b->first);
      n.hi = big(b->second);
    }
    return n;
  }

  Num integer(const Expr& e) {
    const Expr s = scalar(e);
    if (s.is_int()) return int_const(big(s.as_int()));
    if (s.is_bool()) return int_const(s.as_bool() ? 1 : 0);
    if (const auto* v = var_decl(s)) return num_of_var(*v);
    throw ValidationError("expected an integer argument");
  }

  TermId real(const Expr& e) {
    const Expr s = scalar(e);
    if (s.is_float()) return tm_.mk_real(s.as_float());
    if (s.is_int()) return tm_.mk_real(Rational(s.as_int()));
    if (const auto* v = var_decl(s)) {
      if (bv_) throw UnsupportedError("float variable '" + v->name + "' cannot be encoded in bv mode");
      const TermId t = var_term(*v);
      return tm_.sort(t).is_int() ? tm_.to_real(t) : t;
    }
    throw ValidationError("expected a float argument");
  }

  Rational par_float(const Expr& e) const {
    const Expr s = scalar(e);
    if (s.is_float()) return s.as_float();
    if (s.is_int()) return Rational(s.as_int());
    throw ValidationError("expected a float constant");
  }

  Integer par_int(const Expr& e) const {
    const Expr s = scalar(e);
    if (s.is_int()) return big(s.as_int());
    throw ValidationError("expected an integer constant");
  }

  SetTerm set_of(const Expr& e) {
    const Expr s = scalar(e);
    SetTerm st;
    if (s.is_set()) {
      for (auto x : s.as_set().elems) st.in[x] = tm_.mk_bool(true);
      return st;
    }
    if (const auto* v = var_decl(s)) {
      if (!declared_.count(v->name)) declare(*v, false);
      return sets_.at(v->name);
    }
    throw ValidationError("expected a set argument");
  }

  TermId member(const SetTerm& s, std::int64_t e) {
    auto it = s.in.find(e);
    return it == s.in.end() ? tm_.mk_bool(false) : it->second;
  }

  std::string scalar_name(const Expr& e) const {
    const Expr s = scalar(e);
    return s.is_ident() ? s.as_ident() : std::string();
  }

  // ------------------------------------------------------- integer terms

  Num int_const(const Integer& k) {
    if (!bv_) return Num{tm_.mk_int(Rational(k)), k, k};
    const unsigned w = std::max(width_, signed_bits(k, k));
    return Num{bv_const(k, w), k, k};
  }

  TermId bv_const(const Integer& k, unsigned w) {
    if (w > smt::kMaxBvWidth) too_wide();
    Integer u = k;
    if (u < 0) u += pow2(w);
    const std::uint64_t bits = std::stoull(u.get_str());
    return tm_.mk_bv(bits, w);
  }

  [[noreturn]] static void too_wide() {
    throw UnsupportedError("bv-mode intermediate term needs more than 64 bits");
  }

  unsigned width(const Num& n) const { return tm_.sort(n.t).width; }

  TermId fit(const Num& n, unsigned w) {
    const unsigned have = width(n);
    if (w > smt::kMaxBvWidth) too_wide();
    if (have == w) return n.t;
    const auto& node = tm_.node(n.t);
    if (node.op == Op::BvConst) return bv_const(*n.lo, w);
    return tm_.mk(Op::SignExtend, {n.t}, {w - have});
  }

  unsigned width_for(const Integer& lo, const Integer& hi) const { return std::max(width_, signed_bits(lo, hi)); }

  void require_range(const Num& n, const char* what) const {
    if (!n.bounded()) throw UnsupportedError(std::string("unbounded operand in ") + what);
  }

  /// sum(c_i * x_i) + k
  Num linear(const std::vector<std::pair<Integer, Num>>& terms, const Integer& k) {
    std::optional<Integer> lo = k, hi = k;
    Integer magnitude = abs(k);
    for (const auto& [c, x] : terms) {
      if (!x.bounded()) {
        lo.reset();
        hi.reset();
        continue;
      }
      const Integer a = c * *x.lo, b = c * *x.hi;
      if (lo) {
        *lo += std::min(a, b);
        *hi += std::max(a, b);
      }
      magnitude += std::max(abs(a), abs(b));
    }
    if (!bv_) {
      std::vector<TermId> parts;
      for (const auto& [c, x] : terms) {
        if (c == 0) continue;
        if (c == 1) parts.push_back(x.t);
        else if (c == -1) parts.push_back(tm_.mk(Op::Neg, {x.t}));
        else parts.push_back(tm_.mk(Op::Mul, {tm_.mk_int(Rational(c)), x.t}));
      }
      if (k != 0 || parts.empty()) parts.push_back(tm_.mk_int(Rational(k)));
      return Num{tm_.mk_add(parts, Sort::integer()), lo, hi};
    }
    const unsigned w = width_for(-magnitude, magnitude);
    std::vector<TermId> parts;
    for (const auto& [c, x] : terms) {
      if (c == 0) continue;
      const TermId xt = fit(x, w);
      if (c == 1) parts.push_back(xt);
      else if (c == -1) parts.push_back(tm_.mk(Op::BvNeg, {xt}));
      else parts.push_back(tm_.mk(Op::BvMul, {bv_const(c, w), xt}));
    }
    if (k != 0 || parts.empty()) parts.push_back(bv_const(k, w));
    TermId acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = tm_.mk(Op::BvAdd, {acc, parts[i]});
    return Num{acc, lo, hi};
  }

  Num sum(const std::vector<Num>& xs) {
    std::vector<std::pair<Integer, Num>> terms;
    for (const auto& x : xs) terms.emplace_back(1, x);
    return linear(terms, 0);
  }

  enum class Rel { Eq, Le, Lt };

  TermId compare(const Num& a, Rel r, const Num& b) {
    TermId x = a.t, y = b.t;
    if (bv_) {
      const unsigned w = std::max(width(a), width(b));
      x = fit(a, w);
      y = fit(b, w);
      if (r == Rel::Le) return tm_.mk(Op::BvSle, {x, y});
      if (r == Rel::Lt) return tm_.mk(Op::BvSlt, {x, y});
      return tm_.mk_eq(x, y);
    }
    if (r == Rel::Le) return tm_.mk_le(x, y);
    if (r == Rel::Lt) return tm_.mk_lt(x, y);
    return tm_.mk_eq(x, y);
  }

  TermId le(const Num& a, const Num& b) { return compare(a, Rel::Le, b); }
  TermId eq(const Num& a, const Num& b) { return compare(a, Rel::Eq, b); }

  Num ite(TermId c, const Num& a, const Num& b) {
    std::optional<Integer> lo, hi;
    if (a.bounded() && b.bounded()) {
      lo = std::min(*a.lo, *b.lo);
      hi = std::max(*a.hi, *b.hi);
    }
    if (!bv_) return Num{tm_.mk_ite(c, a.t, b.t), lo, hi};
    const unsigned w = std::max(width(a), width(b));
    return Num{tm_.mk_ite(c, fit(a, w), fit(b, w)), lo, hi};
  }

  Num indicator(TermId b) { return ite(b, int_const(1), int_const(0)); }

  Num negate(const Num& a) { return linear({{-1, a}}, 0); }

  Num absolute(const Num& a) {
    if (!bv_) {
      std::optional<Integer> lo, hi;
      if (a.bounded()) {
        hi = std::max(abs(*a.lo), abs(*a.hi));
        lo = (*a.lo <= 0 && *a.hi >= 0) ? Integer(0) : std::min(abs(*a.lo), abs(*a.hi));
      }
      return Num{tm_.mk(Op::Abs, {a.t}), lo, hi};
    }
    return ite(compare(a, Rel::Lt, int_const(0)), negate(a), a);
  }

  Num minimum(const Num& a, const Num& b) { return ite(le(a, b), a, b); }
  Num maximum(const Num& a, const Num& b) { return ite(le(b, a), a, b); }

  /// Finite list of candidate values of a bounded term, for case splits.
  std::vector<Integer> cases(const Num& n, const char* what) {
    if (!n.bounded() || *n.hi - *n.lo >= 64)
      throw UnsupportedError(std::string("non-linear ") + what +
                             " needs an operand with at most 64 values in la mode");
    std::vector<Integer> out;
    for (Integer v = *n.lo; v <= *n.hi; ++v) out.push_back(v);
    return out;
  }

  bool is_const(const Num& n) const { return n.bounded() && *n.lo == *n.hi && tm_.node(n.t).is_const(); }

  Num product(const Num& a, const Num& b) {
    if (is_const(a)) return linear({{*a.lo, b}}, 0);
    if (is_const(b)) return linear({{*b.lo, a}}, 0);
    if (bv_) {
      const Integer c[] = {*a.lo * *b.lo, *a.lo * *b.hi, *a.hi * *b.lo, *a.hi * *b.hi};
      const Integer lo = *std::min_element(std::begin(c), std::end(c));
      const Integer hi = *std::max_element(std::begin(c), std::end(c));
      const unsigned w = std::max({width_for(lo, hi), width(a), width(b)});
      return Num{tm_.mk(Op::BvMul, {fit(a, w), fit(b, w)}), lo, hi};
    }
    const bool split_b = b.bounded() && (!a.bounded() || *b.hi - *b.lo <= *a.hi - *a.lo);
    const Num& sel = split_b ? b : a;
    const Num& other = split_b ? a : b;
    const auto vs = cases(sel, "int_times");
    Num acc = linear({{vs.back(), other}}, 0);
    for (std::size_t i = vs.size() - 1; i-- > 0;)
      acc = ite(eq(sel, int_const(vs[i])), linear({{vs[i], other}}, 0), acc);
    return acc;
  }

  /// Quotient rounded toward zero by a non-zero constant, in la mode.
  Num tdiv_const(const Num& a, const Integer& c) {
    std::optional<Integer> lo, hi;
    if (a.bounded()) {
      const Integer m = std::max(abs(*a.lo), abs(*a.hi)) / abs(c);
      lo = -m;
      hi = m;
    }
    const Integer ac = abs(c);
    const TermId pos = tm_.mk(Op::IntDiv, {a.t, tm_.mk_int(Rational(ac))});
    const TermId negq = tm_.mk(Op::Neg, {tm_.mk(Op::IntDiv, {tm_.mk(Op::Neg, {a.t}), tm_.mk_int(Rational(ac))})});
    TermId q = tm_.mk_ite(tm_.mk_le(tm_.mk_int(0), a.t), pos, negq);
    if (c < 0) q = tm_.mk(Op::Neg, {q});
    return Num{q, lo, hi};
  }

  Num quotient(const Num& a, const Num& b) {
    if (bv_) {
      const Integer m = std::max(abs(*a.lo), abs(*a.hi));
      const unsigned w = std::max({width(a), width(b)}) + 1;
      return Num{tm_.mk(Op::BvSdiv, {fit(a, w), fit(b, w)}), -m, m};
    }
    if (is_const(b)) {
      if (*b.lo == 0) return int_const(0);
      return tdiv_const(a, *b.lo);
    }
    const auto vs = cases(b, "int_div");
    std::optional<Num> acc;
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) {
      if (*it == 0) continue;
      const Num q = tdiv_const(a, *it);
      acc = acc ? ite(eq(b, int_const(*it)), q, *acc) : q;
    }
    return acc ? *acc : int_const(0);
  }

  Num remainder(const Num& a, const Num& b) {
    if (bv_) {
      const Integer m = std::max(abs(*a.lo), abs(*a.hi));
      const unsigned w = std::max({width(a), width(b)}) + 1;
      return Num{tm_.mk(Op::BvSrem, {fit(a, w), fit(b, w)}), -m, m};
    }
    auto rem_const = [&](const Integer& c) {
      Num r = linear({{1, a}, {-c, tdiv_const(a, c)}}, 0);
      if (a.bounded()) {
        const Integer m = std::max(abs(*a.lo), abs(*a.hi));
        r.lo = -m;
        r.hi = m;
      }
      return r;
    };
    if (is_const(b)) return *b.lo == 0 ? int_const(0) : rem_const(*b.lo);
    const auto vs = cases(b, "int_mod");
    std::optional<Num> acc;
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) {
      if (*it == 0) continue;
      const Num r = rem_const(*it);
      acc = acc ? ite(eq(b, int_const(*it)), r, *acc) : r;
    }
    return acc ? *acc : int_const(0);
  }

  // ------------------------------------------------------------ definitions

  /// Asserts target = value, with the variable on the left when it is one.
  void define(const Expr& target, const Num& value) {
    const Expr s = scalar(target);
    const auto* v = var_decl(s);
    if (!v) {
      add(eq(integer(s), value));
      return;
    }
    const Num x = num_of_var(*v);
    if (!bv_ || width(value) == width_) {
      add(tm_.mk_eq(x.t, bv_ ? value.t : value.t));
      return;
    }
    if (width(value) < width_) {
      add(tm_.mk_eq(x.t, fit(value, width_)));
      return;
    }
    add(tm_.mk_eq(x.t, tm_.mk(Op::Extract, {value.t}, {width_ - 1, 0})));
    if (!value.bounded() || signed_bits(*value.lo, *value.hi) > width_) add(eq(x, value));
  }

  void define_bool(const Expr& target, TermId value) {
    const Expr s = scalar(target);
    if (s.is_bool()) {
      add(s.as_bool() ? value : tm_.mk_not(value));
      return;
    }
    add(tm_.mk_eq(boolean(s), value));
  }

  void define_real(const Expr& target, TermId value) {
    const Expr s = scalar(target);
    add(tm_.mk_eq(real(s), value));
  }

  bool has_finite_domain(const Expr& e) const {
    const auto* v = var_decl(e);
    if (!v) return true;
    if (v->type.base == fzn::BaseType::Float) {
      const auto* f = std::get_if<fzn::FloatInterval>(&v->type.domain);
      return f && f->lo == f->hi;
    }
    return v->type.base == fzn::BaseType::Bool || int_bounds(v->type.domain).has_value();
  }

  /// Index of the term a linear equation is solved for: the defines_var
  /// target, else the first variable without a finite domain.
  std::optional<std::size_t> solved_for(const fzn::FznConstraint& c, const fzn::ArrayLit& xs,
                                        const std::function<bool(std::size_t)>& usable) const {
    if (auto t = c.defined_var())
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const Expr s = scalar(xs[i]);
        if (s.is_ident() && s.as_ident() == *t && usable(i)) return i;
      }
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!has_finite_domain(xs[i]) && usable(i)) return i;
    return std::nullopt;
  }

  // ------------------------------------------------------------ linear forms

  void int_linear(const fzn::FznConstraint& c, Rel rel, std::optional<Expr> reif, bool negated) {
    const auto cs = elements(c.args[0]);
    const auto xs = elements(c.args[1]);
    const Integer k = par_int(c.args[2]);
    if (rel == Rel::Eq && !reif && !negated) {
      auto idx = solved_for(c, xs, [&](std::size_t i) {
        const Integer ci = par_int(cs[i]);
        return (ci == 1 || ci == -1) && var_decl(xs[i]) != nullptr;
      });
      if (idx) {
        const Integer ct = par_int(cs[*idx]);
        std::vector<std::pair<Integer, Num>> rest;
        for (std::size_t i = 0; i < xs.size(); ++i)
          if (i != *idx) rest.emplace_back(ct == 1 ? Integer(-par_int(cs[i])) : par_int(cs[i]), integer(xs[i]));
        define(xs[*idx], linear(rest, ct == 1 ? k : Integer(-k)));
        return;
      }
    }
    std::vector<std::pair<Integer, Num>> terms;
    for (std::size_t i = 0; i < xs.size(); ++i) terms.emplace_back(par_int(cs[i]), integer(xs[i]));
    TermId cond = compare(linear(terms, 0), rel, int_const(k));
    if (negated) cond = tm_.mk_not(cond);
    if (reif) define_bool(*reif, cond);
    else add(cond);
  }

  TermId real_linear(const std::vector<Rational>& cs, const fzn::ArrayLit& xs, const Rational& k) {
    std::vector<TermId> parts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (cs[i].is_zero()) continue;
      const TermId x = real(xs[i]);
      parts.push_back(cs[i] == Rational(1) ? x : tm_.mk(Op::Mul, {tm_.mk_real(cs[i]), x}));
    }
    if (!k.is_zero() || parts.empty()) parts.push_back(tm_.mk_real(k));
    return tm_.mk_add(parts, Sort::real());
  }

  TermId real_compare(TermId a, Rel r, TermId b) {
    if (r == Rel::Le) return tm_.mk_le(a, b);
    if (r == Rel::Lt) return tm_.mk_lt(a, b);
    return tm_.mk_eq(a, b);
  }

  void float_linear(const fzn::FznConstraint& c, Rel rel, std::optional<Expr> reif, bool negated) {
    if (bv_) throw UnsupportedError("'" + c.name + "' cannot be encoded in bv mode");
    std::vector<Rational> cs;
    for (const auto& e : elements(c.args[0])) cs.push_back(par_float(e));
    const auto xs = elements(c.args[1]);
    const Rational k = par_float(c.args[2]);
    if (rel == Rel::Eq && !reif && !negated) {
      auto idx = solved_for(c, xs, [&](std::size_t i) { return !cs[i].is_zero() && var_decl(xs[i]) != nullptr; });
      if (idx) {
        const Rational ct = cs[*idx];
        std::vector<Rational> rest_c;
        fzn::ArrayLit rest_x;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          if (i == *idx) continue;
          rest_c.push_back(-cs[i] / ct);
          rest_x.push_back(xs[i]);
        }
        define_real(xs[*idx], real_linear(rest_c, rest_x, k / ct));
        return;
      }
    }
    TermId cond = real_compare(real_linear(cs, xs, 0), rel, tm_.mk_real(k));
    if (negated) cond = tm_.mk_not(cond);
    if (reif) define_bool(*reif, cond);
    else add(cond);
  }

  // --------------------------------------------------------------- globals

  void element(const fzn::FznConstraint& c, fzn::BaseType base) {
    const Num idx = integer(c.args[0]);
    const auto arr = elements(c.args[1]);
    const Expr& v = c.args[2];
    std::vector<TermId> alts;
    for (std::size_t j = 0; j < arr.size(); ++j) {
      const TermId at = eq(idx, int_const(static_cast<long>(j + 1)));
      TermId same;
      if (base == fzn::BaseType::Bool) same = tm_.mk_eq(boolean(v), boolean(arr[j]));
      else if (base == fzn::BaseType::Float) same = tm_.mk_eq(real(v), real(arr[j]));
      else same = eq(integer(v), integer(arr[j]));
      alts.push_back(tm_.mk_and({at, same}));
    }
    add(le(int_const(1), idx));
    add(le(idx, int_const(static_cast<long>(arr.size()))));
    if (!has_finite_domain(v) && !arr.empty()) {
      if (base == fzn::BaseType::Float) {
        TermId acc = real(arr.back());
        for (std::size_t j = arr.size() - 1; j-- > 0;)
          acc = tm_.mk_ite(eq(idx, int_const(static_cast<long>(j + 1))), real(arr[j]), acc);
        define_real(v, acc);
      } else {
        Num acc = integer(arr.back());
        for (std::size_t j = arr.size() - 1; j-- > 0;)
          acc = ite(eq(idx, int_const(static_cast<long>(j + 1))), integer(arr[j]), acc);
        define(v, acc);
      }
    }
    add(tm_.mk_or(alts));
  }

  void all_different(const fzn::FznConstraint& c) {
    const auto xs = elements(c.args[0]);
    std::vector<Num> ns;
    for (const auto& x : xs) ns.push_back(integer(x));
    for (std::size_t i = 0; i < ns.size(); ++i)
      for (std::size_t j = i + 1; j < ns.size(); ++j) add(tm_.mk_not(eq(ns[i], ns[j])));
  }

  void table(const fzn::FznConstraint& c, bool is_bool) {
    const auto xs = elements(c.args[0]);
    const auto flat = elements(c.args[1]);
    if (xs.empty()) return;
    if (flat.size() % xs.size() != 0) throw ValidationError("table size is not a multiple of the arity");
    std::vector<TermId> rows;
    for (std::size_t r = 0; r < flat.size() / xs.size(); ++r) {
      std::vector<TermId> cells;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const Expr& t = flat[r * xs.size() + i];
        cells.push_back(is_bool ? tm_.mk_eq(boolean(xs[i]), boolean(t)) : eq(integer(xs[i]), integer(t)));
      }
      rows.push_back(tm_.mk_and(cells));
    }
    add(tm_.mk_or(rows));
  }

  /// Sorting network over Boolean terms; returns the sorted outputs.
  std::vector<TermId> sorted_outputs(const std::vector<TermId>& inputs) {
    if (inputs.size() <= 1) return inputs;
    std::vector<cardnet::Lit> lits;
    for (std::uint32_t i = 0; i < inputs.size(); ++i) lits.push_back(cardnet::pos(i));
    cardnet::VarPool pool(static_cast<std::uint32_t>(inputs.size()));
    const auto net = cardnet::build_sorting_network(lits, pool);
    auto map = lit_mapper(inputs, pool.next());
    emit_clauses(net.clauses, map);
    std::vector<TermId> outs;
    for (auto l : net.outputs) outs.push_back(map(l));
    return outs;
  }

  /// Maps network literals to terms, declaring auxiliaries in creation order.
  std::function<TermId(cardnet::Lit)> lit_mapper(const std::vector<TermId>& inputs, std::uint32_t next) {
    auto vars = std::make_shared<std::vector<TermId>>(inputs);
    for (std::uint32_t v = static_cast<std::uint32_t>(inputs.size()); v < next; ++v)
      vars->push_back(s_.declare(aux_name(), Sort::boolean()));
    return [this, vars](cardnet::Lit l) {
      const TermId t = vars->at(l.var);
      return l.negated ? tm_.mk_not(t) : t;
    };
  }

  void emit_clauses(const std::vector<cardnet::Clause>& clauses, const std::function<TermId(cardnet::Lit)>& map) {
    for (const auto& cl : clauses) {
      std::vector<TermId> lits;
      for (auto l : cl) lits.push_back(map(l));
      add(tm_.mk_or(lits));
    }
  }

  void encode_pb(const PbMarker& mk) {
    std::vector<TermId> inputs;
    std::map<std::string, std::uint32_t> ids;
    std::vector<cardnet::WeightedLit> terms;
    for (const auto& [name, w] : mk.terms) {
      auto [it, fresh] = ids.emplace(name, static_cast<std::uint32_t>(inputs.size()));
      if (fresh) inputs.push_back(boolean(Expr::ident(name)));
      terms.push_back({cardnet::pos(it->second), w});
    }
    cardnet::VarPool pool(static_cast<std::uint32_t>(inputs.size()));
    const auto enc = cardnet::encode_pb_sum(terms, mk.rel, mk.bound, pool);
    auto map = lit_mapper(inputs, pool.next());
    emit_clauses(enc.clauses, map);
    if (enc.link) {
      std::vector<std::pair<Integer, Num>> parts;
      for (const auto& wl : enc.link->terms) parts.emplace_back(wl.weight, indicator(map(wl.lit)));
      const Num lhs = linear(parts, 0);
      const Num rhs = int_const(enc.link->bound);
      switch (enc.link->rel) {
        case cardnet::Relation::Le: add(le(lhs, rhs)); break;
        case cardnet::Relation::Ge: add(le(rhs, lhs)); break;
        case cardnet::Relation::Eq: add(eq(lhs, rhs)); break;
      }
    }
  }

  // -------------------------------------------------------------------- sets

  std::set<std::int64_t> universe(std::initializer_list<const SetTerm*> ss) {
    std::set<std::int64_t> u;
    for (const auto* s : ss)
      for (const auto& [e, t] : s->in) u.insert(e);
    return u;
  }

  void set_equal(const SetTerm& a, const SetTerm& b) {
    for (auto e : universe({&a, &b})) add(tm_.mk_eq(member(a, e), member(b, e)));
  }

  TermId set_in(const Num& x, const SetTerm& s) {
    std::vector<TermId> alts;
    for (const auto& [e, t] : s.in) alts.push_back(tm_.mk_and({eq(x, int_const(big(e))), t}));
    return tm_.mk_or(alts);
  }

  void set_binary(const fzn::FznConstraint& c, Op op, bool diff) {
    const SetTerm a = set_of(c.args[0]), b = set_of(c.args[1]), r = set_of(c.args[2]);
    for (auto e : universe({&a, &b, &r})) {
      TermId rhs;
      if (diff) rhs = tm_.mk_and({member(a, e), tm_.mk_not(member(b, e))});
      else rhs = tm_.mk(op, {member(a, e), member(b, e)});
      add(tm_.mk_eq(member(r, e), rhs));
    }
  }

  void set_card(const fzn::FznConstraint& c) {
    const SetTerm s = set_of(c.args[0]);
    std::vector<TermId> ins;
    for (const auto& [e, t] : s.in) ins.push_back(t);
    std::vector<Num> ones;
    for (TermId o : sorted_outputs(ins)) ones.push_back(indicator(o));
    define(c.args[1], sum(ones));
  }

  const fzn::FznModel& m_;
  const EncodeConfig& cfg_;
  smt::SmtScript& s_;
  smt::TermManager& tm_;
  bool bv_;
  unsigned width_ = 0;
  const MarkedModel* markers_ = nullptr;
  std::unordered_map<std::string, const fzn::FznVarDecl*> var_index_;
  std::unordered_map<std::string, const fzn::ParamDecl*> param_index_;
  std::unordered_set<std::string> taken_;
  std::unordered_set<std::string> declared_;
  std::unordered_map<std::string, TermId> scalars_;
  std::unordered_map<std::string, SetTerm> sets_;
  std::size_t aux_counter_ = 0;
  std::vector<TermId> out_;

  TermId equal_exprs(const Expr& a, const Expr& b, fzn::BaseType base) {
    switch (base) {
      case fzn::BaseType::Bool: return tm_.mk_eq(boolean(a), boolean(b));
      case fzn::BaseType::Float: return tm_.mk_eq(real(a), real(b));
      default: return eq(integer(a), integer(b));
    }
  }
};

void Encoder::constraint(const fzn::FznConstraint& c) {
  const auto id = fzn::lookup_builtin(c.name);
  if (!id) {
    if (fzn::is_known_unsupported(c.name))
      throw UnsupportedError("non-linear builtin '" + c.name + "' is not supported");
    throw UnsupportedError("unsupported constraint '" + c.name + "'");
  }
  const auto& a = c.args;
  auto reject_bv = [&] {
    if (bv_) throw UnsupportedError("'" + c.name + "' cannot be encoded in bv mode");
  };
  switch (*id) {
    // Booleans
    case Builtin::ArrayBoolAnd:
    case Builtin::ArrayBoolOr: {
      std::vector<TermId> xs;
      for (const auto& x : elements(a[0])) xs.push_back(boolean(x));
      define_bool(a[1], *id == Builtin::ArrayBoolAnd ? tm_.mk_and(xs) : tm_.mk_or(xs));
      break;
    }
    case Builtin::ArrayBoolXor: {
      std::vector<TermId> xs;
      for (const auto& x : elements(a[0])) xs.push_back(boolean(x));
      add(xs.empty() ? tm_.mk_bool(false) : xs.size() == 1 ? xs[0] : tm_.mk(Op::Xor, xs));
      break;
    }
    case Builtin::BoolAnd: define_bool(a[2], tm_.mk_and({boolean(a[0]), boolean(a[1])})); break;
    case Builtin::BoolOr: define_bool(a[2], tm_.mk_or({boolean(a[0]), boolean(a[1])})); break;
    case Builtin::BoolXor: define_bool(a[2], tm_.mk(Op::Xor, {boolean(a[0]), boolean(a[1])})); break;
    case Builtin::BoolNot: define_bool(a[1], tm_.mk_not(boolean(a[0]))); break;
    case Builtin::BoolEq: define_bool(a[1], boolean(a[0])); break;
    case Builtin::BoolEqReif: define_bool(a[2], tm_.mk_eq(boolean(a[0]), boolean(a[1]))); break;
    case Builtin::BoolLe: add(tm_.mk_implies(boolean(a[0]), boolean(a[1]))); break;
    case Builtin::BoolLeReif: define_bool(a[2], tm_.mk_implies(boolean(a[0]), boolean(a[1]))); break;
    case Builtin::BoolLt: add(tm_.mk_and({tm_.mk_not(boolean(a[0])), boolean(a[1])})); break;
    case Builtin::BoolLtReif: define_bool(a[2], tm_.mk_and({tm_.mk_not(boolean(a[0])), boolean(a[1])})); break;
    case Builtin::BoolClause: {
      std::vector<TermId> lits;
      for (const auto& x : elements(a[0])) lits.push_back(boolean(x));
      for (const auto& x : elements(a[1])) lits.push_back(tm_.mk_not(boolean(x)));
      add(tm_.mk_or(lits));
      break;
    }
    case Builtin::BoolLinEq:
    case Builtin::BoolLinLe: {
      const auto cs = elements(a[0]);
      const auto xs = elements(a[1]);
      std::vector<std::pair<Integer, Num>> terms;
      for (std::size_t i = 0; i < xs.size(); ++i) terms.emplace_back(par_int(cs[i]), indicator(boolean(xs[i])));
      const Num lhs = linear(terms, 0);
      if (*id == Builtin::BoolLinLe) add(le(lhs, integer(a[2])));
      else define(a[2], lhs);
      break;
    }
    case Builtin::Bool2Int: define(a[1], indicator(boolean(a[0]))); break;

    // Integers
    case Builtin::IntAbs: define(a[1], absolute(integer(a[0]))); break;
    case Builtin::IntDiv:
    case Builtin::IntMod: {
      const Num x = integer(a[0]), y = integer(a[1]);
      if (bv_) {
        require_range(x, c.name.c_str());
        require_range(y, c.name.c_str());
      }
      add(tm_.mk_not(eq(y, int_const(0))));
      define(a[2], *id == Builtin::IntDiv ? quotient(x, y) : remainder(x, y));
      break;
    }
    case Builtin::IntTimes: define(a[2], product(integer(a[0]), integer(a[1]))); break;
    case Builtin::IntPlus: {
      fzn::FznConstraint lin{"int_lin_eq", {fzn::ArrayLit{1, 1, -1}, fzn::ArrayLit{a[0], a[1], a[2]}, 0},
                             c.annotations};
      if (!c.defined_var()) lin.annotations.push_back({"defines_var", "defines_var(" + scalar_name(a[2]) + ")"});
      int_linear(lin, Rel::Eq, std::nullopt, false);
      break;
    }
    case Builtin::IntMin: define(a[2], minimum(integer(a[0]), integer(a[1]))); break;
    case Builtin::IntMax: define(a[2], maximum(integer(a[0]), integer(a[1]))); break;
    case Builtin::IntEq: define(a[1], integer(a[0])); break;
    case Builtin::IntNe: add(tm_.mk_not(eq(integer(a[0]), integer(a[1])))); break;
    case Builtin::IntLe: add(le(integer(a[0]), integer(a[1]))); break;
    case Builtin::IntLt: add(compare(integer(a[0]), Rel::Lt, integer(a[1]))); break;
    case Builtin::IntEqReif: define_bool(a[2], eq(integer(a[0]), integer(a[1]))); break;
    case Builtin::IntNeReif: define_bool(a[2], tm_.mk_not(eq(integer(a[0]), integer(a[1])))); break;
    case Builtin::IntLeReif: define_bool(a[2], le(integer(a[0]), integer(a[1]))); break;
    case Builtin::IntLtReif: define_bool(a[2], compare(integer(a[0]), Rel::Lt, integer(a[1]))); break;
    case Builtin::IntLinEq: int_linear(c, Rel::Eq, std::nullopt, false); break;
    case Builtin::IntLinLe: int_linear(c, Rel::Le, std::nullopt, false); break;
    case Builtin::IntLinNe: int_linear(c, Rel::Eq, std::nullopt, true); break;
    case Builtin::IntLinEqReif: int_linear(c, Rel::Eq, a[3], false); break;
    case Builtin::IntLinLeReif: int_linear(c, Rel::Le, a[3], false); break;
    case Builtin::IntLinNeReif: int_linear(c, Rel::Eq, a[3], true); break;
    case Builtin::ArrayIntElement:
    case Builtin::ArrayVarIntElement: element(c, fzn::BaseType::Int); break;
    case Builtin::ArrayBoolElement:
    case Builtin::ArrayVarBoolElement: element(c, fzn::BaseType::Bool); break;
    case Builtin::ArrayIntMaximum:
    case Builtin::ArrayIntMinimum: {
      const auto xs = elements(a[1]);
      if (xs.empty()) throw ValidationError("'" + c.name + "' over an empty array");
      Num acc = integer(xs[0]);
      for (std::size_t i = 1; i < xs.size(); ++i)
        acc = *id == Builtin::ArrayIntMaximum ? maximum(acc, integer(xs[i])) : minimum(acc, integer(xs[i]));
      define(a[0], acc);
      break;
    }

    // Floats
    case Builtin::FloatAbs: {
      reject_bv();
      const TermId x = real(a[0]);
      define_real(a[1], tm_.mk_ite(tm_.mk_le(tm_.mk_real(0), x), x, tm_.mk(Op::Neg, {x})));
      break;
    }
    case Builtin::FloatDiv: {
      reject_bv();
      const Expr d = scalar(a[1]);
      if (!d.is_float() && !d.is_int())
        throw UnsupportedError("float_div with a variable divisor is non-linear and not supported");
      const Rational k = par_float(d);
      if (k.is_zero()) {
        add(tm_.mk_bool(false));
        break;
      }
      define_real(a[2], tm_.mk(Op::Div, {real(a[0]), tm_.mk_real(k)}));
      break;
    }
    case Builtin::FloatTimes: {
      reject_bv();
      const Expr x = scalar(a[0]), y = scalar(a[1]);
      const bool xc = x.is_float() || x.is_int(), yc = y.is_float() || y.is_int();
      if (!xc && !yc) throw UnsupportedError("float_times of two variables is non-linear and not supported");
      const TermId prod = xc ? tm_.mk(Op::Mul, {tm_.mk_real(par_float(x)), real(y)})
                             : tm_.mk(Op::Mul, {tm_.mk_real(par_float(y)), real(x)});
      define_real(a[2], prod);
      break;
    }
    case Builtin::FloatPlus: {
      reject_bv();
      fzn::FznConstraint lin{"float_lin_eq",
                             {fzn::ArrayLit{Rational(1), Rational(1), Rational(-1)},
                              fzn::ArrayLit{a[0], a[1], a[2]}, Rational(0)},
                             c.annotations};
      if (!c.defined_var()) lin.annotations.push_back({"defines_var", "defines_var(" + scalar_name(a[2]) + ")"});
      float_linear(lin, Rel::Eq, std::nullopt, false);
      break;
    }
    case Builtin::FloatMin:
    case Builtin::FloatMax: {
      reject_bv();
      const TermId x = real(a[0]), y = real(a[1]);
      const TermId pick = *id == Builtin::FloatMin ? tm_.mk_le(x, y) : tm_.mk_le(y, x);
      define_real(a[2], tm_.mk_ite(pick, x, y));
      break;
    }
    case Builtin::FloatEq: reject_bv(); define_real(a[1], real(a[0])); break;
    case Builtin::FloatNe: reject_bv(); add(tm_.mk_not(tm_.mk_eq(real(a[0]), real(a[1])))); break;
    case Builtin::FloatLe: reject_bv(); add(tm_.mk_le(real(a[0]), real(a[1]))); break;
    case Builtin::FloatLt: reject_bv(); add(tm_.mk_lt(real(a[0]), real(a[1]))); break;
    case Builtin::FloatEqReif: reject_bv(); define_bool(a[2], tm_.mk_eq(real(a[0]), real(a[1]))); break;
    case Builtin::FloatNeReif: reject_bv(); define_bool(a[2], tm_.mk_not(tm_.mk_eq(real(a[0]), real(a[1])))); break;
    case Builtin::FloatLeReif: reject_bv(); define_bool(a[2], tm_.mk_le(real(a[0]), real(a[1]))); break;
    case Builtin::FloatLtReif: reject_bv(); define_bool(a[2], tm_.mk_lt(real(a[0]), real(a[1]))); break;
    case Builtin::FloatLinEq: float_linear(c, Rel::Eq, std::nullopt, false); break;
    case Builtin::FloatLinLe: float_linear(c, Rel::Le, std::nullopt, false); break;
    case Builtin::FloatLinLt: float_linear(c, Rel::Lt, std::nullopt, false); break;
    case Builtin::FloatLinNe: float_linear(c, Rel::Eq, std::nullopt, true); break;
    case Builtin::FloatLinEqReif: float_linear(c, Rel::Eq, a[3], false); break;
    case Builtin::FloatLinLeReif: float_linear(c, Rel::Le, a[3], false); break;
    case Builtin::FloatLinLtReif: float_linear(c, Rel::Lt, a[3], false); break;
    case Builtin::FloatLinNeReif: float_linear(c, Rel::Eq, a[3], true); break;
    case Builtin::Int2Float: {
      reject_bv();
      const Expr x = scalar(a[0]);
      define_real(a[1], x.is_int() ? tm_.mk_real(Rational(x.as_int())) : tm_.to_real(integer(x).t));
      break;
    }
    case Builtin::ArrayFloatElement:
    case Builtin::ArrayVarFloatElement: reject_bv(); element(c, fzn::BaseType::Float); break;
    case Builtin::ArrayFloatMaximum:
    case Builtin::ArrayFloatMinimum: {
      reject_bv();
      const auto xs = elements(a[1]);
      if (xs.empty()) throw ValidationError("'" + c.name + "' over an empty array");
      TermId acc = real(xs[0]);
      for (std::size_t i = 1; i < xs.size(); ++i) {
        const TermId x = real(xs[i]);
        const TermId keep = *id == Builtin::ArrayFloatMaximum ? tm_.mk_le(x, acc) : tm_.mk_le(acc, x);
        acc = tm_.mk_ite(keep, acc, x);
      }
      define_real(a[0], acc);
      break;
    }

    // Sets
    case Builtin::SetIn: add(set_in(integer(a[0]), set_of(a[1]))); break;
    case Builtin::SetInReif: define_bool(a[2], set_in(integer(a[0]), set_of(a[1]))); break;
    case Builtin::SetCard: set_card(c); break;
    case Builtin::SetSubset:
    case Builtin::SetSuperset: {
      SetTerm x = set_of(a[0]), y = set_of(a[1]);
      if (*id == Builtin::SetSuperset) std::swap(x, y);
      for (auto e : universe({&x})) add(tm_.mk_implies(member(x, e), member(y, e)));
      break;
    }
    case Builtin::SetEq: set_equal(set_of(a[0]), set_of(a[1])); break;
    case Builtin::SetNe: {
      const SetTerm x = set_of(a[0]), y = set_of(a[1]);
      std::vector<TermId> diffs;
      for (auto e : universe({&x, &y})) diffs.push_back(tm_.mk(Op::Xor, {member(x, e), member(y, e)}));
      add(tm_.mk_or(diffs));
      break;
    }
    case Builtin::SetUnion: set_binary(c, Op::Or, false); break;
    case Builtin::SetIntersect: set_binary(c, Op::And, false); break;
    case Builtin::SetDiff: set_binary(c, Op::And, true); break;
    case Builtin::SetSymDiff: set_binary(c, Op::Xor, false); break;

    // Globals
    case Builtin::AllDifferentInt: all_different(c); break;
    case Builtin::CountEq: {
      const Num y = integer(a[1]);
      std::vector<Num> hits;
      for (const auto& x : elements(a[0])) hits.push_back(indicator(eq(integer(x), y)));
      define(a[2], sum(hits));
      break;
    }
    case Builtin::TableInt: table(c, false); break;
    case Builtin::TableBool: table(c, true); break;
  }
}

}  // namespace

unsigned default_bv_width(const fzn::FznModel& model) {
  unsigned w = 2;
  for (const auto& v : model.vars) {
    if (v.type.base != fzn::BaseType::Int) continue;
    if (auto b = int_bounds(v.type.domain)) w = std::max(w, signed_bits(big(b->first), big(b->second)));
  }
  return w;
}

namespace {

std::string logic_for(const smt::SmtScript& s, bool bv) {
  if (bv) return "QF_BV";
  bool ints = false, reals = false;
  for (const auto& [n, sort] : s.declarations) {
    ints |= sort.is_int();
    reals |= sort.is_real();
  }
  if (ints && reals) return "QF_LIRA";
  return reals ? "QF_LRA" : "QF_LIA";
}

}  // namespace

smt::SmtScript encode_model(const fzn::FznModel& input, const EncodeConfig& cfg) {
  smt::SmtScript script;
  Propagated prop;
  const fzn::FznModel* model = &input;
  if (cfg.propagate) {
    prop = propagate_constants_and_aliases(input);
    model = &prop.model;
  }
  const MarkedModel marked = detect_and_rewrite_pb(*model);
  Encoder enc(marked.model, cfg, script);
  enc.set_markers(&marked);
  enc.declare_all();
  enc.constraints();
  enc.objectives();
  script.assertions = enc.take_assertions();
  if (prop.inconsistent) script.assertions.push_back(script.tm->mk_bool(false));
  script.logic = logic_for(script, cfg.int_mode == IntMode::Bv);
  script.commands.push_back("check-sat");
  if (!script.objectives.empty()) script.commands.push_back("get-objectives");
  return script;
}

std::vector<TermId> encode_global(const fzn::FznModel& model, const fzn::FznConstraint& constraint,
                                  smt::SmtScript& script, const EncodeConfig& cfg) {
  Encoder enc(model, cfg, script);
  enc.constraint(constraint);
  return enc.take_assertions();
}

std::vector<std::string> shared_scalar_names(const fzn::FznModel& model, const smt::SmtScript& script) {
  std::unordered_set<std::string> declared;
  for (const auto& [n, s] : script.declarations) declared.insert(n);
  std::vector<std::string> out;
  for (const auto& v : model.vars)
    if (!v.type.is_array() && v.type.base != fzn::BaseType::SetOfInt && declared.count(v.name)) out.push_back(v.name);
  return out;
}

}  // namespace zb::fzn2omt
