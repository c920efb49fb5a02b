// SMT-LIB reference semantics for the brute-force oracle.

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "oracle_engine.hpp"

namespace zb::oracle {

using namespace detail;
using smt::Op;
using smt::Sort;
using smt::TermId;

namespace {

std::uint64_t mask_of(unsigned w) { return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1; }

std::int64_t as_signed(std::uint64_t bits, unsigned w) {
  if (w >= 64) return static_cast<std::int64_t>(bits);
  if ((bits >> (w - 1)) & 1) return static_cast<std::int64_t>(bits | ~mask_of(w));
  return static_cast<std::int64_t>(bits);
}

bool msb(std::uint64_t bits, unsigned w) { return (bits >> (w - 1)) & 1; }

std::uint64_t bv_neg(std::uint64_t a, unsigned w) { return (~a + 1) & mask_of(w); }
std::uint64_t bv_udiv(std::uint64_t a, std::uint64_t b, unsigned w) { return b == 0 ? mask_of(w) : a / b; }
std::uint64_t bv_urem(std::uint64_t a, std::uint64_t b) { return b == 0 ? a : a % b; }

std::uint64_t bv_sdiv(std::uint64_t s, std::uint64_t t, unsigned w) {
  const bool ms = msb(s, w), mt = msb(t, w);
  if (!ms && !mt) return bv_udiv(s, t, w);
  if (ms && !mt) return bv_neg(bv_udiv(bv_neg(s, w), t, w), w);
  if (!ms && mt) return bv_neg(bv_udiv(s, bv_neg(t, w), w), w);
  return bv_udiv(bv_neg(s, w), bv_neg(t, w), w);
}

std::uint64_t bv_srem(std::uint64_t s, std::uint64_t t, unsigned w) {
  const bool ms = msb(s, w), mt = msb(t, w);
  if (!ms && !mt) return bv_urem(s, t);
  if (ms && !mt) return bv_neg(bv_urem(bv_neg(s, w), t), w);
  if (!ms && mt) return bv_urem(s, bv_neg(t, w));
  return bv_neg(bv_urem(bv_neg(s, w), bv_neg(t, w)), w);
}

std::uint64_t bv_smod(std::uint64_t s, std::uint64_t t, unsigned w) {
  const bool ms = msb(s, w), mt = msb(t, w);
  const std::uint64_t abs_s = ms ? bv_neg(s, w) : s;
  const std::uint64_t abs_t = mt ? bv_neg(t, w) : t;
  const std::uint64_t u = bv_urem(abs_s, abs_t);
  if (u == 0 || (!ms && !mt)) return u;
  if (ms && !mt) return (bv_neg(u, w) + t) & mask_of(w);
  if (!ms && mt) return (u + t) & mask_of(w);
  return bv_neg(u, w);
}

/// Euclidean division as in SMT-LIB Ints: 0 <= a - b*q < |b|.
std::int64_t euclid_div(std::int64_t a, std::int64_t b) {
  if (b == 0) throw GiveUp("integer division by zero");
  if (a == INT64_MIN && b == -1) throw Overflow();
  std::int64_t q = a / b;
  const std::int64_t r = a - q * b;
  if (r < 0) q = b > 0 ? q - 1 : q + 1;
  return q;
}

std::int64_t euclid_mod(std::int64_t a, std::int64_t b) { return sub64(a, mul64(b, euclid_div(a, b))); }

/// Straight-line evaluation of a term DAG: nodes in children-first order,
/// each computed once per call.
class Program {
 public:
  Program(const smt::TermManager& tm, TermId root, const std::unordered_map<std::string, int>& vars) {
    std::unordered_map<TermId, int, smt::TermIdHash> slot;
    std::vector<std::pair<TermId, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [t, expanded] = stack.back();
      stack.pop_back();
      if (slot.count(t)) continue;
      const smt::Node& n = tm.node(t);
      if (!expanded) {
        stack.emplace_back(t, true);
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
          if (!slot.count(*it)) stack.emplace_back(*it, false);
        continue;
      }
      Instr in;
      in.op = n.op;
      in.sort = n.sort;
      in.indices = n.indices;
      for (TermId c : n.children) {
        in.args.push_back(slot.at(c));
        in.arg_sorts.push_back(tm.sort(c));
      }
      switch (n.op) {
        case Op::Var: {
          in.var = vars.at(n.name);
          inputs_.push_back(in.var);
          break;
        }
        case Op::BoolConst: in.constant = n.bits != 0; break;
        case Op::NumConst:
          if (n.sort.is_int()) {
            if (!n.value.fits_int64()) throw Overflow();
            in.constant = n.value.to_int64();
          } else {
            in.constant = n.value;
          }
          break;
        case Op::BvConst: in.constant = Bv{n.bits, n.sort.width}; break;
        default: break;
      }
      slot.emplace(t, static_cast<int>(code_.size()));
      code_.push_back(std::move(in));
    }
    std::sort(inputs_.begin(), inputs_.end());
    inputs_.erase(std::unique(inputs_.begin(), inputs_.end()), inputs_.end());
  }

  const std::vector<int>& inputs() const { return inputs_; }

  Value eval(const Env& env) const {
    std::vector<Value> r(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) r[i] = step(code_[i], r, env);
    return std::move(r.back());
  }

 private:
  struct Instr {
    Op op;
    Sort sort;
    std::vector<unsigned> indices;
    std::vector<int> args;
    std::vector<Sort> arg_sorts;
    int var = -1;
    Value constant;
  };

  static bool b(const std::vector<Value>& r, int i) { return std::get<bool>(r[static_cast<std::size_t>(i)]); }
  static std::int64_t z(const std::vector<Value>& r, int i) {
    return std::get<std::int64_t>(r[static_cast<std::size_t>(i)]);
  }
  static const Rational& q(const std::vector<Value>& r, int i) {
    return std::get<Rational>(r[static_cast<std::size_t>(i)]);
  }
  static std::uint64_t u(const std::vector<Value>& r, int i) { return std::get<Bv>(r[static_cast<std::size_t>(i)]).bits; }

  static int compare(const Instr& in, const std::vector<Value>& r, int x, int y) {
    const Sort s = in.arg_sorts[0];
    if (s.is_int()) return z(r, x) < z(r, y) ? -1 : z(r, x) > z(r, y);
    const Rational& a = q(r, x);
    const Rational& c = q(r, y);
    return a < c ? -1 : a > c;
  }

  static Value step(const Instr& in, const std::vector<Value>& r, const Env& env) {
    const auto& a = in.args;
    const unsigned w = in.sort.is_bv() ? in.sort.width : 0;
    const unsigned aw = !in.arg_sorts.empty() && in.arg_sorts[0].is_bv() ? in.arg_sorts[0].width : 0;
    auto bv = [w](std::uint64_t bits) { return Value{Bv{bits & mask_of(w), w}}; };
    switch (in.op) {
      case Op::Var: return env[static_cast<std::size_t>(in.var)];
      case Op::BoolConst: case Op::NumConst: case Op::BvConst: return in.constant;
      case Op::Not: return !b(r, a[0]);
      case Op::And: {
        for (int x : a)
          if (!b(r, x)) return false;
        return true;
      }
      case Op::Or: {
        for (int x : a)
          if (b(r, x)) return true;
        return false;
      }
      case Op::Xor: {
        bool p = false;
        for (int x : a) p ^= b(r, x);
        return p;
      }
      case Op::Implies: return !b(r, a[0]) || b(r, a[1]);
      case Op::Ite: return r[static_cast<std::size_t>(b(r, a[0]) ? a[1] : a[2])];
      case Op::Eq: {
        for (std::size_t i = 1; i < a.size(); ++i)
          if (!(r[static_cast<std::size_t>(a[i])] == r[static_cast<std::size_t>(a[0])])) return false;
        return true;
      }
      case Op::Distinct: {
        for (std::size_t i = 0; i < a.size(); ++i)
          for (std::size_t j = i + 1; j < a.size(); ++j)
            if (r[static_cast<std::size_t>(a[i])] == r[static_cast<std::size_t>(a[j])]) return false;
        return true;
      }
      case Op::Le: return compare(in, r, a[0], a[1]) <= 0;
      case Op::Lt: return compare(in, r, a[0], a[1]) < 0;
      case Op::Ge: return compare(in, r, a[0], a[1]) >= 0;
      case Op::Gt: return compare(in, r, a[0], a[1]) > 0;
      case Op::Add: case Op::Sub: case Op::Mul: {
        if (in.sort.is_int()) {
          std::int64_t acc = z(r, a[0]);
          for (std::size_t i = 1; i < a.size(); ++i)
            acc = in.op == Op::Add ? add64(acc, z(r, a[i])) : in.op == Op::Sub ? sub64(acc, z(r, a[i]))
                                                                                : mul64(acc, z(r, a[i]));
          return acc;
        }
        Rational acc = q(r, a[0]);
        for (std::size_t i = 1; i < a.size(); ++i) {
          if (in.op == Op::Add) acc += q(r, a[i]);
          else if (in.op == Op::Sub) acc -= q(r, a[i]);
          else acc *= q(r, a[i]);
        }
        return acc;
      }
      case Op::Neg:
        if (in.sort.is_int()) return sub64(0, z(r, a[0]));
        return -q(r, a[0]);
      case Op::Div: {
        if (q(r, a[1]).is_zero()) throw GiveUp("real division by zero");
        return q(r, a[0]) / q(r, a[1]);
      }
      case Op::IntDiv: return euclid_div(z(r, a[0]), z(r, a[1]));
      case Op::Mod: return euclid_mod(z(r, a[0]), z(r, a[1]));
      case Op::Abs: {
        const std::int64_t x = z(r, a[0]);
        return x < 0 ? sub64(0, x) : x;
      }
      case Op::ToReal: return Rational(z(r, a[0]));
      case Op::BvNot: return bv(~u(r, a[0]));
      case Op::BvNeg: return bv(bv_neg(u(r, a[0]), w));
      case Op::BvAnd: return bv(u(r, a[0]) & u(r, a[1]));
      case Op::BvOr: return bv(u(r, a[0]) | u(r, a[1]));
      case Op::BvXor: return bv(u(r, a[0]) ^ u(r, a[1]));
      case Op::BvAdd: return bv(u(r, a[0]) + u(r, a[1]));
      case Op::BvSub: return bv(u(r, a[0]) - u(r, a[1]));
      case Op::BvMul: return bv(u(r, a[0]) * u(r, a[1]));
      case Op::BvUdiv: return bv(bv_udiv(u(r, a[0]), u(r, a[1]), w));
      case Op::BvUrem: return bv(bv_urem(u(r, a[0]), u(r, a[1])));
      case Op::BvSdiv: return bv(bv_sdiv(u(r, a[0]), u(r, a[1]), w));
      case Op::BvSrem: return bv(bv_srem(u(r, a[0]), u(r, a[1]), w));
      case Op::BvSmod: return bv(bv_smod(u(r, a[0]), u(r, a[1]), w));
      case Op::BvShl: {
        const std::uint64_t k = u(r, a[1]);
        return bv(k >= w ? 0 : u(r, a[0]) << k);
      }
      case Op::BvLshr: {
        const std::uint64_t k = u(r, a[1]);
        return bv(k >= w ? 0 : u(r, a[0]) >> k);
      }
      case Op::BvAshr: {
        const std::uint64_t k = u(r, a[1]);
        const std::int64_t x = as_signed(u(r, a[0]), w);
        return bv(static_cast<std::uint64_t>(k >= w ? (x < 0 ? -1 : 0) : x >> k));
      }
      case Op::BvUlt: return u(r, a[0]) < u(r, a[1]);
      case Op::BvUle: return u(r, a[0]) <= u(r, a[1]);
      case Op::BvUgt: return u(r, a[0]) > u(r, a[1]);
      case Op::BvUge: return u(r, a[0]) >= u(r, a[1]);
      case Op::BvSlt: return as_signed(u(r, a[0]), aw) < as_signed(u(r, a[1]), aw);
      case Op::BvSle: return as_signed(u(r, a[0]), aw) <= as_signed(u(r, a[1]), aw);
      case Op::BvSgt: return as_signed(u(r, a[0]), aw) > as_signed(u(r, a[1]), aw);
      case Op::BvSge: return as_signed(u(r, a[0]), aw) >= as_signed(u(r, a[1]), aw);
      case Op::Concat: {
        const unsigned lw = in.arg_sorts[1].width;
        return bv((lw >= 64 ? 0 : u(r, a[0]) << lw) | u(r, a[1]));
      }
      case Op::Extract: return bv(u(r, a[0]) >> in.indices[1]);
      case Op::ZeroExtend: return bv(u(r, a[0]));
      case Op::SignExtend: return bv(static_cast<std::uint64_t>(as_signed(u(r, a[0]), aw)));
    }
    return false;
  }

  std::vector<Instr> code_;
  std::vector<int> inputs_;
};

struct IntBounds {
  std::optional<std::int64_t> lo, hi;
  void lower(std::int64_t v) { lo = lo ? std::max(*lo, v) : v; }
  void upper(std::int64_t v) { hi = hi ? std::min(*hi, v) : v; }
};

class SmtBuilder {
 public:
  SmtBuilder(const smt::SmtScript& s, const OracleOptions& o) : s_(s), tm_(*s.tm), opts_(o) {}

  OracleResult build_and_run() {
    if (s_.combination == smt::Combination::Pareto && s_.objectives.size() > 1)
      return OracleResult::inapplicable("Pareto combination is not supported");
    for (const auto& [name, sort] : s_.declarations) {
      index_.emplace(name, p_.add_var(name, {}, true));
      sorts_.push_back(sort);
    }
    std::vector<TermId> conjuncts;
    for (TermId a : s_.assertions) flatten(a, conjuncts);
    std::vector<IntBounds> ib(sorts_.size()), ub(sorts_.size()), sb(sorts_.size());
    for (TermId c : conjuncts) harvest(c, ib, ub, sb);

    // Domains.
    std::vector<bool> finite(sorts_.size(), false);
    for (std::size_t v = 0; v < sorts_.size(); ++v) {
      auto& var = p_.vars[v];
      const Sort s = sorts_[v];
      if (s.is_bool()) {
        var.domain = {Value{false}, Value{true}};
        finite[v] = true;
      } else if (s.is_int()) {
        if (ib[v].lo && ib[v].hi && fits(*ib[v].lo, *ib[v].hi)) {
          for (std::int64_t x = *ib[v].lo; x <= *ib[v].hi; ++x) var.domain.emplace_back(x);
          finite[v] = true;
        }
      } else if (s.is_bv()) {
        finite[v] = bv_domain(s.width, ub[v], sb[v], var.domain);
      }
      var.defined = !finite[v];
    }

    // Definitions from top-level equalities: first for variables that cannot
    // be enumerated, then for the rest.
    std::vector<bool> has_def(sorts_.size(), false);
    for (int pass = 0; pass < 2; ++pass) {
      for (bool changed = true; changed;) {
        changed = false;
        for (TermId c : conjuncts) {
          const smt::Node& n = tm_.node(c);
          if (n.op != Op::Eq || n.children.size() != 2) continue;
          for (int side = 0; side < 2; ++side) {
            const smt::Node& lhs = tm_.node(n.children[static_cast<std::size_t>(side)]);
            if (lhs.op != Op::Var) continue;
            const int target = index_.at(lhs.name);
            if (has_def[static_cast<std::size_t>(target)]) continue;
            if (pass == 0 && finite[static_cast<std::size_t>(target)]) continue;
            auto prog = std::make_shared<Program>(tm_, n.children[static_cast<std::size_t>(1 - side)], index_);
            if (!acyclic_with(p_.defs, p_.vars.size(), target, prog->inputs())) continue;
            Problem::Def d;
            d.target = target;
            d.inputs = prog->inputs();
            d.compute = [prog](const Env& e) -> std::optional<Value> { return prog->eval(e); };
            p_.defs.push_back(std::move(d));
            has_def[static_cast<std::size_t>(target)] = true;
            changed = true;
            break;
          }
        }
      }
    }
    for (std::size_t v = 0; v < sorts_.size(); ++v) {
      if (finite[v] || has_def[v]) continue;
      const std::string& name = p_.vars[v].name;
      if (sorts_[v].is_real()) return OracleResult::inapplicable("Real variable '" + name + "' is not fixed by an equality");
      if (sorts_[v].is_int() && ib[v].lo && ib[v].hi)
        return OracleResult::inapplicable("domain of '" + name + "' exceeds the budget");
      return OracleResult::inapplicable("variable '" + name + "' has no finite bounds (infinite search space)");
    }

    for (TermId c : conjuncts) {
      auto prog = std::make_shared<Program>(tm_, c, index_);
      p_.checks.push_back({prog->inputs(), [prog](const Env& e) { return std::get<bool>(prog->eval(e)); }});
    }

    for (const auto& o : s_.objectives) {
      Problem::Goal g;
      g.maximize = o.dir == smt::Direction::Maximize;
      if (o.term) {
        auto prog = std::make_shared<Program>(tm_, *o.term, index_);
        g.inputs = prog->inputs();
        g.value = [prog, sgn = o.bv_signed](const Env& e) { return to_rational(prog->eval(e), sgn); };
      } else {
        std::vector<std::pair<std::shared_ptr<Program>, Rational>> softs;
        for (const auto& sa : s_.soft_assertions)
          if (sa.group == *o.soft_group) softs.emplace_back(std::make_shared<Program>(tm_, sa.formula, index_), sa.weight);
        g.value = [softs](const Env& e) {
          Rational cost;
          for (const auto& [prog, w] : softs)
            if (!std::get<bool>(prog->eval(e))) cost += w;
          return cost;
        };
      }
      p_.goals.push_back(std::move(g));
    }
    p_.combination = s_.combination == smt::Combination::Independent ? MultiObjective::Independent
                                                                      : MultiObjective::Lexicographic;
    for (const auto& name : opts_.projection) {
      auto it = index_.find(name);
      if (it == index_.end()) throw ValidationError("projection variable '" + name + "' is not declared");
      p_.projection.emplace_back(it->second, opts_.bv_signed_projection);
    }
    for (std::size_t v = 0; v < sorts_.size(); ++v) p_.witness_vars.push_back(static_cast<int>(v));
    return run(p_, opts_);
  }

 private:
  bool fits(std::int64_t lo, std::int64_t hi) const {
    if (lo > hi) return true;
    return static_cast<long double>(hi) - static_cast<long double>(lo) < static_cast<long double>(opts_.budget);
  }

  void flatten(TermId t, std::vector<TermId>& out) const {
    const smt::Node& n = tm_.node(t);
    if (n.op == Op::And) {
      for (TermId c : n.children) flatten(c, out);
    } else {
      out.push_back(t);
    }
  }

  int var_of(TermId t) const {
    const smt::Node& n = tm_.node(t);
    return n.op == Op::Var ? index_.at(n.name) : -1;
  }

  // Bound atoms (rel var const) and (rel const var) among top-level conjuncts.
  void harvest(TermId t, std::vector<IntBounds>& ib, std::vector<IntBounds>& ub, std::vector<IntBounds>& sb) const {
    const smt::Node& n = tm_.node(t);
    if (n.children.size() != 2) return;
    TermId x = n.children[0], c = n.children[1];
    Op op = n.op;
    if (var_of(x) < 0) {
      std::swap(x, c);
      switch (op) {
        case Op::Le: op = Op::Ge; break;
        case Op::Lt: op = Op::Gt; break;
        case Op::Ge: op = Op::Le; break;
        case Op::Gt: op = Op::Lt; break;
        case Op::BvUle: op = Op::BvUge; break;
        case Op::BvUlt: op = Op::BvUgt; break;
        case Op::BvUge: op = Op::BvUle; break;
        case Op::BvUgt: op = Op::BvUlt; break;
        case Op::BvSle: op = Op::BvSge; break;
        case Op::BvSlt: op = Op::BvSgt; break;
        case Op::BvSge: op = Op::BvSle; break;
        case Op::BvSgt: op = Op::BvSlt; break;
        default: break;
      }
    }
    const int v = var_of(x);
    if (v < 0) return;
    const smt::Node& k = tm_.node(c);
    auto& b = ib[static_cast<std::size_t>(v)];
    if (k.op == Op::NumConst && k.sort.is_int() && k.value.fits_int64()) {
      const std::int64_t val = k.value.to_int64();
      switch (op) {
        case Op::Le: b.upper(val); break;
        case Op::Lt: if (val > INT64_MIN) b.upper(val - 1); break;
        case Op::Ge: b.lower(val); break;
        case Op::Gt: if (val < INT64_MAX) b.lower(val + 1); break;
        case Op::Eq: b.lower(val); b.upper(val); break;
        default: break;
      }
      return;
    }
    if (k.op != Op::BvConst) return;
    const unsigned w = k.sort.width;
    if (w >= 63) return;
    const auto uv = static_cast<std::int64_t>(k.bits);
    const std::int64_t sv = as_signed(k.bits, w);
    auto& u = ub[static_cast<std::size_t>(v)];
    auto& s = sb[static_cast<std::size_t>(v)];
    switch (op) {
      case Op::BvUle: u.upper(uv); break;
      case Op::BvUlt: u.upper(uv - 1); break;
      case Op::BvUge: u.lower(uv); break;
      case Op::BvUgt: u.lower(uv + 1); break;
      case Op::BvSle: s.upper(sv); break;
      case Op::BvSlt: s.upper(sv - 1); break;
      case Op::BvSge: s.lower(sv); break;
      case Op::BvSgt: s.lower(sv + 1); break;
      case Op::Eq: u.lower(uv); u.upper(uv); break;
      default: break;
    }
  }

  bool bv_domain(unsigned w, const IntBounds& u, const IntBounds& s, std::vector<Value>& dom) const {
    if (w >= 63) return false;
    const std::int64_t full = std::int64_t{1} << w;
    const std::int64_t ulo = std::max<std::int64_t>(0, u.lo.value_or(0));
    const std::int64_t uhi = std::min<std::int64_t>(full - 1, u.hi.value_or(full - 1));
    const std::int64_t slo = std::max<std::int64_t>(-(full / 2), s.lo.value_or(-(full / 2)));
    const std::int64_t shi = std::min<std::int64_t>(full / 2 - 1, s.hi.value_or(full / 2 - 1));
    const long double ucount = static_cast<long double>(uhi) - static_cast<long double>(ulo) + 1;
    const long double scount = static_cast<long double>(shi) - static_cast<long double>(slo) + 1;
    const long double limit = static_cast<long double>(opts_.budget);
    if (ucount <= 0 || scount <= 0) return true;  // empty domain
    auto in_s = [&](std::int64_t x) {
      const std::int64_t sx = as_signed(static_cast<std::uint64_t>(x), w);
      return slo <= sx && sx <= shi;
    };
    if (ucount <= scount) {
      if (ucount > limit) return false;
      for (std::int64_t x = ulo; x <= uhi; ++x)
        if (in_s(x)) dom.emplace_back(Bv{static_cast<std::uint64_t>(x), w});
    } else {
      if (scount > limit) return false;
      std::vector<std::uint64_t> vals;
      for (std::int64_t x = slo; x <= shi; ++x) {
        const auto bits = static_cast<std::uint64_t>(x) & mask_of(w);
        if (static_cast<std::int64_t>(bits) >= ulo && static_cast<std::int64_t>(bits) <= uhi) vals.push_back(bits);
      }
      std::sort(vals.begin(), vals.end());
      for (auto bits : vals) dom.emplace_back(Bv{bits, w});
    }
    return true;
  }

  const smt::SmtScript& s_;
  const smt::TermManager& tm_;
  const OracleOptions& opts_;
  Problem p_;
  std::unordered_map<std::string, int> index_;
  std::vector<Sort> sorts_;
};

}  // namespace

OracleResult solve_smt(const smt::SmtScript& script, const OracleOptions& options) {
  try {
    return SmtBuilder(script, options).build_and_run();
  } catch (const Overflow&) {
    return OracleResult::inapplicable("64-bit integer overflow in a constant");
  }
}

}  // namespace zb::oracle
