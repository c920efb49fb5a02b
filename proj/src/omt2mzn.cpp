#include "zinc_bridge/omt2mzn.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <unordered_set>
#include <unordered_map>

#include <json.hpp>

namespace zb::omt2mzn {

using smt::Node;
using smt::Op;
using smt::Sort;
using smt::TermId;

namespace {

constexpr unsigned kMaxBitwiseWidth = 16;
constexpr unsigned kMaxPowerBits = 62;

Integer pow2(unsigned k) {
  Integer r = 1;
  r <<= k;
  return r;
}

[[noreturn]] void unsupported(const std::string& what) { throw UnsupportedError(what); }

mzn::ExprPtr pow_lit(unsigned k, std::string_view op) {
  if (k > kMaxPowerBits)
    unsupported(std::string(op) + " needs the constant 2^" + std::to_string(k) +
                ", which exceeds 64-bit MiniZinc integers");
  return mzn::lit_int(pow2(k));
}

bool atomic(const mzn::ExprPtr& e) {
  switch (e->kind) {
    case mzn::ExprKind::Bool:
    case mzn::ExprKind::Int:
    case mzn::ExprKind::Float:
    case mzn::ExprKind::Ident: return true;
    default: return false;
  }
}

mzn::TypeInst var_type(mzn::BaseType base) {
  mzn::TypeInst t;
  t.base = base;
  t.is_var = true;
  return t;
}

mzn::TypeInst int_range(Integer lo, Integer hi) {
  mzn::TypeInst t = var_type(mzn::BaseType::Int);
  t.int_range = std::make_pair(std::move(lo), std::move(hi));
  return t;
}

mzn::TypeInst bv_type(unsigned w) { return int_range(0, pow2(w) - 1); }

using namespace mzn;

ExprPtr fold(const std::string& op, const std::vector<ExprPtr>& xs) {
  ExprPtr acc = xs.at(0);
  for (std::size_t i = 1; i < xs.size(); ++i) acc = binary(op, acc, xs[i]);
  return acc;
}

ExprPtr conj(std::vector<ExprPtr> xs) {
  if (xs.empty()) return lit(true);
  return fold("/\\", xs);
}

/// Term-to-expression translation over one term manager.
class Translator {
 public:
  using Namer = std::function<std::string(TermId)>;

  Translator(const smt::TermManager& tm, const LabelPlan* plan, Namer var_name, BoundsPolicy policy)
      : tm_(tm), plan_(plan), var_name_(std::move(var_name)), policy_(std::move(policy)) {}

  /// Expression for a use of `t`: its label when it has one.
  ExprPtr use(TermId t) {
    if (auto it = subst_.find(t); it != subst_.end()) return it->second;
    if (plan_ != nullptr) {
      auto it = plan_->labels.find(t);
      if (it != plan_->labels.end()) return ident(it->second);
    }
    return body(t);
  }

  /// Replaces every use of `t` (not its body) by `e`.
  void substitute(TermId t, ExprPtr e) { subst_[t] = std::move(e); }

  /// Expression computing `t` from its children, ignoring its own label.
  ExprPtr body(TermId t) {
    auto it = memo_.find(t);
    if (it != memo_.end()) {
      // A term already bound to a helper is used through it.
      auto h = shared_.find(it->second.get());
      return h != shared_.end() ? h->second.second : it->second;
    }
    ExprPtr e = build(t);
    memo_.emplace(t, e);
    return e;
  }

  mzn::TypeInst type_of(Sort s) const {
    switch (s.kind) {
      case Sort::Kind::Bool: return var_type(BaseType::Bool);
      case Sort::Kind::Int: return var_type(BaseType::Int);
      case Sort::Kind::Real: {
        mzn::TypeInst t = var_type(BaseType::Float);
        t.float_range = std::make_pair(-policy_.float_domain, policy_.float_domain);
        return t;
      }
      case Sort::Kind::BitVec: return bv_type(s.width);
    }
    return var_type(BaseType::Int);
  }

  /// Signed reading of an unsigned bit-vector expression.
  ExprPtr to_signed(const ExprPtr& x, unsigned w) {
    ExprPtr h = share(x, bv_type(w));
    return ite(binary(">=", h, pow_lit(w - 1, "signed bit-vector reading")),
               binary("-", h, pow_lit(w, "signed bit-vector reading")), h);
  }

  std::vector<VarDecl> take_helpers() { return std::exchange(helpers_, {}); }
  std::size_t helper_count() const { return helper_total_; }

 private:
  const Node& node(TermId t) const { return tm_.node(t); }

  ExprPtr share(const ExprPtr& e, mzn::TypeInst type) {
    if (atomic(e)) return e;
    if (auto it = shared_.find(e.get()); it != shared_.end()) return it->second.second;
    VarDecl d;
    d.type = std::move(type);
    d.name = "zb__h" + std::to_string(helper_total_++);
    d.init = e;
    helpers_.push_back(d);
    ExprPtr ref = ident(d.name);
    shared_.emplace(e.get(), std::make_pair(e, ref));
    return ref;
  }

  std::vector<ExprPtr> kids(const Node& n) {
    std::vector<ExprPtr> out;
    out.reserve(n.children.size());
    for (TermId c : n.children) out.push_back(use(c));
    return out;
  }

  ExprPtr chain(const std::string& op, const std::vector<ExprPtr>& xs) {
    std::vector<ExprPtr> parts;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) parts.push_back(binary(op, xs[i], xs[i + 1]));
    return conj(std::move(parts));
  }

  ExprPtr pairwise(const std::string& op, const std::vector<ExprPtr>& xs) {
    std::vector<ExprPtr> parts;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j) parts.push_back(binary(op, xs[i], xs[j]));
    return conj(std::move(parts));
  }

  static std::optional<std::uint64_t> bv_const(const Node& n) {
    if (n.op == Op::BvConst) return n.bits;
    return std::nullopt;
  }

  ExprPtr build(TermId t) {
    const Node& n = node(t);
    switch (n.op) {
      case Op::Var: return ident(var_name_(t));
      case Op::BoolConst: return lit(n.bits != 0);
      case Op::NumConst:
        if (n.sort.is_int()) return lit_int(n.value.numerator());
        return lit_float(n.value);
      case Op::BvConst: return lit_int(Integer(std::to_string(n.bits)));
      default: break;
    }
    if (n.op >= Op::BvNot) return build_bv(t, n);

    std::vector<ExprPtr> xs = kids(n);
    const bool boolean_args = !n.children.empty() && tm_.sort(n.children[0]).is_bool();
    switch (n.op) {
      case Op::Not: return unary("not", xs[0]);
      case Op::And: return fold("/\\", xs);
      case Op::Or: return fold("\\/", xs);
      case Op::Xor: return fold("xor", xs);
      case Op::Implies: {
        ExprPtr acc = xs.back();
        for (std::size_t i = xs.size() - 1; i-- > 0;) acc = binary("->", xs[i], acc);
        return acc;
      }
      case Op::Ite: return ite(xs[0], xs[1], xs[2]);
      case Op::Eq: return chain(boolean_args ? "<->" : "=", xs);
      case Op::Distinct: return pairwise(boolean_args ? "xor" : "!=", xs);
      case Op::Le: return chain("<=", xs);
      case Op::Lt: return chain("<", xs);
      case Op::Ge: return chain(">=", xs);
      case Op::Gt: return chain(">", xs);
      case Op::Add: return fold("+", xs);
      case Op::Sub: return xs.size() == 1 ? unary("-", xs[0]) : fold("-", xs);
      case Op::Neg: return unary("-", xs[0]);
      case Op::Mul: return fold("*", xs);
      case Op::Div: return fold("/", xs);
      case Op::IntDiv:
      case Op::Mod: return euclid(n, xs[0], xs[1]);
      case Op::Abs: return call("abs", {xs[0]});
      case Op::ToReal: return call("int2float", {xs[0]});
      default: break;
    }
    unsupported("operator '" + std::string(smt::op_name(n.op)) + "' has no MiniZinc translation");
  }

  /// SMT-LIB Euclidean div/mod from MiniZinc's truncating operators.
  ExprPtr euclid(const Node& n, const ExprPtr& a, const ExprPtr& b) {
    const Node& d = node(n.children[1]);
    const bool is_div = n.op == Op::IntDiv;
    const mzn::TypeInst int_t = var_type(BaseType::Int);
    if (d.op == Op::NumConst) {
      const Integer c = d.value.numerator();
      const ExprPtr k = lit_int(Integer(abs(c)));
      ExprPtr x = is_div ? share(a, int_t) : a;
      ExprPtr r = binary("mod", binary("+", binary("mod", x, k), k), k);
      if (!is_div) return r;
      return binary("div", binary("-", x, r), b);
    }
    ExprPtr x = share(a, int_t);
    ExprPtr y = share(b, int_t);
    ExprPtr k = share(call("abs", {y}), int_t);
    ExprPtr r = share(binary("mod", binary("+", binary("mod", x, y), k), k), int_t);
    if (!is_div) return r;
    return binary("div", binary("-", x, r), y);
  }

  ExprPtr build_bv(TermId, const Node& n) {
    const Sort arg = tm_.sort(n.children.at(0));
    const unsigned w = arg.width;
    const std::string name(smt::op_name(n.op));
    std::vector<ExprPtr> xs = kids(n);
    auto need = [&](unsigned max_w) {
      if (w > max_w)
        unsupported("'" + name + "' at width " + std::to_string(w) + " exceeds 64-bit MiniZinc integers (limit " +
                    std::to_string(max_w) + ")");
    };
    auto wrap = [&](const ExprPtr& e) { return binary("mod", e, pow_lit(w, name)); };
    auto sh = [&](const ExprPtr& e) { return share(e, bv_type(w)); };
    const ExprPtr modulus = w <= kMaxPowerBits ? lit_int(pow2(w)) : nullptr;

    switch (n.op) {
      case Op::BvNot: return binary("-", lit_int(pow2(w) - 1), xs[0]);
      case Op::BvNeg: need(kMaxPowerBits); return wrap(binary("-", modulus, xs[0]));
      case Op::BvAdd: {
        need(kMaxPowerBits);
        ExprPtr acc = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) acc = wrap(binary("+", acc, xs[i]));
        return acc;
      }
      case Op::BvSub: {
        need(kMaxPowerBits);
        ExprPtr acc = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) acc = wrap(binary("+", binary("-", acc, xs[i]), modulus));
        return acc;
      }
      case Op::BvMul: {
        ExprPtr acc = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) {
          auto c = bv_const(node(n.children[i]));
          const unsigned other = c ? static_cast<unsigned>(std::bit_width(*c)) : w;
          if (w + other > 63)
            unsupported("'bvmul' at width " + std::to_string(w) + " exceeds 64-bit MiniZinc integers");
          acc = wrap(binary("*", acc, xs[i]));
        }
        return acc;
      }
      case Op::BvUdiv: {
        ExprPtr y = sh(xs[1]);
        return ite(binary("=", y, lit_int(0)), lit_int(pow2(w) - 1), binary("div", xs[0], y));
      }
      case Op::BvUrem: {
        ExprPtr x = sh(xs[0]);
        ExprPtr y = sh(xs[1]);
        return ite(binary("=", y, lit_int(0)), x, binary("mod", x, y));
      }
      case Op::BvSdiv: {
        need(kMaxPowerBits);
        const mzn::TypeInst st = int_range(-pow2(w - 1), pow2(w - 1) - 1);
        ExprPtr sx = share(to_signed(xs[0], w), st);
        ExprPtr sy = share(to_signed(xs[1], w), st);
        ExprPtr q = ite(binary("=", sy, lit_int(0)), ite(binary("<", sx, lit_int(0)), lit_int(1), lit_int(-1)),
                        binary("div", sx, sy));
        return wrap(binary("+", q, modulus));
      }
      case Op::BvSrem: {
        need(kMaxPowerBits);
        const mzn::TypeInst st = int_range(-pow2(w - 1), pow2(w - 1) - 1);
        ExprPtr x = sh(xs[0]);
        ExprPtr sy = share(to_signed(xs[1], w), st);
        ExprPtr sx = to_signed(x, w);
        return ite(binary("=", sy, lit_int(0)), x, wrap(binary("+", binary("mod", sx, sy), modulus)));
      }
      case Op::BvSmod: {
        need(kMaxPowerBits);
        const mzn::TypeInst st = int_range(-pow2(w - 1), pow2(w - 1) - 1);
        ExprPtr x = sh(xs[0]);
        ExprPtr sy = share(to_signed(xs[1], w), st);
        ExprPtr r = share(ite(binary("=", sy, lit_int(0)), lit_int(0), binary("mod", to_signed(x, w), sy)), st);
        ExprPtr flip = binary("/\\", binary("!=", r, lit_int(0)),
                              binary("xor", binary("<", r, lit_int(0)), binary("<", sy, lit_int(0))));
        ExprPtr fixed = ite(flip, binary("+", r, sy), r);
        return ite(binary("=", sy, lit_int(0)), x, wrap(binary("+", fixed, modulus)));
      }
      case Op::BvShl:
      case Op::BvLshr:
      case Op::BvAshr: return shift(n, xs, w);
      case Op::BvAnd:
      case Op::BvOr:
      case Op::BvXor: {
        if (w > kMaxBitwiseWidth)
          unsupported("'" + name + "' is supported up to width " + std::to_string(kMaxBitwiseWidth) +
                      ", got width " + std::to_string(w));
        ExprPtr acc = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) acc = bitwise(n.op, sh(acc), sh(xs[i]), w);
        return acc;
      }
      case Op::BvUlt: return binary("<", xs[0], xs[1]);
      case Op::BvUle: return binary("<=", xs[0], xs[1]);
      case Op::BvUgt: return binary(">", xs[0], xs[1]);
      case Op::BvUge: return binary(">=", xs[0], xs[1]);
      case Op::BvSlt: return binary("<", to_signed(xs[0], w), to_signed(xs[1], w));
      case Op::BvSle: return binary("<=", to_signed(xs[0], w), to_signed(xs[1], w));
      case Op::BvSgt: return binary(">", to_signed(xs[0], w), to_signed(xs[1], w));
      case Op::BvSge: return binary(">=", to_signed(xs[0], w), to_signed(xs[1], w));
      case Op::Concat: {
        ExprPtr acc = xs[0];
        unsigned total = w;
        for (std::size_t i = 1; i < xs.size(); ++i) {
          const unsigned cw = tm_.sort(n.children[i]).width;
          total += cw;
          if (total > 63) unsupported("concat result width " + std::to_string(total) + " exceeds 63 bits");
          acc = binary("+", binary("*", acc, pow_lit(cw, name)), xs[i]);
        }
        return acc;
      }
      case Op::Extract: {
        const unsigned hi = n.indices.at(0);
        const unsigned lo = n.indices.at(1);
        ExprPtr e = xs[0];
        if (lo > 0) e = binary("div", e, pow_lit(lo, name));
        if (hi + 1 < w) e = binary("mod", e, pow_lit(hi - lo + 1, name));
        return e;
      }
      case Op::ZeroExtend: return xs[0];
      case Op::SignExtend: {
        const unsigned k = n.indices.at(0);
        if (k == 0) return xs[0];
        if (w + k > 63) unsupported("sign_extend result width " + std::to_string(w + k) + " exceeds 63 bits");
        ExprPtr x = sh(xs[0]);
        return ite(binary(">=", x, pow_lit(w - 1, name)), binary("+", x, lit_int(pow2(w + k) - pow2(w))), x);
      }
      default: break;
    }
    unsupported("operator '" + name + "' has no MiniZinc translation");
  }

  ExprPtr shift_by(Op op, const ExprPtr& x, unsigned k, unsigned w) {
    const std::string name(smt::op_name(op));
    if (op == Op::BvShl) {
      if (k >= w) return lit_int(0);
      if (k == 0) return x;
      return binary("*", binary("mod", x, pow_lit(w - k, name)), pow_lit(k, name));
    }
    if (op == Op::BvLshr) {
      if (k >= w) return lit_int(0);
      if (k == 0) return x;
      return binary("div", x, pow_lit(k, name));
    }
    ExprPtr neg = binary(">=", x, pow_lit(w - 1, name));
    if (k >= w) return ite(neg, lit_int(pow2(w) - 1), lit_int(0));
    if (k == 0) return x;
    return binary("+", binary("div", x, pow_lit(k, name)), ite(neg, lit_int(pow2(w) - pow2(w - k)), lit_int(0)));
  }

  ExprPtr shift(const Node& n, const std::vector<ExprPtr>& xs, unsigned w) {
    const Node& amount = node(n.children[1]);
    if (auto c = bv_const(amount)) {
      const unsigned k = *c >= w ? w : static_cast<unsigned>(*c);
      ExprPtr x = n.op == Op::BvAshr && k > 0 && k < w ? share(xs[0], bv_type(w)) : xs[0];
      return shift_by(n.op, x, k, w);
    }
    ExprPtr x = share(xs[0], bv_type(w));
    ExprPtr y = share(xs[1], bv_type(w));
    ExprPtr acc = shift_by(n.op, x, w, w);
    for (unsigned k = w; k-- > 0;) acc = ite(binary("=", y, lit_int(k)), shift_by(n.op, x, k, w), acc);
    return acc;
  }

  ExprPtr bit(const ExprPtr& x, unsigned i) {
    ExprPtr e = i == 0 ? x : binary("div", x, lit_int(pow2(i)));
    return binary("mod", e, lit_int(2));
  }

  ExprPtr bitwise(Op op, const ExprPtr& x, const ExprPtr& y, unsigned w) {
    std::vector<ExprPtr> terms;
    for (unsigned i = 0; i < w; ++i) {
      ExprPtr a = bit(x, i);
      ExprPtr b = bit(y, i);
      ExprPtr v;
      if (op == Op::BvAnd) v = binary("*", a, b);
      else if (op == Op::BvOr) v = call("max", {a, b});
      else v = binary("mod", binary("+", a, b), lit_int(2));
      terms.push_back(i == 0 ? v : binary("*", lit_int(pow2(i)), v));
    }
    return fold("+", terms);
  }

  const smt::TermManager& tm_;
  const LabelPlan* plan_;
  Namer var_name_;
  BoundsPolicy policy_;
  std::unordered_map<TermId, ExprPtr, smt::TermIdHash> memo_;
  std::vector<VarDecl> helpers_;
  std::unordered_map<const mzn::Expr*, std::pair<ExprPtr, ExprPtr>> shared_;
  std::unordered_map<TermId, ExprPtr, smt::TermIdHash> subst_;
  std::size_t helper_total_ = 0;
};

bool valid_plain(const std::string& s) {
  return !mzn::is_reserved(s) && s.rfind("zb_", 0) != 0 && s.rfind("X_INTRODUCED", 0) != 0;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
  if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "v_" + out;
  if (!valid_plain(out)) out = "u_" + out;
  return out;
}

std::vector<std::pair<std::string, std::string>> name_map(const smt::SmtScript& s) {
  std::vector<std::pair<std::string, std::string>> out(s.declarations.size());
  std::set<std::string> taken;
  for (std::size_t i = 0; i < s.declarations.size(); ++i) {
    const std::string& n = s.declarations[i].first;
    out[i].first = n;
    if (valid_plain(n)) {
      out[i].second = n;
      taken.insert(n);
    }
  }
  for (auto& [from, to] : out) {
    if (!to.empty()) continue;
    std::string base = sanitize(from);
    std::string cand = base;
    for (int k = 1; taken.count(cand); ++k) cand = base + "_" + std::to_string(k);
    to = cand;
    taken.insert(cand);
  }
  return out;
}

void check_sort_width(Sort so) {
  if (so.is_bv() && so.width >= 64)
    unsupported("bit-vectors of width " + std::to_string(so.width) +
                " do not fit 64-bit MiniZinc integers (widths up to 63 are supported)");
}

void check_term_widths(const smt::TermManager& tm, std::vector<TermId> stack) {
  std::unordered_set<TermId, smt::TermIdHash> seen;
  while (!stack.empty()) {
    TermId t = stack.back();
    stack.pop_back();
    if (!seen.insert(t).second) continue;
    check_sort_width(tm.sort(t));
    for (TermId c : tm.node(t).children) stack.push_back(c);
  }
}

void check_widths(const smt::SmtScript& s) {
  for (const auto& d : s.declarations) check_sort_width(d.second);
  check_term_widths(*s.tm, smt::script_roots(s));
}

constexpr const char* kLexPreamble =
    "function ann: zb_lex_minimize(array[int] of var {T}: objs) =\n"
    "  repeat (if next() then commit() /\\ print() /\\\n"
    "    post(lex_less(objs, [sol(objs[i]) | i in index_set(objs)])) else break endif);";

/// Drops label and helper definitions that nothing in the model refers to.
void prune_unused(mzn::Model& m) {
  auto internal = [](const std::string& n) { return n.rfind("zb__n", 0) == 0 || n.rfind("zb__h", 0) == 0; };
  for (bool changed = true; changed;) {
    std::unordered_set<std::string> refs;
    std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
      if (!e) return;
      if (e->kind == mzn::ExprKind::Ident) refs.insert(e->name);
      for (const auto& a : e->args) walk(a);
    };
    for (const auto& d : m.decls) walk(d.init);
    for (const auto& c : m.constraints) walk(c);
    walk(m.solve.objective);
    for (const auto& e : m.solve.lex) walk(e);
    changed = std::erase_if(m.decls, [&](const VarDecl& d) { return internal(d.name) && !refs.count(d.name); }) > 0;
  }
}

}  // namespace

std::string_view output_kind_name(OutputKind k) {
  switch (k) {
    case OutputKind::Single: return "single";
    case OutputKind::Independent: return "independent";
    case OutputKind::Lexicographic: return "lexicographic";
  }
  return "?";
}

LabelPlan daggify(const smt::SmtScript& script, LabelStrategy strategy) {
  LabelPlan plan;
  if (strategy == LabelStrategy::None) return plan;
  const auto fathers = smt::father_counts(script);
  const smt::TermManager& tm = *script.tm;
  std::unordered_set<TermId, smt::TermIdHash> done;
  std::vector<std::pair<TermId, bool>> stack;
  for (TermId r : smt::script_roots(script)) stack.emplace_back(r, false);
  std::reverse(stack.begin(), stack.end());
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      const Node& n = tm.node(t);
      if (n.is_leaf()) continue;
      auto it = fathers.find(t);
      const std::size_t f = it == fathers.end() ? 0 : it->second;
      if (strategy == LabelStrategy::All || f >= 2) {
        plan.labels.emplace(t, "zb__n" + std::to_string(t.v));
        plan.order.push_back(t);
      }
      continue;
    }
    if (!done.insert(t).second) continue;
    stack.emplace_back(t, true);
    const auto& ch = tm.node(t).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it)
      if (!done.count(*it)) stack.emplace_back(*it, false);
  }
  return plan;
}

smt::SmtScript split_assertions(const smt::SmtScript& script) {
  smt::SmtScript out = script;
  out.assertions.clear();
  const smt::TermManager& tm = *script.tm;
  std::unordered_set<TermId, smt::TermIdHash> seen;
  std::vector<TermId> stack(script.assertions.rbegin(), script.assertions.rend());
  while (!stack.empty()) {
    const TermId a = stack.back();
    stack.pop_back();
    const Node& n = tm.node(a);
    if (n.op == Op::And) {
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (n.op == Op::BoolConst && n.bits != 0) continue;
    if (seen.insert(a).second) out.assertions.push_back(a);
  }
  return out;
}

smt::SmtScript maxsmt_to_pb(const smt::SmtScript& script) {
  smt::SmtScript out = script;
  smt::TermManager& tm = *out.tm;
  for (auto& o : out.objectives) {
    if (!o.soft_group) continue;
    bool integral = true;
    for (const auto& s : script.soft_assertions)
      if (s.group == *o.soft_group && !s.weight.is_integer()) integral = false;
    const Sort sort = integral ? Sort::integer() : Sort::real();
    auto num = [&](const Rational& v) { return integral ? tm.mk_int(v) : tm.mk_real(v); };
    std::vector<TermId> terms;
    for (const auto& s : script.soft_assertions)
      if (s.group == *o.soft_group) terms.push_back(tm.mk_ite(s.formula, num(0), num(s.weight)));
    o.term = tm.mk_add(std::move(terms), sort);
    if (!o.id) o.id = *o.soft_group;
    o.soft_group.reset();
    o.bv_signed = false;
  }
  out.soft_assertions.clear();
  return out;
}

std::vector<std::string> MznOutput::texts() const {
  std::vector<std::string> out;
  for (const auto& m : models) out.push_back(mzn::print_model(m));
  return out;
}

std::string MznOutput::manifest_json(const std::vector<std::string>& files) const {
  nlohmann::json j;
  j["kind"] = output_kind_name(kind);
  j["models"] = nlohmann::json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    nlohmann::json m;
    m["file"] = files[i];
    if (i < objectives.size()) {
      m["objective"] = objectives[i].name;
      m["direction"] = objectives[i].maximize ? "maximize" : "minimize";
    }
    j["models"].push_back(m);
  }
  nlohmann::json syms = nlohmann::json::object();
  for (const auto& [from, to] : symbols) syms[from] = to;
  j["symbols"] = syms;
  return j.dump(2) + "\n";
}

MznOutput translate(const smt::SmtScript& input, const TranslateOptions& options) {
  check_widths(input);
  const std::size_t n_obj = input.objectives.size();
  smt::Combination mode = smt::Combination::Lexicographic;
  if (options.multi_objective) {
    mode = *options.multi_objective;
    if (mode == smt::Combination::Lexicographic && n_obj < 2)
      throw ValidationError("lexicographic mode needs at least two objectives, the script has " +
                            std::to_string(n_obj));
    if (mode == smt::Combination::Pareto) unsupported("Pareto multi-objective optimization is not supported");
  } else if (input.combination_explicit) {
    mode = input.combination;
    if (mode == smt::Combination::Pareto && n_obj > 1)
      unsupported("Pareto multi-objective optimization is not supported");
  }

  const smt::SmtScript script = split_assertions(maxsmt_to_pb(input));
  const smt::TermManager& tm = *script.tm;
  const LabelPlan plan = daggify(script, options.labels);

  MznOutput out;
  out.symbols = name_map(script);
  std::unordered_map<std::string, std::string> rename(out.symbols.begin(), out.symbols.end());
  Translator tr(
      tm, &plan, [&](TermId t) { return rename.at(tm.node(t).name); }, options.policy);

  mzn::Model base;
  base.comments.push_back("Generated by zinc-bridge omt2mzn");
  for (const auto& [name, sort] : script.declarations) {
    VarDecl d;
    d.name = rename.at(name);
    d.output = true;
    d.type = tr.type_of(sort);
    if (sort.is_int() && options.policy.int_mode == IntDomainMode::Capped)
      d.type.int_range = std::make_pair(-pow2(31), pow2(31));
    if (sort.is_bv()) d.type = bv_type(sort.width);
    base.decls.push_back(d);
  }
  auto flush_helpers = [&] {
    for (auto& h : tr.take_helpers()) base.decls.push_back(std::move(h));
  };

  const std::vector<TermId>& roots = script.assertions;
  const auto fathers = smt::father_counts(script);
  auto father_count = [&](TermId t) {
    auto it = fathers.find(t);
    return it == fathers.end() ? std::size_t{0} : it->second;
  };
  // An asserted term holds at its one other occurrence.
  for (TermId a : roots)
    if (!tm.node(a).is_leaf() && father_count(a) == 1) tr.substitute(a, lit(true));
  // With every objective in one model, the one other occurrence of an
  // objective term is read from its objective variable.
  const bool one_model = n_obj == 1 || (n_obj > 1 && mode != smt::Combination::Independent);
  std::vector<bool> obj_body(n_obj, false);
  {
    std::unordered_set<TermId, smt::TermIdHash> seen;
    for (std::size_t i = 0; i < n_obj; ++i) {
      const smt::Objective& o = script.objectives[i];
      const TermId t = *o.term;
      if (!one_model || tm.node(t).is_leaf() || father_count(t) > 1 || (tm.sort(t).is_bv() && o.bv_signed) ||
          !seen.insert(t).second)
        continue;
      obj_body[i] = true;
      tr.substitute(t, ident("zb__obj" + std::to_string(i)));
    }
  }

  for (TermId t : plan.order) {
    ExprPtr e = tr.body(t);
    flush_helpers();
    VarDecl d;
    d.name = plan.labels.at(t);
    d.type = tr.type_of(tm.sort(t));
    d.init = e;
    base.decls.push_back(d);
  }
  out.label_count = plan.order.size();

  for (TermId a : roots) {
    auto label = plan.labels.find(a);
    base.constraints.push_back(label != plan.labels.end() ? ident(label->second) : tr.body(a));
    flush_helpers();
  }

  std::vector<VarDecl> obj_decls;
  bool any_float = false;
  for (std::size_t i = 0; i < n_obj; ++i) {
    const smt::Objective& o = script.objectives[i];
    const Sort s = tm.sort(*o.term);
    ExprPtr e = obj_body[i] ? tr.body(*o.term) : tr.use(*o.term);
    if (s.is_bv() && o.bv_signed) e = tr.to_signed(e, s.width);
    flush_helpers();
    VarDecl d;
    d.name = "zb__obj" + std::to_string(i);
    d.output = true;
    d.type = var_type(s.is_real() ? BaseType::Float : BaseType::Int);
    if (s.is_real()) any_float = true;
    d.init = e;
    obj_decls.push_back(d);
    ObjectiveInfo info;
    info.name = o.id ? *o.id : print_term(tm, *o.term);
    info.maximize = o.dir == smt::Direction::Maximize;
    out.objectives.push_back(info);
  }
  out.helper_count = tr.helper_count();

  auto single = [&](std::size_t i) {
    mzn::Model m = base;
    m.decls.push_back(obj_decls[i]);
    m.solve.kind = out.objectives[i].maximize ? SolveItem::Kind::Maximize : SolveItem::Kind::Minimize;
    m.solve.objective = ident(obj_decls[i].name);
    return m;
  };

  if (n_obj == 0) {
    out.kind = OutputKind::Single;
    out.models.push_back(base);
  } else if (n_obj == 1) {
    out.kind = OutputKind::Single;
    out.models.push_back(single(0));
  } else if (mode == smt::Combination::Independent) {
    out.kind = OutputKind::Independent;
    for (std::size_t i = 0; i < n_obj; ++i) out.models.push_back(single(i));
  } else {
    out.kind = OutputKind::Lexicographic;
    mzn::Model m = base;
    m.includes.push_back("minisearch.mzn");
    std::string pre = kLexPreamble;
    pre.replace(pre.find("{T}"), 3, any_float ? "float" : "int");
    m.preamble.push_back(pre);
    for (std::size_t i = 0; i < n_obj; ++i) {
      m.decls.push_back(obj_decls[i]);
      ExprPtr e = ident(obj_decls[i].name);
      if (any_float && obj_decls[i].type.base == BaseType::Int) e = call("int2float", {e});
      if (out.objectives[i].maximize) e = unary("-", e);
      m.solve.lex.push_back(e);
    }
    m.solve.kind = SolveItem::Kind::LexMinimize;
    out.models.push_back(m);
  }
  for (auto& m : out.models) prune_unused(m);
  return out;
}

TermTranslation translate_bv_term(const smt::TermManager& tm, TermId term) {
  const Sort s = tm.sort(term);
  if (!s.is_bv() && !s.is_bool()) throw ValidationError("expected a bit-vector or Boolean term");
  check_term_widths(tm, {term});
  Translator tr(tm, nullptr, [&](TermId t) { return tm.node(t).name; }, BoundsPolicy{});
  TermTranslation out;
  out.expr = tr.use(term);
  for (auto& h : tr.take_helpers()) out.helpers.emplace_back(h.name, h.init);
  return out;
}

}  // namespace zb::omt2mzn
