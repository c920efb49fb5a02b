#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "zinc_bridge/builtins.hpp"
#include "zinc_bridge/fzn2omt.hpp"

namespace zb::fzn2omt {

using fzn::Builtin;
using fzn::Expr;

namespace {

bool is_literal(const Expr& e) { return e.is_bool() || e.is_int() || e.is_float() || e.is_set(); }

Rational numeric(const Expr& e) { return e.is_int() ? Rational(e.as_int()) : e.as_float(); }

bool same_value(const Expr& a, const Expr& b) {
  if ((a.is_int() || a.is_float()) && (b.is_int() || b.is_float())) return numeric(a) == numeric(b);
  return a == b;
}

/// Intersection of two declared domains of the same base type; monostate is
/// the unrestricted domain.
fzn::Domain intersect(const fzn::Domain& a, const fzn::Domain& b) {
  if (std::holds_alternative<std::monostate>(a)) return b;
  if (std::holds_alternative<std::monostate>(b)) return a;
  if (const auto* fa = std::get_if<fzn::FloatInterval>(&a)) {
    const auto& fb = std::get<fzn::FloatInterval>(b);
    return fzn::FloatInterval{std::max(fa->lo, fb.lo), std::min(fa->hi, fb.hi)};
  }
  const auto* ia = std::get_if<fzn::IntInterval>(&a);
  const auto* ib = std::get_if<fzn::IntInterval>(&b);
  if (ia && ib) return fzn::IntInterval{std::max(ia->lo, ib->lo), std::min(ia->hi, ib->hi)};
  const fzn::IntSetValue& set = ia ? std::get<fzn::IntSetValue>(b) : std::get<fzn::IntSetValue>(a);
  fzn::IntSetValue out;
  for (auto v : set.elems) {
    const bool keep = ia ? (ia->lo <= v && v <= ia->hi)
                         : ib ? (ib->lo <= v && v <= ib->hi) : std::get<fzn::IntSetValue>(b).contains(v);
    if (keep) out.elems.push_back(v);
  }
  return out;
}

bool domain_empty(const fzn::Domain& d) {
  if (const auto* i = std::get_if<fzn::IntInterval>(&d)) return i->lo > i->hi;
  if (const auto* s = std::get_if<fzn::IntSetValue>(&d)) return s->elems.empty();
  if (const auto* f = std::get_if<fzn::FloatInterval>(&d)) return f->lo > f->hi;
  return false;
}

bool in_domain(const fzn::FznType& t, const Expr& v) {
  if (t.base == fzn::BaseType::Int && v.is_int()) {
    if (const auto* i = std::get_if<fzn::IntInterval>(&t.domain)) return i->lo <= v.as_int() && v.as_int() <= i->hi;
    if (const auto* s = std::get_if<fzn::IntSetValue>(&t.domain)) return s->contains(v.as_int());
    return true;
  }
  if (t.base == fzn::BaseType::Float && (v.is_float() || v.is_int())) {
    if (const auto* f = std::get_if<fzn::FloatInterval>(&t.domain)) {
      const Rational x = numeric(v);
      return f->lo <= x && x <= f->hi;
    }
    return true;
  }
  if (t.base == fzn::BaseType::Bool) return v.is_bool();
  if (t.base == fzn::BaseType::SetOfInt && v.is_set()) {
    if (const auto* i = std::get_if<fzn::IntInterval>(&t.domain))
      return v.as_set().elems.empty() || (v.as_set().elems.front() >= i->lo && v.as_set().elems.back() <= i->hi);
    if (const auto* s = std::get_if<fzn::IntSetValue>(&t.domain))
      return std::all_of(v.as_set().elems.begin(), v.as_set().elems.end(), [&](auto x) { return s->contains(x); });
    return true;
  }
  return false;
}

class Propagator {
 public:
  explicit Propagator(const fzn::FznModel& m) : in_(m) {
    for (std::size_t i = 0; i < m.vars.size(); ++i) {
      index_.emplace(m.vars[i].name, i);
      parent_.push_back(i);
      domains_.push_back(m.vars[i].type.domain);
    }
    fixed_.resize(m.vars.size());
    removed_.assign(m.constraints.size(), false);
  }

  Propagated run() {
    Propagated out;
    for (bool changed = true; changed && !inconsistent_;) {
      changed = false;
      for (std::size_t i = 0; i < in_.vars.size() && !inconsistent_; ++i) changed |= from_assignment(i);
      for (std::size_t c = 0; c < in_.constraints.size() && !inconsistent_; ++c)
        if (!removed_[c]) changed |= from_constraint(c);
    }
    out.inconsistent = inconsistent_;
    out.conflict = conflict_;
    out.model = rebuild(out.eliminated);
    return out;
  }

 private:
  std::size_t find(std::size_t v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }

  bool is_scalar_var(const std::string& name) const {
    auto it = index_.find(name);
    return it != index_.end() && !in_.vars[it->second].type.is_array();
  }

  /// Current value of an expression: a literal, a representative variable
  /// identifier, or the expression unchanged for arrays.
  Expr resolve(const Expr& e) {
    if (e.is_ident()) {
      const std::string& name = e.as_ident();
      if (is_scalar_var(name)) {
        const std::size_t r = find(index_.at(name));
        if (fixed_[r]) return *fixed_[r];
        return Expr::ident(in_.vars[r].name);
      }
      if (const auto* p = in_.find_param(name); p && !p->type.is_array()) return p->value;
      if (auto it = index_.find(name); it != index_.end()) {
        // Variable array: substitute element-wise.
        fzn::ArrayLit items;
        for (const auto& x : in_.vars[it->second].assignment->as_array()) items.push_back(resolve(x));
        return Expr(std::move(items));
      }
      return e;
    }
    if (e.is_access()) {
      const auto& acc = e.as_access();
      if (auto it = index_.find(acc.name); it != index_.end())
        return resolve(in_.vars[it->second].assignment->as_array()[static_cast<std::size_t>(acc.index - 1)]);
      if (const auto* p = in_.find_param(acc.name)) return p->value.as_array()[static_cast<std::size_t>(acc.index - 1)];
      return e;
    }
    if (e.is_array()) {
      fzn::ArrayLit items;
      for (const auto& x : e.as_array()) items.push_back(resolve(x));
      return Expr(std::move(items));
    }
    return e;
  }

  // Records var := value, checking the domain and earlier values.
  bool fix(std::size_t v, const Expr& value) {
    const std::size_t r = find(v);
    const auto& decl = in_.vars[r];
    Expr val = value;
    if (decl.type.base == fzn::BaseType::Float && val.is_int()) val = Expr(Rational(val.as_int()));
    if (fixed_[r]) {
      if (!same_value(*fixed_[r], val)) fail("'" + decl.name + "' fixed to two different values");
      return false;
    }
    fzn::FznType t = decl.type;
    t.domain = domains_[r];
    if (!in_domain(t, val)) {
      fail("value for '" + decl.name + "' outside its domain");
      return false;
    }
    fixed_[r] = val;
    return true;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    const auto& da = in_.vars[a];
    const auto& db = in_.vars[b];
    if (da.type.base != db.type.base || da.type.base == fzn::BaseType::SetOfInt) return false;
    // Output variables and earlier declarations are kept as representatives.
    std::size_t keep = a, drop = b;
    if ((db.is_output() && !da.is_output()) || (db.is_output() == da.is_output() && b < a)) std::swap(keep, drop);
    fzn::Domain d = intersect(domains_[keep], domains_[drop]);
    if (domain_empty(d)) {
      fail("aliases '" + da.name + "' and '" + db.name + "' have disjoint domains");
      return false;
    }
    domains_[keep] = d;
    parent_[drop] = keep;
    if (fixed_[drop]) {
      const Expr v = *fixed_[drop];
      fixed_[drop].reset();
      if (fixed_[keep]) {
        if (!same_value(*fixed_[keep], v)) fail("'" + da.name + "' fixed to two different values");
      } else {
        fix(keep, v);
      }
    }
    return true;
  }

  void fail(std::string why) {
    if (!inconsistent_) conflict_ = std::move(why);
    inconsistent_ = true;
  }

  bool from_assignment(std::size_t i) {
    const auto& v = in_.vars[i];
    if (v.type.is_array() || !v.assignment || done_assign_.count(i)) return false;
    const Expr e = resolve(*v.assignment);
    if (e.is_ident() && is_scalar_var(e.as_ident())) {
      done_assign_.insert(i);
      return unite(i, index_.at(e.as_ident())) || true;
    }
    if (is_literal(e)) {
      done_assign_.insert(i);
      fix(i, e);
      return true;
    }
    return false;
  }

  std::optional<std::size_t> var_index(const Expr& e) const {
    if (e.is_ident()) {
      auto it = index_.find(e.as_ident());
      if (it != index_.end()) return it->second;
    }
    return std::nullopt;
  }

  bool from_constraint(std::size_t c) {
    const auto& con = in_.constraints[c];
    const auto b = fzn::lookup_builtin(con.name);
    if (!b) return false;
    auto arg = [&](std::size_t i) { return resolve(con.args[i]); };
    switch (*b) {
      case Builtin::IntEq: case Builtin::BoolEq: case Builtin::FloatEq: {
        const Expr x = arg(0), y = arg(1);
        const auto vx = var_index(x), vy = var_index(y);
        if (vx && vy) {
          unite(*vx, *vy);
        } else if (vx) {
          fix(*vx, y);
        } else if (vy) {
          fix(*vy, x);
        } else if (!same_value(x, y)) {
          fail("constraint #" + std::to_string(c) + " (" + con.name + ") is violated by constants");
        }
        removed_[c] = true;
        return true;
      }
      case Builtin::FloatDiv: {
        const Expr x = arg(0), y = arg(1), z = arg(2);
        if (!is_literal(x) || !is_literal(y) || numeric(y).is_zero()) return false;
        const Expr q(numeric(x) / numeric(y));
        if (auto vz = var_index(z)) fix(*vz, q);
        else if (!same_value(z, q)) fail("constraint #" + std::to_string(c) + " (float_div) is violated by constants");
        removed_[c] = true;
        return true;
      }
      case Builtin::FloatTimes: case Builtin::FloatPlus: {
        const Expr x = arg(0), y = arg(1), z = arg(2);
        if (!is_literal(x) || !is_literal(y)) return false;
        const Expr r(*b == Builtin::FloatTimes ? numeric(x) * numeric(y) : numeric(x) + numeric(y));
        if (auto vz = var_index(z)) fix(*vz, r);
        else if (!same_value(z, r)) fail("constraint #" + std::to_string(c) + " (" + con.name + ") is violated by constants");
        removed_[c] = true;
        return true;
      }
      case Builtin::IntPlus: case Builtin::IntTimes: {
        const Expr x = arg(0), y = arg(1), z = arg(2);
        if (!x.is_int() || !y.is_int()) return false;
        std::int64_t r;
        const bool ovf = *b == Builtin::IntPlus ? __builtin_add_overflow(x.as_int(), y.as_int(), &r)
                                                 : __builtin_mul_overflow(x.as_int(), y.as_int(), &r);
        if (ovf) return false;
        if (auto vz = var_index(z)) fix(*vz, Expr(r));
        else if (!same_value(z, Expr(r))) fail("constraint #" + std::to_string(c) + " (" + con.name + ") is violated by constants");
        removed_[c] = true;
        return true;
      }
      case Builtin::Bool2Int: {
        const Expr x = arg(0), y = arg(1);
        if (x.is_bool()) {
          const Expr v(std::int64_t{x.as_bool() ? 1 : 0});
          if (auto vy = var_index(y)) fix(*vy, v);
          else if (!same_value(y, v)) fail("constraint #" + std::to_string(c) + " (bool2int) is violated by constants");
        } else if (y.is_int()) {
          if (y.as_int() != 0 && y.as_int() != 1) fail("bool2int image outside {0,1}");
          else fix(*var_index(x), Expr(y.as_int() == 1));
        } else {
          return false;
        }
        removed_[c] = true;
        return true;
      }
      case Builtin::Int2Float: {
        const Expr x = arg(0), y = arg(1);
        if (!x.is_int()) return false;
        const Expr v(Rational(x.as_int()));
        if (auto vy = var_index(y)) fix(*vy, v);
        else if (!same_value(y, v)) fail("constraint #" + std::to_string(c) + " (int2float) is violated by constants");
        removed_[c] = true;
        return true;
      }
      case Builtin::BoolNot: {
        const Expr x = arg(0), y = arg(1);
        if (x.is_bool() && var_index(y)) fix(*var_index(y), Expr(!x.as_bool()));
        else if (y.is_bool() && var_index(x)) fix(*var_index(x), Expr(!y.as_bool()));
        else if (x.is_bool() && y.is_bool()) {
          if (x.as_bool() == y.as_bool()) fail("constraint #" + std::to_string(c) + " (bool_not) is violated by constants");
        } else {
          return false;
        }
        removed_[c] = true;
        return true;
      }
      default: return false;
    }
  }

  /// Substitution for the rebuilt model: arrays of variables stay as named
  /// references, scalars are resolved.
  Expr substitute(const Expr& e) {
    if (e.is_ident()) {
      if (is_scalar_var(e.as_ident())) return resolve(e);
      if (const auto* p = in_.find_param(e.as_ident()); p && !p->type.is_array()) return e;
      return e;
    }
    if (e.is_access()) {
      if (index_.count(e.as_access().name)) return resolve(e);
      return e;
    }
    if (e.is_array()) {
      fzn::ArrayLit items;
      for (const auto& x : e.as_array()) items.push_back(substitute(x));
      return Expr(std::move(items));
    }
    return e;
  }

  fzn::FznModel rebuild(std::vector<std::pair<std::string, Expr>>& eliminated) {
    fzn::FznModel m;
    m.predicates = in_.predicates;
    m.params = in_.params;
    std::vector<bool> gone(in_.vars.size(), false);
    for (std::size_t i = 0; i < in_.vars.size(); ++i) {
      const auto& v = in_.vars[i];
      if (v.type.is_array()) continue;
      const std::size_t r = find(i);
      if (!fixed_[r] && r == i) continue;
      const Expr repl = fixed_[r] ? *fixed_[r] : Expr::ident(in_.vars[r].name);
      if (v.is_output()) {
        kept_as_[i] = repl;
      } else {
        gone[i] = true;
        eliminated.emplace_back(v.name, repl);
      }
    }
    for (std::size_t i = 0; i < in_.vars.size(); ++i) {
      if (gone[i]) continue;
      fzn::FznVarDecl v = in_.vars[i];
      if (auto k = kept_as_.find(i); k != kept_as_.end()) {
        v.assignment = k->second;
      } else if (!v.type.is_array()) {
        v.type.domain = domains_[i];
        if (done_assign_.count(i)) v.assignment.reset();
        else if (v.assignment) v.assignment = substitute(*v.assignment);
      } else {
        v.assignment = substitute(*v.assignment);
      }
      m.vars.push_back(std::move(v));
    }
    for (std::size_t c = 0; c < in_.constraints.size(); ++c) {
      if (removed_[c]) continue;
      fzn::FznConstraint con = in_.constraints[c];
      for (auto& a : con.args) a = substitute(a);
      if (auto t = con.defined_var(); t && index_.count(*t) && gone[index_.at(*t)]) {
        con.annotations.erase(std::remove_if(con.annotations.begin(), con.annotations.end(),
                                             [](const fzn::Annotation& a) { return a.name == "defines_var"; }),
                              con.annotations.end());
      }
      m.constraints.push_back(std::move(con));
    }
    for (auto g : in_.solve_items) {
      if (g.objective) g.objective = substitute(*g.objective);
      m.solve_items.push_back(std::move(g));
    }
    for (const auto& name : in_.output_annotations)
      if (!index_.count(name) || !gone[index_.at(name)]) m.output_annotations.push_back(name);
    return m;
  }

  const fzn::FznModel& in_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> parent_;
  std::vector<fzn::Domain> domains_;
  std::vector<std::optional<Expr>> fixed_;
  std::vector<bool> removed_;
  std::set<std::size_t> done_assign_;
  std::map<std::size_t, Expr> kept_as_;
  bool inconsistent_ = false;
  std::string conflict_;
};

}  // namespace

Propagated propagate_constants_and_aliases(const fzn::FznModel& model) { return Propagator(model).run(); }

const PbMarker* MarkedModel::marker_for(std::size_t constraint) const {
  for (const auto& m : markers)
    if (m.constraint == constraint) return &m;
  return nullptr;
}

MarkedModel detect_and_rewrite_pb(const fzn::FznModel& model) {
  MarkedModel out;
  out.model = model;
  // 0/1 integer images of Booleans.
  std::map<std::string, std::string> image;
  for (const auto& c : model.constraints) {
    if (fzn::lookup_builtin(c.name) != Builtin::Bool2Int) continue;
    if (!c.args[0].is_ident() || !c.args[1].is_ident()) continue;
    const auto* b = model.find_var(c.args[0].as_ident());
    const auto* x = model.find_var(c.args[1].as_ident());
    if (!b || !x || b->type.is_array() || x->type.is_array()) continue;
    image.emplace(x->name, b->name);
  }
  auto elems = [&](const Expr& e) -> std::optional<fzn::ArrayLit> {
    if (e.is_array()) return e.as_array();
    if (e.is_ident()) {
      if (const auto* p = model.find_param(e.as_ident()); p && p->type.is_array()) return p->value.as_array();
      if (const auto* v = model.find_var(e.as_ident()); v && v->type.is_array()) return v->assignment->as_array();
    }
    return std::nullopt;
  };
  auto int_value = [&](const Expr& e) -> std::optional<std::int64_t> {
    if (e.is_int()) return e.as_int();
    if (e.is_ident())
      if (const auto* p = model.find_param(e.as_ident()); p && p->value.is_int()) return p->value.as_int();
    return std::nullopt;
  };
  for (std::size_t ci = 0; ci < model.constraints.size(); ++ci) {
    const auto& c = model.constraints[ci];
    const auto b = fzn::lookup_builtin(c.name);
    if (!b) continue;
    const bool int_lin = *b == Builtin::IntLinLe || *b == Builtin::IntLinEq;
    const bool bool_lin = *b == Builtin::BoolLinLe || *b == Builtin::BoolLinEq;
    if (!int_lin && !bool_lin) continue;
    auto coeffs = elems(c.args[0]);
    auto xs = elems(c.args[1]);
    auto rhs = int_value(c.args[2]);
    if (!coeffs || !xs || !rhs) continue;
    PbMarker mk;
    mk.constraint = ci;
    mk.rel = (*b == Builtin::IntLinLe || *b == Builtin::BoolLinLe) ? cardnet::Relation::Le : cardnet::Relation::Eq;
    mk.bound = Integer(std::to_string(*rhs), 10);
    bool ok = true;
    for (std::size_t i = 0; i < xs->size() && ok; ++i) {
      auto w = int_value((*coeffs)[i]);
      if (!w) {
        ok = false;
        break;
      }
      const Integer weight(std::to_string(*w), 10);
      const Expr& x = (*xs)[i];
      std::optional<std::string> name;
      if (x.is_access()) {
        if (auto arr = elems(Expr::ident(x.as_access().name)))
          if (auto e = (*arr)[static_cast<std::size_t>(x.as_access().index - 1)]; e.is_ident()) name = e.as_ident();
      } else if (x.is_ident()) {
        name = x.as_ident();
      }
      if (bool_lin) {
        if (x.is_bool()) {
          if (x.as_bool()) mk.bound -= weight;
        } else if (name) {
          if (*w != 0) mk.terms.emplace_back(*name, weight);
        } else {
          ok = false;
        }
        continue;
      }
      if (auto k = int_value(x)) {
        mk.bound -= weight * Integer(std::to_string(*k), 10);
      } else if (name && image.count(*name)) {
        if (*w != 0) mk.terms.emplace_back(image.at(*name), weight);
      } else {
        ok = false;  // a genuine integer variable: the sum stays arithmetic
      }
    }
    if (ok && !mk.terms.empty()) out.markers.push_back(std::move(mk));
  }
  return out;
}

}  // namespace zb::fzn2omt
