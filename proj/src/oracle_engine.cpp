#include "oracle_engine.hpp"

#include <algorithm>
#include <limits>

namespace zb::oracle::detail {

std::int64_t add64(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow();
  return r;
}

std::int64_t sub64(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow();
  return r;
}

std::int64_t mul64(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow();
  return r;
}

Rational to_rational(const Value& v, bool bv_signed) {
  if (const auto* b = std::get_if<bool>(&v)) return Rational(*b ? 1 : 0);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return Rational(*i);
  if (const auto* r = std::get_if<Rational>(&v)) return *r;
  if (const auto* bv = std::get_if<Bv>(&v)) {
    Integer u(std::to_string(bv->bits), 10);
    if (bv_signed && bv->width > 0 && ((bv->bits >> (bv->width - 1)) & 1)) u -= Integer(1) << bv->width;
    return Rational(u);
  }
  // Sets project to their bit mask over non-negative elements.
  Integer mask = 0;
  for (std::int64_t e : std::get<IntSet>(v)) mask += Integer(1) << static_cast<unsigned long>(e >= 0 ? e : 0);
  return Rational(mask);
}

std::string value_string(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* r = std::get_if<Rational>(&v)) return r->to_string();
  if (const auto* bv = std::get_if<Bv>(&v)) return "#" + std::to_string(bv->bits) + "/" + std::to_string(bv->width);
  std::string s = "{";
  const auto& set = std::get<IntSet>(v);
  for (std::size_t i = 0; i < set.size(); ++i) s += (i ? "," : "") + std::to_string(set[i]);
  return s + "}";
}

bool acyclic_with(const std::vector<Problem::Def>& defs, std::size_t var_count, int target,
                  const std::vector<int>& inputs) {
  std::vector<const Problem::Def*> by_target(var_count, nullptr);
  for (const auto& d : defs) by_target[static_cast<std::size_t>(d.target)] = &d;
  if (by_target[static_cast<std::size_t>(target)]) return false;
  // target must not be reachable from its own inputs.
  std::vector<char> seen(var_count, 0);
  std::vector<int> stack(inputs.begin(), inputs.end());
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (v == target) return false;
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = 1;
    if (const auto* d = by_target[static_cast<std::size_t>(v)])
      for (int u : d->inputs) stack.push_back(u);
  }
  return true;
}

namespace {

struct Stop {};

class Search {
 public:
  Search(const Problem& p, const OracleOptions& o) : p_(p), opts_(o) {}

  OracleResult go() {
    const std::size_t n = p_.vars.size();
    std::vector<const Problem::Def*> def_of(n, nullptr);
    for (const auto& d : p_.defs) def_of[static_cast<std::size_t>(d.target)] = &d;

    // Enumeration order and readiness depth.
    std::vector<int> depth(n, INT32_MIN);
    for (std::size_t v = 0; v < n; ++v) {
      if (def_of[v]) continue;
      if (p_.vars[v].defined)
        return OracleResult::inapplicable("variable '" + p_.vars[v].name + "' has no finite domain");
      depth[v] = static_cast<int>(order_.size());
      order_.push_back(static_cast<int>(v));
    }
    // Topological order of definitions.
    std::vector<int> topo;
    std::vector<char> state(n, 0);
    std::function<void(int)> visit = [&](int v) {
      if (state[static_cast<std::size_t>(v)] == 2 || !def_of[static_cast<std::size_t>(v)]) return;
      if (state[static_cast<std::size_t>(v)] == 1) throw std::logic_error("cyclic definitions");
      state[static_cast<std::size_t>(v)] = 1;
      for (int u : def_of[static_cast<std::size_t>(v)]->inputs) visit(u);
      state[static_cast<std::size_t>(v)] = 2;
      topo.push_back(v);
    };
    for (std::size_t v = 0; v < n; ++v) visit(static_cast<int>(v));
    for (int v : topo) {
      int d = -1;
      for (int u : def_of[static_cast<std::size_t>(v)]->inputs) d = std::max(d, depth[static_cast<std::size_t>(u)]);
      depth[static_cast<std::size_t>(v)] = d;
    }

    // Budget pre-check over non-Boolean enumerated variables.
    long double product = 1;
    for (int v : order_) {
      const auto& dom = p_.vars[static_cast<std::size_t>(v)].domain;
      if (dom.empty()) return OracleResult::unsat();
      if (std::holds_alternative<bool>(dom.front())) continue;
      product *= static_cast<long double>(dom.size());
    }
    if (product > static_cast<long double>(opts_.budget))
      return OracleResult::inapplicable("search space of about " + std::to_string(static_cast<double>(product)) +
                                        " assignments exceeds the budget of " + std::to_string(opts_.budget));
    node_limit_ = opts_.node_limit ? opts_.node_limit : opts_.budget * 64;

    const std::size_t levels = order_.size() + 1;  // slot 0 is "before search"
    defs_at_.assign(levels, {});
    checks_at_.assign(levels, {});
    for (int v : topo) defs_at_[static_cast<std::size_t>(depth[static_cast<std::size_t>(v)] + 1)].push_back(def_of[static_cast<std::size_t>(v)]);
    for (const auto& c : p_.checks) {
      int d = -1;
      for (int u : c.inputs) d = std::max(d, depth[static_cast<std::size_t>(u)]);
      checks_at_[static_cast<std::size_t>(d + 1)].push_back(&c);
    }

    collect_ = !p_.projection.empty();
    satisfy_ = p_.goals.empty();
    env_.assign(n, Value{false});
    if (collect_) solutions_.emplace();
    try {
      if (settle(0)) descend(0);
    } catch (const Stop&) {
    } catch (const Overflow&) {
      return OracleResult::inapplicable("64-bit integer overflow during evaluation");
    } catch (const GiveUp& e) {
      return OracleResult::inapplicable(e.what());
    }
    OracleResult r = found_ ? OracleResult::sat(best_) : OracleResult::unsat();
    r.nodes = nodes_;
    r.witness = std::move(witness_);
    if (collect_) r.solutions = std::move(solutions_);
    return r;
  }

 private:
  // Runs the definitions and checks scheduled at a level.
  bool settle(std::size_t level) {
    for (const auto* d : defs_at_[level]) {
      auto v = d->compute(env_);
      if (!v) return false;
      env_[static_cast<std::size_t>(d->target)] = std::move(*v);
    }
    for (const auto* c : checks_at_[level])
      if (!c->holds(env_)) return false;
    return true;
  }

  void descend(std::size_t i) {
    if (i == order_.size()) {
      leaf();
      return;
    }
    const int v = order_[i];
    for (const Value& val : p_.vars[static_cast<std::size_t>(v)].domain) {
      if (++nodes_ > node_limit_) throw GiveUp("node limit of " + std::to_string(node_limit_) + " exceeded");
      env_[static_cast<std::size_t>(v)] = val;
      if (settle(i + 1)) descend(i + 1);
    }
  }

  void leaf() {
    std::vector<Rational> vals;
    vals.reserve(p_.goals.size());
    for (const auto& g : p_.goals) vals.push_back(g.value(env_));
    if (collect_) {
      std::vector<Rational> proj;
      for (auto [v, s] : p_.projection) proj.push_back(to_rational(env_[static_cast<std::size_t>(v)], s));
      solutions_->insert(std::move(proj));
    }
    if (!found_) {
      found_ = true;
      best_ = vals;
      record_witness();
    } else if (p_.combination == MultiObjective::Lexicographic) {
      if (lex_better(vals)) {
        best_ = vals;
        record_witness();
      }
    } else {
      for (std::size_t k = 0; k < vals.size(); ++k) {
        if (better(k, vals[k])) {
          best_[k] = vals[k];
          if (k == 0) record_witness();
        }
      }
    }
    if (satisfy_ && !collect_) throw Stop{};
  }

  bool better(std::size_t k, const Rational& v) const {
    return p_.goals[k].maximize ? v > best_[k] : v < best_[k];
  }

  bool lex_better(const std::vector<Rational>& vals) const {
    for (std::size_t k = 0; k < vals.size(); ++k) {
      if (vals[k] == best_[k]) continue;
      return better(k, vals[k]);
    }
    return false;
  }

  void record_witness() {
    witness_.clear();
    for (int v : p_.witness_vars)
      witness_.emplace_back(p_.vars[static_cast<std::size_t>(v)].name, value_string(env_[static_cast<std::size_t>(v)]));
  }

  const Problem& p_;
  const OracleOptions& opts_;
  std::vector<int> order_;
  std::vector<std::vector<const Problem::Def*>> defs_at_;
  std::vector<std::vector<const Problem::Check*>> checks_at_;
  Env env_;
  std::uint64_t nodes_ = 0;
  std::uint64_t node_limit_ = 0;
  bool collect_ = false;
  bool satisfy_ = false;
  bool found_ = false;
  std::vector<Rational> best_;
  std::vector<std::pair<std::string, std::string>> witness_;
  std::optional<std::set<std::vector<Rational>>> solutions_;
};

}  // namespace

OracleResult run(const Problem& p, const OracleOptions& options) { return Search(p, options).go(); }

}  // namespace zb::oracle::detail
