#include "zinc_bridge/cardnet.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace zb::cardnet {

namespace {

class Builder {
 public:
  explicit Builder(VarPool& pool) : pool_(pool) {}

  Lit fresh() {
    ++aux_;
    return pos(pool_.fresh());
  }

  // (hi, lo) = (a or b, a and b), both as full equivalences.
  std::pair<Lit, Lit> comparator(Lit a, Lit b) {
    Lit hi = fresh();
    Lit lo = fresh();
    clauses_.push_back({~a, hi});
    clauses_.push_back({~b, hi});
    clauses_.push_back({~hi, a, b});
    clauses_.push_back({~lo, a});
    clauses_.push_back({~lo, b});
    clauses_.push_back({~a, ~b, lo});
    return {hi, lo};
  }

  Lit constant_false() {
    Lit f = fresh();
    clauses_.push_back({~f});
    return f;
  }

  Lit or_gate(const std::vector<Lit>& xs) {
    Lit o = fresh();
    Clause big{~o};
    for (Lit x : xs) {
      clauses_.push_back({~x, o});
      big.push_back(x);
    }
    clauses_.push_back(std::move(big));
    return o;
  }

  static std::vector<Lit> odds(const std::vector<Lit>& v) {
    std::vector<Lit> r;
    for (std::size_t i = 0; i < v.size(); i += 2) r.push_back(v[i]);
    return r;
  }
  static std::vector<Lit> evens(const std::vector<Lit>& v) {
    std::vector<Lit> r;
    for (std::size_t i = 1; i < v.size(); i += 2) r.push_back(v[i]);
    return r;
  }

  // Merges two sorted sequences of equal power-of-two length n into 2n.
  std::vector<Lit> hmerge(const std::vector<Lit>& a, const std::vector<Lit>& b) {
    const std::size_t n = a.size();
    if (n == 1) {
      auto [hi, lo] = comparator(a[0], b[0]);
      return {hi, lo};
    }
    std::vector<Lit> d = hmerge(odds(a), odds(b));
    std::vector<Lit> e = hmerge(evens(a), evens(b));
    std::vector<Lit> c(2 * n);
    c[0] = d[0];
    c[2 * n - 1] = e[n - 1];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      auto [hi, lo] = comparator(d[i + 1], e[i]);
      c[2 * i + 1] = hi;
      c[2 * i + 2] = lo;
    }
    return c;
  }

  std::vector<Lit> hsort(const std::vector<Lit>& a) {
    if (a.size() == 1) return a;
    const std::size_t half = a.size() / 2;
    std::vector<Lit> l(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<Lit> r(a.begin() + static_cast<std::ptrdiff_t>(half), a.end());
    return hmerge(hsort(l), hsort(r));
  }

  // Top n+1 outputs of merging two sorted sequences of length n.
  std::vector<Lit> smerge(const std::vector<Lit>& a, const std::vector<Lit>& b) {
    const std::size_t n = a.size();
    if (n == 1) {
      auto [hi, lo] = comparator(a[0], b[0]);
      return {hi, lo};
    }
    std::vector<Lit> d = smerge(odds(a), odds(b));
    std::vector<Lit> e = smerge(evens(a), evens(b));
    std::vector<Lit> c(n + 1);
    c[0] = d[0];
    for (std::size_t i = 0; i < n / 2; ++i) {
      auto [hi, lo] = comparator(d[i + 1], e[i]);
      c[2 * i + 1] = hi;
      c[2 * i + 2] = lo;
    }
    return c;
  }

  // Top p sorted outputs of a, where |a| is a multiple of the power of two p.
  std::vector<Lit> card(const std::vector<Lit>& a, std::size_t p) {
    if (a.size() == p) return hsort(a);
    std::vector<Lit> head(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(p));
    std::vector<Lit> rest(a.begin() + static_cast<std::ptrdiff_t>(p), a.end());
    std::vector<Lit> merged = smerge(card(head, p), card(rest, p));
    merged.resize(p);
    return merged;
  }

  NetworkResult finish(std::vector<Lit> outputs) {
    return NetworkResult{std::move(outputs), aux_, std::move(clauses_)};
  }

  std::vector<Clause>& clauses() { return clauses_; }
  std::size_t aux() const { return aux_; }

 private:
  VarPool& pool_;
  std::vector<Clause> clauses_;
  std::size_t aux_ = 0;
};

}  // namespace

NetworkResult build_cardinality_network(const std::vector<Lit>& inputs, std::size_t k, VarPool& pool) {
  const std::size_t n = inputs.size();
  if (n == 0) throw std::invalid_argument("cardinality network needs at least one input");
  if (k > n) throw std::invalid_argument("bound k=" + std::to_string(k) + " out of range for " + std::to_string(n) +
                                         " inputs");
  Builder b(pool);
  const std::size_t m = std::min(k + 1, n);
  if (n == 1) return b.finish({inputs[0]});
  if (m == 1) return b.finish({b.or_gate(inputs)});
  std::size_t p = 1;
  while (p < m) p <<= 1;
  std::vector<Lit> padded = inputs;
  while (padded.size() % p != 0) padded.push_back(b.constant_false());
  std::vector<Lit> out = b.card(padded, p);
  out.resize(m);
  return b.finish(std::move(out));
}

NetworkResult build_sorting_network(const std::vector<Lit>& inputs, VarPool& pool) {
  return build_cardinality_network(inputs, inputs.size(), pool);
}

namespace {

void check_bound(const std::vector<Lit>& inputs, std::size_t k) {
  if (k > inputs.size())
    throw std::invalid_argument("bound k=" + std::to_string(k) + " out of range for " +
                                std::to_string(inputs.size()) + " inputs");
}

Encoding units(const std::vector<Lit>& inputs, bool positive) {
  Encoding e;
  for (Lit l : inputs) e.clauses.push_back({positive ? l : ~l});
  return e;
}

}  // namespace

Encoding encode_atmost_k(const std::vector<Lit>& inputs, std::size_t k, VarPool& pool) {
  check_bound(inputs, k);
  if (k == inputs.size()) return {};
  if (k == 0) return units(inputs, false);
  NetworkResult net = build_cardinality_network(inputs, k, pool);
  net.clauses.push_back({~net.outputs[k]});
  return {std::move(net.clauses), net.aux_variable_count};
}

Encoding encode_atleast_k(const std::vector<Lit>& inputs, std::size_t k, VarPool& pool) {
  check_bound(inputs, k);
  if (k == 0) return {};
  if (k == inputs.size()) return units(inputs, true);
  NetworkResult net = build_cardinality_network(inputs, k - 1, pool);
  net.clauses.push_back({net.outputs[k - 1]});
  return {std::move(net.clauses), net.aux_variable_count};
}

Encoding encode_exactly_k(const std::vector<Lit>& inputs, std::size_t k, VarPool& pool) {
  check_bound(inputs, k);
  if (k == 0) return units(inputs, false);
  if (k == inputs.size()) return units(inputs, true);
  NetworkResult net = build_cardinality_network(inputs, k, pool);
  net.clauses.push_back({net.outputs[k - 1]});
  net.clauses.push_back({~net.outputs[k]});
  return {std::move(net.clauses), net.aux_variable_count};
}

namespace {

bool holds(const Integer& lhs, Relation rel, const Integer& rhs) {
  switch (rel) {
    case Relation::Le: return lhs <= rhs;
    case Relation::Ge: return lhs >= rhs;
    case Relation::Eq: return lhs == rhs;
  }
  return false;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

std::size_t clamp_count(const Integer& v, std::size_t n) {
  if (v <= 0) return 0;
  if (v >= Integer(static_cast<unsigned long>(n))) return n;
  return static_cast<std::size_t>(v.get_ui());
}

}  // namespace

PbEncoding encode_pb_sum(const std::vector<WeightedLit>& terms, Relation rel, const Integer& bound, VarPool& pool) {
  // Normalise to positive-literal coefficients plus a constant.
  std::map<std::uint32_t, Integer> coeff;
  Integer constant = 0;
  for (const auto& t : terms) {
    if (t.lit.negated) {
      coeff[t.lit.var] -= t.weight;
      constant += t.weight;
    } else {
      coeff[t.lit.var] += t.weight;
    }
  }
  Integer b = bound - constant;
  std::map<Integer, std::vector<Lit>> groups;  // weight -> literals, deterministic order
  Integer total = 0;
  for (const auto& [v, c] : coeff) {
    if (c == 0) continue;
    if (c > 0) {
      groups[c].push_back(pos(v));
      total += c;
    } else {
      const Integer w = -c;
      groups[w].push_back(neg(v));
      b += w;
      total += w;
    }
  }

  PbEncoding out;
  auto trivially = [&](bool value) {
    if (!value) out.clauses.push_back({});
    return out;
  };
  if (groups.empty()) return trivially(holds(0, rel, b));
  switch (rel) {
    case Relation::Le:
      if (b < 0) return trivially(false);
      if (b >= total) return trivially(true);
      break;
    case Relation::Ge:
      if (b <= 0) return trivially(true);
      if (b > total) return trivially(false);
      break;
    case Relation::Eq:
      if (b < 0 || b > total) return trivially(false);
      break;
  }

  auto absorb = [&](Encoding e) {
    for (auto& c : e.clauses) out.clauses.push_back(std::move(c));
    out.aux_variable_count += e.aux_variable_count;
  };

  if (groups.size() == 1) {
    const auto& [w, lits] = *groups.begin();
    const std::size_t n = lits.size();
    switch (rel) {
      case Relation::Le: absorb(encode_atmost_k(lits, clamp_count(floor_div(b, w), n), pool)); break;
      case Relation::Ge: absorb(encode_atleast_k(lits, clamp_count(ceil_div(b, w), n), pool)); break;
      case Relation::Eq:
        if (b % w != 0) return trivially(false);
        absorb(encode_exactly_k(lits, clamp_count(b / w, n), pool));
        break;
    }
    return out;
  }

  LinearLink link;
  link.rel = rel;
  link.bound = b;
  for (const auto& [w, lits] : groups) {
    const std::size_t n = lits.size();
    const std::size_t t = rel == Relation::Ge ? clamp_count(ceil_div(b, w), n)
                                              : clamp_count(floor_div(b, w) + 1, n);
    NetworkResult net = build_cardinality_network(lits, t - 1, pool);
    for (auto& c : net.clauses) out.clauses.push_back(std::move(c));
    out.aux_variable_count += net.aux_variable_count;
    for (std::size_t j = 0; j < t; ++j) link.terms.push_back(WeightedLit{net.outputs[j], w});
  }
  out.link = std::move(link);
  return out;
}

bool clauses_hold(const std::vector<Clause>& clauses, const std::vector<bool>& assignment) {
  for (const auto& c : clauses) {
    bool sat = false;
    for (Lit l : c) {
      if (assignment.at(l.var) != l.negated) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

bool propagate_extension(const std::vector<Clause>& clauses, std::vector<std::optional<bool>>& assignment) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : clauses) {
      std::optional<Lit> open;
      std::size_t open_count = 0;
      bool sat = false;
      for (Lit l : c) {
        const auto& v = assignment.at(l.var);
        if (!v) {
          ++open_count;
          open = l;
        } else if (*v != l.negated) {
          sat = true;
          break;
        }
      }
      if (sat) continue;
      if (open_count == 0) return false;
      if (open_count == 1) {
        assignment[open->var] = !open->negated;
        changed = true;
      }
    }
  }
  return std::all_of(assignment.begin(), assignment.end(), [](const auto& v) { return v.has_value(); });
}

}  // namespace zb::cardnet
