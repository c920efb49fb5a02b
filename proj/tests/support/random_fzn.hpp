#pragma once

// Random finite-domain FlatZinc models for differential testing.

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace zb::testsupport {

struct RandomFznOptions {
  /// Chance of a model with float variables (la mode only).
  double float_share = 0.15;
  /// Chance of a model with a set variable.
  double set_share = 0.1;
};

class RandomFzn {
 public:
  explicit RandomFzn(std::uint64_t seed, RandomFznOptions opts = {}) : rng_(seed), opts_(opts) {}

  std::string next() {
    ints_.clear();
    bools_.clear();
    decls_.str("");
    cons_.str("");
    fresh_ = 0;

    const int n_int = pick(2, 4);
    for (int i = 0; i < n_int; ++i) {
      const std::int64_t lo = pick(-4, 2);
      declare_int(lo, lo + pick(1, 5), false);
    }
    const int n_bool = pick(0, 3);
    for (int i = 0; i < n_bool; ++i) declare_bool(false);

    const int n_def = pick(1, 4);
    for (int i = 0; i < n_def; ++i) derive();
    const int n_con = pick(1, 4);
    for (int i = 0; i < n_con; ++i) constrain();

    const bool floats = chance(opts_.float_share);
    if (floats) float_part();
    if (chance(opts_.set_share)) set_part();
    return decls_.str() + cons_.str() + solve_items(floats);
  }

 private:
  struct IntVar {
    std::string name;
    std::int64_t lo, hi;
  };

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& any(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }
  std::string name(const char* p) { return p + std::to_string(fresh_++); }

  const IntVar& declare_int(std::int64_t lo, std::int64_t hi, bool defined) {
    ints_.push_back({name("x"), lo, hi});
    decls_ << "var " << lo << ".." << hi << ": " << ints_.back().name << " :: output_var"
           << (defined ? " :: is_defined_var" : "") << ";\n";
    return ints_.back();
  }
  std::string declare_bool(bool defined) {
    bools_.push_back(name("b"));
    decls_ << "var bool: " << bools_.back() << " :: output_var" << (defined ? " :: is_defined_var" : "") << ";\n";
    return bools_.back();
  }
  std::string any_bool() {
    if (bools_.empty() || chance(0.2)) return chance(0.5) ? "true" : "false";
    return any(bools_);
  }
  std::string int_list(const std::vector<IntVar>& vs) {
    std::string s = "[";
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + vs[i].name;
    return s + "]";
  }
  static std::string list(const std::vector<std::int64_t>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
    return s + "]";
  }
  std::vector<IntVar> some_ints(int lo, int hi) {
    std::vector<IntVar> v = ints_;
    std::shuffle(v.begin(), v.end(), rng_);
    v.resize(static_cast<std::size_t>(std::min<int>(pick(lo, hi), static_cast<int>(v.size()))));
    return v;
  }
  std::vector<std::int64_t> coeffs(std::size_t n, int lim) {
    std::vector<std::int64_t> c;
    for (std::size_t i = 0; i < n; ++i) {
      int k = pick(-lim, lim);
      c.push_back(k == 0 ? 1 : k);
    }
    return c;
  }
  void defines(const std::string& con, const std::string& target) {
    cons_ << "constraint " << con << " :: defines_var(" << target << ");\n";
  }

  // Adds a functionally defined variable.
  void derive() {
    const IntVar a = any(ints_);
    const IntVar b = any(ints_);
    switch (pick(0, 15)) {
      case 0: {
        const auto& r = declare_int(a.lo + b.lo, a.hi + b.hi, true);
        defines("int_plus(" + a.name + ", " + b.name + ", " + r.name + ")", r.name);
        break;
      }
      case 1: {
        const std::int64_t c[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        const auto& r = declare_int(*std::min_element(c, c + 4), *std::max_element(c, c + 4), true);
        defines("int_times(" + a.name + ", " + b.name + ", " + r.name + ")", r.name);
        break;
      }
      case 2:
      case 3: {
        // Divisor without zero in its domain.
        std::string d;
        std::int64_t m = 1;
        if (b.lo > 0 || b.hi < 0) {
          d = b.name;
          m = std::max(std::abs(b.lo), std::abs(b.hi));
        } else {
          const int k = pick(1, 3) * (chance(0.3) ? -1 : 1);
          d = std::to_string(k);
          m = std::abs(k);
        }
        const std::int64_t big = std::max(std::abs(a.lo), std::abs(a.hi));
        const bool div = pick(0, 1) == 0;
        const auto& r = div ? declare_int(-big, big, true) : declare_int(-(m - 1), m - 1, true);
        defines(std::string(div ? "int_div(" : "int_mod(") + a.name + ", " + d + ", " + r.name + ")", r.name);
        break;
      }
      case 4: {
        const auto& r = declare_int(0, std::max(std::abs(a.lo), std::abs(a.hi)), true);
        defines("int_abs(" + a.name + ", " + r.name + ")", r.name);
        break;
      }
      case 5: {
        const bool mx = chance(0.5);
        const auto& r = mx ? declare_int(std::max(a.lo, b.lo), std::max(a.hi, b.hi), true)
                           : declare_int(std::min(a.lo, b.lo), std::min(a.hi, b.hi), true);
        defines(std::string(mx ? "int_max(" : "int_min(") + a.name + ", " + b.name + ", " + r.name + ")", r.name);
        break;
      }
      case 6: {
        const std::string bb = bools_.empty() ? declare_bool(false) : any(bools_);
        const auto& r = declare_int(0, 1, true);
        defines("bool2int(" + bb + ", " + r.name + ")", r.name);
        break;
      }
      case 7: {
        auto vs = some_ints(1, 3);
        auto c = coeffs(vs.size(), 3);
        std::int64_t lo = 0, hi = 0;
        for (std::size_t i = 0; i < vs.size(); ++i) {
          lo += std::min(c[i] * vs[i].lo, c[i] * vs[i].hi);
          hi += std::max(c[i] * vs[i].lo, c[i] * vs[i].hi);
        }
        const auto& r = declare_int(lo, hi, true);
        vs.push_back(r);
        c.push_back(-1);
        defines("int_lin_eq(" + list(c) + ", " + int_list(vs) + ", 0)", r.name);
        break;
      }
      case 8: {
        std::vector<std::int64_t> arr;
        const int n = pick(2, 5);
        for (int i = 0; i < n; ++i) arr.push_back(pick(-5, 9));
        const IntVar idx = declare_int(1, n, false);
        const auto& r =
            declare_int(*std::min_element(arr.begin(), arr.end()), *std::max_element(arr.begin(), arr.end()), true);
        defines("array_int_element(" + idx.name + ", " + list(arr) + ", " + r.name + ")", r.name);
        break;
      }
      case 9: {
        auto vs = some_ints(2, 3);
        std::int64_t lo = vs[0].lo, hi = vs[0].hi;
        for (const auto& v : vs) lo = std::min(lo, v.lo), hi = std::max(hi, v.hi);
        const IntVar idx = declare_int(1, static_cast<std::int64_t>(vs.size()), false);
        const auto& r = declare_int(lo, hi, true);
        defines("array_var_int_element(" + idx.name + ", " + int_list(vs) + ", " + r.name + ")", r.name);
        break;
      }
      case 10: {
        auto vs = some_ints(2, 3);
        const std::int64_t v = pick(-2, 3);
        const auto& r = declare_int(0, static_cast<std::int64_t>(vs.size()), true);
        defines("count_eq(" + int_list(vs) + ", " + std::to_string(v) + ", " + r.name + ")", r.name);
        break;
      }
      case 11: {
        static const char* ops[] = {"int_eq_reif", "int_ne_reif", "int_le_reif", "int_lt_reif"};
        const std::string rhs = chance(0.5) ? b.name : std::to_string(pick(-3, 4));
        const std::string r = declare_bool(true);
        defines(std::string(ops[pick(0, 3)]) + "(" + a.name + ", " + rhs + ", " + r + ")", r);
        break;
      }
      case 12: {
        static const char* ops[] = {"int_lin_eq_reif", "int_lin_le_reif", "int_lin_ne_reif"};
        auto vs = some_ints(1, 3);
        auto c = coeffs(vs.size(), 3);
        const std::string r = declare_bool(true);
        defines(std::string(ops[pick(0, 2)]) + "(" + list(c) + ", " + int_list(vs) + ", " +
                    std::to_string(pick(-6, 6)) + ", " + r + ")",
                r);
        break;
      }
      case 13: {
        static const char* ops[] = {"bool_and", "bool_or", "bool_xor", "bool_eq_reif", "bool_le_reif", "bool_lt_reif"};
        const std::string x = any_bool(), y = any_bool();
        const std::string r = declare_bool(true);
        defines(std::string(ops[pick(0, 5)]) + "(" + x + ", " + y + ", " + r + ")", r);
        break;
      }
      case 14: {
        const bool all = chance(0.5);
        std::string xs = "[" + any_bool() + ", " + any_bool() + (chance(0.5) ? ", " + any_bool() : "") + "]";
        const std::string r = declare_bool(true);
        defines(std::string(all ? "array_bool_and(" : "array_bool_or(") + xs + ", " + r + ")", r);
        break;
      }
      case 15: {
        auto vs = some_ints(2, 3);
        const bool mx = chance(0.5);
        std::int64_t lo = vs[0].lo, hi = vs[0].hi;
        for (const auto& v : vs) {
          lo = mx ? std::max(lo, v.lo) : std::min(lo, v.lo);
          hi = mx ? std::max(hi, v.hi) : std::min(hi, v.hi);
        }
        const auto& r = declare_int(lo, hi, true);
        defines(std::string(mx ? "array_int_maximum(" : "array_int_minimum(") + r.name + ", " + int_list(vs) + ")",
                r.name);
        break;
      }
    }
  }

  // Adds a constraint that does not define anything.
  void constrain() {
    const IntVar a = any(ints_);
    const IntVar b = any(ints_);
    auto mid = [&](const IntVar& v) { return pick(static_cast<int>(v.lo), static_cast<int>(v.hi)); };
    switch (pick(0, 11)) {
      case 0: cons_ << "constraint int_le(" << a.name << ", " << b.name << ");\n"; break;
      case 1: cons_ << "constraint int_lt(" << a.name << ", " << mid(a) + 1 << ");\n"; break;
      case 2: cons_ << "constraint int_ne(" << a.name << ", " << b.name << ");\n"; break;
      case 3: {
        auto vs = some_ints(2, 3);
        auto c = coeffs(vs.size(), 4);
        cons_ << "constraint int_lin_le(" << list(c) << ", " << int_list(vs) << ", " << pick(-4, 8) << ");\n";
        break;
      }
      case 4: {
        auto vs = some_ints(1, 3);
        cons_ << "constraint int_lin_ne(" << list(coeffs(vs.size(), 3)) << ", " << int_list(vs) << ", "
              << pick(-3, 3) << ");\n";
        break;
      }
      case 5: cons_ << "constraint bool_clause([" << any_bool() << ", " << any_bool() << "], [" << any_bool() << "]);\n"; break;
      case 6: {
        auto vs = some_ints(2, 3);
        cons_ << "constraint all_different_int(" << int_list(vs) << ");\n";
        break;
      }
      case 7: {
        // Pseudo-Boolean sum over bool2int views.
        std::vector<std::string> is;
        const int n = pick(2, 4);
        std::vector<std::int64_t> w;
        for (int i = 0; i < n; ++i) {
          const std::string bb = any_bool() == "true" || bools_.empty() ? declare_bool(false) : any(bools_);
          const auto& iv = declare_int(0, 1, true);
          defines("bool2int(" + bb + ", " + iv.name + ")", iv.name);
          is.push_back(iv.name);
          w.push_back(pick(1, 6) * (chance(0.2) ? -1 : 1));
        }
        std::string vars = "[";
        for (std::size_t i = 0; i < is.size(); ++i) vars += (i ? ", " : "") + is[i];
        const char* op = chance(0.7) ? "int_lin_le" : "int_lin_eq";
        cons_ << "constraint " << op << "(" << list(w) << ", " << vars << "], " << pick(0, 8) << ");\n";
        break;
      }
      case 8: {
        auto vs = some_ints(2, 2);
        if (vs.size() < 2) break;
        std::vector<std::int64_t> rows;
        const int n = pick(2, 5);
        for (int i = 0; i < n; ++i) rows.push_back(mid(vs[0])), rows.push_back(mid(vs[1]));
        cons_ << "constraint table_int(" << int_list(vs) << ", " << list(rows) << ");\n";
        break;
      }
      case 9: {
        std::vector<std::int64_t> s;
        for (std::int64_t v = a.lo; v <= a.hi; ++v)
          if (chance(0.6)) s.push_back(v);
        std::string set = "{";
        for (std::size_t i = 0; i < s.size(); ++i) set += (i ? ", " : "") + std::to_string(s[i]);
        cons_ << "constraint set_in(" << a.name << ", " << set << "});\n";
        break;
      }
      case 10: cons_ << "constraint bool_le(" << any_bool() << ", " << any_bool() << ");\n"; break;
      case 11:
        cons_ << "constraint array_bool_xor([" << any_bool() << ", " << any_bool() << ", " << any_bool() << "]);\n";
        break;
    }
  }

  void float_part() {
    auto& d = decls_;
    auto& k = cons_;
    const IntVar a = any(ints_);
    const IntVar b = any(ints_);
    static const char* coefs[] = {"0.5", "1.25", "-0.75", "2.0", "0.1", "-1.5", "3.0"};
    d << "var " << a.lo << ".0.." << a.hi << ".0: f" << fresh_ << " :: output_var;\n";
    d << "var " << b.lo << ".0.." << b.hi << ".0: g" << fresh_ << " :: output_var;\n";
    d << "var -1000.0..1000.0: h" << fresh_ << " :: output_var :: is_defined_var;\n";
    const std::string f = "f" + std::to_string(fresh_), g = "g" + std::to_string(fresh_),
                      h = "h" + std::to_string(fresh_);
    ++fresh_;
    k << "constraint int2float(" << a.name << ", " << f << ");\n";
    k << "constraint int2float(" << b.name << ", " << g << ");\n";
    k << "constraint float_lin_eq([" << coefs[pick(0, 6)] << ", " << coefs[pick(0, 6)] << ", -1.0], [" << f << ", "
      << g << ", " << h << "], 0.0) :: defines_var(" << h << ");\n";
    if (chance(0.5)) k << "constraint float_lin_le([1.0, 1.0], [" << f << ", " << g << "], " << pick(-2, 6) << ".5);\n";
    float_obj_ = h;
  }

  void set_part() {
    const std::string s = name("s");
    decls_ << "var set of 1..3: " << s << " :: output_var;\n";
    const IntVar a = any(ints_);
    const auto& c = declare_int(0, 3, true);
    cons_ << "constraint set_card(" << s << ", " << c.name << ") :: defines_var(" << c.name << ");\n";
    if (a.lo >= 1 && a.hi <= 3) cons_ << "constraint set_in(" << a.name << ", " << s << ");\n";
  }

  std::string solve_items(bool has_float) {
    const int kind = pick(0, 9);
    auto goal = [&](bool allow_float) {
      if (allow_float && has_float && chance(0.6)) return float_obj_;
      return any(ints_).name;
    };
    if (kind < 2) return "solve satisfy;\n";
    if (kind < 5) return "solve minimize " + goal(true) + ";\n";
    if (kind < 8) return "solve maximize " + goal(true) + ";\n";
    return std::string("solve ") + (chance(0.5) ? "minimize " : "maximize ") + goal(false) + ";\nsolve " +
           (chance(0.5) ? "minimize " : "maximize ") + goal(false) + ";\n";
  }

  std::mt19937_64 rng_;
  RandomFznOptions opts_;
  std::vector<IntVar> ints_;
  std::vector<std::string> bools_;
  std::ostringstream decls_, cons_;
  std::string float_obj_;
  int fresh_ = 0;
};

}  // namespace zb::testsupport
