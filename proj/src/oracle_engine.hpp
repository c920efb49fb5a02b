#pragma once

// Shared enumeration engine behind solve_fzn and solve_smt.

#include <functional>
#include <stdexcept>
#include <variant>

#include "zinc_bridge/oracle.hpp"

namespace zb::oracle::detail {

struct Bv {
  std::uint64_t bits = 0;
  unsigned width = 0;
  friend bool operator==(const Bv&, const Bv&) = default;
};

using IntSet = std::vector<std::int64_t>;  // sorted, unique

using Value = std::variant<bool, std::int64_t, Rational, IntSet, Bv>;

/// Raised when exact 64-bit integer evaluation would overflow.
struct Overflow : std::runtime_error {
  Overflow() : std::runtime_error("integer overflow") {}
};

/// Raised during evaluation when the oracle cannot decide the instance.
struct GiveUp : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::int64_t add64(std::int64_t a, std::int64_t b);
std::int64_t sub64(std::int64_t a, std::int64_t b);
std::int64_t mul64(std::int64_t a, std::int64_t b);

Rational to_rational(const Value& v, bool bv_signed = false);
std::string value_string(const Value& v);

using Env = std::vector<Value>;

struct Problem {
  struct Var {
    std::string name;
    /// Values to enumerate; ignored for defined variables.
    std::vector<Value> domain;
    bool defined = false;
  };
  struct Def {
    int target = -1;
    std::vector<int> inputs;
    /// nullopt when no value is consistent.
    std::function<std::optional<Value>(const Env&)> compute;
  };
  struct Check {
    std::vector<int> inputs;
    std::function<bool(const Env&)> holds;
  };
  struct Goal {
    bool maximize = false;
    std::vector<int> inputs;
    std::function<Rational(const Env&)> value;
  };

  std::vector<Var> vars;
  std::vector<Def> defs;
  std::vector<Check> checks;
  std::vector<Goal> goals;
  MultiObjective combination = MultiObjective::Lexicographic;
  /// (var index, signed bit-vector reading)
  std::vector<std::pair<int, bool>> projection;
  std::vector<int> witness_vars;

  int add_var(std::string name, std::vector<Value> domain, bool defined = false) {
    vars.push_back(Var{std::move(name), std::move(domain), defined});
    return static_cast<int>(vars.size()) - 1;
  }
};

/// Depth-first enumeration; every check runs as soon as its last input is
/// known. Definitions must be acyclic.
OracleResult run(const Problem& p, const OracleOptions& options);

/// Returns true when adding target := f(inputs) keeps the definitions acyclic.
bool acyclic_with(const std::vector<Problem::Def>& defs, std::size_t var_count, int target,
                  const std::vector<int>& inputs);

}  // namespace zb::oracle::detail
