#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "zinc_bridge/rational.hpp"

namespace zb::cardnet {

struct Lit {
  std::uint32_t var = 0;
  bool negated = false;

  Lit operator~() const { return Lit{var, !negated}; }
  friend bool operator==(const Lit&, const Lit&) = default;
  friend auto operator<=>(const Lit&, const Lit&) = default;
};

inline Lit pos(std::uint32_t v) { return Lit{v, false}; }
inline Lit neg(std::uint32_t v) { return Lit{v, true}; }

using Clause = std::vector<Lit>;

/// Allocates auxiliary variable ids sequentially, so identical calls on
/// identical pools produce identical encodings.
class VarPool {
 public:
  explicit VarPool(std::uint32_t first_free) : next_(first_free) {}
  std::uint32_t fresh() { return next_++; }
  std::uint32_t next() const { return next_; }

 private:
  std::uint32_t next_;
};

struct NetworkResult {
  /// outputs[j] is true iff at least j+1 inputs are true.
  std::vector<Lit> outputs;
  std::size_t aux_variable_count = 0;
  std::vector<Clause> clauses;
};

/// Merge-sort cardinality network over `inputs` with min(k+1, n) outputs.
/// Every comparator is encoded with full equivalence, so each input
/// assignment has exactly one consistent extension.
/// Throws std::invalid_argument when inputs is empty or k > n.
NetworkResult build_cardinality_network(const std::vector<Lit>& inputs, std::size_t k, VarPool& pool);

/// All n sorted outputs.
NetworkResult build_sorting_network(const std::vector<Lit>& inputs, VarPool& pool);

struct Encoding {
  std::vector<Clause> clauses;
  std::size_t aux_variable_count = 0;
};

Encoding encode_atmost_k(const std::vector<Lit>& inputs, std::size_t k, VarPool& pool);
Encoding encode_atleast_k(const std::vector<Lit>& inputs, std::size_t k, VarPool& pool);
Encoding encode_exactly_k(const std::vector<Lit>& inputs, std::size_t k, VarPool& pool);

enum class Relation { Le, Ge, Eq };

struct WeightedLit {
  Lit lit;
  Integer weight;
};

/// Integer side constraint  sum(weight * [lit]) rel bound  over network
/// outputs, left for the caller to emit arithmetically.
struct LinearLink {
  std::vector<WeightedLit> terms;
  Relation rel = Relation::Le;
  Integer bound;
};

struct PbEncoding {
  /// An empty clause means the constraint is unsatisfiable.
  std::vector<Clause> clauses;
  std::size_t aux_variable_count = 0;
  std::optional<LinearLink> link;
};

/// Encodes sum(w_i * l_i) rel bound. Duplicate and complementary literals are
/// merged, negative weights are normalised onto the complement, and each
/// group of equal weights gets its own network.
PbEncoding encode_pb_sum(const std::vector<WeightedLit>& terms, Relation rel, const Integer& bound, VarPool& pool);

/// Evaluates a clause set under a total assignment (indexed by variable id).
bool clauses_hold(const std::vector<Clause>& clauses, const std::vector<bool>& assignment);

/// Extends an assignment of the inputs to the remaining variables by unit
/// propagation. Returns false on conflict or if some variable stays open.
bool propagate_extension(const std::vector<Clause>& clauses, std::vector<std::optional<bool>>& assignment);

}  // namespace zb::cardnet
