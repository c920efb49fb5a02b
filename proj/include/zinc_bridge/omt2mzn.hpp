#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zinc_bridge/mzn.hpp"
#include "zinc_bridge/smt.hpp"

namespace zb::omt2mzn {

enum class LabelStrategy {
  /// Label exactly the compound nodes with at least two fathers.
  Shared,
  /// Inline everything.
  None,
  /// Label every compound node.
  All,
};

struct LabelPlan {
  std::unordered_map<smt::TermId, std::string, smt::TermIdHash> labels;
  /// Labeled nodes, children before parents.
  std::vector<smt::TermId> order;
};

LabelPlan daggify(const smt::SmtScript& script, LabelStrategy strategy = LabelStrategy::Shared);

enum class IntDomainMode { Unbounded, Capped };

struct BoundsPolicy {
  /// Symmetric domain of every Real variable.
  Rational float_domain = Rational::parse_decimal("3.402823e+38");
  /// Unbounded ints rely on the emitted bound constraints; capped ints are
  /// declared in [-2^31, 2^31].
  IntDomainMode int_mode = IntDomainMode::Unbounded;
};

enum class OutputKind { Single, Independent, Lexicographic };

std::string_view output_kind_name(OutputKind k);

struct ObjectiveInfo {
  std::string name;
  bool maximize = false;
};

struct MznOutput {
  OutputKind kind = OutputKind::Single;
  /// One model, or one per objective in independent mode.
  std::vector<mzn::Model> models;
  std::vector<ObjectiveInfo> objectives;
  /// SMT symbol to MiniZinc identifier, for every declared symbol.
  std::vector<std::pair<std::string, std::string>> symbols;
  /// Labels introduced for shared nodes.
  std::size_t label_count = 0;
  /// Auxiliary variables introduced to avoid repeating an operand.
  std::size_t helper_count = 0;

  std::vector<std::string> texts() const;
  /// Manifest of an independent split; `files` are the model file names.
  std::string manifest_json(const std::vector<std::string>& files) const;
};

struct TranslateOptions {
  BoundsPolicy policy;
  /// Multi-objective mode; when unset the script's own choice, else
  /// lexicographic.
  std::optional<smt::Combination> multi_objective;
  LabelStrategy labels = LabelStrategy::Shared;
};

/// Throws UnsupportedError for out-of-scope input (bit-vectors of 64 bits or
/// more, bitwise operations above 16 bits, Pareto mode) and ValidationError
/// when lexicographic mode is requested with fewer than two objectives.
MznOutput translate(const smt::SmtScript& script, const TranslateOptions& options = {});

/// Replaces every soft-group objective by the sum of the weights of its
/// violated soft assertions and drops the soft assertions.
smt::SmtScript maxsmt_to_pb(const smt::SmtScript& script);

/// Splits top-level conjunctions into separate assertions and drops repeated
/// and `true` assertions. `translate` applies it after `maxsmt_to_pb`, so
/// labels follow the father counts of the split script.
smt::SmtScript split_assertions(const smt::SmtScript& script);

/// Integer (or Boolean, for predicates) MiniZinc expression of a term over
/// bit-vector leaves read as integers in [0, 2^w - 1]. Operands needed more
/// than once are bound to helpers, returned in definition order.
struct TermTranslation {
  mzn::ExprPtr expr;
  std::vector<std::pair<std::string, mzn::ExprPtr>> helpers;
};

TermTranslation translate_bv_term(const smt::TermManager& tm, smt::TermId term);

}  // namespace zb::omt2mzn
