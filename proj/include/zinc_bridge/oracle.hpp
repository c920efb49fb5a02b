#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zinc_bridge/fzn.hpp"
#include "zinc_bridge/rational.hpp"
#include "zinc_bridge/smt.hpp"

namespace zb::oracle {

enum class Status { Sat, Unsat, Inapplicable };

std::string_view status_name(Status s);

struct OracleResult {
  Status status = Status::Inapplicable;
  /// One exact value per objective, in objective order (empty for satisfy).
  std::vector<Rational> optimum;
  /// Why the oracle gave up (inapplicable only).
  std::string reason;
  /// First optimal assignment found, as (name, printed value) pairs.
  std::vector<std::pair<std::string, std::string>> witness;
  /// Projected solution set, when a projection was requested.
  std::optional<std::set<std::vector<Rational>>> solutions;
  std::uint64_t nodes = 0;

  static OracleResult sat(std::vector<Rational> optimum = {}) {
    OracleResult r;
    r.status = Status::Sat;
    r.optimum = std::move(optimum);
    return r;
  }
  static OracleResult unsat() {
    OracleResult r;
    r.status = Status::Unsat;
    return r;
  }
  static OracleResult inapplicable(std::string why) {
    OracleResult r;
    r.status = Status::Inapplicable;
    r.reason = std::move(why);
    return r;
  }
};

enum class MultiObjective { Independent, Lexicographic };

struct OracleOptions {
  /// Maximum product of the domain sizes of enumerated non-Boolean variables.
  std::uint64_t budget = 1'000'000;
  /// Maximum number of search nodes; 0 means 64 times the budget.
  std::uint64_t node_limit = 0;
  /// Variables whose joint values are collected over all solutions.
  std::vector<std::string> projection;
  /// Read bit-vector variables as two's complement in projections.
  bool bv_signed_projection = false;
  /// How several FlatZinc solve items are combined.
  MultiObjective fzn_multi = MultiObjective::Independent;
};

OracleResult solve_fzn(const fzn::FznModel& model, const OracleOptions& options = {});
OracleResult solve_smt(const smt::SmtScript& script, const OracleOptions& options = {});

enum class Classification { Correct, Incorrect, Unverified };
enum class IncorrectReason { None, UnsatOnSat, SatOnUnsat, Delta, ObjectiveCount, SolutionSet };

std::string_view classification_name(Classification c);
std::string_view reason_name(IncorrectReason r);

/// Threshold on the relative error: values at or above it are incorrect.
Rational delta_threshold();

struct Verdict {
  Classification classification = Classification::Unverified;
  IncorrectReason reason = IncorrectReason::None;
  /// Largest relative error over objectives with a nonzero reference.
  std::optional<Rational> delta;
  /// Largest absolute error over all objectives.
  std::optional<Rational> abs_error;
  std::string detail;
};

/// Compares a candidate against a reference result. A zero reference value
/// falls back to the absolute error with the same threshold. When both sides
/// carry projected solution sets, they must coincide.
Verdict classify(const OracleResult& reference, const OracleResult& candidate);

struct ReportRecord {
  std::string id;
  OracleResult reference;
  OracleResult candidate;
  Verdict verdict;
};

/// One JSON object per record, one record per line.
std::string report_jsonl(const std::vector<ReportRecord>& records);
std::string report_json(const ReportRecord& record);

/// Reads the standard FlatZinc solver output framing. `objective_vars`
/// names the output variables holding each objective value.
OracleResult parse_solver_output(std::string_view output, const std::vector<std::string>& objective_vars,
                                 bool optimization);

/// Runs an external FlatZinc solver ("{fzn}" in the template is replaced by
/// the model path) and parses its output.
OracleResult run_external_solver(const std::string& command_template, const std::string& fzn_path,
                                 const std::vector<std::string>& objective_vars, bool optimization);

}  // namespace zb::oracle
