#pragma once

#include "zinc_bridge/fzn.hpp"
#include "zinc_bridge/fzn2omt.hpp"
#include "zinc_bridge/oracle.hpp"
#include "zinc_bridge/smt.hpp"

namespace zb::check {

struct Outcome {
  oracle::OracleResult reference;
  oracle::OracleResult candidate;
  oracle::Verdict verdict;
};

/// Solves `model` and its encoding with the oracle and classifies the pair.
/// With `compare_solutions`, the solution sets projected onto the variables
/// shared by both sides must coincide as well.
Outcome check_fzn2omt(const fzn::FznModel& model, const fzn2omt::EncodeConfig& cfg,
                      const oracle::OracleOptions& options = {}, bool compare_solutions = false);

/// Same check for an already encoded script.
Outcome check_encoded(const fzn::FznModel& model, const smt::SmtScript& script, bool bv,
                      const oracle::OracleOptions& options = {}, bool compare_solutions = false);

}  // namespace zb::check
