#include "zinc_bridge/check.hpp"

namespace zb::check {

Outcome check_encoded(const fzn::FznModel& model, const smt::SmtScript& script, bool bv,
                      const oracle::OracleOptions& options, bool compare_solutions) {
  oracle::OracleOptions ref_opts = options;
  oracle::OracleOptions cand_opts = options;
  ref_opts.fzn_multi = script.combination == smt::Combination::Independent ? oracle::MultiObjective::Independent
                                                                            : oracle::MultiObjective::Lexicographic;
  if (compare_solutions) {
    const auto names = fzn2omt::shared_scalar_names(model, script);
    ref_opts.projection = names;
    cand_opts.projection = names;
    cand_opts.bv_signed_projection = bv;
  }
  Outcome out;
  out.reference = oracle::solve_fzn(model, ref_opts);
  out.candidate = oracle::solve_smt(script, cand_opts);
  out.verdict = oracle::classify(out.reference, out.candidate);
  return out;
}

Outcome check_fzn2omt(const fzn::FznModel& model, const fzn2omt::EncodeConfig& cfg,
                      const oracle::OracleOptions& options, bool compare_solutions) {
  const smt::SmtScript script = fzn2omt::encode_model(model, cfg);
  return check_encoded(model, script, cfg.int_mode == fzn2omt::IntMode::Bv, options, compare_solutions);
}

}  // namespace zb::check
