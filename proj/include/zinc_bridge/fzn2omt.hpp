#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zinc_bridge/cardnet.hpp"
#include "zinc_bridge/fzn.hpp"
#include "zinc_bridge/smt.hpp"

namespace zb::fzn2omt {

enum class IntMode { La, Bv };

std::string_view int_mode_name(IntMode m);
std::optional<IntMode> int_mode_from_string(std::string_view s);

struct EncodeConfig {
  IntMode int_mode = IntMode::La;
  /// Bit-vector width for bv mode; when unset, the smallest width covering
  /// every declared domain and constant plus a sign bit.
  std::optional<unsigned> bv_width;
  bool pb_rewrite = true;
  /// Run constant and alias propagation before encoding.
  bool propagate = true;
  smt::Dialect dialect = smt::Dialect::Default;
  /// Combination of several solve items (lexicographic or independent).
  smt::Combination multi_objective = smt::Combination::Lexicographic;
};

struct Propagated {
  fzn::FznModel model;
  /// Two conflicting constants were found for one variable.
  bool inconsistent = false;
  std::string conflict;
  /// Variables removed from the model, with the expression replacing them.
  std::vector<std::pair<std::string, fzn::Expr>> eliminated;
};

/// Substitutes fixed variables and collapses alias chains (x = y = z) onto a
/// single representative, whose domain becomes the intersection.
Propagated propagate_constants_and_aliases(const fzn::FznModel& model);

/// A linear integer constraint recognised as a pseudo-Boolean sum over the
/// Booleans that bool2int maps onto its 0/1 arguments.
struct PbMarker {
  std::size_t constraint = 0;
  /// (Boolean variable name, weight); constants already moved into the bound.
  std::vector<std::pair<std::string, Integer>> terms;
  cardnet::Relation rel = cardnet::Relation::Le;
  Integer bound;
};

struct MarkedModel {
  fzn::FznModel model;
  std::vector<PbMarker> markers;

  const PbMarker* marker_for(std::size_t constraint) const;
};

MarkedModel detect_and_rewrite_pb(const fzn::FznModel& model);

/// Encodes a validated model. Throws UnsupportedError for builtins or
/// types the chosen mode cannot express.
smt::SmtScript encode_model(const fzn::FznModel& model, const EncodeConfig& cfg = {});

/// Width chosen by the default bv policy.
unsigned default_bv_width(const fzn::FznModel& model);

/// Standard decomposition of one global constraint into assertions over
/// fresh or existing symbols of `script`. Variables referenced by the
/// constraint are declared on demand from `model`.
std::vector<smt::TermId> encode_global(const fzn::FznModel& model, const fzn::FznConstraint& constraint,
                                       smt::SmtScript& script, const EncodeConfig& cfg = {});

/// Scalar variable names that survive encoding under the same name, in
/// declaration order. Useful as an oracle projection.
std::vector<std::string> shared_scalar_names(const fzn::FznModel& model, const smt::SmtScript& script);

}  // namespace zb::fzn2omt
