#pragma once

#include <string>
#include <string_view>

#include "zinc_bridge/fzn.hpp"
#include "zinc_bridge/mzn.hpp"

namespace zb::flatten {

/// Flattens the MiniZinc subset read by mzn::parse_model into FlatZinc.
///
/// Unary bounds among the top-level constraints become variable domains;
/// nested terms become introduced variables carrying defines_var; a
/// lexicographic search item becomes one minimize item per objective.
/// Divisions between two constants are folded in double precision and
/// printed in shortest form, like a stock MiniZinc compiler. Declared
/// variables are all marked as outputs.
///
/// Throws UnsupportedError for constructs outside the subset.
fzn::FznModel flatten(const mzn::Model& model);

/// parse_model, flatten, print_fzn.
std::string flatten_text(std::string_view mzn_text);

}  // namespace zb::flatten
