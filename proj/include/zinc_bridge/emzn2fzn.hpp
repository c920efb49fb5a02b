#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "zinc_bridge/errors.hpp"
#include "zinc_bridge/rational.hpp"

namespace zb::emzn {

struct Fraction {
  std::string name;
  /// Exact value of the replaced division, reduced.
  Rational value;
  SourceLoc loc;

  Integer numerator() const { return value.numerator(); }
  Integer denominator() const { return value.denominator(); }
};

struct SubstitutionTable {
  std::vector<Fraction> entries;

  bool empty() const { return entries.empty(); }
  std::string to_json() const;
  /// Throws ParseError on malformed input.
  static SubstitutionTable from_json(std::string_view text);
};

struct RewriteOptions {
  /// One fresh variable per distinct value.
  bool dedup = true;
  /// Symmetric domain of the fresh variables.
  Rational float_domain = Rational::parse_decimal("3.402823e+38");
  std::string prefix = "zb_frac_";
};

struct Rewrite {
  std::string text;
  SubstitutionTable table;
};

/// Replaces each division of two constant literals by a fresh float
/// variable declared at the top of the document. Everything else is kept
/// byte for byte. Throws ParseError on tokenizer failure.
Rewrite rewrite_mzn(std::string_view text, const RewriteOptions& options = {});

/// Inserts `float_div(n.0, d.0, name)` for each entry before the first solve
/// item. Throws ValidationError naming a fresh variable that is missing or
/// not a float variable.
std::string patch_fzn(std::string_view fzn_text, const SubstitutionTable& table);

/// Environment variable holding the compiler command template.
inline constexpr const char* kCompilerEnv = "ZB_MZN2FZN";
/// Placeholders: {mzn} input model, {data} data files, {fzn} output path.
inline constexpr const char* kDefaultCompiler = "minizinc -c --no-output-ozn {mzn} {data} --fzn {fzn}";

/// Template from the environment, else the default.
std::string compiler_template();

struct WrapperOptions {
  std::string compiler;
  RewriteOptions rewrite;
  /// Directory for intermediate files; a fresh temporary one when empty.
  std::string work_dir;
};

struct WrapperResult {
  std::string fzn;
  SubstitutionTable table;
};

/// rewrite_mzn, external compile, patch_fzn. Throws ExternalError on spawn
/// failure or a non-zero exit (with the compiler's stderr).
WrapperResult run_wrapper(const std::string& mzn_path, const std::vector<std::string>& data_paths,
                          const WrapperOptions& options);

}  // namespace zb::emzn
