#include "zinc_bridge/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "zinc_bridge/check.hpp"
#include "zinc_bridge/emzn2fzn.hpp"
#include "zinc_bridge/fzn.hpp"
#include "zinc_bridge/fzn2omt.hpp"
#include "zinc_bridge/mzn.hpp"
#include "zinc_bridge/omt2mzn.hpp"
#include "zinc_bridge/oracle.hpp"
#include "zinc_bridge/smt.hpp"

namespace zb::cli {

namespace fs = std::filesystem;

namespace {

/// Unreadable or unwritable file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid flag value detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write '" + path.string() + "'");
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_file(path, text);
}

Rational positive_rational(const std::string& text, const std::string& flag) {
  Rational r;
  try {
    r = Rational::parse_decimal(text);
  } catch (const std::exception&) {
    throw UsageError(flag + ": not a decimal number: " + text);
  }
  if (r.sign() <= 0) throw UsageError(flag + " must be positive");
  return r;
}

const std::map<std::string, fzn2omt::IntMode> kIntModes = {{"la", fzn2omt::IntMode::La},
                                                          {"bv", fzn2omt::IntMode::Bv}};
const std::map<std::string, smt::Dialect> kDialects = {
    {"default", smt::Dialect::Default}, {"z3", smt::Dialect::Z3}, {"bclt", smt::Dialect::Bclt}};
const std::map<std::string, smt::Combination> kCombinations = {{"lex", smt::Combination::Lexicographic},
                                                              {"independent", smt::Combination::Independent}};
const std::map<std::string, omt2mzn::IntDomainMode> kIntDomains = {
    {"unbounded", omt2mzn::IntDomainMode::Unbounded}, {"capped", omt2mzn::IntDomainMode::Capped}};
const std::map<std::string, omt2mzn::LabelStrategy> kLabels = {{"shared", omt2mzn::LabelStrategy::Shared},
                                                               {"none", omt2mzn::LabelStrategy::None},
                                                               {"all", omt2mzn::LabelStrategy::All}};

template <class T>
CLI::Validator choices(const std::map<std::string, T>& m) {
  return CLI::CheckedTransformer(m, CLI::ignore_case).description("");
}

template <class T>
std::string choice_names(const std::map<std::string, T>& m) {
  std::string s;
  for (const auto& [k, v] : m) s += (s.empty() ? "" : "|") + k;
  return s;
}

struct Fzn2OmtArgs {
  std::string input, output;
  fzn2omt::EncodeConfig cfg;
  unsigned bv_width = 0;
};

struct Omt2MznArgs {
  std::string input, output;
  std::string float_domain = "3.402823e+38";
  omt2mzn::IntDomainMode int_domain = omt2mzn::IntDomainMode::Unbounded;
  std::string multi;
  omt2mzn::LabelStrategy labels = omt2mzn::LabelStrategy::Shared;
};

struct EmznArgs {
  std::vector<std::string> inputs;
  std::string output, compiler, table, float_domain = "3.402823e+38";
  bool dedup = true;
  bool rewrite_only = false;
};

struct CheckArgs {
  std::vector<std::string> inputs;
  std::string report;
  std::string script;
  std::string int_mode = "la";
  std::uint64_t budget = 1'000'000;
  std::uint64_t node_limit = 0;
  bool solutions = false;
  bool pb_rewrite = true;
  smt::Combination multi = smt::Combination::Lexicographic;
};

int do_fzn2omt(const Fzn2OmtArgs& a, std::ostream& out) {
  fzn2omt::EncodeConfig cfg = a.cfg;
  if (a.bv_width != 0) cfg.bv_width = a.bv_width;
  const fzn::FznModel model = fzn::parse_fzn(read_file(a.input), true);
  emit(a.output, smt::print_smt2(fzn2omt::encode_model(model, cfg), cfg.dialect), out);
  return kOk;
}

int do_omt2mzn(const Omt2MznArgs& a, std::ostream& err) {
  omt2mzn::TranslateOptions opts;
  opts.policy.float_domain = positive_rational(a.float_domain, "--float-domain");
  opts.policy.int_mode = a.int_domain;
  opts.labels = a.labels;
  if (!a.multi.empty()) opts.multi_objective = kCombinations.at(a.multi);
  const auto result = omt2mzn::translate(smt::parse_smt2(read_file(a.input)), opts);

  const fs::path dir(a.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw IoError("cannot create directory '" + a.output + "'");
  const std::string stem = fs::path(a.input).stem().string();
  const auto texts = result.texts();
  std::vector<std::string> files;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    files.push_back(texts.size() == 1 ? stem + ".mzn" : stem + "_" + std::to_string(i) + ".mzn");
    write_file(dir / files.back(), texts[i]);
  }
  write_file(dir / "manifest.json", result.manifest_json(files));
  err << "wrote " << files.size() << " model(s) (" << omt2mzn::output_kind_name(result.kind) << ") to "
      << dir.string() << "\n";
  return kOk;
}

int do_emzn2fzn(const EmznArgs& a, std::ostream& out) {
  emzn::RewriteOptions rw;
  rw.dedup = a.dedup;
  rw.float_domain = positive_rational(a.float_domain, "--float-domain");
  const std::string& model = a.inputs.front();

  if (a.rewrite_only) {
    const auto r = emzn::rewrite_mzn(read_file(model), rw);
    emit(a.output, r.text, out);
    if (!a.table.empty()) write_file(a.table, r.table.to_json());
    return kOk;
  }

  emzn::WrapperOptions opts;
  opts.compiler = a.compiler;
  opts.rewrite = rw;
  const std::vector<std::string> data(a.inputs.begin() + 1, a.inputs.end());
  const auto result = emzn::run_wrapper(model, data, opts);
  emit(a.output, result.fzn, out);

  std::string table = a.table;
  if (table.empty() && !a.output.empty() && a.output != "-")
    table = (fs::path(a.output).parent_path() / (fs::path(a.output).stem().string() + ".fractions.json")).string();
  if (!table.empty()) write_file(table, result.table.to_json());
  return kOk;
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (!fs::is_directory(in)) {
      files.push_back(in);
      continue;
    }
    std::vector<std::string> found;
    for (const auto& e : fs::directory_iterator(in))
      if (e.is_regular_file() && e.path().extension() == ".fzn") found.push_back(e.path().string());
    std::sort(found.begin(), found.end());
    files.insert(files.end(), found.begin(), found.end());
  }
  return files;
}

int do_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  oracle::OracleOptions opts;
  opts.budget = a.budget;
  opts.node_limit = a.node_limit;
  std::vector<fzn2omt::IntMode> modes;
  if (a.int_mode != "bv") modes.push_back(fzn2omt::IntMode::La);
  if (a.int_mode != "la") modes.push_back(fzn2omt::IntMode::Bv);

  std::vector<oracle::ReportRecord> records;
  std::size_t incorrect = 0, unverified = 0, skipped = 0;
  const auto files = expand_inputs(a.inputs);
  if (!a.script.empty()) {
    if (files.size() != 1) throw UsageError("--script needs exactly one FlatZinc model");
    if (modes.size() != 1) throw UsageError("--script needs --int-mode la or bv");
    const fzn::FznModel model = fzn::parse_fzn(read_file(files[0]), true);
    const smt::SmtScript script = smt::parse_smt2(read_file(a.script));
    const auto o = check::check_encoded(model, script, modes[0] == fzn2omt::IntMode::Bv, opts, a.solutions);
    if (o.verdict.classification == oracle::Classification::Incorrect) ++incorrect;
    if (o.verdict.classification == oracle::Classification::Unverified) ++unverified;
    records.push_back({files[0] + "#" + a.script, o.reference, o.candidate, o.verdict});
  }
  for (const auto& path : a.script.empty() ? files : std::vector<std::string>{}) {
    const fzn::FznModel model = fzn::parse_fzn(read_file(path), true);
    for (auto mode : modes) {
      fzn2omt::EncodeConfig cfg;
      cfg.int_mode = mode;
      cfg.pb_rewrite = a.pb_rewrite;
      cfg.multi_objective = a.multi;
      check::Outcome o;
      try {
        o = check::check_fzn2omt(model, cfg, opts, a.solutions);
      } catch (const UnsupportedError& e) {
        // With both modes requested, bv is checked only where it applies.
        if (modes.size() == 1) throw;
        ++skipped;
        err << path << " [" << fzn2omt::int_mode_name(mode) << "] skipped: " << e.what() << "\n";
        continue;
      }
      if (o.verdict.classification == oracle::Classification::Incorrect) ++incorrect;
      if (o.verdict.classification == oracle::Classification::Unverified) ++unverified;
      records.push_back({path + "#" + std::string(fzn2omt::int_mode_name(mode)), o.reference, o.candidate,
                         o.verdict});
    }
  }
  emit(a.report, oracle::report_jsonl(records), out);
  err << records.size() << " checked, " << incorrect << " incorrect, " << unverified << " unverified";
  if (skipped != 0) err << ", " << skipped << " skipped";
  err << "\n";
  return incorrect == 0 ? kOk : kIncorrect;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Translations between FlatZinc/MiniZinc and SMT-LIB optimization modulo theories.", "zinc-bridge"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Fzn2OmtArgs f;
  auto* s_f = app.add_subcommand("fzn2omt", "Encode a FlatZinc model as an SMT-LIB script");
  s_f->add_option("input", f.input, "FlatZinc model")->required();
  s_f->add_option("-o,--output", f.output, "Output script (standard output when omitted)");
  s_f->add_option("--int-mode", f.cfg.int_mode, "Integer encoding: la (linear arithmetic) or bv (bit-vectors)")
      ->transform(choices(kIntModes))->type_name(choice_names(kIntModes))
      ->default_str("la");
  s_f->add_option("--bv-width", f.bv_width, "Bit-vector width in bv mode (0: smallest width fitting the model)")
      ->check(CLI::Range(0u, 63u));
  s_f->add_flag("--pb-rewrite,!--no-pb-rewrite", f.cfg.pb_rewrite,
                "Re-encode pseudo-Boolean sums with cardinality networks (default: on)");
  s_f->add_flag("--propagate,!--no-propagate", f.cfg.propagate,
                "Constant and alias propagation before encoding (default: on)");
  s_f->add_option("--dialect", f.cfg.dialect, "Output dialect: default, z3 or bclt")
      ->transform(choices(kDialects))->type_name(choice_names(kDialects))
      ->default_str("default");
  s_f->add_option("--multi-objective", f.cfg.multi_objective, "Combination of several goals: lex or independent")
      ->transform(choices(kCombinations))->type_name(choice_names(kCombinations))
      ->default_str("lex");

  Omt2MznArgs m;
  auto* s_m = app.add_subcommand("omt2mzn", "Translate an SMT-LIB optimization script into MiniZinc models");
  s_m->add_option("input", m.input, "SMT-LIB script")->required();
  s_m->add_option("-o,--output", m.output, "Output directory for the models and manifest.json")->required();
  s_m->add_option("--float-domain", m.float_domain, "Symmetric bound of every real variable");
  s_m->add_option("--int-domain", m.int_domain,
                  "Integer declarations: unbounded (bounds as constraints) or capped (+-2^31)")
      ->transform(choices(kIntDomains))->type_name(choice_names(kIntDomains))
      ->default_str("unbounded");
  s_m->add_option("--multi-objective", m.multi,
                  "lex or independent (default: the script's own choice, else lex)")
      ->check(CLI::IsMember({"lex", "independent"}, CLI::ignore_case).description(""))->type_name("lex|independent");
  s_m->add_option("--labels", m.labels, "Shared-node labelling: shared (nodes with two or more fathers), none, all")
      ->transform(choices(kLabels))->type_name(choice_names(kLabels))
      ->default_str("shared");

  EmznArgs e;
  auto* s_e = app.add_subcommand(
      "emzn2fzn", "Compile MiniZinc to FlatZinc keeping constant fractions exact (compiler template from $" +
                      std::string(emzn::kCompilerEnv) + ")");
  s_e->add_option("inputs", e.inputs, "Model followed by data files")->required();
  s_e->add_option("-o,--output", e.output, "Output FlatZinc (standard output when omitted)");
  s_e->add_option("--compiler", e.compiler,
                  "Compiler command template with {mzn}, {data}, {fzn} (default: $" +
                      std::string(emzn::kCompilerEnv) + ", else \"" + emzn::kDefaultCompiler + "\")");
  s_e->add_option("--table", e.table, "Substitution table path (default: <output stem>.fractions.json)");
  s_e->add_option("--float-domain", e.float_domain, "Symmetric bound of the fresh variables");
  s_e->add_flag("--dedup,!--no-dedup", e.dedup, "One fresh variable per distinct fraction (default: on)");
  s_e->add_flag("--rewrite-only", e.rewrite_only, "Print the rewritten MiniZinc instead of compiling it");

  CheckArgs c;
  auto* s_c = app.add_subcommand("check", "Differential check of fzn2omt with the reference solver");
  s_c->add_option("inputs", c.inputs, "FlatZinc models or directories of them")->required();
  s_c->add_option("--script", c.script, "Check this SMT-LIB encoding of the model instead of encoding it");
  s_c->add_option("--report", c.report, "JSON-lines report path (standard output when omitted)");
  s_c->add_option("--int-mode", c.int_mode, "la, bv or both")
      ->check(CLI::IsMember({"la", "bv", "both"}, CLI::ignore_case).description(""))->type_name("la|bv|both");
  s_c->add_option("--budget", c.budget, "Search-space limit of the reference solver");
  s_c->add_option("--node-limit", c.node_limit, "Search-node limit (0: none)");
  s_c->add_flag("--solutions", c.solutions, "Also compare projected solution sets");
  s_c->add_flag("--pb-rewrite,!--no-pb-rewrite", c.pb_rewrite, "As in fzn2omt (default: on)");
  s_c->add_option("--multi-objective", c.multi, "lex or independent")
      ->transform(choices(kCombinations))->type_name(choice_names(kCombinations))
      ->default_str("lex");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (s_f->parsed()) return do_fzn2omt(f, out);
    if (s_m->parsed()) return do_omt2mzn(m, err);
    if (s_e->parsed()) return do_emzn2fzn(e, out);
    if (s_c->parsed()) return do_check(c, out, err);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const IoError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const ParseError& ex) {
    err << "parse error: " << ex.what() << "\n";
    return kParse;
  } catch (const UnsupportedError& ex) {
    err << "unsupported: " << ex.what() << "\n";
    return kValidation;
  } catch (const ValidationError& ex) {
    err << "validation error: " << ex.what() << "\n";
    return kValidation;
  } catch (const fzn::PrecisionError& ex) {
    err << "validation error: " << ex.what() << "\n";
    return kValidation;
  } catch (const ExternalError& ex) {
    err << "external error: " << ex.what() << "\n";
    return kExternal;
  }
  return kUsage;
}

}  // namespace zb::cli
