#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "zinc_bridge/emzn2fzn.hpp"
#include "zinc_bridge/flatten.hpp"
#include "zinc_bridge/fzn.hpp"
#include "zinc_bridge/mzn.hpp"
#include "zinc_bridge/oracle.hpp"

using namespace zb;
namespace fs = std::filesystem;

namespace {

const char* kWeightModel =
    "var -1.0..1.0: v;\n"
    "float: w = 1799972218749879.0 / 2251799813685248.0;\n"
    "constraint v = w;\n"
    "solve maximize v;\n";

Rational footnote() { return Rational(Integer("1799972218749879"), Integer("2251799813685248")); }

Rational as_rational(const fzn::Expr& e) {
  return e.is_float() ? e.as_float() : Rational(Integer(e.as_int()));
}

/// Value fixed by the float_div on `name`, folded from its literal arguments.
std::optional<Rational> folded(const fzn::FznModel& m, const std::string& name) {
  for (const auto& c : m.constraints)
    if (c.name == "float_div" && c.args[2].is_ident() && c.args[2].as_ident() == name)
      return as_rational(c.args[0]) / as_rational(c.args[1]);
  return std::nullopt;
}

fs::path temp_dir() {
  std::string tmpl = (fs::temp_directory_path() / "zb-emzn-test-XXXXXX").string();
  EXPECT_NE(mkdtemp(tmpl.data()), nullptr);
  return tmpl;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(RewriteMzn, FootnoteWeight) {
  auto r = emzn::rewrite_mzn("float: w = 1799972218749879.0 / 2251799813685248.0;");
  ASSERT_EQ(r.table.entries.size(), 1u);
  const auto& e = r.table.entries[0];
  EXPECT_EQ(e.numerator(), Integer("1799972218749879"));
  EXPECT_EQ(e.denominator(), Integer("2251799813685248"));
  EXPECT_EQ(e.loc.line, 1u);
  EXPECT_EQ(e.loc.column, 12u);
  EXPECT_NE(r.text.find("float: w = " + e.name + ";"), std::string::npos);
  EXPECT_EQ(r.text.rfind("var -", 0), 0u);
}

TEST(RewriteMzn, IdentityWithoutConstantDivision) {
  const std::string doc = "var 1..3: x;\nvar float: y;\nconstraint y = 1.0 / int2float(x);\n% 1.0/2.0\nsolve satisfy;\n";
  auto r = emzn::rewrite_mzn(doc);
  EXPECT_EQ(r.text, doc);
  EXPECT_TRUE(r.table.empty());
}

TEST(RewriteMzn, DedupOnByDefault) {
  auto r = emzn::rewrite_mzn("x = (1.0/3.0) + (1.0/3.0)");
  ASSERT_EQ(r.table.entries.size(), 1u);
  EXPECT_EQ(r.table.entries[0].value, Rational(Integer(1), Integer(3)));
  const auto& n = r.table.entries[0].name;
  EXPECT_NE(r.text.find("x = (" + n + ") + (" + n + ")"), std::string::npos);

  emzn::RewriteOptions o;
  o.dedup = false;
  auto r2 = emzn::rewrite_mzn("x = (1.0/3.0) + (1.0/3.0)", o);
  ASSERT_EQ(r2.table.entries.size(), 2u);
  EXPECT_NE(r2.table.entries[0].name, r2.table.entries[1].name);
}

TEST(RewriteMzn, OperandShapes) {
  auto r = emzn::rewrite_mzn("a = -1/(-4); b = 2.0 - 1.0/2.0; c = (3)/6; d = f(1.0)/2.0; e = 2/3^2; g = 1/2/4;");
  std::vector<Rational> vals;
  for (const auto& e : r.table.entries) vals.push_back(e.value);
  const Rational q4(Integer(1), Integer(4)), q2(Integer(1), Integer(2));
  EXPECT_EQ(vals, (std::vector<Rational>{q4, q2}));
  EXPECT_NE(r.text.find("c = " + r.table.entries[1].name + ";"), std::string::npos);
  EXPECT_NE(r.text.find("b = 2.0 - " + r.table.entries[1].name), std::string::npos);
  EXPECT_NE(r.text.find("d = f(1.0)/2.0"), std::string::npos);
  EXPECT_NE(r.text.find("e = 2/3^2"), std::string::npos);
  EXPECT_NE(r.text.find("g = " + r.table.entries[1].name + "/4"), std::string::npos);
}

TEST(RewriteMzn, ZeroDenominatorLeftAlone) {
  auto r = emzn::rewrite_mzn("x = 1.0 / 0.0;");
  EXPECT_TRUE(r.table.empty());
}

TEST(RewriteMzn, FreshNamesAvoidSource) {
  const std::string doc = "var float: zb_frac_0;\nvar float: zb_frac_1;\nconstraint zb_frac_0 = 1.0/3.0;\n";
  auto r = emzn::rewrite_mzn(doc);
  ASSERT_EQ(r.table.entries.size(), 1u);
  const auto& n = r.table.entries[0].name;
  for (const auto& t : mzn::tokenize(doc)) EXPECT_NE(t.text, n);
}

TEST(RewriteMzn, TokenizerFailure) {
  EXPECT_THROW(emzn::rewrite_mzn("x = 1.0/2.0; /* open"), ParseError);
  EXPECT_THROW(emzn::rewrite_mzn("s = \"open"), ParseError);
}

TEST(SubstitutionTable, JsonRoundTrip) {
  auto r = emzn::rewrite_mzn("a = 1/3; b = 1799972218749879.0 / 2251799813685248.0;");
  auto back = emzn::SubstitutionTable::from_json(r.table.to_json());
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.entries[1].value, footnote());
  EXPECT_EQ(back.entries[1].loc, r.table.entries[1].loc);
  EXPECT_THROW(emzn::SubstitutionTable::from_json("{\"entries\": [{\"name\": \"t\", \"numerator\": \"1\", "
                                                   "\"denominator\": \"0\"}]}"),
               ParseError);
}

TEST(PatchFzn, AppendsFloatDiv) {
  emzn::SubstitutionTable t;
  t.entries.push_back({"t1", Rational(Integer(1), Integer(3)), {}});
  const std::string fzn = "var -1.0..1.0: t1 :: output_var;\nsolve satisfy;\n";
  const std::string out = emzn::patch_fzn(fzn, t);
  EXPECT_EQ(out, "var -1.0..1.0: t1 :: output_var;\nconstraint float_div(1.0, 3.0, t1);\nsolve satisfy;\n");
}

TEST(PatchFzn, EmptyTableIsIdentity) {
  const std::string fzn = "var 0..3: x;\nsolve satisfy;\n";
  EXPECT_EQ(emzn::patch_fzn(fzn, {}), fzn);
}

TEST(PatchFzn, MissingVariableNamed) {
  emzn::SubstitutionTable t;
  t.entries.push_back({"zb_frac_7", Rational(Integer(1), Integer(3)), {}});
  try {
    emzn::patch_fzn("var 0..3: x;\nsolve satisfy;\n", t);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("zb_frac_7"), std::string::npos);
  }
  EXPECT_THROW(emzn::patch_fzn("var 0..3: zb_frac_7;\nsolve satisfy;\n", t), ValidationError);
}

TEST(EmznPipeline, InProcessExactness) {
  const auto rw = emzn::rewrite_mzn(kWeightModel);
  const std::string fzn = emzn::patch_fzn(flatten::flatten_text(rw.text), rw.table);
  const auto model = fzn::parse_fzn(fzn, false);
  EXPECT_EQ(folded(model, rw.table.entries[0].name), footnote());
  auto r = oracle::solve_fzn(model);
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_EQ(r.optimum[0], footnote());
}

TEST(EmznPipeline, PlainFlatteningRounds) {
  auto r = oracle::solve_fzn(fzn::parse_fzn(flatten::flatten_text(kWeightModel), false));
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_NE(r.optimum[0], footnote());
}

TEST(EmznWrapper, ExternalCompiler) {
  const fs::path dir = temp_dir();
  write(dir / "weight.mzn", kWeightModel);
  emzn::WrapperOptions o;
  o.compiler = std::string(ZB_FLATTEN_EXE) + " {mzn} {data} -o {fzn}";
  const auto res = emzn::run_wrapper((dir / "weight.mzn").string(), {}, o);
  ASSERT_EQ(res.table.entries.size(), 1u);
  const auto model = fzn::parse_fzn(res.fzn, false);
  EXPECT_EQ(folded(model, res.table.entries[0].name), footnote());
  EXPECT_EQ(oracle::solve_fzn(model).optimum.at(0), footnote());
  fs::remove_all(dir);
}

TEST(EmznWrapper, NoFractionsMatchesDirectCompile) {
  const fs::path dir = temp_dir();
  const std::string doc = "var 0..4: x;\nconstraint x >= 2;\nsolve minimize x;\n";
  write(dir / "plain.mzn", doc);
  emzn::WrapperOptions o;
  o.compiler = std::string(ZB_FLATTEN_EXE) + " {mzn} -o {fzn}";
  const auto res = emzn::run_wrapper((dir / "plain.mzn").string(), {}, o);
  EXPECT_TRUE(res.table.empty());
  EXPECT_EQ(res.fzn, flatten::flatten_text(doc));
  fs::remove_all(dir);
}

TEST(EmznWrapper, SpawnFailureShowsCommand) {
  const fs::path dir = temp_dir();
  write(dir / "m.mzn", "solve satisfy;\n");
  emzn::WrapperOptions o;
  o.compiler = "/nonexistent/mzn2fzn-xyz {mzn} -o {fzn}";
  try {
    emzn::run_wrapper((dir / "m.mzn").string(), {}, o);
    FAIL();
  } catch (const ExternalError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/mzn2fzn-xyz"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(EmznWrapper, CompilerFailureShowsStderr) {
  const fs::path dir = temp_dir();
  write(dir / "bad.mzn", "var 0..3: x;\nconstraint foo(x);\nsolve satisfy;\n");
  emzn::WrapperOptions o;
  o.compiler = std::string(ZB_FLATTEN_EXE) + " {mzn} -o {fzn}";
  try {
    emzn::run_wrapper((dir / "bad.mzn").string(), {}, o);
    FAIL();
  } catch (const ExternalError& e) {
    EXPECT_NE(std::string(e.what()).find("status 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(EmznWrapper, TemplateFromEnvironment) {
  ::setenv(emzn::kCompilerEnv, "custom {mzn}", 1);
  EXPECT_EQ(emzn::compiler_template(), "custom {mzn}");
  ::unsetenv(emzn::kCompilerEnv);
  EXPECT_EQ(emzn::compiler_template(), emzn::kDefaultCompiler);
}
