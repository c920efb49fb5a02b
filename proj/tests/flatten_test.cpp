#include <gtest/gtest.h>

#include "zinc_bridge/flatten.hpp"
#include "zinc_bridge/omt2mzn.hpp"
#include "zinc_bridge/oracle.hpp"

using namespace zb;

namespace {

fzn::FznModel flat(const std::string& text) {
  fzn::FznModel m = flatten::flatten(mzn::parse_model(text));
  fzn::validate(m, {true});
  // Printing and re-reading must give the same model.
  return fzn::parse_fzn(fzn::print_fzn(m), true);
}

oracle::OracleResult solve(const std::string& text) { return oracle::solve_fzn(flat(text)); }

Rational q(std::int64_t n, std::int64_t d = 1) { return Rational(Integer(n), Integer(d)); }

}  // namespace

TEST(Flatten, BoundsBecomeDomains) {
  auto m = flat("var int: x;\nconstraint 0 <= x;\nconstraint x <= 9;\nsolve minimize x;\n");
  ASSERT_EQ(m.vars.size(), 1u);
  EXPECT_EQ(std::get<fzn::IntInterval>(m.vars[0].type.domain), (fzn::IntInterval{0, 9}));
  EXPECT_TRUE(m.constraints.empty());
  EXPECT_TRUE(m.vars[0].is_output());
}

TEST(Flatten, ContradictoryBoundsGiveUnsat) {
  auto m = flat("var 0..3: x;\nconstraint x = -2;\nsolve minimize x;\n");
  EXPECT_EQ(oracle::solve_fzn(m).status, oracle::Status::Unsat);
}

TEST(Flatten, BoundThroughDefinedBoolean) {
  auto m = flat("var int: x;\nvar bool: b = 2 <= x;\nconstraint b;\nconstraint x <= 4;\nsolve minimize x;\n");
  EXPECT_EQ(std::get<fzn::IntInterval>(m.vars[0].type.domain), (fzn::IntInterval{2, 4}));
  EXPECT_EQ(oracle::solve_fzn(m).optimum.at(0), q(2));
}

TEST(Flatten, OneSidedBoundStaysConstraint) {
  auto m = flat("var int: x;\nconstraint x > 2;\nsolve satisfy;\n");
  ASSERT_EQ(m.constraints.size(), 1u);
  EXPECT_EQ(m.constraints[0].name, "int_lin_le");
}

TEST(Flatten, LinearAndReified) {
  auto r = solve(
      "var 0..5: x;\nvar 0..5: y;\nvar bool: b;\nconstraint b <-> (x + y >= 7);\nconstraint b \\/ x = 5;\n"
      "solve minimize 2 * x - y;\n");
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_EQ(r.optimum[0], q(-1));
}

TEST(Flatten, NonlinearDivModIte) {
  auto r = solve(
      "var 0..15: x;\nvar 0..15: y;\n"
      "var int: q = if y = 0 then 15 else x div y endif;\n"
      "constraint (x mod 4) = 3;\nconstraint x * y >= 20;\nsolve maximize q;\n");
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_EQ(r.optimum[0], q(7));  // x=15, y=2
}

TEST(Flatten, DivisionByZeroGuardedInBranch) {
  auto r = solve("var 0..3: y;\nvar int: q = if y = 0 then 9 else 8 div y endif;\nsolve maximize q;\n");
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_EQ(r.optimum[0], q(9));
}

TEST(Flatten, ConstantFloatDivisionIsRounded) {
  auto m = flat("var -1.0..1.0: w;\nconstraint w = 1799972218749879.0 / 2251799813685248.0;\nsolve maximize w;\n");
  auto r = oracle::solve_fzn(m);
  ASSERT_EQ(r.status, oracle::Status::Sat);
  const Rational exact(Integer("1799972218749879"), Integer("2251799813685248"));
  EXPECT_NE(r.optimum[0], exact);
  EXPECT_LT((r.optimum[0] - exact).abs(), q(1, 1000000000));
}

TEST(Flatten, ParameterBoundToVariable) {
  auto r = solve("var -2.0..2.0: t;\nfloat: w = t;\n"
                 "constraint 4.0 * t = 1.0;\nsolve maximize w;\n");
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_EQ(r.optimum[0], q(1, 4));
}

TEST(Flatten, LexBecomesSeveralGoals) {
  auto m = flat("var 0..3: a;\nvar 0..3: b;\nconstraint a + b >= 3;\nsolve search zb_lex_minimize([a, -b]);\n");
  ASSERT_EQ(m.solve_items.size(), 2u);
  oracle::OracleOptions o;
  o.fzn_multi = oracle::MultiObjective::Lexicographic;
  auto r = oracle::solve_fzn(m, o);
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_EQ(r.optimum, (std::vector<Rational>{q(0), q(-3)}));
}

TEST(Flatten, UnsupportedConstructNamed) {
  try {
    flatten::flatten(mzn::parse_model("var 0..3: a;\nconstraint foo(a);\nsolve satisfy;\n"));
    FAIL();
  } catch (const UnsupportedError& e) {
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }
}

TEST(Flatten, RoundTripFromSmt) {
  auto s = smt::parse_smt2(
      "(declare-const x (_ BitVec 4))(declare-const y (_ BitVec 4))(declare-const n Int)"
      "(assert (and (<= 0 n) (<= n 6)))"
      "(assert (bvslt (bvadd x y) #x3))(assert (= ((_ extract 1 0) x) #b01))"
      "(assert (or (bvult y x) (> n 4)))(maximize (+ n (div n 4)))(check-sat)");
  auto ref = oracle::solve_smt(s);
  auto out = omt2mzn::translate(s);
  auto cand = oracle::solve_fzn(flat(mzn::print_model(out.models[0])));
  EXPECT_EQ(oracle::classify(ref, cand).classification, oracle::Classification::Correct)
      << oracle::classify(ref, cand).detail;
}
