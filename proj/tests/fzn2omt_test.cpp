#include <gtest/gtest.h>

#include "zinc_bridge/check.hpp"
#include "zinc_bridge/fzn2omt.hpp"
#include "zinc_bridge/oracle.hpp"

using namespace zb;
using namespace zb::fzn2omt;

namespace {

fzn::FznModel model(const std::string& text) { return fzn::parse_fzn(text, true); }

EncodeConfig la() { return EncodeConfig{}; }

EncodeConfig bv(std::optional<unsigned> width = std::nullopt) {
  EncodeConfig c;
  c.int_mode = IntMode::Bv;
  c.bv_width = width;
  return c;
}

std::string encode(const std::string& text, const EncodeConfig& cfg = {}) {
  return smt::print_smt2(encode_model(model(text), cfg));
}

void expect_correct(const std::string& text, const EncodeConfig& cfg, bool solutions = true) {
  const auto out = check::check_fzn2omt(model(text), cfg, {}, solutions);
  EXPECT_EQ(out.verdict.classification, oracle::Classification::Correct)
      << text << "\nmode " << int_mode_name(cfg.int_mode) << ": " << out.verdict.detail << "\nref "
      << oracle::status_name(out.reference.status) << " " << out.reference.reason << "\ncand "
      << oracle::status_name(out.candidate.status) << " " << out.candidate.reason << "\n"
      << smt::print_smt2(encode_model(model(text), cfg));
}

}  // namespace

TEST(Fzn2Omt, DomainBecomesBounds) {
  const std::string out = encode("var 1..3: x :: output_var;\nsolve satisfy;\n");
  EXPECT_NE(out.find("(declare-fun x () Int)"), std::string::npos);
  EXPECT_NE(out.find("(assert (<= 1 x))"), std::string::npos);
  EXPECT_NE(out.find("(assert (<= x 3))"), std::string::npos);
  EXPECT_NE(out.find("(check-sat)"), std::string::npos);
}

TEST(Fzn2Omt, BvModeDomainAndWidth) {
  const auto m = model("var -3..5: x :: output_var;\nsolve maximize x;\n");
  EXPECT_EQ(default_bv_width(m), 4u);
  const auto s = encode_model(m, bv());
  ASSERT_EQ(s.declarations.size(), 1u);
  EXPECT_EQ(s.declarations[0].second, smt::Sort::bitvec(4));
  ASSERT_EQ(s.objectives.size(), 1u);
  EXPECT_TRUE(s.objectives[0].bv_signed);
  const auto r = oracle::solve_smt(s);
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_EQ(r.optimum[0], Rational(5));
}

TEST(Fzn2Omt, BvModeErrors) {
  EXPECT_THROW(encode_model(model("var 0.0..1.0: f;\nsolve satisfy;\n"), bv()), UnsupportedError);
  EXPECT_THROW(encode_model(model("var 0..10: x;\nsolve satisfy;\n"), bv(3)), UnsupportedError);
  EXPECT_THROW(encode_model(model("var int: x;\nconstraint int_le(x, 3);\nsolve satisfy;\n"), bv()),
               UnsupportedError);
  EXPECT_THROW(encode_model(model("var 0..1: x;\nsolve satisfy;\n"), bv(64)), ValidationError);
}

TEST(Fzn2Omt, NonLinearRejected) {
  EXPECT_THROW(encode_model(model("var float: x; var float: y; var float: z;\n"
                                  "constraint float_times(x, y, z);\nsolve satisfy;\n")),
               UnsupportedError);
  EXPECT_THROW(encode_model(model("var float: x; var float: y;\nconstraint float_sin(x, y);\nsolve satisfy;\n")),
               ValidationError);
}

TEST(Fzn2Omt, SetMembershipAndCardinality) {
  const std::string text =
      "var set of 1..3: s :: output_var; var 0..3: c :: output_var;\n"
      "constraint set_card(s, c);\nconstraint set_in(2, s);\nsolve minimize c;\n";
  const auto s = encode_model(model(text));
  int members = 0;
  for (const auto& [name, sort] : s.declarations)
    if (name.rfind("s__in", 0) == 0) {
      ++members;
      EXPECT_TRUE(sort.is_bool());
    }
  EXPECT_EQ(members, 3);
  const auto r = oracle::solve_smt(s);
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_EQ(r.optimum[0], Rational(1));
  expect_correct(text, la());
  expect_correct(text, bv());
}

TEST(Fzn2Omt, FloatDivFoldsToExactFraction) {
  const auto p = propagate_constants_and_aliases(
      model("var float: c;\nconstraint float_div(1.0, 3.0, c);\nsolve maximize c;\n"));
  ASSERT_EQ(p.eliminated.size(), 1u);
  EXPECT_EQ(p.eliminated[0].first, "c");
  EXPECT_EQ(p.eliminated[0].second, fzn::Expr(Rational(Integer(1), Integer(3))));
  const auto s = encode_model(model("var float: c :: output_var;\nconstraint float_div(1.0, 3.0, c);\nsolve maximize c;\n"));
  const auto r = oracle::solve_smt(s);
  ASSERT_EQ(r.status, oracle::Status::Sat);
  EXPECT_EQ(r.optimum[0], Rational(Integer(1), Integer(3)));
}

TEST(Fzn2Omt, PropagationSubstitutesConstants) {
  const auto p = propagate_constants_and_aliases(
      model("var 0..9: x; var 0..9: y :: output_var;\nconstraint int_eq(x, 5);\n"
            "constraint int_le(x, y);\nsolve satisfy;\n"));
  EXPECT_FALSE(p.inconsistent);
  ASSERT_EQ(p.model.vars.size(), 1u);
  ASSERT_EQ(p.model.constraints.size(), 1u);
  EXPECT_EQ(p.model.constraints[0].args[0], fzn::Expr(std::int64_t{5}));
}

TEST(Fzn2Omt, PropagationCollapsesAliasChains) {
  const auto p = propagate_constants_and_aliases(
      model("var 0..9: x; var 2..7: y; var 3..12: z :: output_var;\nconstraint int_eq(x, y);\n"
            "constraint int_eq(y, z);\nsolve maximize x;\n"));
  ASSERT_EQ(p.model.vars.size(), 1u);
  EXPECT_EQ(p.model.vars[0].name, "z");
  EXPECT_EQ(p.model.vars[0].type.domain, fzn::Domain(fzn::IntInterval{3, 7}));
  EXPECT_EQ(*p.model.solve_items[0].objective, fzn::Expr::ident("z"));
}

TEST(Fzn2Omt, PropagationReportsConflicts) {
  const std::string text = "var 0..9: x;\nconstraint int_eq(x, 5);\nconstraint int_eq(x, 6);\nsolve satisfy;\n";
  const auto p = propagate_constants_and_aliases(model(text));
  EXPECT_TRUE(p.inconsistent);
  EXPECT_FALSE(p.conflict.empty());
  const auto r = oracle::solve_smt(encode_model(model(text)));
  EXPECT_EQ(r.status, oracle::Status::Unsat);
}

TEST(Fzn2Omt, PropagationPreservesOptima) {
  for (const char* text : {
           "var 0..9: x; var 0..9: y; var 0..9: z;\nconstraint int_eq(x, y);\nconstraint int_eq(y, z);\n"
           "constraint int_lin_le([1,1],[x,z],11);\nsolve maximize x;\n",
           "var bool: b; var 0..1: i;\nconstraint bool2int(b, i);\nconstraint bool_eq(b, true);\nsolve maximize i;\n",
           "var 0..9: x; var 0..9: y;\nconstraint int_plus(2, 3, x);\nconstraint int_le(x, y);\nsolve minimize y;\n",
       }) {
    expect_correct(text, la());
    EncodeConfig raw = la();
    raw.propagate = false;
    expect_correct(text, raw);
  }
}

TEST(Fzn2Omt, DetectsPbOverBoolImages) {
  const auto m = model(
      "var bool: b1; var bool: b2; var bool: b3; var 0..1: x1; var 0..1: x2; var 0..1: x3;\n"
      "constraint bool2int(b1, x1);\nconstraint bool2int(b2, x2);\nconstraint bool2int(b3, x3);\n"
      "constraint int_lin_le([1,1,1],[x1,x2,x3],2);\nsolve satisfy;\n");
  const auto mm = detect_and_rewrite_pb(m);
  ASSERT_EQ(mm.markers.size(), 1u);
  const auto* mk = mm.marker_for(3);
  ASSERT_NE(mk, nullptr);
  EXPECT_EQ(mk->rel, cardnet::Relation::Le);
  EXPECT_EQ(mk->bound, 2);
  ASSERT_EQ(mk->terms.size(), 3u);
  EXPECT_EQ(mk->terms[0].first, "b1");
}

TEST(Fzn2Omt, MixedSumStaysArithmetic) {
  const auto m = model(
      "var bool: b1; var 0..1: x1; var 0..5: y;\nconstraint bool2int(b1, x1);\n"
      "constraint int_lin_eq([1,1],[x1,y],3);\nsolve satisfy;\n");
  EXPECT_TRUE(detect_and_rewrite_pb(m).markers.empty());
}

TEST(Fzn2Omt, PbRewriteMatchesArithmetic) {
  const std::string text =
      "var bool: b1; var bool: b2; var bool: b3; var bool: b4; var bool: b5;\n"
      "var 0..1: x1; var 0..1: x2; var 0..1: x3; var 0..1: x4; var 0..1: x5;\n"
      "constraint bool2int(b1, x1);\nconstraint bool2int(b2, x2);\nconstraint bool2int(b3, x3);\n"
      "constraint bool2int(b4, x4);\nconstraint bool2int(b5, x5);\n"
      "constraint int_lin_le([3,-2,3,1,1],[x1,x2,x3,x4,x5],4);\n"
      "constraint int_lin_le([-1,-1,-1,-1,-1],[x5,x4,x3,x2,x1],-2);\n"
      "solve satisfy;\n";
  for (bool pb : {true, false})
    for (auto mode : {IntMode::La, IntMode::Bv}) {
      EncodeConfig c;
      c.pb_rewrite = pb;
      c.int_mode = mode;
      expect_correct(text, c);
    }
  EncodeConfig on, off;
  off.pb_rewrite = false;
  const std::string a = smt::print_smt2(encode_model(model(text), on));
  const std::string b = smt::print_smt2(encode_model(model(text), off));
  EXPECT_NE(a.find("zb__cn"), std::string::npos);
  EXPECT_EQ(b.find("zb__cn"), std::string::npos);
}

TEST(Fzn2Omt, AllDifferentPairwise) {
  const auto m = model("var 1..2: x; var 1..2: y;\nsolve satisfy;\n");
  smt::SmtScript s;
  const fzn::FznConstraint c{"all_different_int", {fzn::ArrayLit{fzn::Expr::ident("x"), fzn::Expr::ident("y")}}, {}};
  const auto as = encode_global(m, c, s);
  ASSERT_EQ(as.size(), 1u);
  EXPECT_EQ(smt::print_term(*s.tm, as[0]), "(not (= x y))");
}

TEST(Fzn2Omt, ElementIsBigOrWithIndexBounds) {
  const auto m = model("var 1..3: i; var 0..9: v;\nsolve satisfy;\n");
  smt::SmtScript s;
  const fzn::FznConstraint c{"array_int_element",
                             {fzn::Expr::ident("i"), fzn::ArrayLit{4, 7, 9}, fzn::Expr::ident("v")},
                             {}};
  const auto as = encode_global(m, c, s);
  ASSERT_EQ(as.size(), 3u);
  EXPECT_EQ(smt::print_term(*s.tm, as[0]), "(<= 1 i)");
  EXPECT_EQ(smt::print_term(*s.tm, as[1]), "(<= i 3)");
  EXPECT_EQ(smt::print_term(*s.tm, as[2]),
            "(or (and (= i 1) (= v 4)) (and (= i 2) (= v 7)) (and (= i 3) (= v 9)))");
}

TEST(Fzn2Omt, PigeonholeIsUnsat) {
  const std::string text = "var 1..2: a; var 1..2: b; var 1..2: c;\n"
                           "constraint all_different_int([a,b,c]);\nsolve satisfy;\n";
  for (auto cfg : {la(), bv()}) {
    const auto r = oracle::solve_smt(encode_model(model(text), cfg));
    EXPECT_EQ(r.status, oracle::Status::Unsat);
  }
}

TEST(Fzn2Omt, UnknownConstraintNamed) {
  const auto m = model("var 1..2: x;\nsolve satisfy;\n");
  smt::SmtScript s;
  try {
    encode_global(m, fzn::FznConstraint{"my_global", {fzn::Expr::ident("x")}, {}}, s);
    FAIL();
  } catch (const UnsupportedError& e) {
    EXPECT_NE(std::string(e.what()).find("my_global"), std::string::npos);
  }
}

TEST(Fzn2Omt, ArithmeticBuiltinsPreserved) {
  for (const char* text : {
           "var -4..4: x :: output_var; var -3..3: y :: output_var; var -20..20: z :: output_var;\n"
           "constraint int_times(x, y, z);\nsolve maximize z;\n",
           "var -7..7: x :: output_var; var -3..3: y :: output_var; var -7..7: q :: output_var;\n"
           "constraint int_div(x, y, q);\nsolve minimize q;\n",
           "var -7..7: x :: output_var; var -3..3: y :: output_var; var -7..7: r :: output_var;\n"
           "constraint int_mod(x, y, r);\nsolve minimize r;\n",
           "var -5..5: x :: output_var; var 0..5: a :: output_var;\nconstraint int_abs(x, a);\n"
           "constraint int_lin_le([1,-2],[a,x],1);\nsolve maximize a;\n",
           "var 0..5: x; var 0..5: y; var 0..5: m :: output_var; var 0..5: n;\n"
           "constraint int_min(x, y, m);\nconstraint int_max(x, y, n);\nconstraint int_lin_eq([1,1],[x,y],7);\n"
           "solve maximize m;\n",
           "array [1..3] of var 0..4: a :: output_array([1..3]) = [x1,x2,x3];\nvar 0..4: x1; var 0..4: x2; var 0..4: x3;\n"
           "var 0..4: mx; var 0..3: c;\nconstraint array_int_maximum(mx, a);\nconstraint count_eq(a, 2, c);\n"
           "constraint int_le(mx, 3);\nsolve maximize c;\n",
           "var 0..3: x; var 0..3: y;\nconstraint table_int([x,y],[0,1,1,2,2,3,3,0]);\nsolve maximize y;\n",
           "var 1..3: i; var 0..5: v; array [1..3] of var 0..5: xs = [a,b,c]; var 0..5: a; var 0..5: b; var 0..5: c;\n"
           "constraint array_var_int_element(i, xs, v);\nconstraint int_lin_le([1,1,1],[a,b,c],6);\n"
           "solve maximize v;\n",
           "var bool: p; var bool: q; var bool: r; var bool: t;\nconstraint bool_clause([p,q],[r]);\n"
           "constraint bool_xor(p, q, t);\nconstraint array_bool_and([p,q], r);\nconstraint bool_lt(p, q);\n"
           "solve satisfy;\n",
           "var 0..3: x; var 0..3: y; var bool: b;\nconstraint int_lin_le_reif([1,1],[x,y],3,b);\n"
           "constraint int_ne(x, y);\nconstraint bool_eq(b, false);\nsolve minimize x;\n",
       }) {
    expect_correct(text, la());
    expect_correct(text, bv());
  }
}

TEST(Fzn2Omt, FloatLinearPreserved) {
  const std::string text =
      "var 0.0..10.0: x :: output_var; var float: y :: output_var;\nvar 0..4: i :: output_var;\n"
      "constraint int2float(i, x);\nconstraint float_lin_eq([2.0,-1.0],[x,y],0.5) :: defines_var(y);\n"
      "solve maximize y;\n";
  expect_correct(text, la());
  EXPECT_THROW(encode_model(model(text), bv()), UnsupportedError);
}

TEST(Fzn2Omt, SetOperationsPreserved) {
  const std::string text =
      "var set of 1..3: a; var set of 1..3: b; var set of 1..3: u; var set of 1..3: d;\nvar 0..3: c;\n"
      "constraint set_union(a, b, u);\nconstraint set_diff(a, b, d);\nconstraint set_card(u, c);\n"
      "constraint set_subset(d, {1});\nconstraint set_ne(a, b);\nsolve maximize c;\n";
  expect_correct(text, la(), false);
  expect_correct(text, bv(), false);
}

TEST(Fzn2Omt, MultiObjectiveModes) {
  const std::string text = "var 0..3: x; var 0..3: y;\nconstraint int_lin_le([1,1],[x,y],4);\n"
                           "solve maximize x;\nsolve maximize y;\n";
  EncodeConfig lex;
  EncodeConfig ind;
  ind.multi_objective = smt::Combination::Independent;
  const auto a = encode_model(model(text), lex);
  EXPECT_EQ(a.combination, smt::Combination::Lexicographic);
  EXPECT_TRUE(a.combination_explicit);
  expect_correct(text, lex, false);
  expect_correct(text, ind, false);
  EncodeConfig pareto;
  pareto.multi_objective = smt::Combination::Pareto;
  EXPECT_THROW(encode_model(model(text), pareto), UnsupportedError);
}

TEST(Fzn2Omt, LaBvAgree) {
  const std::string text =
      "var -8..8: x; var -8..8: y; var -100..100: z;\nconstraint int_lin_eq([3,-5,1],[x,y,z],2);\n"
      "constraint int_lin_le([1,1],[x,y],3);\nsolve maximize z;\n";
  const auto a = oracle::solve_smt(encode_model(model(text), la()));
  const auto b = oracle::solve_smt(encode_model(model(text), bv()));
  ASSERT_EQ(a.status, oracle::Status::Sat);
  ASSERT_EQ(b.status, oracle::Status::Sat);
  EXPECT_EQ(a.optimum, b.optimum);
}

TEST(Fzn2Omt, Deterministic) {
  const std::string text = "var bool: b1; var bool: b2; var 0..1: x1; var 0..1: x2;\n"
                           "constraint bool2int(b1, x1);\nconstraint bool2int(b2, x2);\n"
                           "constraint int_lin_eq([2,3],[x1,x2],3);\nsolve satisfy;\n";
  EXPECT_EQ(encode(text), encode(text));
  EXPECT_EQ(encode(text, bv()), encode(text, bv()));
}
