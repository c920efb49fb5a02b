#include <gtest/gtest.h>

#include "zinc_bridge/mzn.hpp"

using namespace zb;
using namespace zb::mzn;

namespace {

Value eval(const ExprPtr& e) {
  return evaluate(e, [](const std::string& n) -> Value { throw EvalError("unbound " + n); });
}

Integer as_int(const Value& v) { return std::get<Integer>(v); }

}  // namespace

TEST(MznLexer, TokensAndOffsets) {
  auto t = tokenize("var 1..3: x; % note\nconstraint x/\\y -> 2.5e3 >= 0x1F;");
  std::vector<std::string> texts;
  for (const auto& k : t) texts.push_back(k.text);
  std::vector<std::string> want = {"var", "1", "..", "3", ":", "x", ";", "constraint", "x", "/\\", "y", "->",
                                   "2.5e3", ">=", "0x1F", ";", ""};
  EXPECT_EQ(texts, want);
  EXPECT_EQ(t[1].kind, TokKind::Int);
  EXPECT_EQ(t[12].kind, TokKind::Float);
  EXPECT_EQ(t[7].offset, 20u);
  EXPECT_EQ(t[7].loc.line, 2u);
}

TEST(MznLexer, BlockCommentAndStrings) {
  auto t = tokenize("/* a\n b */ include \"x.mzn\";");
  EXPECT_EQ(t[0].text, "include");
  EXPECT_EQ(t[1].kind, TokKind::String);
  EXPECT_THROW(tokenize("/* open"), ParseError);
  EXPECT_THROW(tokenize("\"open"), ParseError);
}

TEST(MznFloatLiteral, ExactForms) {
  EXPECT_EQ(float_literal(Rational(3)), "3.0");
  EXPECT_EQ(float_literal(Rational(Integer(1), Integer(4))), "0.25");
  EXPECT_EQ(float_literal(Rational(Integer(1), Integer(3))), "(1.0/3.0)");
  EXPECT_EQ(float_literal(Rational::parse_decimal("3.402823e+38")), "3.402823e+38");
}

TEST(MznPrinter, ParenthesisesNestedOperators) {
  auto e = binary("*", binary("+", ident("a"), lit_int(1)), lit_int(-2));
  EXPECT_EQ(print_expr(e), "(a + 1) * (-2)");
  EXPECT_EQ(print_expr(ite(ident("c"), lit_int(1), lit_int(0))), "if c then 1 else 0 endif");
}

TEST(MznModel, RoundTrip) {
  const std::string text =
      "var 0..7: x;\nvar bool: b;\nvar -1.5..1.5: f;\nvar int: y = x + 1;\n"
      "constraint b -> (x >= 3);\nconstraint f * 2.0 <= 1.0;\nsolve maximize y;\n";
  Model m = parse_model(text);
  ASSERT_EQ(m.decls.size(), 4u);
  EXPECT_EQ(m.decls[0].type.int_range->second, 7);
  EXPECT_EQ(m.decls[2].type.base, BaseType::Float);
  EXPECT_EQ(m.solve.kind, SolveItem::Kind::Maximize);
  Model again = parse_model(print_model(m));
  EXPECT_EQ(print_model(again), print_model(m));
  EXPECT_EQ(node_count(again), node_count(m));
}

TEST(MznModel, LexSolveItemAndSkippedItems) {
  Model m = parse_model(
      "include \"minisearch.mzn\";\nfunction ann: f(int: x) = (x + 1);\nvar 0..3: a;\nvar 0..3: b;\n"
      "output [show(a)];\nsolve search zb_lex_minimize([a, -b]);\n");
  EXPECT_EQ(m.includes.size(), 1u);
  EXPECT_EQ(m.solve.kind, SolveItem::Kind::LexMinimize);
  EXPECT_EQ(m.solve.lex.size(), 2u);
}

TEST(MznModel, ParseErrorHasLocation) {
  try {
    parse_model("var 0..3: x;\nconstraint x >= ;\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.loc().line, 2u);
  }
}

TEST(MznEval, TruncatingDivision) {
  EXPECT_EQ(as_int(eval(binary("div", lit_int(-7), lit_int(2)))), -3);
  EXPECT_EQ(as_int(eval(binary("mod", lit_int(-7), lit_int(2)))), -1);
  EXPECT_EQ(as_int(eval(binary("mod", lit_int(7), lit_int(-2)))), 1);
  EXPECT_THROW(eval(binary("div", lit_int(1), lit_int(0))), EvalError);
}

TEST(MznEval, OverflowDetected) {
  Integer big("4611686018427387904");  // 2^62
  EXPECT_NO_THROW(eval(binary("+", lit_int(big - 1), lit_int(big))));
  EXPECT_THROW(eval(binary("+", lit_int(big), lit_int(big))), EvalError);
}

TEST(MznEval, FloatsAndCalls) {
  auto v = eval(binary("/", lit_float(Rational(1)), lit_float(Rational(3))));
  EXPECT_EQ(std::get<Rational>(v), Rational(Integer(1), Integer(3)));
  EXPECT_EQ(as_int(eval(call("max", {lit_int(2), lit_int(5)}))), 5);
  EXPECT_EQ(std::get<bool>(eval(binary("xor", lit(true), lit(false)))), true);
}

TEST(MznReserved, Words) {
  EXPECT_TRUE(is_reserved("var"));
  EXPECT_TRUE(is_reserved("a-b"));
  EXPECT_TRUE(is_reserved("1x"));
  EXPECT_FALSE(is_reserved("x_1"));
}
