#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace zb::fzn {

/// Argument categories of the builtin signature table. "Var" categories also
/// accept parameters and literals of the same base type.
enum class ArgKind {
  VarBool,
  VarInt,
  VarFloat,
  VarSet,
  ArrVarBool,
  ArrVarInt,
  ArrVarFloat,
  ParInt,
  ParFloat,
  ArrParBool,
  ArrParInt,
  ArrParFloat,
};

// X(enumerator, flatzinc name, argument kinds...)
#define ZB_FZN_BUILTINS(X)                                                        \
  X(ArrayBoolAnd, "array_bool_and", ArrVarBool, VarBool)                          \
  X(ArrayBoolOr, "array_bool_or", ArrVarBool, VarBool)                            \
  X(ArrayBoolXor, "array_bool_xor", ArrVarBool)                                   \
  X(ArrayBoolElement, "array_bool_element", VarInt, ArrParBool, VarBool)          \
  X(ArrayVarBoolElement, "array_var_bool_element", VarInt, ArrVarBool, VarBool)   \
  X(Bool2Int, "bool2int", VarBool, VarInt)                                        \
  X(BoolAnd, "bool_and", VarBool, VarBool, VarBool)                               \
  X(BoolOr, "bool_or", VarBool, VarBool, VarBool)                                 \
  X(BoolXor, "bool_xor", VarBool, VarBool, VarBool)                               \
  X(BoolNot, "bool_not", VarBool, VarBool)                                        \
  X(BoolEq, "bool_eq", VarBool, VarBool)                                          \
  X(BoolEqReif, "bool_eq_reif", VarBool, VarBool, VarBool)                        \
  X(BoolLe, "bool_le", VarBool, VarBool)                                          \
  X(BoolLeReif, "bool_le_reif", VarBool, VarBool, VarBool)                        \
  X(BoolLt, "bool_lt", VarBool, VarBool)                                          \
  X(BoolLtReif, "bool_lt_reif", VarBool, VarBool, VarBool)                        \
  X(BoolClause, "bool_clause", ArrVarBool, ArrVarBool)                            \
  X(BoolLinEq, "bool_lin_eq", ArrParInt, ArrVarBool, VarInt)                      \
  X(BoolLinLe, "bool_lin_le", ArrParInt, ArrVarBool, ParInt)                      \
  X(IntAbs, "int_abs", VarInt, VarInt)                                            \
  X(IntDiv, "int_div", VarInt, VarInt, VarInt)                                    \
  X(IntMod, "int_mod", VarInt, VarInt, VarInt)                                    \
  X(IntTimes, "int_times", VarInt, VarInt, VarInt)                                \
  X(IntPlus, "int_plus", VarInt, VarInt, VarInt)                                  \
  X(IntMin, "int_min", VarInt, VarInt, VarInt)                                    \
  X(IntMax, "int_max", VarInt, VarInt, VarInt)                                    \
  X(IntEq, "int_eq", VarInt, VarInt)                                              \
  X(IntNe, "int_ne", VarInt, VarInt)                                              \
  X(IntLe, "int_le", VarInt, VarInt)                                              \
  X(IntLt, "int_lt", VarInt, VarInt)                                              \
  X(IntEqReif, "int_eq_reif", VarInt, VarInt, VarBool)                            \
  X(IntNeReif, "int_ne_reif", VarInt, VarInt, VarBool)                            \
  X(IntLeReif, "int_le_reif", VarInt, VarInt, VarBool)                            \
  X(IntLtReif, "int_lt_reif", VarInt, VarInt, VarBool)                            \
  X(IntLinEq, "int_lin_eq", ArrParInt, ArrVarInt, ParInt)                         \
  X(IntLinLe, "int_lin_le", ArrParInt, ArrVarInt, ParInt)                         \
  X(IntLinNe, "int_lin_ne", ArrParInt, ArrVarInt, ParInt)                         \
  X(IntLinEqReif, "int_lin_eq_reif", ArrParInt, ArrVarInt, ParInt, VarBool)       \
  X(IntLinLeReif, "int_lin_le_reif", ArrParInt, ArrVarInt, ParInt, VarBool)       \
  X(IntLinNeReif, "int_lin_ne_reif", ArrParInt, ArrVarInt, ParInt, VarBool)       \
  X(ArrayIntElement, "array_int_element", VarInt, ArrParInt, VarInt)              \
  X(ArrayVarIntElement, "array_var_int_element", VarInt, ArrVarInt, VarInt)       \
  X(ArrayIntMaximum, "array_int_maximum", VarInt, ArrVarInt)                      \
  X(ArrayIntMinimum, "array_int_minimum", VarInt, ArrVarInt)                      \
  X(FloatAbs, "float_abs", VarFloat, VarFloat)                                    \
  X(FloatDiv, "float_div", VarFloat, VarFloat, VarFloat)                          \
  X(FloatTimes, "float_times", VarFloat, VarFloat, VarFloat)                      \
  X(FloatPlus, "float_plus", VarFloat, VarFloat, VarFloat)                        \
  X(FloatMin, "float_min", VarFloat, VarFloat, VarFloat)                          \
  X(FloatMax, "float_max", VarFloat, VarFloat, VarFloat)                          \
  X(FloatEq, "float_eq", VarFloat, VarFloat)                                      \
  X(FloatNe, "float_ne", VarFloat, VarFloat)                                      \
  X(FloatLe, "float_le", VarFloat, VarFloat)                                      \
  X(FloatLt, "float_lt", VarFloat, VarFloat)                                      \
  X(FloatEqReif, "float_eq_reif", VarFloat, VarFloat, VarBool)                    \
  X(FloatNeReif, "float_ne_reif", VarFloat, VarFloat, VarBool)                    \
  X(FloatLeReif, "float_le_reif", VarFloat, VarFloat, VarBool)                    \
  X(FloatLtReif, "float_lt_reif", VarFloat, VarFloat, VarBool)                    \
  X(FloatLinEq, "float_lin_eq", ArrParFloat, ArrVarFloat, ParFloat)               \
  X(FloatLinLe, "float_lin_le", ArrParFloat, ArrVarFloat, ParFloat)               \
  X(FloatLinLt, "float_lin_lt", ArrParFloat, ArrVarFloat, ParFloat)               \
  X(FloatLinNe, "float_lin_ne", ArrParFloat, ArrVarFloat, ParFloat)               \
  X(FloatLinEqReif, "float_lin_eq_reif", ArrParFloat, ArrVarFloat, ParFloat, VarBool) \
  X(FloatLinLeReif, "float_lin_le_reif", ArrParFloat, ArrVarFloat, ParFloat, VarBool) \
  X(FloatLinLtReif, "float_lin_lt_reif", ArrParFloat, ArrVarFloat, ParFloat, VarBool) \
  X(FloatLinNeReif, "float_lin_ne_reif", ArrParFloat, ArrVarFloat, ParFloat, VarBool) \
  X(Int2Float, "int2float", VarInt, VarFloat)                                     \
  X(ArrayFloatElement, "array_float_element", VarInt, ArrParFloat, VarFloat)      \
  X(ArrayVarFloatElement, "array_var_float_element", VarInt, ArrVarFloat, VarFloat) \
  X(ArrayFloatMaximum, "array_float_maximum", VarFloat, ArrVarFloat)              \
  X(ArrayFloatMinimum, "array_float_minimum", VarFloat, ArrVarFloat)              \
  X(SetIn, "set_in", VarInt, VarSet)                                              \
  X(SetInReif, "set_in_reif", VarInt, VarSet, VarBool)                            \
  X(SetCard, "set_card", VarSet, VarInt)                                          \
  X(SetSubset, "set_subset", VarSet, VarSet)                                      \
  X(SetSuperset, "set_superset", VarSet, VarSet)                                  \
  X(SetEq, "set_eq", VarSet, VarSet)                                              \
  X(SetNe, "set_ne", VarSet, VarSet)                                              \
  X(SetUnion, "set_union", VarSet, VarSet, VarSet)                                \
  X(SetIntersect, "set_intersect", VarSet, VarSet, VarSet)                        \
  X(SetDiff, "set_diff", VarSet, VarSet, VarSet)                                  \
  X(SetSymDiff, "set_symdiff", VarSet, VarSet, VarSet)                            \
  X(AllDifferentInt, "all_different_int", ArrVarInt)                              \
  X(CountEq, "count_eq", ArrVarInt, VarInt, VarInt)                               \
  X(TableInt, "table_int", ArrVarInt, ArrParInt)                                  \
  X(TableBool, "table_bool", ArrVarBool, ArrParBool)

enum class Builtin {
#define ZB_ENUM(name, str, ...) name,
  ZB_FZN_BUILTINS(ZB_ENUM)
#undef ZB_ENUM
};

struct BuiltinInfo {
  Builtin id;
  std::string_view name;
  std::vector<ArgKind> args;
};

/// Resolves a FlatZinc constraint name, including the `fzn_`-prefixed and
/// legacy spellings of the supported globals. Returns nullopt for names that
/// are not supported.
std::optional<Builtin> lookup_builtin(std::string_view name);

const BuiltinInfo& builtin_info(Builtin b);
std::span<const BuiltinInfo> all_builtins();

/// True for builtins that are part of the FlatZinc standard but deliberately
/// not supported (transcendental and other non-linear float functions).
bool is_known_unsupported(std::string_view name);

}  // namespace zb::fzn
