#include "zinc_bridge/builtins.hpp"

#include <array>
#include <string>
#include <unordered_map>

namespace zb::fzn {

namespace {

const std::vector<BuiltinInfo>& table() {
  using enum ArgKind;
  static const std::vector<BuiltinInfo> t = {
#define ZB_ROW(name, str, ...) BuiltinInfo{Builtin::name, str, {__VA_ARGS__}},
      ZB_FZN_BUILTINS(ZB_ROW)
#undef ZB_ROW
  };
  return t;
}

// Alternative spellings found across FlatZinc 2.2.x / 2.3.x standard libraries.
const std::unordered_map<std::string_view, Builtin>& aliases() {
  static const std::unordered_map<std::string_view, Builtin> a = {
      {"fzn_all_different_int", Builtin::AllDifferentInt},
      {"all_different", Builtin::AllDifferentInt},
      {"alldifferent", Builtin::AllDifferentInt},
      {"fzn_count_eq", Builtin::CountEq},
      {"count", Builtin::CountEq},
      {"fzn_table_int", Builtin::TableInt},
      {"fzn_table_bool", Builtin::TableBool},
      {"maximum_int", Builtin::ArrayIntMaximum},
      {"minimum_int", Builtin::ArrayIntMinimum},
      {"maximum_float", Builtin::ArrayFloatMaximum},
      {"minimum_float", Builtin::ArrayFloatMinimum},
  };
  return a;
}

}  // namespace

std::optional<Builtin> lookup_builtin(std::string_view name) {
  static const auto index = [] {
    std::unordered_map<std::string_view, Builtin> m;
    for (const auto& b : table()) m.emplace(b.name, b.id);
    return m;
  }();
  if (auto it = index.find(name); it != index.end()) return it->second;
  if (auto it = aliases().find(name); it != aliases().end()) return it->second;
  return std::nullopt;
}

const BuiltinInfo& builtin_info(Builtin b) { return table()[static_cast<std::size_t>(b)]; }

std::span<const BuiltinInfo> all_builtins() { return table(); }

bool is_known_unsupported(std::string_view name) {
  static constexpr std::array<std::string_view, 24> names = {
      "float_sin",  "float_cos",   "float_tan",   "float_asin",  "float_acos",  "float_atan",
      "float_sinh", "float_cosh",  "float_tanh",  "float_asinh", "float_acosh", "float_atanh",
      "float_exp",  "float_ln",    "float_log10", "float_log2",  "float_sqrt",  "float_pow",
      "int_pow",    "float_ceil",  "float_floor", "float_round", "float_in",    "float_dom"};
  for (auto n : names)
    if (n == name) return true;
  return false;
}

}  // namespace zb::fzn
