#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zinc_bridge/mzn.hpp"
#include "zinc_bridge/omt2mzn.hpp"
#include "zinc_bridge/smt.hpp"

namespace zb::testsupport {

struct BvOp {
  const char* name;
  smt::Op op;
};

inline const std::vector<BvOp>& binary_bv_ops() {
  using smt::Op;
  static const std::vector<BvOp> ops = {
      {"bvadd", Op::BvAdd},   {"bvsub", Op::BvSub},   {"bvmul", Op::BvMul},   {"bvudiv", Op::BvUdiv},
      {"bvurem", Op::BvUrem}, {"bvsdiv", Op::BvSdiv}, {"bvsrem", Op::BvSrem}, {"bvsmod", Op::BvSmod},
      {"bvshl", Op::BvShl},   {"bvlshr", Op::BvLshr}, {"bvashr", Op::BvAshr}, {"bvand", Op::BvAnd},
      {"bvor", Op::BvOr},     {"bvxor", Op::BvXor},   {"bvult", Op::BvUlt},   {"bvule", Op::BvUle},
      {"bvugt", Op::BvUgt},   {"bvuge", Op::BvUge},   {"bvslt", Op::BvSlt},   {"bvsle", Op::BvSle},
      {"bvsgt", Op::BvSgt},   {"bvsge", Op::BvSge},   {"concat", Op::Concat},
  };
  return ops;
}

/// Evaluates a translated term (helpers first) under integer values for the
/// leaves; Booleans come back as 0 or 1.
inline std::uint64_t run_translation(const omt2mzn::TermTranslation& tr,
                                     const std::map<std::string, std::uint64_t>& leaves) {
  std::map<std::string, mzn::Value> env;
  for (const auto& [k, v] : leaves) env[k] = Integer(std::to_string(v));
  auto lookup = [&](const std::string& n) -> mzn::Value { return env.at(n); };
  for (const auto& [name, e] : tr.helpers) env[name] = mzn::evaluate(e, lookup);
  const mzn::Value v = mzn::evaluate(tr.expr, lookup);
  if (const bool* b = std::get_if<bool>(&v)) return *b ? 1 : 0;
  return std::stoull(std::get<Integer>(v).get_str());
}

}  // namespace zb::testsupport
