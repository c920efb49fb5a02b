#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "support/omt_roundtrip.hpp"
#include "support/random_fzn.hpp"
#include "support/random_omt.hpp"
#include "zinc_bridge/builtins.hpp"
#include "zinc_bridge/check.hpp"

using namespace zb;
namespace fs = std::filesystem;

namespace {

std::vector<fs::path> corpus() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(ZB_TEST_DATA) / "fzn_corpus"))
    if (e.path().extension() == ".fzn") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Checks both integer encodings; bv may decline float models.
void expect_both_modes_correct(const std::string& text, const std::string& id) {
  const fzn::FznModel m = fzn::parse_fzn(text, true);
  fzn2omt::EncodeConfig cfg;
  cfg.int_mode = fzn2omt::IntMode::La;
  const auto la = check::check_fzn2omt(m, cfg, {}, true);
  EXPECT_EQ(la.verdict.classification, oracle::Classification::Correct) << id << ": " << la.verdict.detail;
  cfg.int_mode = fzn2omt::IntMode::Bv;
  try {
    const auto bv = check::check_fzn2omt(m, cfg, {}, true);
    EXPECT_EQ(bv.verdict.classification, oracle::Classification::Correct) << id << ": " << bv.verdict.detail;
    EXPECT_EQ(bv.candidate.status, la.candidate.status) << id;
    EXPECT_EQ(bv.candidate.optimum, la.candidate.optimum) << id;
  } catch (const UnsupportedError&) {
    bool has_float = false;
    for (const auto& v : m.vars) has_float = has_float || v.type.base == fzn::BaseType::Float;
    EXPECT_TRUE(has_float) << id;
  }
}

}  // namespace

TEST(Corpus, FiftyModels) { EXPECT_EQ(corpus().size(), 50u); }

TEST(Corpus, CoversEveryBuiltin) {
  std::set<std::string_view> seen;
  for (const auto& f : corpus())
    for (const auto& c : fzn::parse_fzn(slurp(f), true).constraints)
      if (auto b = fzn::lookup_builtin(c.name)) seen.insert(fzn::builtin_info(*b).name);
  for (const auto& info : fzn::all_builtins()) EXPECT_TRUE(seen.count(info.name)) << info.name;
}

TEST(Corpus, EncodingsAgreeWithSource) {
  for (const auto& f : corpus()) expect_both_modes_correct(slurp(f), f.filename().string());
}

TEST(RandomFzn, EncodingsAgreeWithSource) {
  testsupport::RandomFzn gen(20261015);
  for (int i = 0; i < 80; ++i) expect_both_modes_correct(gen.next(), "random #" + std::to_string(i));
}

TEST(RandomOmt, RoundTripPreservesOptimum) {
  testsupport::RandomOmt gen(4242);
  int fractions = 0;
  for (int i = 0; i < 80; ++i) {
    const std::string text = gen.next();
    const auto rt = testsupport::omt_round_trip(smt::parse_smt2(text));
    EXPECT_EQ(rt.verdict.classification, oracle::Classification::Correct) << rt.verdict.detail << "\n" << text;
    fractions += rt.fractions ? 1 : 0;
  }
  EXPECT_GT(fractions, 0);
}
