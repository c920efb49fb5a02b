#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zinc_bridge/cli.hpp"
#include "zinc_bridge/fzn.hpp"
#include "zinc_bridge/mzn.hpp"
#include "zinc_bridge/smt.hpp"

using namespace zb;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl = (fs::temp_directory_path() / "zb-cli-test-XXXXXX").string();
    ASSERT_NE(mkdtemp(tmpl.data()), nullptr);
    dir_ = tmpl;
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const char* kModel =
    "var 0..5: x :: output_var;\nvar 0..5: y :: output_var;\n"
    "constraint int_lin_le([1,1],[x,y],7);\nsolve maximize x;\n";

}  // namespace

TEST_F(Cli, Fzn2OmtHappyPath) {
  const auto in = file("in.fzn", kModel);
  EXPECT_EQ(run({"fzn2omt", "--int-mode", "la", in, "-o", path("out.smt2")}), cli::kOk) << err_.str();
  const auto script = smt::parse_smt2(slurp(path("out.smt2")));
  EXPECT_EQ(script.objectives.size(), 1u);
  EXPECT_EQ(run({"fzn2omt", "--int-mode", "bv", in}), cli::kOk);
  EXPECT_NE(out_.str().find("BitVec"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}), cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}), cli::kUsage);
  EXPECT_EQ(run({"fzn2omt", "--int-mode", "lra", file("in.fzn", kModel)}), cli::kUsage);
  EXPECT_EQ(run({"fzn2omt", path("missing.fzn")}), cli::kUsage);
  EXPECT_EQ(run({"fzn2omt", file("p.fzn", "var 0..3: x\nsolve satisfy;\n")}), cli::kParse);
  EXPECT_NE(err_.str().find("parse error"), std::string::npos);
  EXPECT_EQ(run({"fzn2omt", file("v.fzn", "constraint int_le(x, 3);\nsolve satisfy;\n")}), cli::kValidation);
  EXPECT_EQ(run({"omt2mzn", file("w.smt2", "(declare-const b (_ BitVec 64))(assert (= b b))"), "-o", path("o")}),
            cli::kValidation);
  EXPECT_EQ(run({"omt2mzn", file("f.smt2", "(assert true)"), "-o", path("o"), "--float-domain", "-1"}),
            cli::kUsage);
  EXPECT_EQ(run({"emzn2fzn", file("m.mzn", "solve satisfy;\n"), "--compiler", "/nonexistent/c {mzn} {fzn}"}),
            cli::kExternal);
  EXPECT_EQ(run({"--help"}), cli::kOk);
}

TEST_F(Cli, HelpShowsDefaults) {
  EXPECT_EQ(run({"fzn2omt", "--help"}), cli::kOk);
  const std::string h = out_.str();
  EXPECT_NE(h.find("--int-mode bv|la [la]"), std::string::npos) << h;
  EXPECT_NE(h.find("--pb-rewrite"), std::string::npos);
  EXPECT_NE(h.find("(default: on)"), std::string::npos);
  EXPECT_EQ(run({"omt2mzn", "--help"}), cli::kOk);
  EXPECT_NE(out_.str().find("[3.402823e+38]"), std::string::npos);
}

TEST_F(Cli, Omt2MznIndependentWritesManifest) {
  const auto in = file("two.smt2",
                       "(set-option :opt.priority box)(declare-const x Int)(declare-const y Int)"
                       "(assert (and (<= 0 x) (<= x 9) (<= 0 y) (<= y 9) (<= (+ x y) 12)))"
                       "(minimize x)(maximize y)(check-sat)");
  EXPECT_EQ(run({"omt2mzn", "--float-domain", "3.402823e38", in, "-o", path("out")}), cli::kOk) << err_.str();
  EXPECT_TRUE(fs::exists(path("out/two_0.mzn")));
  EXPECT_TRUE(fs::exists(path("out/two_1.mzn")));
  const auto manifest = nlohmann::json::parse(slurp(path("out/manifest.json")));
  EXPECT_EQ(manifest["kind"], "independent");
  ASSERT_EQ(manifest["models"].size(), 2u);
  EXPECT_EQ(manifest["models"][1]["file"], "two_1.mzn");
  EXPECT_EQ(manifest["models"][1]["direction"], "maximize");
  EXPECT_NO_THROW(mzn::parse_model(slurp(path("out/two_0.mzn"))));
}

TEST_F(Cli, CheckDetectsChangedOptimum) {
  const auto in = file("in.fzn", kModel);
  const auto bad = file("bad.smt2",
                        "(declare-fun x () Int)(declare-fun y () Int)(assert (and (<= 0 x) (<= x 5) (<= 0 y) "
                        "(<= y 5)))(assert (<= (+ x y) 7))(maximize (- x 1))(check-sat)");
  EXPECT_EQ(run({"check", "--budget", "100000", in, "--script", bad}), cli::kIncorrect);
  const auto rec = nlohmann::json::parse(out_.str());
  EXPECT_EQ(rec["verdict"], "incorrect");
  EXPECT_EQ(rec["delta"], "1/5");

  EXPECT_EQ(run({"check", "--budget", "100000", "--int-mode", "both", in}), cli::kOk) << out_.str();
  EXPECT_NE(err_.str().find("2 checked, 0 incorrect"), std::string::npos);
}

TEST_F(Cli, CheckDirectory) {
  fs::create_directory(path("corpus"));
  file("corpus/a.fzn", kModel);
  file("corpus/b.fzn", "var bool: b :: output_var;\nconstraint bool_eq(b, true);\nsolve satisfy;\n");
  file("corpus/notes.txt", "ignored");
  EXPECT_EQ(run({"check", path("corpus"), "--report", path("r.jsonl")}), cli::kOk);
  std::istringstream lines(slurp(path("r.jsonl")));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(nlohmann::json::parse(line)["verdict"], "correct");
    ++n;
  }
  EXPECT_EQ(n, 2u);
}

TEST_F(Cli, Emzn2FznWithSidecar) {
  const auto in = file("w.mzn", "var -1.0..1.0: v;\nconstraint v = 1.0/3.0;\nsolve maximize v;\n");
  const std::string compiler = std::string(ZB_FLATTEN_EXE) + " {mzn} -o {fzn}";
  EXPECT_EQ(run({"emzn2fzn", in, "-o", path("w.fzn"), "--compiler", compiler}), cli::kOk) << err_.str();
  const auto model = fzn::parse_fzn(slurp(path("w.fzn")), false);
  bool found = false;
  for (const auto& c : model.constraints) found = found || c.name == "float_div";
  EXPECT_TRUE(found);
  const auto table = nlohmann::json::parse(slurp(path("w.fractions.json")));
  EXPECT_EQ(table["entries"][0]["denominator"], "3");

  EXPECT_EQ(run({"emzn2fzn", in, "--rewrite-only"}), cli::kOk);
  EXPECT_NE(out_.str().find("constraint v = zb_frac_0;"), std::string::npos);
}
