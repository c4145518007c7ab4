#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plsys/cli.hpp"
#include "plsys/io.hpp"

using namespace plsys;
namespace fs = std::filesystem;
using io::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "plsys");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::path(::testing::TempDir()) / ("plsys_cli_" + std::string(
        ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    ASSERT_EQ(run({"examples", "--dir", dir.string()}).code, 0);
  }
  std::string at(const std::string& sub, const std::string& file) const { return (dir / sub / file).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, ExamplesReproduceThePaperReports) {
  Result r = run({"pls", "--bisheaf", at("example1", "ex1.json"), "--etale", at("example1", "annulus.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  ASSERT_EQ(j["components"].size(), 1u);
  EXPECT_EQ(j["components"][0]["stalk_dim"], 1);
  for (const auto& l : j["components"][0]["loops"]) EXPECT_EQ(l["rank_minus_identity"], 0);
  EXPECT_EQ(r.out, io::canonical(io::read_file(at("example1", "expected_ex1_annulus.json"))));

  r = run({"pls", "--bisheaf", at("example3", "ex3h.json"), "--etale", at("example3", "identity.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& c : Json::parse(r.out)["components"]) EXPECT_EQ(c["stalk_dim"], 0);

  Json cmp = io::read_file(at("example3", "expected_compare_f_in_h.json"));
  EXPECT_EQ(cmp["verdict"], "not_subquotient");
}

TEST_F(Cli, ValidationFailureExitsOne) {
  Json b = io::read_file(at("example1", "ex1.json"));
  b["vertical"]["0,1"] = Json::parse("[[\"5\"]]");
  std::string bad = (dir / "corrupted.json").string();
  io::write_file(bad, b);
  Result r = run({"validate", "--bisheaf", bad});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("does not commute"), std::string::npos) << r.err;
  EXPECT_EQ(run({"validate", "--bisheaf", at("example1", "ex1.json")}).code, 0);
  EXPECT_EQ(run({"pls", "--bisheaf", bad, "--etale", at("example1", "disk.json")}).code, 1);
}

TEST_F(Cli, ParseErrorsExitTwo) {
  std::string bad = (dir / "bad.json").string();
  std::ofstream(bad) << "{\"field\": ";
  Result r = run({"validate", "--bisheaf", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.json"), std::string::npos);
  Json b = io::read_file(at("example2", "ex2.json"));
  b["sheaf"]["maps"]["0|0,1"] = Json::parse("[[\"1\",\"1\"]]");
  io::write_file(bad, b);
  r = run({"pls", "--bisheaf", bad, "--etale", at("example2", "disk.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bisheaf.sheaf.maps[\"0|0,1\"]"), std::string::npos) << r.err;
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"pls", "--bisheaf", at("example2", "ex2.json")}).code, 2);
}

TEST_F(Cli, ReportsAreByteStable) {
  const std::vector<std::string> pls{"pls",          "--bisheaf",  at("example1", "ex1.json"),
                                     "--etale",      at("example1", "identity.json"),
                                     "--etale",      at("example1", "disk.json"),
                                     "--etale",      at("example1", "annulus.json")};
  Result a = run(pls);
  Result b = run(pls);
  std::vector<std::string> par{"--parallel", "--threads", "4"};
  par.insert(par.end(), pls.begin(), pls.end());
  Result c = run(par);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);

  Result l1 = run({"--threads", "1", "leray", "--desk", "identity"});
  Result l4 = run({"--threads", "4", "--parallel", "leray", "--desk", "identity"});
  ASSERT_EQ(l1.code, 0) << l1.err;
  EXPECT_EQ(l1.out, l4.out);
}

TEST_F(Cli, FieldFromEnvironment) {
  setenv("PLSYS_FIELD", "F5", 1);
  Result r = run({"leray", "--desk", "identity"});
  unsetenv("PLSYS_FIELD");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["field"], "F5");
  EXPECT_EQ(Json::parse(run({"leray", "--desk", "identity"}).out)["field"], "Q");
  EXPECT_EQ(run({"--field", "F4x", "leray", "--desk", "identity"}).code, 2);
}

TEST_F(Cli, PipelineSubcommands) {
  const std::string ex1 = at("example1", "ex1.json");
  for (const char* cmd : {"epify", "monofy", "isofy", "subdivide", "dilate"}) {
    Result r = run({"--check", cmd, "--bisheaf", ex1});
    EXPECT_EQ(r.code, 0) << cmd << ": " << r.err;
    EXPECT_NO_THROW(Json::parse(r.out)) << cmd;
  }
  Json iso = Json::parse(run({"isofy", "--bisheaf", ex1}).out);
  EXPECT_EQ(io::bisheaf_from(iso).sheaf.dim(0), 0u);

  Result sh = run({"shrink", "--bisheaf", ex1, "--etale", at("example1", "annulus.json")});
  ASSERT_EQ(sh.code, 0) << sh.err;
  EXPECT_EQ(Json::parse(sh.out)["invariance"]["ok"], true);

  Result span = run({"span", "--f", ex1, "--g", ex1, "--etale", at("example1", "disk.json"), "--etale",
                     at("example1", "annulus.json")});
  ASSERT_EQ(span.code, 0) << span.err;
  for (const auto& c : Json::parse(span.out)["comparisons"]) EXPECT_EQ(c["verdict"], "isomorphic");

  Result rejected = run({"span", "--f", at("example3", "ex3f.json"), "--g", at("example3", "ex3h.json")});
  EXPECT_EQ(rejected.code, 1);
  EXPECT_NE(rejected.err.find("stability span"), std::string::npos) << rejected.err;

  Result leray = run({"--check", "leray", "--desk", "example1"});
  ASSERT_EQ(leray.code, 0) << leray.err;
  EXPECT_TRUE(validate_bisheaf(io::bisheaf_from(Json::parse(leray.out))).ok());
}
