#include <gtest/gtest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "wbmld/errors.hpp"
#include "wbmld/problem.hpp"

using namespace wbmld;
using Json = nlohmann::ordered_json;

namespace {

struct ToolRun {
  int status = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

ToolRun mldtool(const std::string& args) {
  std::string cmd = std::string(MLDTOOL_PATH) + " " + args + " 2>/dev/null";
  ToolRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string problem(const char* name) { return std::string(PROBLEMS_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, EvalPlanNot1) {
  ToolRun r = mldtool("eval-plan " + problem("not1.prob") + " " + problem("not1.plan"));
  ASSERT_EQ(r.status, 0);
  Json j = r.json();
  EXPECT_EQ(j["result"]["log_discrepancy"], "0/1");
  EXPECT_EQ(j["result"]["k"], 6);
  EXPECT_EQ(j["result"]["factor_orders"][0], 10);
  EXPECT_EQ(j["engine_version"], "wbmld 1.0.0");
  EXPECT_FALSE(j.contains("timing_ms"));
}

TEST(Cli, EvalPlanThreeTimes) {
  Json two = mldtool("eval-plan " + problem("threetimes.prob") + " " + problem("threetimes_2step.plan")).json();
  EXPECT_EQ(two["result"]["log_discrepancy"], "1/5");
  Json three = mldtool("eval-plan " + problem("threetimes.prob") + " " + problem("threetimes_3step.plan")).json();
  EXPECT_EQ(three["result"]["log_discrepancy"], "0/1");
  Json alt = mldtool("eval-plan --decimal " + problem("threetimes.prob") + " " + problem("threetimes_alt.plan")).json();
  EXPECT_EQ(alt["result"]["log_discrepancy"], "0/1");
  EXPECT_TRUE(alt["result"].contains("log_discrepancy_decimal"));
}

TEST(Cli, MldValues) {
  Json not1 = mldtool("mld " + problem("not1.prob")).json();
  EXPECT_EQ(not1["result"]["value"], "0/1");
  EXPECT_EQ(not1["result"]["certified"], true);
  EXPECT_EQ(not1["result"]["one_step_value"], "1/5");
  EXPECT_EQ(mldtool("mld " + problem("trivial.prob")).json()["result"]["value"], "3/1");
  EXPECT_EQ(mldtool("mld " + problem("x_squared.prob")).json()["result"]["value"], "-inf");
}

TEST(Cli, MldWitnessReparses) {
  Json j = mldtool("mld " + problem("not1.prob")).json();
  std::string plan = temp_file("witness.plan", j["result"]["witness_plan"].get<std::string>());
  Json e = mldtool("eval-plan " + problem("not1.prob") + " " + plan).json();
  EXPECT_EQ(e["result"]["log_discrepancy"], j["result"]["witness_discrepancy"]);
}

TEST(Cli, OutputIsDeterministic) {
  std::string args = "mld --log " + problem("threetimes.prob") + " --weight-bound 5 --catalog-depth 2";
  ToolRun a = mldtool(args), b = mldtool(args), c = mldtool(args + " --jobs 3");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.json()["result"], c.json()["result"]);
}

TEST(Cli, TimingOnlyOnRequest) {
  Json j = mldtool("eval-plan --timing " + problem("not1.prob") + " " + problem("not1.plan")).json();
  EXPECT_TRUE(j.contains("timing_ms"));
}

TEST(Cli, Checks) {
  Json g = mldtool("check " + problem("threetimes.prob") + " --what generality --weight \"(1,1,2)\"").json();
  EXPECT_EQ(g["result"]["pass"], false);
  EXPECT_EQ(g["result"]["generality"]["witnesses"][0]["bad_curve"], "X1 - X2");
  EXPECT_EQ(g["result"]["generality"]["witnesses"][0]["ord_B"], "12/5");
  Json c = mldtool("check " + problem("trivial.prob") + " --what codim --weight \"(2,2,3)\"").json();
  EXPECT_EQ(c["result"]["codim"], 7);
  Json b = mldtool("check " + problem("trivial.prob") + " --what bezout --cases 60").json();
  EXPECT_EQ(b["result"]["passed"], 60);
  Json o = mldtool("oracle " + problem("not1.prob") + " --weight \"(1,1,1)\"").json();
  EXPECT_EQ(o["result"]["generators"][0]["arc_order"], 4);
  EXPECT_EQ(o["result"]["pass"], true);
}

TEST(Cli, ErrorsAndExitCodes) {
  ToolRun empty = mldtool("eval-plan " + problem("not1.prob") + " " + problem("empty.plan"));
  EXPECT_EQ(empty.status, 2);
  EXPECT_EQ(empty.json()["error"]["kind"], "parse");
  std::string bad = temp_file("bad.prob", "dim=3\nfactor: x^2 + * y ^ 1/2\n");
  ToolRun r = mldtool("mld " + bad);
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(r.json()["error"]["line"], 2);
  EXPECT_GT(r.json()["error"]["column"].get<int>(), 0);
  EXPECT_EQ(mldtool("mld " + problem("not1.prob") + " --jobs 0").status, 2);
  std::string plan = temp_file("off.plan", "step weight=(1,1,1) center=point(1,0,0)\n");
  EXPECT_EQ(mldtool("eval-plan " + problem("not1.prob") + " " + plan).status, 3);
  EXPECT_EQ(mldtool("mld /nonexistent.prob").status, 2);
}

TEST(ProblemFile, CanonicalRoundTrip) {
  ProblemFile pf = ProblemFile::read(problem("not1.prob"));
  std::string once = pf.serialize();
  ProblemFile again = ProblemFile::parse(once);
  EXPECT_EQ(again.serialize(), once);
  EXPECT_EQ(again.factors.size(), 1u);
  EXPECT_EQ(again.factors[0].exponent, Rational(7, 10));
}

TEST(ProblemFile, MultipleFactorsAndOptions) {
  ProblemFile pf = ProblemFile::parse(
      "# two factors\n"
      "dim=2\n"
      "factor: x^2, y^3 ^ 1/2\n"
      "factor: x*y\n"
      "option weight_bound=5\n"
      "option seed=42\n");
  EXPECT_EQ(pf.dimension, 2);
  ASSERT_EQ(pf.factors.size(), 2u);
  EXPECT_EQ(pf.factors[0].generators.size(), 2u);
  EXPECT_EQ(pf.factors[1].exponent, Rational(1));
  EXPECT_EQ(pf.weight_bound, 5);
  EXPECT_EQ(pf.seed, 42u);
  EXPECT_EQ(ProblemFile::parse(pf.serialize()).serialize(), pf.serialize());
  EXPECT_EQ(pf.ideal().nvars(), 2);
}

TEST(ProblemFile, PowersInsideGeneratorsAreNotExponents) {
  ProblemFile pf = ProblemFile::parse("dim=3\nfactor: (x+y)^2\n");
  EXPECT_EQ(pf.factors[0].exponent, Rational(1));
  EXPECT_EQ(pf.factors[0].generators[0].total_degree(), 2);
}

TEST(ProblemFile, ErrorsCarryPositions) {
  try {
    ProblemFile::parse("dim=3\n\noption colour=blue\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(ProblemFile::parse("dim=4\n"), ParseError);
  EXPECT_THROW(ProblemFile::parse("dim=3\ndim=3\n"), ParseError);
  EXPECT_THROW(ProblemFile::parse("dim=3\nfactor: x ^ -1\n"), ParseError);
  EXPECT_THROW(ProblemFile::read("/nonexistent.prob"), ParseError);
}
