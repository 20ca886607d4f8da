// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <fstream>
#include "json.hpp"
#include <sstream>

#include "test_util.hpp"
#include "trom_cli/cli.hpp"

namespace trom {
namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    write(dir / "model.json", R"({"model": "heat", "nx": 5, "ny": 4, "parameters": 2, "dt": 0.2, "steps": 8})");
    write(dir / "zero.json",
          R"({"model": "heat", "nx": 5, "ny": 4, "box": {"lower": [0], "upper": [1]}, "dt": 0.2, "steps": 4})");
    write(dir / "sampling.json", R"({"box": {"lower": [0.01, 0], "upper": [0.5, 0.9]}, "uniform": [4, 4]})");
  }
  std::string p(const std::string& name) const { return (dir / name).string(); }

  test::TempDir dir{"cli"};
};

TEST_F(CliTest, OfflineOnlinePipeline) {
  Result r = run({"generate", "--model", p("model.json"), "--sampling", p("sampling.json"), "--out", p("phi.bin"),
                  "--csv", p("first.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["dims"], json::parse("[20, 4, 4, 8]"));
  EXPECT_TRUE(std::filesystem::exists(dir / "first.csv"));

  r = run({"compress", "--input", p("phi.bin"), "--format", "hosvd", "--eps", "1e-6", "--payload", p("h.json"),
           "--basis", p("h.bin"), "--sampling", p("sampling.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(json::parse(r.out)["relative_error"].get<double>(), 1e-6);

  r = run({"compress", "--input", p("phi.bin"), "--format", "tt", "--eps", "1e-6", "--payload", p("t.json"),
           "--basis", p("t.bin"), "--sampling", p("sampling.json")});
  ASSERT_EQ(r.code, 0) << r.err;

  r = run({"compress", "--input", p("phi.bin"), "--format", "cp", "--rank", "3", "--max-sweeps", "30", "--payload",
           p("c.json"), "--basis", p("c.bin"), "--sampling", p("sampling.json")});
  ASSERT_EQ(r.code, 0) << r.err;

  r = run({"basis", "--payload", p("h.json"), "--alpha", "0.2,0.3", "--n", "3", "--out", p("coords.bin"), "--sv-out",
           p("sv.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["n"], 3);
  EXPECT_TRUE(std::filesystem::exists(dir / "coords.bin"));

  for (const auto& [method, stem] : std::vector<std::pair<std::string, std::string>>{
           {"trom-hosvd", "h"}, {"trom-tt", "t"}, {"trom-cp", "c"}}) {
    r = run({"solve", "--model", p("model.json"), "--alpha", "0.2,0.3", "--n", "3", "--method", method, "--payload",
             p(stem + ".json"), "--basis", p(stem + ".bin"), "--out", p(stem + ".csv")});
    ASSERT_EQ(r.code, 0) << method << ": " << r.err;
    const double err = json::parse(r.out)["solution_error"].get<double>();
    EXPECT_TRUE(std::isfinite(err));
    EXPECT_LT(err, 0.5);
  }
  r = run({"solve", "--model", p("model.json"), "--alpha", "0.2,0.3", "--n", "3", "--method", "pod", "--tensor",
           p("phi.bin")});
  ASSERT_EQ(r.code, 0) << r.err;

  r = run({"report", "--payload", p("h.json"), "--out", p("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep["full_count"], 20 * 16 * 8);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
}

TEST_F(CliTest, Study) {
  write(dir / "study.json", R"({
    "model": {"model": "heat", "nx": 5, "ny": 4, "parameters": 2, "steps": 6},
    "sampling": {"box": {"lower": [0.01, 0], "upper": [0.5, 0.9]}, "uniform": [3, 3]},
    "methods": ["pod", "hosvd"], "n": [2], "eps": [1e-6], "samples": 3, "seed": 2})");
  const Result r = run({"study", "--spec", p("study.json"), "--out", p("r.csv"), "--aggregates", p("a.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["aggregates"].size(), 2u);
  EXPECT_TRUE(std::filesystem::exists(dir / "a.csv"));
}

TEST_F(CliTest, InvalidInputExitsWithTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"generate", "--model", p("model.json")}).code, 2);
  EXPECT_EQ(run({"generate", "--model", p("missing.json"), "--sampling", p("sampling.json"), "--out", p("x.bin")}).code,
            2);
  write(dir / "bad.json", "{\"model\": ");
  const Result bad = run({"generate", "--model", p("bad.json"), "--sampling", p("sampling.json"), "--out", p("x.bin")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("error ["), std::string::npos);
  EXPECT_EQ(run({"compress", "--input", p("none.bin"), "--format", "svd", "--payload", p("a"), "--basis", p("b")}).code,
            2);
  ASSERT_EQ(run({"generate", "--model", p("model.json"), "--sampling", p("sampling.json"), "--out", p("phi.bin")}).code,
            0);
  ASSERT_EQ(run({"compress", "--input", p("phi.bin"), "--format", "hosvd", "--eps", "1e-6", "--payload", p("h.json"),
                 "--basis", p("h.bin"), "--sampling", p("sampling.json")})
                .code,
            0);
  const Result out_of_box = run({"solve", "--model", p("model.json"), "--alpha", "0.9,0.3", "--n", "2", "--method",
                                 "trom-hosvd", "--payload", p("h.json"), "--basis", p("h.bin")});
  EXPECT_EQ(out_of_box.code, 2);
  EXPECT_NE(out_of_box.err.find("OutOfDomain"), std::string::npos);
  EXPECT_EQ(run({"solve", "--model", p("model.json"), "--alpha", "0.2,0.3", "--n", "999", "--method", "trom-hosvd",
                 "--payload", p("h.json"), "--basis", p("h.bin")})
                .code,
            2);
  EXPECT_EQ(run({"solve", "--model", p("model.json"), "--alpha", "0.2,0.3", "--n", "2", "--method", "trom-tt",
                 "--payload", p("h.json"), "--basis", p("h.bin")})
                .code,
            2);
}

TEST_F(CliTest, NumericalFailureExitsWithThree) {
  write(dir / "s1.json", R"({"box": {"lower": [0], "upper": [1]}, "uniform": [3]})");
  ASSERT_EQ(run({"generate", "--model", p("zero.json"), "--sampling", p("s1.json"), "--out", p("z.bin")}).code, 0);
  // The reference trajectory at alpha = 0 vanishes, so the relative error is undefined.
  const Result r = run({"solve", "--model", p("zero.json"), "--alpha", "0", "--n", "1", "--method", "pod", "--tensor",
                        p("z.bin")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("ZeroDenominator"), std::string::npos);
}

}  // namespace
}  // namespace trom
