#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bdlab/error.hpp"
#include "bdlab/json_io.hpp"
#include "cli.hpp"
#include "fixtures.hpp"

using namespace bdlab;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kKinked = "2*norm(A) - norm(A + [[0,0.5],[0.5,0]]) - norm(A - [[0,0.5],[0.5,0]])";

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("bdlab_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(JsonIo, FieldRoundTrip) {
  const auto u = test::staircase(9);
  const auto back = io::field_from_json(io::field_to_json(u));
  EXPECT_EQ(back.values(), u.values());
  ASSERT_EQ(back.jumps().size(), 2u);
  EXPECT_EQ(back.jumps()[1].jump, u.jumps()[1].jump);
  EXPECT_TRUE(back.grid() == u.grid());
}

TEST(JsonIo, MeasureRoundTrip) {
  const SymMeasure mu = assemble_symmetrized_measure(test::staircase(9));
  const SymMeasure back = io::measure_from_json(io::measure_to_json(mu));
  EXPECT_EQ(back.surface.size(), mu.surface.size());
  EXPECT_DOUBLE_EQ(total_variation(back), total_variation(mu));
}

TEST(JsonIo, Errors) {
  EXPECT_THROW(io::parse("{"), InputError);
  EXPECT_THROW(io::matrix_from_json(io::parse("[[1,2],[3,4]]")), InputError);
  EXPECT_THROW(io::field_from_json(io::parse(R"({"values": []})")), InputError);
  EXPECT_THROW(io::grid_from_json(io::parse(R"({"box": [[0],[1,1]], "n": 3})")), InputError);
  EXPECT_THROW(io::read_file("/nonexistent/file.json"), InputError);
}

TEST(JsonIo, NumbersAreRounded) {
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(io::number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Cli, ClassifyReportsDyad) {
  const auto r = run_cli({"classify", "--matrix", "[[0,1],[1,0]]"});
  EXPECT_EQ(r.code, cli::kExitOk);
  const auto j = io::parse(r.out);
  EXPECT_EQ(j["dyad"]["tag"], "OppositeSignDyad");
  EXPECT_EQ(j["inclusion"]["tag"], "opposite_sign");
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(run_cli({}).code, cli::kExitInputError);
  EXPECT_EQ(run_cli({"bogus"}).code, cli::kExitInputError);
  EXPECT_EQ(run_cli({"classify"}).code, cli::kExitInputError);
  const auto r = run_cli({"classify", "--matrix", "[[1,2],[0,1]]"});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_EQ(run_cli({"evaluate", "--integrand", "norm(A", "--field", "builtin:staircase"}).code,
            cli::kExitInputError);
  EXPECT_EQ(run_cli({"evaluate", "--integrand", "norm(A)", "--field", "/nonexistent.json"}).code,
            cli::kExitInputError);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("lsc-demo"), std::string::npos);
}

TEST(Cli, EvaluateStaircase) {
  const auto r = run_cli({"evaluate", "--integrand", "norm(A)", "--field", "builtin:staircase", "--no-boundary",
                          "--grid", "17"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NEAR(io::parse(r.out)["total"].get<double>(), 2.0 * std::sqrt(2.0), 1e-8);
}

TEST(Cli, EvaluateReadsFieldFile) {
  const auto dir = temp_dir("field");
  std::filesystem::create_directories(dir);
  const auto path = (dir / "u.json").string();
  io::write_file(path, io::field_to_json(test::staircase(9)));
  const auto r = run_cli({"evaluate", "--integrand", "norm(A)", "--field", path, "--no-boundary"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NEAR(io::parse(r.out)["singular"].get<double>(), 2.0 * std::sqrt(2.0), 1e-8);
}

TEST(Cli, LscDemoVerdicts) {
  const auto pass = run_cli({"lsc-demo", "--integrand", "norm(A)", "--grid", "65", "--js", "1,2,4"});
  EXPECT_EQ(pass.code, cli::kExitOk) << pass.err;
  const auto fail = run_cli({"lsc-demo", "--integrand", kKinked, "--amplitude", "0.5", "--base", "[[0,0],[1,0]]",
                             "--grid", "65", "--js", "1,2,4"});
  EXPECT_EQ(fail.code, cli::kExitVerdictFail) << fail.err;
  EXPECT_EQ(io::parse(fail.out)["verdict"], "FAIL");
}

TEST(Cli, OutDirectoryGetsJsonAndCsv) {
  const auto dir = temp_dir("out");
  const auto r = run_cli({"lsc-demo", "--integrand", "norm(A)", "--grid", "65", "--js", "1,2", "--out", dir.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "lsc_demo.json"));
  std::ifstream csv(dir / "lsc_demo.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "j,F_uj,area_uj");
}

TEST(Cli, RigidityCases) {
  const auto ok = run_cli({"rigidity", "--matrix", "[[1,0],[0,1]]", "--g", "exp(x[1])*sin(x[2])", "--grid", "33"});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.err;
  const auto bad = run_cli({"rigidity", "--matrix", "[[1,0],[0,1]]", "--g", "x[1]^2", "--grid", "33"});
  EXPECT_EQ(bad.code, cli::kExitVerdictFail);
  EXPECT_NEAR(io::parse(bad.out)["residual_pde"].get<double>(), 2.0, 0.1);
  const auto deg = run_cli({"rigidity", "--matrix", "[[1,0],[0,0]]", "--p-profile", "12*x[1]^2", "--grid", "33"});
  EXPECT_EQ(deg.code, cli::kExitOk) << deg.err;
  const auto opp = run_cli({"rigidity", "--matrix", "[[0,1],[1,0]]", "--h1", "sin(x[1])", "--grid", "33"});
  EXPECT_EQ(opp.code, cli::kExitOk) << opp.err;
}

TEST(Cli, JensenVerdicts) {
  const auto fails = run_cli({"jensen", "--integrand", kKinked, "--plus", "[[0,1],[1,0]]", "--minus", "[[0,0],[0,0]]"});
  EXPECT_EQ(fails.code, cli::kExitVerdictFail);
  const auto holds = run_cli({"jensen", "--integrand", "norm(A)", "--plus", "[[0,1],[1,0]]", "--minus",
                              "[[0,0],[0,0]]"});
  EXPECT_EQ(holds.code, cli::kExitOk);
  const auto singular = run_cli({"jensen", "--integrand", "norm(A)", "--ym", "elementary", "--field",
                                 "builtin:staircase", "--grid", "17", "--site", "singular"});
  EXPECT_EQ(singular.code, cli::kExitOk) << singular.err;
}

TEST(Cli, StaircaseAndDoubling) {
  EXPECT_EQ(run_cli({"staircase"}).code, cli::kExitOk);
  EXPECT_EQ(run_cli({"staircase", "--cell", "step"}).code, cli::kExitOk);
  const auto d = run_cli({"doubling", "--kind", "line"});
  ASSERT_EQ(d.code, cli::kExitOk);
  for (const auto& r : io::parse(d.out)["ratios"]) EXPECT_NEAR(r.get<double>(), 3.0, 1e-12);
}

TEST(Cli, QcTestFindsViolation) {
  const auto r = run_cli({"qc-test", "--integrand", "-norm(A)", "--at", "[[0,0],[0,0]]", "--grid", "9", "--iters",
                          "40"});
  EXPECT_EQ(r.code, cli::kExitVerdictFail);
  EXPECT_EQ(io::parse(r.out)["verdict"], "violation");
}

TEST(Cli, MinimizeAndStrictDemo) {
  const auto m = run_cli({"minimize", "--integrand", "sqrt(1+normsq(A))", "--dirichlet", "x[1]", "0", "--grid", "7"});
  ASSERT_EQ(m.code, cli::kExitOk) << m.err;
  EXPECT_LE(io::parse(m.out)["total"].get<double>(), std::sqrt(2.0) + 1e-9);
  const auto s = run_cli({"strict-demo", "--grid", "101", "--deltas", "0.4,0.2"});
  EXPECT_EQ(s.code, cli::kExitVerdictFail) << s.err;
  EXPECT_EQ(io::parse(s.out)["monotone"], true);
}
