#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bdlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitVerdictFail = 2;

struct RunConfig {
  std::string subcommand;
  std::string field;
  std::string measure;
  std::string matrix;
  std::string integrand;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string out;
  bool no_boundary = false;
  int threads = 1;
  std::optional<int> grid;
  std::string mode = "strong";

  // rigidity
  std::string h1, h2, h, p, g;
  // qc-test, jensen
  std::string at;
  int iters = 300;
  std::string ym = "laminate";
  std::string plus, minus;
  double theta = 0.5;
  std::string site = "regular";
  std::size_t index = 0;
  // minimize
  std::vector<std::string> dirichlet;
  // lsc-demo
  std::string kind = "laminate";
  std::string a = "[1,0]", b = "[0,1]";
  std::string base;
  double amplitude = 1.0;
  double offset = 0.0;
  std::string profile = "sawtooth";
  std::vector<int> js{1, 2, 4, 8};
  // strict-demo
  std::vector<double> deltas{0.2, 0.1, 0.05};
  // staircase
  std::string cell = "staircase";
  double q1 = 1.0, q2 = 1.0;
  std::vector<int> ns{1, 2, 4, 8};
  // doubling
  std::string measure_kind = "lebesgue";
  std::string x0 = "[0,0]";
  double t = 3.0;
  std::vector<double> radii{0.2, 0.1, 0.05};
};

/// Run one subcommand. The JSON report goes to `out`, diagnostics to `err`.
/// With a non-empty RunConfig::out the report and a CSV are also written
/// to that directory.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parse command-line arguments (without the program name) and dispatch.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bdlab::cli
