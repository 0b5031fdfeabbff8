#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace radsob::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitHypothesis = 1;  // domain or hypothesis violation
inline constexpr int kExitInput = 2;       // malformed input
inline constexpr int kExitNoConverge = 3;  // budget exhausted / inconclusive

struct RangesOptions {
  std::string V, K;
  std::string p = "2";
  int N = 3;
  std::string json_path;
};
int cmd_ranges(const RangesOptions& o);

struct RegionOptions {
  std::string beta = "0";
  std::string gamma;
  std::string p = "2";
  int N = 3;
  std::string alpha_min, alpha_max;
  std::string q_min = "1", q_max;
  int steps = 32;
  std::string out;  // CSV destination, stdout when empty
};
int cmd_region(const RegionOptions& o);

struct ExampleOptions {
  std::string id;
  std::string p = "2";
  int N = 3;
  // Rational parameters; which ones are read depends on the id.
  std::string a, b, b0, d, q;
  std::string json_path;
};
int cmd_example(const ExampleOptions& o);

struct EstimateOptions {
  std::string V, K;   // catalog specs ...
  std::string table;  // ... or a CSV of (r, V, K) rows
  std::string p = "2";
  int N = 3;
  std::string side = "origin";
  std::vector<double> q, R;
  double rmin = 1e-6, rmax = 1e3;
  int M = 512;
  int starts = 8;
  int iterations = 4000;
  double rel_tol = 1e-7;
  std::uint64_t seed = 0;
  std::string csv_path, json_path;
};
int cmd_estimate(const EstimateOptions& o);

struct SolveCmdOptions {
  std::string problem;  // JSON problem file
  std::string out;      // report JSON, stdout when empty
  std::string csv_path;
};
int cmd_solve(const SolveCmdOptions& o);

}  // namespace radsob::cli
