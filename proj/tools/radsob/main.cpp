#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "radsob/errors.hpp"

namespace cli = radsob::cli;

int main(int argc, char** argv) {
  CLI::App app{"compactness ranges, supremum estimates and radial solutions for "
               "weighted p-Laplace problems"};
  app.require_subcommand(1);

  cli::RangesOptions ro;
  auto* ranges = app.add_subcommand(
      "ranges", "admissible exponent ranges for a potential pair");
  ranges->add_option("--V", ro.V, "potential V(r)")->required();
  ranges->add_option("--K", ro.K, "weight K(r)")->required();
  ranges->add_option("--p", ro.p, "exponent p (rational)");
  ranges->add_option("--N", ro.N, "dimension N");
  ranges->add_option("--json", ro.json_path, "write a JSON report here");

  cli::RegionOptions go;
  auto* region = app.add_subcommand(
      "region", "sample the admissible (alpha, q) region at fixed beta, gamma");
  region->add_option("--beta", go.beta, "beta (rational)");
  region->add_option("--gamma", go.gamma, "gamma (rational)")->required();
  region->add_option("--p", go.p, "exponent p (rational)");
  region->add_option("--N", go.N, "dimension N");
  region->add_option("--alpha-min", go.alpha_min, "alpha lattice start")->required();
  region->add_option("--alpha-max", go.alpha_max, "alpha lattice end")->required();
  region->add_option("--q-min", go.q_min, "q lattice start");
  region->add_option("--q-max", go.q_max, "q lattice end")->required();
  region->add_option("--steps", go.steps, "lattice subdivisions per axis");
  region->add_option("--out", go.out, "CSV destination (stdout when absent)");

  cli::ExampleOptions eo;
  auto* example = app.add_subcommand("example", "worked potential families");
  example->add_option("id", eo.id, "one of: inverse-powers, zero-potential, "
                      "exp-decay, exp-singularity, steep-powers, power-equation")
      ->required();
  example->add_option("--p", eo.p, "exponent p (rational)");
  example->add_option("--N", eo.N, "dimension N");
  example->add_option("--a", eo.a, "power or decay rate a (rational)");
  example->add_option("--b", eo.b, "power or rate b (rational)");
  example->add_option("--b0", eo.b0, "origin power b0 (rational)");
  example->add_option("--d", eo.d, "weight power d (rational)");
  example->add_option("--q", eo.q, "query exponent (rational)");
  example->add_option("--json", eo.json_path, "write a JSON report here");

  cli::EstimateOptions so;
  auto* estimate = app.add_subcommand(
      "estimate", "localized supremum estimates and their decay in R");
  estimate->add_option("--V", so.V, "potential V(r)");
  estimate->add_option("--K", so.K, "weight K(r)");
  estimate->add_option("--table", so.table, "CSV of r,V,K rows instead of --V/--K");
  estimate->add_option("--p", so.p, "exponent p (rational)");
  estimate->add_option("--N", so.N, "dimension N");
  estimate->add_option("--side", so.side, "origin or infinity");
  estimate->add_option("--q", so.q, "exponents to probe")->delimiter(',');
  estimate->add_option("--R", so.R, "geometric radius schedule")->delimiter(',');
  estimate->add_option("--rmin", so.rmin, "grid start");
  estimate->add_option("--rmax", so.rmax, "grid end");
  estimate->add_option("--M", so.M, "grid intervals");
  estimate->add_option("--starts", so.starts, "ascent multistarts");
  estimate->add_option("--iterations", so.iterations, "ascent budget per start");
  estimate->add_option("--rel-tol", so.rel_tol, "relative gain stopping tolerance");
  estimate->add_option("--seed", so.seed, "RNG seed");
  estimate->add_option("--csv", so.csv_path, "write per-radius estimates here");
  estimate->add_option("--json", so.json_path, "write a JSON report here");

  cli::SolveCmdOptions vo;
  auto* solve = app.add_subcommand("solve", "solve a radial problem file");
  solve->add_option("problem", vo.problem, "JSON problem description")->required();
  solve->add_option("--out", vo.out, "report JSON destination (stdout when absent)");
  solve->add_option("--csv", vo.csv_path, "write the profile as r,u rows here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitInput;
  }

  try {
    if (ranges->parsed()) return cli::cmd_ranges(ro);
    if (region->parsed()) return cli::cmd_region(go);
    if (example->parsed()) return cli::cmd_example(eo);
    if (estimate->parsed()) return cli::cmd_estimate(so);
    if (solve->parsed()) return cli::cmd_solve(vo);
  } catch (const radsob::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitInput;
  } catch (const radsob::HypothesisError& e) {
    std::cerr << "hypothesis not satisfied: " << e.what() << "\n";
    return cli::kExitHypothesis;
  } catch (const radsob::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitHypothesis;
  } catch (const radsob::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitNoConverge;
  }
  return cli::kExitOk;
}
