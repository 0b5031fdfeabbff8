#include <tuple>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "radsob/errors.hpp"
#include "radsob/potential.hpp"
#include "radsob/radial_grid.hpp"
#include "radsob/variational_solver.hpp"

using namespace radsob;

namespace {

ProblemDims d23() { return ProblemDims(Rat(2), 3); }

PotentialSpec one() { return PotentialSpec::parse("1"); }

// The configuration every solver check below revolves around: p = 2, N = 3,
// a decaying singular potential and a weight with two power regimes.
PotentialSpec v_acc() { return PotentialSpec::parse("r^-3*exp(-r)"); }
PotentialSpec k_acc() {
  return PotentialSpec::parse("piecewise[(0,1): r^-1; (1,inf): r^-5/2]");
}

RadialGrid acc_grid(size_t M) {
  return RadialGrid::log_spaced(1e-6, 1e3, M, d23());
}

// Smooth bump in log r, vanishing at the last node.
std::vector<double> log_bump(const RadialGrid& g, double center, double width) {
  std::vector<double> v(g.nodes().size(), 0.0);
  double lc = std::log(center);
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    double x = (std::log(g.nodes()[i]) - lc) / width;
    v[i] = std::exp(-x * x);
  }
  return v;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Least-squares slope of log|R| against log(eps).
double fitted_slope(const std::vector<double>& eps, const std::vector<double>& R) {
  double xb = 0, yb = 0;
  size_t n = eps.size();
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = std::log(eps[i]);
    y[i] = std::log(R[i]);
    xb += x[i];
    yb += y[i];
  }
  xb /= n;
  yb /= n;
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (x[i] - xb) * (y[i] - yb);
    den += (x[i] - xb) * (x[i] - xb);
  }
  return num / den;
}

}  // namespace

TEST_CASE("the zero function has zero energy and zero derivative") {
  RadialGrid g = acc_grid(64);
  WeightTable V = weight_table(g, v_acc());
  WeightTable K = weight_table(g, k_acc());
  auto nl = NonlinearitySpec::rational_power(2.5, 3.5);
  RadialFunction z{&g, std::vector<double>(g.nodes().size(), 0.0)};
  CHECK(energy(z, V, K, nl) == 0.0);
  CHECK(residual_norm(z, V, K, nl) == 0.0);
  RadialFunction h{&g, log_bump(g, 1.0, 1.0)};
  CHECK(derivative(z, h, V, K, nl) == 0.0);
}

TEST_CASE("energy along a ray matches the two-term polynomial") {
  // With V = 0, K = 1 and a pure fourth power, I(t u) = A t^2 / 2 - C t^4 / 4
  // where A and C are fixed quadratures of u.  The ray maximum then sits at
  // t* = sqrt(A / C) with value A^2 / (4 C).
  RadialGrid g = RadialGrid::log_spaced(0.1, 10.0, 64, d23());
  WeightTable V = weight_table(g, PotentialSpec::parse("0"));
  WeightTable K = weight_table(g, one());
  auto nl = NonlinearitySpec::pure_power(4.0);

  RadialFunction u{&g, log_bump(g, 1.0, 0.8)};
  double A = w_norm_p(u, V);
  double C = 0.0;
  // C = 4 * reaction integral of u, recovered from the energy at t = 1.
  double E1 = energy(u, V, K, nl);
  C = 4.0 * (A / 2.0 - E1);
  CHECK(A > 0.0);
  CHECK(C > 0.0);

  for (double t : {0.3, 1.0, 2.7}) {
    RadialFunction tu{&g, u.values};
    for (auto& v : tu.values) v *= t;
    double expect = A * t * t / 2.0 - C * std::pow(t, 4) / 4.0;
    CHECK(energy(tu, V, K, nl) == doctest::Approx(expect).epsilon(1e-12));
  }

  // Golden-section search over the ray agrees with the closed form.
  double tstar = std::sqrt(A / C);
  auto ray = [&](double t) {
    RadialFunction tu{&g, u.values};
    for (auto& v : tu.values) v *= t;
    return energy(tu, V, K, nl);
  };
  double lo = 0.0, hi = 3.0 * tstar;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  for (int it = 0; it < 120; ++it) {
    if (ray(a) < ray(b)) {
      lo = a;
      a = b;
      b = lo + gr * (hi - lo);
    } else {
      hi = b;
      b = a;
      a = hi - gr * (hi - lo);
    }
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(tstar).epsilon(1e-8));
  CHECK(ray(tstar) == doctest::Approx(A * A / (4.0 * C)).epsilon(1e-10));
}

TEST_CASE("directional derivatives are second-order accurate") {
  // |I(u + eps h) - I(u) - eps I'(u)h| should shrink like eps^2; the fitted
  // log-log slope over three decades must stay near 2 for every sampled pair.
  auto nl = NonlinearitySpec::rational_power(2.5, 3.5);
  const std::vector<double> eps = {1e-3, 1e-4, 1e-5};
  for (auto pn : {std::tuple<long, long, int>{3, 2, 3}, {2, 1, 3}, {3, 1, 4}}) {
    ProblemDims dims(Rat(std::get<0>(pn), std::get<1>(pn)), std::get<2>(pn));
    RadialGrid g = RadialGrid::log_spaced(0.1, 10.0, 128, dims);
    WeightTable V = weight_table(g, one());
    WeightTable K = weight_table(g, one());
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    size_t n = g.nodes().size();
    for (int pair = 0; pair < 100; ++pair) {
      std::vector<double> uv(n), hv(n);
      for (size_t i = 0; i + 1 < n; ++i) {
        uv[i] = unif(rng);
        hv[i] = unif(rng);
      }
      RadialFunction u{&g, std::move(uv)};
      RadialFunction h{&g, std::move(hv)};
      double E0 = energy(u, V, K, nl);
      double D = derivative(u, h, V, K, nl);
      std::vector<double> rem;
      bool degenerate = false;
      for (double e : eps) {
        RadialFunction w{&g, u.values};
        for (size_t i = 0; i < n; ++i) w.values[i] += e * h.values[i];
        double r = std::abs(energy(w, V, K, nl) - E0 - e * D);
        if (r == 0.0) degenerate = true;  // remainder below roundoff
        rem.push_back(r);
      }
      if (degenerate) continue;
      CHECK(fitted_slope(eps, rem) >= 1.9);
    }
  }
}

TEST_CASE("pairing the negative part with the truncated functional") {
  // When the reaction is switched off below zero, testing against u- leaves
  // only the norm terms: I'(u)(u-) = -||u-||^p exactly, provided sign changes
  // happen at zero-valued nodes (so no interval mixes both signs ambiguously).
  for (auto pn : {std::tuple<long, long, int>{3, 2, 3}, {2, 1, 3}, {3, 1, 4}}) {
    ProblemDims dims(Rat(std::get<0>(pn), std::get<1>(pn)), std::get<2>(pn));
    RadialGrid g = RadialGrid::log_spaced(0.1, 10.0, 96, dims);
    WeightTable V = weight_table(g, one());
    WeightTable K = weight_table(g, one());
    auto nl = NonlinearitySpec::min_power(2.5, 3.0);
    size_t n = g.nodes().size();
    std::vector<double> uv(n, 0.0);
    const double pat[8] = {0.0, 1.0, 2.0, 1.0, 0.0, -1.0, -2.0, -1.0};
    for (size_t i = 0; i + 1 < n; ++i) uv[i] = 0.7 * pat[i % 8];
    uv[n - 1] = 0.0;
    RadialFunction u{&g, uv};
    std::vector<double> neg(n);
    for (size_t i = 0; i < n; ++i) neg[i] = std::max(-uv[i], 0.0);
    RadialFunction um{&g, neg};
    double lhs = derivative(u, um, V, K, nl, /*truncated=*/true);
    double rhs = -w_norm_p(um, V);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("slowly growing reactions push small bumps below zero energy") {
  RadialGrid g = RadialGrid::log_spaced(0.1, 10.0, 64, d23());
  WeightTable V = weight_table(g, one());
  WeightTable K = weight_table(g, one());
  auto nl = NonlinearitySpec::pure_power(1.5);
  RadialFunction u{&g, log_bump(g, 1.0, 0.8)};
  bool dipped = false;
  for (int k = 0; k <= 12 && !dipped; ++k) {
    RadialFunction s{&g, u.values};
    double lam = std::pow(0.5, k);
    for (auto& v : s.values) v *= lam;
    dipped = energy(s, V, K, nl) < 0.0;
  }
  CHECK(dipped);
}

TEST_CASE("global minimization on the singular-weight configuration") {
  auto nl = NonlinearitySpec::pure_power(1.5);
  RadialGrid g = acc_grid(256);
  Solution s = solve_sublinear(v_acc(), k_acc(), nl, g);
  CHECK(s.kind == SolutionKind::GlobalMin);
  CHECK(s.energy < 0.0);
  CHECK(s.residual <= 1e-6 * std::max(1.0, std::abs(s.energy)));
  CHECK(s.nonneg_violation <= 1e-8);
  CHECK(s.u.values.size() == g.nodes().size());
  CHECK(sup_abs(s.u.values) > 0.0);

  // Weak form against random directions, not just the hat basis.
  WeightTable V = weight_table(g, v_acc());
  WeightTable K = weight_table(g, k_acc());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  size_t n = g.nodes().size();
  for (int trial = 0; trial < 16; ++trial) {
    std::vector<double> hv(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i)
      hv[i] = V.forced_zero[i] ? 0.0 : unif(rng);
    RadialFunction h{&g, hv};
    double nh = w_norm(h, V);
    double ip = derivative(s.u, h, V, K, nl);
    CHECK(std::abs(ip) <= 1e-5 * nh);
  }

  // Halving the mesh moves the minimum by well under a percent.
  Solution coarse = solve_sublinear(v_acc(), k_acc(), nl, acc_grid(128));
  CHECK(std::abs(coarse.energy - s.energy) <= 0.01 * std::abs(s.energy));
}

TEST_CASE("pure forcing minimizes to a nonzero profile") {
  auto nl = NonlinearitySpec::zero();
  nl.forcing = PotentialSpec::parse("r^-1*exp(-r)");
  RadialGrid g = RadialGrid::log_spaced(0.01, 100.0, 128, d23());
  Solution s = solve_sublinear(one(), one(), nl, g);
  CHECK(s.kind == SolutionKind::GlobalMin);
  CHECK(s.energy < 0.0);
  CHECK(sup_abs(s.u.values) > 0.0);
  CHECK(s.residual <= 1e-6 * std::max(1.0, std::abs(s.energy)));
}

TEST_CASE("a vanishing reaction minimizes to the origin") {
  RadialGrid g = acc_grid(64);
  Solution s = solve_sublinear(v_acc(), k_acc(), NonlinearitySpec::zero(), g);
  CHECK(s.energy == 0.0);
  CHECK(s.residual == 0.0);
  CHECK(s.iterations == 0);
  CHECK(sup_abs(s.u.values) == 0.0);
}

TEST_CASE("structural gates refuse mismatched reactions") {
  RadialGrid g = acc_grid(64);
  // Growing faster than the norm power: no global minimum to find.
  CHECK_THROWS_AS(
      solve_sublinear(v_acc(), k_acc(), NonlinearitySpec::pure_power(3.0), g),
      HypothesisError);
  // Border exponent max{q1,q2} = p without forcing.
  CHECK_THROWS_AS(
      solve_sublinear(v_acc(), k_acc(),
                      NonlinearitySpec::rational_power(1.2, 2.0), g),
      HypothesisError);
  // Exponents in range but no sublinear lower bound (log-bent primitive
  // changes sign) and no forcing.
  CHECK_THROWS_AS(
      solve_sublinear(v_acc(), k_acc(),
                      NonlinearitySpec::log_perturbed(1.5, 1.8, 0.1), g),
      HypothesisError);
  // Min-max needs exponents above p.
  CHECK_THROWS_AS(
      solve_mountain_pass(v_acc(), k_acc(), NonlinearitySpec::pure_power(1.5), g),
      HypothesisError);
  // Min-max refuses forcing terms.
  auto forced = NonlinearitySpec::pure_power(4.0);
  forced.forcing = PotentialSpec::parse("exp(-r)");
  CHECK_THROWS_AS(solve_mountain_pass(v_acc(), k_acc(), forced, g),
                  HypothesisError);
  // Log-bent reaction with a non-integrable weight: neither superlinearity
  // route is available.
  CHECK_THROWS_AS(
      solve_mountain_pass(one(), one(),
                          NonlinearitySpec::log_perturbed(4.0, 6.0, 0.5), g),
      HypothesisError);
}

TEST_CASE("min-max search on the singular-weight configuration") {
  auto nl = NonlinearitySpec::pure_power(4.0);
  RadialGrid g = acc_grid(256);
  Solution s = solve_mountain_pass(v_acc(), k_acc(), nl, g);
  CHECK(s.kind == SolutionKind::MountainPass);
  CHECK(s.energy > 0.0);
  CHECK(s.residual <= 1e-5 * std::max(1.0, std::abs(s.energy)));
  CHECK(s.nonneg_violation <= 1e-8);
  CHECK(s.rim_level > 0.0);
  CHECK(s.rim_level <= s.energy);

  WeightTable V = weight_table(g, v_acc());
  WeightTable K = weight_table(g, k_acc());

  // On the critical point I'(u)u = 0, i.e. ||u||^p equals the reaction pairing.
  double nehari = derivative(s.u, s.u, V, K, nl, /*truncated=*/true);
  CHECK(std::abs(nehari) <= 1e-5 * w_norm_p(s.u, V));

  // Doubling the weight K maps the solution by an exact scaling: with a pure
  // power q and norm power p, u -> 2^(-1/(q-p)) u and I -> 2^(-p/(q-p)) I.
  PotentialSpec k2 =
      PotentialSpec::parse("piecewise[(0,1): 2*r^-1; (1,inf): 2*r^-5/2]");
  Solution s2 = solve_mountain_pass(v_acc(), k2, nl, g);
  double scale = std::pow(2.0, -1.0 / (4.0 - 2.0));
  double worst = 0.0;
  for (size_t i = 0; i < s.u.values.size(); ++i)
    worst = std::max(worst, std::abs(s2.u.values[i] - scale * s.u.values[i]));
  CHECK(worst <= 1e-4 * sup_abs(s.u.values));
  CHECK(s2.energy == doctest::Approx(0.5 * s.energy).epsilon(1e-6));

  // Mesh stability.
  Solution coarse = solve_mountain_pass(v_acc(), k_acc(), nl, acc_grid(128));
  CHECK(std::abs(coarse.energy - s.energy) <= 0.01 * std::abs(s.energy));

  // Weak form against random directions.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  size_t n = g.nodes().size();
  for (int trial = 0; trial < 16; ++trial) {
    std::vector<double> hv(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i)
      hv[i] = V.forced_zero[i] ? 0.0 : unif(rng);
    RadialFunction h{&g, hv};
    CHECK(std::abs(derivative(s.u, h, V, K, nl, /*truncated=*/true)) <=
          1e-4 * w_norm(h, V));
  }
}

TEST_CASE("tail-route min-max with an integrable weight") {
  // The log-bent reaction fails the global superlinearity bound, but with an
  // integrable weight the tail bound opens the second route.
  auto nl = NonlinearitySpec::log_perturbed(4.0, 6.0, 0.5);
  RadialGrid g = RadialGrid::log_spaced(1e-3, 50.0, 160, d23());
  Solution s = solve_mountain_pass(one(), PotentialSpec::parse("exp(-r)"), nl, g);
  CHECK(s.kind == SolutionKind::MountainPass);
  CHECK(s.energy > 0.0);
  CHECK(s.residual <= 1e-5 * std::max(1.0, std::abs(s.energy)));
  CHECK(s.nonneg_violation <= 1e-8);
  CHECK(s.rim_level > 0.0);
}

TEST_CASE("budget exhaustion reports the best iterate") {
  auto nl = NonlinearitySpec::pure_power(1.5);
  RadialGrid g = acc_grid(128);
  SolverOptions opts;
  opts.max_iterations = 1;
  opts.starts = 2;
  bool threw = false;
  try {
    solve_sublinear(v_acc(), k_acc(), nl, g, opts);
  } catch (const SolveError& e) {
    threw = true;
    CHECK(e.best.u.values.size() == g.nodes().size());
    CHECK(e.best.residual > 0.0);
    CHECK(std::string(e.what()).find("tolerance") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("runs are deterministic for a fixed seed") {
  auto nl = NonlinearitySpec::pure_power(1.5);
  RadialGrid g = acc_grid(128);
  SolverOptions opts;
  opts.seed = 3;
  Solution a = solve_sublinear(v_acc(), k_acc(), nl, g, opts);
  Solution b = solve_sublinear(v_acc(), k_acc(), nl, g, opts);
  CHECK(a.energy == b.energy);
  CHECK(a.u.values == b.u.values);

  auto nl4 = NonlinearitySpec::pure_power(4.0);
  Solution c = solve_mountain_pass(v_acc(), k_acc(), nl4, g, opts);
  Solution d = solve_mountain_pass(v_acc(), k_acc(), nl4, g, opts);
  CHECK(c.energy == d.energy);
  CHECK(c.u.values == d.u.values);
}

TEST_CASE("energy rejects inadmissible functions by node") {
  auto nl = NonlinearitySpec::pure_power(4.0);

  // Nonzero value at the outer boundary node.
  RadialGrid g = acc_grid(64);
  WeightTable V = weight_table(g, v_acc());
  WeightTable K = weight_table(g, k_acc());
  {
    RadialFunction u{&g, std::vector<double>(g.nodes().size(), 0.0)};
    u.values.back() = 0.5;
    bool threw = false;
    try {
      energy(u, V, K, nl);
    } catch (const DomainError& e) {
      threw = true;
      CHECK(std::string(e.what()).find("node") != std::string::npos);
    }
    CHECK(threw);
  }

  // Charging a node where the potential is infinite.
  {
    RadialGrid gi = RadialGrid::log_spaced(1e-6, 10.0, 64, d23());
    WeightTable Vi = weight_table(gi, PotentialSpec::parse("exp(1/r)"));
    WeightTable Ki = weight_table(gi, one());
    REQUIRE(Vi.forced_zero[0]);
    RadialFunction u{&gi, std::vector<double>(gi.nodes().size(), 0.0)};
    u.values[0] = 1.0;
    bool threw = false;
    try {
      energy(u, Vi, Ki, nl);
    } catch (const DomainError& e) {
      threw = true;
      CHECK(std::string(e.what()).find("infinite-potential") != std::string::npos);
    }
    CHECK(threw);
  }

  // Reaction integrand overflowing at a node while the norm part stays
  // finite: t^4 blows past the double range well before t^2 does.
  {
    RadialFunction u{&g, std::vector<double>(g.nodes().size(), 0.0)};
    u.values[10] = 1e78;
    bool threw = false;
    try {
      energy(u, V, K, nl);
    } catch (const DomainError& e) {
      threw = true;
      CHECK(std::string(e.what()).find("reaction integrand") != std::string::npos);
    }
    CHECK(threw);
  }
}
