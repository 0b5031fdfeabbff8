#include <cmath>
#include <vector>

#include "doctest.h"
#include "radsob/errors.hpp"
#include "radsob/nonlinearity.hpp"
#include "radsob/potential.hpp"

using namespace radsob;

namespace {

ProblemDims d23() { return ProblemDims(Rat(2), 3); }

PotentialSpec one() { return PotentialSpec::parse("1"); }

HypothesisReport report(const NonlinearitySpec& nl) {
  return check_hypotheses(nl, one(), one(), d23());
}

}  // namespace

TEST_CASE("closed-form profiles match independent integrals") {
  // t^4/(1+t^2) integrates to t^3/3 - t + arctan t.
  auto rp = NonlinearitySpec::rational_power(3.0, 5.0);
  CHECK(rp.F(2.0) == doctest::Approx(8.0 / 3.0 - 2.0 + std::atan(2.0)).epsilon(1e-11));
  CHECK(rp.f(1.3) == doctest::Approx(std::pow(1.3, 4) / (1.0 + 1.3 * 1.3)).epsilon(1e-13));
  CHECK(rp.f(-1.3) == -rp.f(1.3));
  CHECK(rp.F(-2.0) == rp.F(2.0));

  // Fractional exponents, reference values from 30-digit quadrature.
  auto rp_frac = NonlinearitySpec::rational_power(1.5, 2.5);
  CHECK(rp_frac.F(1.0) == doctest::Approx(0.237462993461563286).epsilon(1e-10));
  CHECK(rp_frac.F(4.0) == doctest::Approx(3.547630768921514339).epsilon(1e-10));

  auto mp = NonlinearitySpec::min_power(3.0, 5.0);
  CHECK(mp.f(0.5) == doctest::Approx(std::pow(0.5, 4)).epsilon(1e-14));
  CHECK(mp.f(2.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(mp.F(0.5) == doctest::Approx(std::pow(0.5, 5) / 5.0).epsilon(1e-14));
  CHECK(mp.F(2.0) == doctest::Approx(0.2 + 7.0 / 3.0).epsilon(1e-14));

  auto pp = NonlinearitySpec::pure_power(3.0);
  CHECK(pp.f(2.0) == doctest::Approx(4.0));
  CHECK(pp.F(-2.0) == doctest::Approx(8.0 / 3.0));

  // The log-bent profile is even, so its primitive is odd; it dips negative
  // below t = 1 and recovers above.  Reference values from 30-digit quadrature.
  auto lp = NonlinearitySpec::log_perturbed(4.0, 6.0, 0.5);
  CHECK(lp.f(1.0) == 0.0);
  CHECK(lp.f(-2.0) == lp.f(2.0));
  CHECK(lp.F(1.0) == doctest::Approx(-0.0165180038208411).epsilon(1e-7));
  CHECK(lp.F(2.0) == doctest::Approx(1.1405234756343935).epsilon(1e-9));
  CHECK(lp.F(-2.0) == -lp.F(2.0));

  auto z = NonlinearitySpec::zero();
  CHECK(z.f(3.0) == 0.0);
  CHECK(z.F(3.0) == 0.0);
  CHECK(z.is_zero());
}

TEST_CASE("profile slopes match difference quotients") {
  auto rp = NonlinearitySpec::rational_power(3.0, 5.0);
  double h = 1e-6;
  double fd = (rp.f(1.3 + h) - rp.f(1.3 - h)) / (2.0 * h);
  CHECK(rp.fprime(1.3) == doctest::Approx(fd).epsilon(1e-7));

  auto mp = NonlinearitySpec::min_power(3.0, 5.0);
  CHECK(mp.fprime(0.5) == doctest::Approx(4.0 * std::pow(0.5, 3)).epsilon(1e-12));
  CHECK(mp.fprime(2.0) == doctest::Approx(2.0 * 2.0).epsilon(1e-12));

  auto pp = NonlinearitySpec::pure_power(3.0);
  CHECK(pp.fprime(2.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("custom tables interpolate and refuse points beyond their range") {
  std::vector<double> t, f, F;
  for (int i = 0; i <= 200; ++i) {
    double x = 2.0 * i / 200.0;
    t.push_back(x);
    f.push_back(x * x);
    F.push_back(x * x * x / 3.0);
  }
  auto nl = NonlinearitySpec::custom(t, f, F, 3.0, 3.0);
  CHECK(nl.f(0.77) == doctest::Approx(0.77 * 0.77).epsilon(1e-4));
  CHECK(nl.f(-0.77) == -nl.f(0.77));
  CHECK(nl.F(-0.77) == nl.F(0.77));
  CHECK(nl.fprime(0.77) == doctest::Approx(2.0 * 0.77).epsilon(1e-2));
  CHECK_THROWS_AS(nl.f(2.5), DomainError);
  CHECK(!nl.is_zero());

  auto rep = report(nl);
  CHECK(rep.odd.verdict == Verdict::Holds);
  CHECK(rep.ar_global.verdict == Verdict::Unknown);
  CHECK(rep.ar_tail.verdict == Verdict::Unknown);
  CHECK(rep.sublinear_lower.verdict == Verdict::Unknown);
  CHECK(!rep.growth_envelope);
  CHECK(rep.growth_constant == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("factories validate their parameters") {
  CHECK_THROWS_AS(NonlinearitySpec::min_power(1.0, 2.0), DomainError);
  CHECK_THROWS_AS(NonlinearitySpec::min_power(2.0, 0.5), DomainError);
  CHECK_THROWS_AS(NonlinearitySpec::rational_power(3.0, 2.0), DomainError);
  CHECK_THROWS_AS(NonlinearitySpec::pure_power(1.0), DomainError);
  CHECK_THROWS_AS(NonlinearitySpec::log_perturbed(2.0, 3.0, 0.0), DomainError);
  CHECK_THROWS_AS(NonlinearitySpec::custom({0.0}, {0.0}, {0.0}, 2.0, 2.0),
                  DomainError);
  CHECK_THROWS_AS(NonlinearitySpec::custom({0.0, 1.0, 1.0}, {0.0, 1.0, 1.0},
                                           {0.0, 0.5, 0.5}, 2.0, 2.0),
                  DomainError);
  CHECK_THROWS_AS(NonlinearitySpec::custom({0.5, 1.0}, {0.0, 1.0}, {0.0, 0.5},
                                           2.0, 2.0),
                  DomainError);
  CHECK_THROWS_AS(NonlinearitySpec::custom({0.0, 1.0}, {0.0, 1.0}, {0.1, 0.5},
                                           2.0, 2.0),
                  DomainError);
}

TEST_CASE("superlinear two-power profile: report and inequalities") {
  auto rep = report(NonlinearitySpec::min_power(3.0, 5.0));
  CHECK(rep.ar_global.verdict == Verdict::Holds);
  CHECK(rep.ar_global.theta == doctest::Approx(3.0));
  CHECK(rep.positive_level.verdict == Verdict::Holds);
  CHECK(rep.positive_level.t0 == doctest::Approx(1.0));
  CHECK(rep.ar_tail.verdict == Verdict::Holds);
  CHECK(rep.min_power_lower.verdict == Verdict::Holds);
  CHECK(rep.min_power_lower.m == doctest::Approx(0.2));
  CHECK(rep.odd.verdict == Verdict::Holds);
  CHECK(rep.sublinear_lower.verdict == Verdict::Fails);
  CHECK(rep.forcing_operator.verdict == Verdict::Holds);
  CHECK(rep.forcing_nonzero.verdict == Verdict::Fails);
  CHECK(rep.growth_envelope);
  CHECK(rep.growth_constant == doctest::Approx(1.0));

  // Spot-check the claimed pointwise bounds on a log sample.
  auto nl = NonlinearitySpec::min_power(3.0, 5.0);
  for (int i = 0; i <= 60; ++i) {
    double t = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
    CHECK(rep.ar_global.theta * nl.F(t) <= t * nl.f(t) * (1.0 + 1e-12));
    double envelope = std::min(std::pow(t, 3.0), std::pow(t, 5.0));
    CHECK(nl.F(t) + 1e-15 >= rep.min_power_lower.m * envelope);
    CHECK(std::fabs(nl.f(t)) <=
          rep.growth_constant * std::min(std::pow(t, 2.0), std::pow(t, 4.0)) *
              (1.0 + 1e-12));
  }
}

TEST_CASE("sublinear profiles: report and lower bound") {
  auto rep = report(NonlinearitySpec::rational_power(1.5, 1.8));
  CHECK(rep.ar_global.verdict == Verdict::Fails);
  CHECK(rep.sublinear_lower.verdict == Verdict::Holds);
  CHECK(rep.sublinear_lower.theta == doctest::Approx(1.8));
  CHECK(rep.sublinear_lower.m == doctest::Approx(0.5 / 1.8));
  auto nl = NonlinearitySpec::rational_power(1.5, 1.8);
  for (int i = 1; i <= 40; ++i) {
    double t = rep.sublinear_lower.t0 * i / 40.0;
    CHECK(nl.F(t) + 1e-15 >=
          rep.sublinear_lower.m * std::pow(t, rep.sublinear_lower.theta));
  }

  auto rep_mp = report(NonlinearitySpec::min_power(1.5, 1.8));
  CHECK(rep_mp.sublinear_lower.verdict == Verdict::Holds);
  CHECK(rep_mp.sublinear_lower.theta == doctest::Approx(1.8));
  CHECK(rep_mp.sublinear_lower.m == doctest::Approx(1.0 / 1.8));

  auto rep_pp = report(NonlinearitySpec::pure_power(1.5));
  CHECK(rep_pp.sublinear_lower.verdict == Verdict::Holds);
  CHECK(rep_pp.sublinear_lower.theta == doctest::Approx(1.5));
  CHECK(rep_pp.ar_global.verdict == Verdict::Fails);

  auto rep_super = report(NonlinearitySpec::pure_power(3.0));
  CHECK(rep_super.sublinear_lower.verdict == Verdict::Fails);
  CHECK(rep_super.ar_global.verdict == Verdict::Holds);
  CHECK(rep_super.ar_global.theta == doctest::Approx(3.0));
}

TEST_CASE("log-bent profile: global bounds fail, tail bound survives") {
  auto nl = NonlinearitySpec::log_perturbed(4.0, 6.0, 0.5);
  auto rep = report(nl);
  CHECK(rep.ar_global.verdict == Verdict::Fails);
  CHECK(rep.min_power_lower.verdict == Verdict::Fails);
  CHECK(rep.sublinear_lower.verdict == Verdict::Fails);
  CHECK(rep.odd.verdict == Verdict::Fails);
  CHECK(rep.positive_level.verdict == Verdict::Holds);
  CHECK(rep.positive_level.t0 == doctest::Approx(2.0));  // F(1) < 0 < F(2)
  CHECK(rep.ar_tail.verdict == Verdict::Holds);
  CHECK(rep.ar_tail.theta == doctest::Approx(2.75));  // between p and q1 - eps
  CHECK(rep.ar_tail.t0 == doctest::Approx(2.0));
  for (int i = 0; i <= 40; ++i) {
    double t = rep.ar_tail.t0 * std::pow(10.0, 4.0 * i / 40.0);
    CHECK(rep.ar_tail.theta * nl.F(t) <= t * nl.f(t) * (1.0 + 1e-10));
  }
  // Sampled envelope constant brackets the true supremum ~0.73401 at t~7.6.
  CHECK(rep.growth_constant >= 0.7340);
  CHECK(rep.growth_constant <= 0.7718);

  // Tail ratio tends to q1 - eps; at or below the norm power the tail
  // inequality is unobtainable.
  auto rep_low = report(NonlinearitySpec::log_perturbed(2.2, 2.4, 0.5));
  CHECK(rep_low.ar_tail.verdict == Verdict::Fails);
}

TEST_CASE("forcing terms flip the structural verdicts") {
  auto nl = NonlinearitySpec::pure_power(4.0);
  nl.forcing = PotentialSpec::parse("r^-1*exp(-r)");
  auto rep = report(nl);
  CHECK(rep.forcing_operator.verdict == Verdict::Holds);
  CHECK(rep.forcing_nonzero.verdict == Verdict::Holds);
  CHECK(rep.ar_global.verdict == Verdict::Fails);
  CHECK(rep.odd.verdict == Verdict::Fails);
  CHECK(rep.ar_tail.verdict == Verdict::Unknown);
  CHECK(rep.positive_level.verdict == Verdict::Holds);

  // Too slow a decay at infinity: the weighted integrability test is not met.
  auto nl_slow = NonlinearitySpec::pure_power(4.0);
  nl_slow.forcing = PotentialSpec::parse("r^-1");
  CHECK(report(nl_slow).forcing_operator.verdict == Verdict::Unknown);

  // Too strong a singularity at the origin.
  auto nl_sing = NonlinearitySpec::zero();
  nl_sing.forcing = PotentialSpec::parse("r^-3");
  auto rep_sing = report(nl_sing);
  CHECK(rep_sing.forcing_operator.verdict == Verdict::Unknown);
  CHECK(rep_sing.positive_level.verdict == Verdict::Holds);
  CHECK(rep_sing.ar_global.verdict == Verdict::Fails);
  CHECK(!nl_sing.is_zero());

  auto rep_zero = report(NonlinearitySpec::zero());
  CHECK(rep_zero.forcing_operator.verdict == Verdict::Holds);
  CHECK(rep_zero.forcing_nonzero.verdict == Verdict::Fails);
  CHECK(rep_zero.positive_level.verdict == Verdict::Fails);
  CHECK(rep_zero.ar_global.verdict == Verdict::Holds);
}
