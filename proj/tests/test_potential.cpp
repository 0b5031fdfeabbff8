#include "radsob/potential.hpp"

#include <cmath>

#include "doctest.h"
#include "radsob/errors.hpp"

using namespace radsob;

namespace {
const ProblemDims d23(Rat(2), 3);

PotentialSpec P(const char* text) { return PotentialSpec::parse(text); }
}  // namespace

TEST_CASE("parse simple power and exponential forms") {
  PotentialSpec a = P("r^-2");
  REQUIRE(a.pieces().size() == 1);
  CHECK(a.pieces()[0].term == PotentialTerm{Rat(1), Rat(-2), Rat(0), Rat(0)});
  CHECK(a.pieces()[0].lo == Rat(0));
  CHECK(a.pieces()[0].hi.is_pos_inf());

  CHECK(P("exp(-3r)*r^2").pieces()[0].term ==
        PotentialTerm{Rat(1), Rat(2), Rat(-3), Rat(0)});
  CHECK(P("exp(1/r)").pieces()[0].term == PotentialTerm{Rat(1), Rat(0), Rat(0), Rat(1)});
  CHECK(P("exp(-r)").pieces()[0].term == PotentialTerm{Rat(1), Rat(0), Rat(-1), Rat(0)});
  CHECK(P("exp(r)").pieces()[0].term == PotentialTerm{Rat(1), Rat(0), Rat(1), Rat(0)});
  CHECK(P("exp(-3/2/r)").pieces()[0].term ==
        PotentialTerm{Rat(1), Rat(0), Rat(0), Rat(-3, 2)});
  CHECK(P("exp(1/2r)").pieces()[0].term == PotentialTerm{Rat(1), Rat(0), Rat(1, 2), Rat(0)});
  CHECK(P("2.5").pieces()[0].term == PotentialTerm{Rat(5, 2), Rat(0), Rat(0), Rat(0)});
  CHECK(P("0").pieces()[0].term.is_zero());
  CHECK(P("r^3/2").pieces()[0].term.e == Rat(3, 2));  // exponent literals bind greedily
  CHECK(P("1/2*r^3").pieces()[0].term == PotentialTerm{Rat(1, 2), Rat(3), Rat(0), Rat(0)});
  CHECK(P("3*r*exp(2r)").pieces()[0].term == PotentialTerm{Rat(3), Rat(1), Rat(2), Rat(0)});
  CHECK(P(" r ^ -2 ") == P("r^-2"));  // whitespace-insensitive
}

TEST_CASE("parse piecewise bodies and behaves-like markers") {
  PotentialSpec pw = P("piecewise[(0,1): r^-1; (1,inf): 0]");
  REQUIRE(pw.pieces().size() == 2);
  CHECK(pw.pieces()[0].hi == Rat(1));
  CHECK(pw.pieces()[1].term.is_zero());
  CHECK(pw.end_term(Side::Origin).e == Rat(-1));
  CHECK(pw.end_term(Side::Infinity).is_zero());

  PotentialSpec marked = P("exp(1/r) ~inf r^3");
  CHECK(marked.has_marker(Side::Infinity));
  CHECK_FALSE(marked.has_marker(Side::Origin));
  CHECK(marked.end_term(Side::Origin).s_inverse == Rat(1));
  CHECK(marked.end_term(Side::Infinity) == PotentialTerm{Rat(1), Rat(3), Rat(0), Rat(0)});

  PotentialSpec both = P("1 ~0 r^-1 ~inf r^2");
  CHECK(both.end_term(Side::Origin).e == Rat(-1));
  CHECK(both.end_term(Side::Infinity).e == Rat(2));
}

TEST_CASE("parse rejects malformed or inadmissible input") {
  CHECK_THROWS_AS(P(""), ParseError);
  CHECK_THROWS_AS(P("r^"), ParseError);
  CHECK_THROWS_AS(P("2r"), ParseError);       // explicit * required
  CHECK_THROWS_AS(P("exp(2)"), ParseError);   // exponential must involve r
  CHECK_THROWS_AS(P("exp(r*r)"), ParseError);
  CHECK_THROWS_AS(P("exp(1/r"), ParseError);
  CHECK_THROWS_AS(P("r^2^3"), ParseError);
  CHECK_THROWS_AS(P("r**2"), ParseError);
  CHECK_THROWS_AS(P("1+r"), ParseError);      // sums are out of scope
  CHECK_THROWS_AS(P("~inf r"), ParseError);   // marker without body
  CHECK_THROWS_AS(P("1 ~0 r ~0 r"), ParseError);
  CHECK_THROWS_AS(P("-3*r"), DomainError);    // potentials are nonnegative
  CHECK_THROWS_AS(P("piecewise[(0,1): r]"), DomainError);          // stops short of inf
  CHECK_THROWS_AS(P("piecewise[(1,inf): r]"), DomainError);        // misses 0
  CHECK_THROWS_AS(P("piecewise[(0,1): r; (2,inf): r]"), DomainError);  // gap
  CHECK_THROWS_AS(P("piecewise[(0,2): r; (1,inf): r]"), DomainError);  // overlap
  CHECK_THROWS_AS(P("piecewise[(1,1/2): r]"), DomainError);        // empty interval
}

TEST_CASE("str round-trips through parse") {
  const char* cases[] = {
      "r^-2", "exp(-3r)*r^2", "exp(1/r)", "exp(-1/r)", "2.5", "0", "1",
      "5*r^3/2*exp(-2r)", "exp(1/2r)", "exp(-3/2/r)",
      "piecewise[(0,1): r^-1; (1,inf): 0]",
      "piecewise[(0,1/2): exp(1/r); (1/2,3): 1; (3,inf): r^-4]",
      "exp(1/r) ~inf r^3", "1 ~0 r^-1 ~inf r^2",
  };
  for (const char* text : cases) {
    PotentialSpec spec = P(text);
    CHECK(P(spec.str().c_str()) == spec);
  }
}

TEST_CASE("eval matches closed forms") {
  CHECK(P("r^-2").eval(2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(P("exp(-3r)*r^2").eval(1.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));
  CHECK(P("exp(1/r)").eval(0.5) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(P("3/4").eval(17.0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(P("0").eval(1.0) == 0.0);

  PotentialSpec pw = P("piecewise[(0,1): r^-1; (1,inf): 0]");
  CHECK(pw.eval(0.25) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(pw.eval(1.0) == 0.0);  // breakpoints belong to the right piece
  CHECK(pw.eval(7.0) == 0.0);
  CHECK_THROWS_AS(pw.eval(0.0), DomainError);
  CHECK_THROWS_AS(pw.eval(-1.0), DomainError);

  // Markers do not affect pointwise evaluation.
  CHECK(P("exp(1/r) ~inf r^3").eval(10.0) ==
        doctest::Approx(std::exp(0.1)).epsilon(1e-14));

  // Singular end: value overflows to +inf rather than trapping.
  CHECK(std::isinf(P("exp(1/r)").eval(1e-4)));
}

TEST_CASE("positivity and zero detection") {
  CHECK(P("r^-2").positive());
  CHECK_FALSE(P("piecewise[(0,1): r^-1; (1,inf): 0]").positive());
  CHECK_FALSE(P("0").positive());
  CHECK(P("0").is_zero());
  CHECK_FALSE(P("r").is_zero());
}

TEST_CASE("L1 decisions for K over the ball and the whole space") {
  // Near the origin a power r^b integrates against r^(N-1) iff b > -N.
  CHECK(is_K_L1_ball(P("1"), d23));
  CHECK(is_K_L1_ball(P("r^-2"), d23));
  CHECK_FALSE(is_K_L1_ball(P("r^-3"), d23));  // b = -N diverges
  CHECK_FALSE(is_K_L1_ball(P("r^-7/2"), d23));
  // Exponential rates dominate any power.
  CHECK_FALSE(is_K_L1_ball(P("exp(1/r)"), d23));
  CHECK(is_K_L1_ball(P("r^-100*exp(-1/r)"), d23));

  // Whole space adds the end at infinity: power decay needs b < -N.
  CHECK_FALSE(is_K_L1_global(P("1"), d23));
  CHECK_FALSE(is_K_L1_global(P("piecewise[(0,1): 1; (1,inf): r^-3]"), d23));
  CHECK(is_K_L1_global(P("piecewise[(0,1): 1; (1,inf): r^-4]"), d23));
  CHECK(is_K_L1_global(P("r^2*exp(-r)"), d23));
  CHECK_FALSE(is_K_L1_global(P("r^-2*exp(r)"), d23));
  // Behaves-like markers decide integrability at their end.
  CHECK(is_K_L1_global(P("r^2*exp(-r) ~inf r^-5"), d23));
  CHECK_FALSE(is_K_L1_global(P("r^-2 ~inf 1"), d23));
}
