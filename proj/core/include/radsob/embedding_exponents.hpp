#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radsob/extended_rational.hpp"

// Exact computation of the admissible Lebesgue exponents for the compact
// embedding of radial weighted Sobolev spaces into L^q1 + L^q2.  All
// arithmetic is rational; interval endpoints are never rounded.

namespace radsob {

using Rat = ExtendedRational;

struct ProblemDims {
  ProblemDims(Rat p_, int N_);
  Rat p;
  int N;

  Rat n() const { return Rat(N); }
  // Critical Sobolev exponent p N / (N - p).
  Rat p_star() const;
  // The gamma value p(N-1)/(p-1) where the steeper threshold curve degenerates.
  Rat gamma_pole() const;
};

enum class Side { Origin, Infinity };

// Power bounds satisfied by K/(r^alpha V^beta) near one end, plus an optional
// lower power bound r^-gamma on V at the same end.
struct AsymptoticProfile {
  AsymptoticProfile(Side side_, Rat alpha_, Rat beta_, std::optional<Rat> gamma_,
                    const ProblemDims& dims);
  Side side;
  Rat alpha;
  Rat beta;
  std::optional<Rat> gamma;
};

// Open interval (lower, upper) of admissible exponents; upper may be +inf.
// Empty iff lower >= upper.
struct ExponentRange {
  ExponentRange() : lower(0), upper(0) {}
  ExponentRange(Rat lo, Rat hi) : lower(std::move(lo)), upper(std::move(hi)) {}
  static ExponentRange empty_range() { return ExponentRange(); }

  Rat lower;
  Rat upper;

  bool empty() const { return lower >= upper; }
  bool contains(const Rat& q) const { return lower < q && q < upper; }
  ExponentRange intersect(const ExponentRange& o) const;
  bool operator==(const ExponentRange& o) const;
  std::string str() const;
};

enum class EmbeddingKind { None, SumSpace, SingleSpace };

struct EmbeddingConclusion {
  EmbeddingKind kind = EmbeddingKind::None;
  ExponentRange q1;        // admissible exponents governed by the origin
  ExponentRange q2;        // admissible exponents governed by infinity
  ExponentRange single;    // q1 intersect q2; nonempty iff kind == SingleSpace
  bool compact = true;     // the embedding delivered is always compact
  std::string note;
};

// Threshold alpha*(beta) = max{p beta - 1 - (p-1)N/p, -(1-beta)N}; <= 0 with
// equality iff beta == 1, branches meet at beta == 1/p.
Rat alpha_star(const Rat& beta, const ProblemDims& dims);

// q*(alpha, beta) = p(alpha - p beta + N)/(N - p); q*(+inf, beta) = +inf.
Rat q_star(const Rat& alpha, const Rat& beta, const ProblemDims& dims);

// q_*(alpha, beta, gamma) = p(alpha - gamma beta + N)/(N - gamma);
// undefined at gamma == N.
Rat q_lower_star(const Rat& alpha, const Rat& beta, const Rat& gamma, const ProblemDims& dims);

// q_**(alpha, beta, gamma) = p(p alpha + (1 - p beta) gamma + p(N-1)) /
// (p(N-1) - gamma(p-1)); undefined at gamma == p(N-1)/(p-1).
Rat q_double_star(const Rat& alpha, const Rat& beta, const Rat& gamma, const ProblemDims& dims);

// The alpha values where the pointwise maximum of {1, p beta, q_*, q_**}
// changes shape: a1 = -(1-beta)gamma, a2 = -(1-beta)N,
// a3 = -((p-1)N + (1-p beta)gamma)/p.
struct AlphaBreakpoints {
  Rat a1, a2, a3;
};
AlphaBreakpoints alpha_breakpoints(const Rat& beta, const Rat& gamma, const ProblemDims& dims);

// max{1, p beta, q*(alpha,beta)}: the infimum of the admissible exponents at
// infinity when only the ratio growth is known.  Computed both directly and
// through the piecewise form (q* above alpha*(beta), max{1, p beta} below);
// the two must agree.
Rat q_threshold(const Rat& alpha, const Rat& beta, const ProblemDims& dims);

// max{1, p beta, q_*, q_**} for beta <= 1, gamma < N.  Computed both
// directly and through the three-branch description driven by
// alpha_breakpoints; the two must agree.
Rat q_threshold(const Rat& alpha, const Rat& beta, const Rat& gamma, const ProblemDims& dims);

// Membership test for the origin-side admissible region, beta in [0,1],
// gamma >= p.  Exact case dispatch on gamma.
bool region_contains(const Rat& alpha, const Rat& q, const Rat& beta, const Rat& gamma,
                     const ProblemDims& dims);

// The q-slice of the region at fixed alpha, as one open interval (upper may
// be +inf).  Cross-checked against region_contains at 32 sampled exponents.
ExponentRange region_slice(const Rat& alpha, const Rat& beta, const Rat& gamma,
                           const ProblemDims& dims);

// Admissible q1 from an origin profile.  Without gamma this requires
// alpha > alpha*(beta) and returns (max{1, p beta}, q*); violation throws
// HypothesisError.  With gamma it returns the region slice.
ExponentRange q1_interval(const AsymptoticProfile& profile, const ProblemDims& dims);

// Admissible q2 from an infinity profile: (threshold, +inf), where the
// threshold uses the gamma-refined form when gamma is present.
ExponentRange q2_interval(const AsymptoticProfile& profile, const ProblemDims& dims);

EmbeddingConclusion combine(const ExponentRange& q1, const ExponentRange& q2);

// Shifts a negative beta to 0 along alpha -> alpha - beta gamma; leaves
// q_* and q_** unchanged.  Requires gamma when beta < 0.
AsymptoticProfile normalize_beta(const AsymptoticProfile& profile, const ProblemDims& dims);

// Exponent bounds for V = r^a, K ~ r^{b0} at 0 and r^b at infinity, with
// -p(N-1)/(p-1) < a < -N and b0 > a, compared against the two prior
// power-potential criteria.
struct PowerComparison {
  Rat b1, b2, b3;                    // -N < b1 < b2 < b3 < -p
  Rat upper;                         // p(p(N-1)+p b0-a)/(p(N-1)+a(p-1))
  Rat prior_super_lower;             // max{p, p(N+b)/(N-p)}
  std::optional<Rat> prior_sub_lower;   // defined for b in [b3,-p) or [b1,b2)
  std::optional<Rat> prior_sub_upper;   // defined for b0 in (b3,-p] or (b1,b2]
  Rat combined_lower;                // max{1, p(N+b0)/(N+a), p(N+b)/(N-p)}
  ExponentRange range;               // (combined_lower, upper)
  bool single_space_ok;              // (N+b)/(N-p) < (p(N-1)+p b0-a)/(p(N-1)+a(p-1))
};
PowerComparison power_comparison(const Rat& a, const Rat& b0, const Rat& b,
                                 const ProblemDims& dims);

}  // namespace radsob
