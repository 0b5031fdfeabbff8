#include "radsob/embedding_exponents.hpp"

#include <stdexcept>

#include "radsob/errors.hpp"

namespace radsob {

ProblemDims::ProblemDims(Rat p_, int N_) : p(std::move(p_)), N(N_) {
  if (N < 1) throw DomainError("dimension N must be a positive integer");
  if (!p.is_finite() || p <= Rat(1) || p >= Rat(N))
    throw DomainError("require 1 < p < N, got p = " + p.str() + ", N = " + std::to_string(N));
}

Rat ProblemDims::p_star() const { return p * n() / (n() - p); }

Rat ProblemDims::gamma_pole() const { return p * (n() - Rat(1)) / (p - Rat(1)); }

AsymptoticProfile::AsymptoticProfile(Side side_, Rat alpha_, Rat beta_, std::optional<Rat> gamma_,
                                     const ProblemDims& dims)
    : side(side_), alpha(std::move(alpha_)), beta(std::move(beta_)), gamma(std::move(gamma_)) {
  if (!alpha.is_finite()) throw DomainError("profile alpha must be finite");
  if (!beta.is_finite() || beta > Rat(1)) throw DomainError("profile beta must be finite and <= 1");
  if (beta < Rat(0) && !gamma) throw DomainError("beta < 0 requires a gamma bound to shift it away");
  if (gamma) {
    if (!gamma->is_finite()) throw DomainError("profile gamma must be finite");
    if (side == Side::Origin && *gamma < dims.p)
      throw DomainError("origin-side gamma must satisfy gamma >= p");
    if (side == Side::Infinity && *gamma > dims.p)
      throw DomainError("infinity-side gamma must satisfy gamma <= p");
  }
}

ExponentRange ExponentRange::intersect(const ExponentRange& o) const {
  if (empty() || o.empty()) return empty_range();
  return ExponentRange(max(lower, o.lower), min(upper, o.upper));
}

bool ExponentRange::operator==(const ExponentRange& o) const {
  if (empty() && o.empty()) return true;
  return lower == o.lower && upper == o.upper;
}

std::string ExponentRange::str() const {
  if (empty()) return "empty";
  return "(" + lower.str() + ", " + upper.str() + ")";
}

Rat alpha_star(const Rat& beta, const ProblemDims& dims) {
  if (!beta.is_finite()) throw DomainError("alpha_star: beta must be finite");
  const Rat& p = dims.p;
  Rat n = dims.n();
  Rat low = p * beta - Rat(1) - (p - Rat(1)) * n / p;
  Rat high = -(Rat(1) - beta) * n;
  return max(low, high);
}

Rat q_star(const Rat& alpha, const Rat& beta, const ProblemDims& dims) {
  if (alpha.is_pos_inf()) return Rat::infinity();
  if (!alpha.is_finite()) throw DomainError("q_star: alpha must be finite or +inf");
  const Rat& p = dims.p;
  Rat n = dims.n();
  return p * (alpha - p * beta + n) / (n - p);
}

Rat q_lower_star(const Rat& alpha, const Rat& beta, const Rat& gamma, const ProblemDims& dims) {
  if (beta > Rat(1)) throw DomainError("q_lower_star: beta must be <= 1");
  if (gamma == dims.n()) throw DomainError("q_lower_star is undefined at gamma == N");
  const Rat& p = dims.p;
  Rat n = dims.n();
  return p * (alpha - gamma * beta + n) / (n - gamma);
}

Rat q_double_star(const Rat& alpha, const Rat& beta, const Rat& gamma, const ProblemDims& dims) {
  if (beta > Rat(1)) throw DomainError("q_double_star: beta must be <= 1");
  const Rat& p = dims.p;
  Rat n = dims.n();
  Rat den = p * (n - Rat(1)) - gamma * (p - Rat(1));
  if (den.is_zero()) throw DomainError("q_double_star is undefined at gamma == p(N-1)/(p-1)");
  return p * (p * alpha + (Rat(1) - p * beta) * gamma + p * (n - Rat(1))) / den;
}

AlphaBreakpoints alpha_breakpoints(const Rat& beta, const Rat& gamma, const ProblemDims& dims) {
  const Rat& p = dims.p;
  Rat n = dims.n();
  AlphaBreakpoints bp{-(Rat(1) - beta) * gamma, -(Rat(1) - beta) * n,
                      -((p - Rat(1)) * n + (Rat(1) - p * beta) * gamma) / p};
  return bp;
}

Rat q_threshold(const Rat& alpha, const Rat& beta, const ProblemDims& dims) {
  Rat direct = max(max(Rat(1), dims.p * beta), q_star(alpha, beta, dims));
  Rat piecewise = alpha >= alpha_star(beta, dims) ? q_star(alpha, beta, dims)
                                                  : max(Rat(1), dims.p * beta);
  if (direct != piecewise)
    throw std::logic_error("q_threshold: piecewise form disagrees with direct maximum");
  return direct;
}

Rat q_threshold(const Rat& alpha, const Rat& beta, const Rat& gamma, const ProblemDims& dims) {
  if (beta > Rat(1)) throw DomainError("q_threshold: beta must be <= 1");
  if (gamma >= dims.n()) throw DomainError("q_threshold: gamma-refined form requires gamma < N");
  Rat qs = q_lower_star(alpha, beta, gamma, dims);
  Rat qss = q_double_star(alpha, beta, gamma, dims);
  Rat base = max(Rat(1), dims.p * beta);
  Rat direct = max(max(base, qs), qss);

  // Cross-check against the three-branch description.  Both q_* and q_**
  // are affine in alpha and meet at (alpha_1, p); the description assigns
  // q_** to the upper branch, which requires q_** to be the steeper of the
  // two, i.e. gamma <= p.  (For gamma in (p, N) the roles swap and the
  // breakpoints move, so the check would be vacuously wrong there.)
  if (gamma <= dims.p) {
    AlphaBreakpoints bp = alpha_breakpoints(beta, gamma, dims);
    Rat piecewise = alpha >= bp.a1 ? qss : (alpha >= max(bp.a2, bp.a3) ? qs : base);
    if (direct != piecewise)
      throw std::logic_error("q_threshold: three-branch form disagrees with direct maximum");
  }
  return direct;
}

bool region_contains(const Rat& alpha, const Rat& q, const Rat& beta, const Rat& gamma,
                     const ProblemDims& dims) {
  if (beta < Rat(0) || beta > Rat(1)) throw DomainError("region_contains: beta must be in [0,1]");
  if (gamma < dims.p) throw DomainError("region_contains: gamma must be >= p");
  Rat n = dims.n();
  Rat pole = dims.gamma_pole();
  Rat base = max(Rat(1), dims.p * beta);

  if (gamma < n) {
    Rat hi = min(q_lower_star(alpha, beta, gamma, dims), q_double_star(alpha, beta, gamma, dims));
    return base < q && q < hi;
  }
  if (gamma == n) {
    return base < q && q < q_double_star(alpha, beta, gamma, dims) &&
           alpha > -(Rat(1) - beta) * n;
  }
  if (gamma < pole) {
    Rat lo = max(base, q_lower_star(alpha, beta, gamma, dims));
    return lo < q && q < q_double_star(alpha, beta, gamma, dims);
  }
  if (gamma == pole) {
    Rat lo = max(base, q_lower_star(alpha, beta, gamma, dims));
    return lo < q && alpha > -(Rat(1) - beta) * gamma;
  }
  Rat lo = max(max(base, q_lower_star(alpha, beta, gamma, dims)),
               q_double_star(alpha, beta, gamma, dims));
  return lo < q;
}

namespace {

// Every slice must agree with the membership predicate; sample 32 exponents
// in and around the claimed interval.
void check_slice_against_membership(const ExponentRange& slice, const Rat& alpha, const Rat& beta,
                                    const Rat& gamma, const ProblemDims& dims) {
  std::vector<Rat> qs;
  if (!slice.empty()) {
    Rat span = slice.upper.is_pos_inf() ? Rat(8) : slice.upper - slice.lower;
    for (int k = 1; k <= 10; ++k) qs.push_back(slice.lower + span * Rat(k) / Rat(11));
    for (int k = 1; k <= 10; ++k) qs.push_back(slice.lower - Rat(k) / Rat(3));
    if (slice.upper.is_pos_inf()) {
      for (int k = 1; k <= 10; ++k) qs.push_back(slice.lower + Rat(8) + Rat(k));
    } else {
      for (int k = 1; k <= 10; ++k) qs.push_back(slice.upper + Rat(k) / Rat(3));
    }
    qs.push_back(slice.lower);
    if (slice.upper.is_finite())
      qs.push_back(slice.upper);
    else
      qs.push_back(slice.lower + Rat(1000000));
  } else {
    for (int k = -16; k < 16; ++k) qs.push_back(max(Rat(1), dims.p * beta) + Rat(k) / Rat(4));
  }
  for (const Rat& q : qs) {
    if (region_contains(alpha, q, beta, gamma, dims) != slice.contains(q))
      throw std::logic_error("region_slice disagrees with region_contains at q = " + q.str());
  }
}

}  // namespace

ExponentRange region_slice(const Rat& alpha, const Rat& beta, const Rat& gamma,
                           const ProblemDims& dims) {
  if (beta < Rat(0) || beta > Rat(1)) throw DomainError("region_slice: beta must be in [0,1]");
  if (gamma < dims.p) throw DomainError("region_slice: gamma must be >= p");
  Rat n = dims.n();
  Rat pole = dims.gamma_pole();
  Rat base = max(Rat(1), dims.p * beta);

  ExponentRange slice;
  if (gamma < n) {
    slice = ExponentRange(base, min(q_lower_star(alpha, beta, gamma, dims),
                                    q_double_star(alpha, beta, gamma, dims)));
  } else if (gamma == n) {
    slice = alpha > -(Rat(1) - beta) * n
                ? ExponentRange(base, q_double_star(alpha, beta, gamma, dims))
                : ExponentRange::empty_range();
  } else if (gamma < pole) {
    slice = ExponentRange(max(base, q_lower_star(alpha, beta, gamma, dims)),
                          q_double_star(alpha, beta, gamma, dims));
  } else if (gamma == pole) {
    slice = alpha > -(Rat(1) - beta) * gamma
                ? ExponentRange(max(base, q_lower_star(alpha, beta, gamma, dims)), Rat::infinity())
                : ExponentRange::empty_range();
  } else {
    slice = ExponentRange(max(max(base, q_lower_star(alpha, beta, gamma, dims)),
                              q_double_star(alpha, beta, gamma, dims)),
                          Rat::infinity());
  }
  check_slice_against_membership(slice, alpha, beta, gamma, dims);
  return slice;
}

ExponentRange q1_interval(const AsymptoticProfile& profile, const ProblemDims& dims) {
  if (profile.side != Side::Origin) throw DomainError("q1_interval expects an origin profile");
  AsymptoticProfile pr = normalize_beta(profile, dims);
  if (pr.gamma) return region_slice(pr.alpha, pr.beta, *pr.gamma, dims);
  if (pr.beta < Rat(0)) throw DomainError("q1_interval: beta must be >= 0 without a gamma bound");
  Rat astar = alpha_star(pr.beta, dims);
  if (pr.alpha <= astar)
    throw HypothesisError("alpha > alpha_star(beta)",
                          "alpha = " + pr.alpha.str() + " <= alpha_star = " + astar.str() +
                              " at beta = " + pr.beta.str());
  return ExponentRange(max(Rat(1), dims.p * pr.beta), q_star(pr.alpha, pr.beta, dims));
}

ExponentRange q2_interval(const AsymptoticProfile& profile, const ProblemDims& dims) {
  if (profile.side != Side::Infinity) throw DomainError("q2_interval expects an infinity profile");
  AsymptoticProfile pr = normalize_beta(profile, dims);
  if (pr.beta < Rat(0)) throw DomainError("q2_interval: beta must be >= 0 without a gamma bound");
  Rat threshold = pr.gamma ? q_threshold(pr.alpha, pr.beta, *pr.gamma, dims)
                           : q_threshold(pr.alpha, pr.beta, dims);
  return ExponentRange(threshold, Rat::infinity());
}

EmbeddingConclusion combine(const ExponentRange& q1, const ExponentRange& q2) {
  EmbeddingConclusion c;
  c.q1 = q1;
  c.q2 = q2;
  c.single = q1.intersect(q2);
  if (q1.empty() || q2.empty()) {
    c.kind = EmbeddingKind::None;
    c.compact = false;
    c.note = "no admissible exponents at one end";
    return c;
  }
  if (!c.single.empty()) {
    c.kind = EmbeddingKind::SingleSpace;
    c.note = "single-space range is the intersection of the two end ranges";
  } else {
    c.kind = EmbeddingKind::SumSpace;
    c.note = "end ranges do not overlap; sum-space embedding only";
  }
  return c;
}

AsymptoticProfile normalize_beta(const AsymptoticProfile& profile, const ProblemDims& dims) {
  if (profile.beta >= Rat(0)) return profile;
  // beta < 0 implies gamma present (profile invariant).
  return AsymptoticProfile(profile.side, profile.alpha - profile.beta * *profile.gamma, Rat(0),
                           profile.gamma, dims);
}

PowerComparison power_comparison(const Rat& a, const Rat& b0, const Rat& b,
                                 const ProblemDims& dims) {
  const Rat& p = dims.p;
  Rat n = dims.n();
  if (a <= -dims.gamma_pole() || a >= -n)
    throw DomainError("power_comparison: require -p(N-1)/(p-1) < a < -N");
  if (b0 <= a) throw DomainError("power_comparison: require b0 > a");

  Rat den = p * (n - Rat(1)) + a * (p - Rat(1));  // > 0 since a > -p(N-1)/(p-1)
  PowerComparison c{
      .b1 = den / (p * p) - n,
      .b2 = den / p - n,
      .b3 = (n - p) / p - n,
      .upper = p * (p * (n - Rat(1)) + p * b0 - a) / den,
      .prior_super_lower = max(p, p * (n + b) / (n - p)),
      .prior_sub_lower = std::nullopt,
      .prior_sub_upper = std::nullopt,
      .combined_lower = max(max(Rat(1), p * (n + b0) / (n + a)), p * (n + b) / (n - p)),
      .range = ExponentRange(),
      .single_space_ok = (n + b) / (n - p) < (p * (n - Rat(1)) + p * b0 - a) / den,
  };
  if (c.b3 <= b && b < -p)
    c.prior_sub_lower = p * (n + b) / (n - p);
  else if (c.b1 <= b && b < c.b2)
    c.prior_sub_lower = p * p * (n + b) / den;
  if (c.b3 < b0 && b0 <= -p)
    c.prior_sub_upper = p * (n + b0) / (n - p);
  else if (c.b1 < b0 && b0 <= c.b2)
    c.prior_sub_upper = p * p * (n + b0) / den;
  c.range = ExponentRange(c.combined_lower, c.upper);
  return c;
}

}  // namespace radsob
