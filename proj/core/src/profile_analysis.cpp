#include "radsob/profile_analysis.hpp"

#include <algorithm>
#include <stdexcept>

#include "radsob/errors.hpp"

namespace radsob {

namespace {

// Affine function of beta.
struct Aff {
  Rat a0, a1;
  Rat at(const Rat& beta) const { return a0 + a1 * beta; }
};

Aff constant(const Rat& v) { return Aff{v, Rat(0)}; }

}  // namespace

ProfileCandidates analyze_end(const PotentialSpec& V, const PotentialSpec& K, Side side,
                              const ProblemDims& dims) {
  if (!K.positive()) throw DomainError("K must be strictly positive");

  const PotentialTerm& vt = V.end_term(side);
  const PotentialTerm& kt = K.end_term(side);
  bool origin = side == Side::Origin;
  // The rate that decides boundedness at this end: coefficient of 1/r at
  // the origin, of r at infinity.  Power factors only matter on ties.
  Rat sv = origin ? vt.s_inverse : vt.s_growth;
  Rat sk = origin ? kt.s_inverse : kt.s_growth;

  ProfileCandidates out;
  out.side = side;
  out.v_vanishes = vt.is_zero();

  if (out.v_vanishes) {
    // V^0 = 1 convention: only beta = 0 makes sense; the ratio reduces to
    // K / r^alpha.
    if (sk < Rat(0))
      out.segments.push_back({Rat(0), Rat(0), false, false, true, Rat(0), Rat(0)});
    else if (sk.is_zero())
      out.segments.push_back({Rat(0), Rat(0), false, false, false, kt.e, Rat(0)});
    return out;  // essinf r^gamma V = 0 for every gamma: no refined route
  }

  // Exponential rate of the ratio: E(beta) = sk - beta*sv.  E < 0 makes
  // the ratio vanish faster than any power (every alpha admissible);
  // E = 0 reduces to powers, with extremal alpha = kt.e - beta*vt.e.
  Rat af0 = kt.e, af1 = -vt.e;
  auto affine_point = [&](const Rat& b) {
    out.segments.push_back({b, b, false, false, false, af0, af1});
  };
  auto unbounded = [&](const Rat& lo, bool lo_open, const Rat& hi, bool hi_open) {
    BetaSegment seg{lo, hi, lo_open, hi_open, true, Rat(0), Rat(0)};
    if (!seg.empty()) out.segments.push_back(seg);
  };

  if (sv.is_zero()) {
    if (sk < Rat(0))
      unbounded(Rat(0), false, Rat(1), false);
    else if (sk.is_zero())
      out.segments.push_back({Rat(0), Rat(1), false, false, false, af0, af1});
  } else {
    Rat bhat = sk / sv;
    if (sv > Rat(0)) {
      // E < 0 exactly for beta > bhat.
      if (bhat >= Rat(0) && bhat <= Rat(1)) affine_point(bhat);
      unbounded(max(bhat, Rat(0)), bhat >= Rat(0), Rat(1), false);
    } else {
      // E < 0 exactly for beta < bhat.
      unbounded(Rat(0), false, min(bhat, Rat(1)), bhat <= Rat(1));
      if (bhat >= Rat(0) && bhat <= Rat(1)) affine_point(bhat);
    }
  }

  // Lower bound essinf r^gamma V > 0 near the end.
  if (origin) {
    if (sv > Rat(0))
      out.gamma_best = Rat::infinity();
    else if (sv.is_zero() && -vt.e >= dims.p)
      out.gamma_best = -vt.e;
  } else {
    if (sv > Rat(0))
      out.gamma_best = Rat::neg_infinity();
    else if (sv.is_zero() && -vt.e <= dims.p)
      out.gamma_best = -vt.e;
  }
  return out;
}

namespace {

// One segment's contribution, described by piecewise-affine interval
// endpoints: the certified range at beta is (max of lower, min of upper),
// subject to strict side conditions cond > 0.  An empty upper list means
// +inf.
struct SegmentPieces {
  const BetaSegment* seg;
  std::vector<Aff> lower, upper, conds;
};

Aff compose_q_star(const Aff& alpha, const ProblemDims& dims) {
  // q^*(alpha(beta), beta) = p (alpha - p beta + N) / (N - p)
  Rat den = dims.n() - dims.p;
  return Aff{dims.p * (alpha.a0 + dims.n()) / den, dims.p * (alpha.a1 - dims.p) / den};
}

Aff compose_q_lower(const Aff& alpha, const Rat& gamma, const ProblemDims& dims) {
  // q_*(alpha(beta), beta, gamma) = p (alpha - gamma beta + N) / (N - gamma)
  Rat den = dims.n() - gamma;
  return Aff{dims.p * (alpha.a0 + dims.n()) / den, dims.p * (alpha.a1 - gamma) / den};
}

Aff compose_q_double(const Aff& alpha, const Rat& gamma, const ProblemDims& dims) {
  // q_**(alpha(beta), beta, gamma) =
  //   p (p alpha + (1 - p beta) gamma + p(N-1)) / (p(N-1) - gamma(p-1))
  Rat den = dims.p * (dims.n() - Rat(1)) - gamma * (dims.p - Rat(1));
  return Aff{dims.p * (dims.p * alpha.a0 + gamma + dims.p * (dims.n() - Rat(1))) / den,
             dims.p * (dims.p * alpha.a1 - dims.p * gamma) / den};
}

SegmentPieces build_pieces(const BetaSegment& seg, Side side, const std::optional<Rat>& gamma,
                           const ProblemDims& dims) {
  SegmentPieces out;
  out.seg = &seg;
  out.lower.push_back(constant(Rat(1)));
  out.lower.push_back(Aff{Rat(0), dims.p});  // p*beta

  if (seg.alpha_unbounded) {
    // Origin: pushing alpha to +inf sends every upper curve to +inf and,
    // past the pole of q_**, every extra lower curve below max{1, p beta}.
    // Infinity: alpha -> -inf sends all threshold curves below max{1, p beta}.
    // Either way the certified range is (max{1, p beta}, +inf).
    return out;
  }

  Aff alpha{seg.alpha0, seg.alpha1};
  if (side == Side::Infinity) {
    if (gamma && gamma->is_finite()) {
      out.lower.push_back(compose_q_lower(alpha, *gamma, dims));
      out.lower.push_back(compose_q_double(alpha, *gamma, dims));
    } else if (!gamma) {
      out.lower.push_back(compose_q_star(alpha, dims));
    }
    // gamma == -inf: limiting threshold max{1, p beta}; nothing to add.
    return out;
  }

  // Origin side.
  if (!gamma) {
    out.upper.push_back(compose_q_star(alpha, dims));
    return out;
  }
  if (gamma->is_pos_inf()) return out;  // limiting range (max{1, p beta}, +inf)

  const Rat& g = *gamma;
  Rat pole = dims.gamma_pole();
  if (g < dims.n()) {
    out.upper.push_back(compose_q_lower(alpha, g, dims));
    out.upper.push_back(compose_q_double(alpha, g, dims));
  } else if (g == dims.n()) {
    out.upper.push_back(compose_q_double(alpha, g, dims));
    // alpha > -(1-beta) N
    out.conds.push_back(Aff{alpha.a0 + dims.n(), alpha.a1 - dims.n()});
  } else if (g < pole) {
    out.lower.push_back(compose_q_lower(alpha, g, dims));
    out.upper.push_back(compose_q_double(alpha, g, dims));
  } else if (g == pole) {
    out.lower.push_back(compose_q_lower(alpha, g, dims));
    // alpha > -(1-beta) gamma
    out.conds.push_back(Aff{alpha.a0 + g, alpha.a1 - g});
  } else {
    out.lower.push_back(compose_q_lower(alpha, g, dims));
    out.lower.push_back(compose_q_double(alpha, g, dims));
  }
  return out;
}

// Evaluate max of lower / min of upper at one beta.
Rat lower_at(const SegmentPieces& sp, const Rat& beta) {
  Rat v = sp.lower.front().at(beta);
  for (const Aff& f : sp.lower) v = max(v, f.at(beta));
  return v;
}

Rat upper_at(const SegmentPieces& sp, const Rat& beta) {
  if (sp.upper.empty()) return Rat::infinity();
  Rat v = sp.upper.front().at(beta);
  for (const Aff& f : sp.upper) v = min(v, f.at(beta));
  return v;
}

// Candidate beta values: segment endpoints, pairwise crossings of the
// affine pieces, zeros of the side conditions, and pairwise crossings of
// the margin pieces {upper - lower} together with the conditions.  The
// extrema of the convex lower envelope and concave upper envelope, and
// every kink or zero of the concave feasibility margin, all occur at such
// points, so scanning them is exact.
std::vector<Rat> candidate_betas(const SegmentPieces& sp) {
  std::vector<Rat> cands{sp.seg->beta_lo, sp.seg->beta_hi};
  auto add_root = [&](const Aff& f, const Aff& g) {
    if (f.a1 == g.a1) return;
    Rat b = (g.a0 - f.a0) / (f.a1 - g.a1);
    if (b >= sp.seg->beta_lo && b <= sp.seg->beta_hi) cands.push_back(b);
  };

  std::vector<Aff> all = sp.lower;
  all.insert(all.end(), sp.upper.begin(), sp.upper.end());
  all.insert(all.end(), sp.conds.begin(), sp.conds.end());
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j) add_root(all[i], all[j]);

  std::vector<Aff> margins = sp.conds;
  for (const Aff& u : sp.upper)
    for (const Aff& l : sp.lower) margins.push_back(Aff{u.a0 - l.a0, u.a1 - l.a1});
  Aff zero = constant(Rat(0));
  for (size_t i = 0; i < margins.size(); ++i) {
    add_root(margins[i], zero);
    for (size_t j = i + 1; j < margins.size(); ++j) add_root(margins[i], margins[j]);
  }

  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  return cands;
}

// Redundant consistency check: the per-beta interval assembled from the
// affine pieces must match the independently computed theorem interval.
void cross_check(const SegmentPieces& sp, Side side, const std::optional<Rat>& gamma,
                 const Rat& beta, const Rat& lo, const Rat& hi, bool conds_ok,
                 const ProblemDims& dims) {
  if (sp.seg->alpha_unbounded || (gamma && !gamma->is_finite())) return;
  Rat alpha = sp.seg->alpha_at(beta);
  if (side == Side::Origin) {
    if (gamma) {
      ExponentRange slice = region_slice(alpha, beta, *gamma, dims);
      ExponentRange ours = conds_ok ? ExponentRange(lo, hi) : ExponentRange::empty_range();
      if (slice.empty() != ours.empty() || (!slice.empty() && !(slice == ours)))
        throw std::logic_error("end_range: slice disagrees with region_slice");
    } else if (lo < hi) {
      AsymptoticProfile pr(side, alpha, beta, std::nullopt, dims);
      if (!(q1_interval(pr, dims) == ExponentRange(lo, hi)))
        throw std::logic_error("end_range: interval disagrees with q1_interval");
    }
  } else {
    AsymptoticProfile pr(side, alpha, beta, gamma, dims);
    if (!(q2_interval(pr, dims) == ExponentRange(lo, Rat::infinity())))
      throw std::logic_error("end_range: threshold disagrees with q2_interval");
  }
}

}  // namespace

EndRange end_range(const ProfileCandidates& candidates, const ProblemDims& dims,
                   bool allow_refined) {
  EndRange out;
  out.refined = allow_refined && candidates.gamma_best.has_value();
  if (out.refined) out.gamma_used = candidates.gamma_best;

  bool any = false;
  Rat best_lo, best_hi;
  std::optional<Rat> lo_beta, hi_beta;
  const BetaSegment* lo_seg = nullptr;
  const BetaSegment* hi_seg = nullptr;

  for (const BetaSegment& seg : candidates.segments) {
    if (seg.empty()) continue;
    SegmentPieces sp = build_pieces(seg, candidates.side, out.gamma_used, dims);
    std::vector<Rat> betas = candidate_betas(sp);

    // The feasible beta set is where all side conditions hold strictly and
    // the interval is nonempty; its indicator is a min of concave pieces,
    // so positivity somewhere is decided on the candidate points.
    bool feasible = false;
    for (const Rat& b : betas) {
      Rat margin = upper_at(sp, b) - lower_at(sp, b);
      for (const Aff& c : sp.conds) margin = min(margin, c.at(b));
      if (margin > Rat(0)) {
        feasible = true;
        break;
      }
    }
    if (!feasible) continue;

    for (const Rat& b : betas) {
      Rat lo = lower_at(sp, b);
      Rat hi = upper_at(sp, b);
      bool conds_ok = true;
      for (const Aff& c : sp.conds) conds_ok = conds_ok && c.at(b) > Rat(0);
      cross_check(sp, candidates.side, out.gamma_used, b, lo, hi, conds_ok, dims);
      bool closure_ok = hi >= lo;
      for (const Aff& c : sp.conds) closure_ok = closure_ok && c.at(b) >= Rat(0);
      if (!closure_ok) continue;
      if (!any || lo < best_lo) {
        best_lo = lo;
        lo_beta = b;
        lo_seg = &seg;
      }
      if (!any || hi > best_hi) {
        best_hi = hi;
        hi_beta = b;
        hi_seg = &seg;
      }
      any = true;
    }
  }

  if (!any) {
    out.range = ExponentRange::empty_range();
    out.note = "no admissible profile at this end";
    return out;
  }
  out.range = ExponentRange(best_lo, best_hi);

  auto witness = [&](const BetaSegment* seg, const std::optional<Rat>& beta)
      -> std::optional<AsymptoticProfile> {
    if (!seg || !beta || seg->alpha_unbounded) return std::nullopt;
    std::optional<Rat> g = out.gamma_used;
    if (g && !g->is_finite()) g.reset();
    return AsymptoticProfile(candidates.side, seg->alpha_at(*beta), *beta, g, dims);
  };
  out.endpoint_lo = witness(lo_seg, lo_beta);
  out.endpoint_hi = witness(hi_seg, hi_beta);

  if (out.gamma_used && !out.gamma_used->is_finite())
    out.note = "lower potential bound holds for arbitrarily strong gamma; "
               "limiting range reported";
  else if ((lo_seg && lo_seg->alpha_unbounded) || (hi_seg && hi_seg->alpha_unbounded))
    out.note = "ratio bounded for every alpha on part of the beta range; "
               "limiting range reported";
  return out;
}

BestRanges best_ranges(const PotentialSpec& V, const PotentialSpec& K,
                       const ProblemDims& dims) {
  BestRanges out;
  out.origin = analyze_end(V, K, Side::Origin, dims);
  out.infinity = analyze_end(V, K, Side::Infinity, dims);
  out.origin_range = end_range(out.origin, dims);
  out.infinity_range = end_range(out.infinity, dims);
  out.conclusion = combine(out.origin_range.range, out.infinity_range.range);
  return out;
}

}  // namespace radsob
