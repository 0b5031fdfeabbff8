#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radsob/embedding_exponents.hpp"
#include "radsob/potential.hpp"

namespace radsob {

// Feasible beta values at one end, with the extremal admissible alpha for
// each.  Directional meaning: at the origin the relevant alpha is the
// largest one keeping K/(r^alpha V^beta) essentially bounded (larger alpha
// widens the upper exponent range), at infinity the smallest (smaller
// alpha lowers the threshold).  `alpha_unbounded` means every alpha is
// admissible, i.e. the extremal alpha is +inf resp. -inf.
struct BetaSegment {
  Rat beta_lo, beta_hi;
  bool lo_open = false, hi_open = false;
  bool alpha_unbounded = false;
  Rat alpha0, alpha1;  // extremal alpha = alpha0 + alpha1*beta when bounded

  bool empty() const {
    return beta_lo > beta_hi || (beta_lo == beta_hi && (lo_open || hi_open));
  }
  Rat alpha_at(const Rat& beta) const { return alpha0 + alpha1 * beta; }
};

struct ProfileCandidates {
  Side side = Side::Origin;
  std::vector<BetaSegment> segments;  // disjoint, increasing in beta
  // Best exponent for the lower potential bound essinf r^gamma V > 0:
  // largest admissible gamma >= p at the origin, smallest admissible
  // gamma <= p at infinity.  +inf (origin) / -inf (infinity) mean every
  // gamma on the useful side works.
  std::optional<Rat> gamma_best;
  bool v_vanishes = false;  // V == 0 near this end
};

ProfileCandidates analyze_end(const PotentialSpec& V, const PotentialSpec& K, Side side,
                              const ProblemDims& dims);

// Union over all admissible profiles at one end of the exponent ranges the
// embedding theorems certify there.  The union is always a single open
// interval (half-line at infinity).
struct EndRange {
  ExponentRange range = ExponentRange::empty_range();
  bool refined = false;  // used the lower-potential-bound route
  std::optional<Rat> gamma_used;
  // Profiles attaining the interval endpoints, when a single profile with
  // finite alpha does.
  std::optional<AsymptoticProfile> endpoint_lo, endpoint_hi;
  std::string note;
};

EndRange end_range(const ProfileCandidates& candidates, const ProblemDims& dims,
                   bool allow_refined = true);

struct BestRanges {
  ProfileCandidates origin, infinity;
  EndRange origin_range, infinity_range;
  EmbeddingConclusion conclusion;
};

BestRanges best_ranges(const PotentialSpec& V, const PotentialSpec& K,
                       const ProblemDims& dims);

}  // namespace radsob
