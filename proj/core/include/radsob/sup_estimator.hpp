#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radsob/radial_grid.hpp"

namespace radsob {

// Lower-bound estimate of sup { integral of K|u|^q over the masked region :
// u in the discrete space, ||u|| = 1 }, found by projected ascent.  The
// witness attaining `value` is stored with unit norm.
struct SupremumEstimate {
  double q = 0.0;
  double R = 0.0;
  Side side = Side::Origin;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;  // objective overflowed: the supremum is plainly infinite
  RadialFunction witness;
};

struct EstimatorOptions {
  int max_iterations = 4000;  // ascent budget per start
  double rel_tol = 1e-7;      // stop when the relative objective gain drops below
  int starts = 8;             // log-r bump multi-starts
  std::uint64_t seed = 0;
  // Extra initial points (e.g. witnesses from a neighboring R); evaluated
  // and ascended like the built-in starts.  Shared starts make the
  // R-monotonicity of the estimates structural.
  std::vector<RadialFunction> extra_starts;
};

SupremumEstimate estimate_S0(double q, double R, const WeightTable& V,
                             const WeightTable& K, const RadialGrid& grid,
                             const EstimatorOptions& opts = {});
SupremumEstimate estimate_Sinf(double q, double R, const WeightTable& V,
                               const WeightTable& K, const RadialGrid& grid,
                               const EstimatorOptions& opts = {});

// Estimates over a geometric R-schedule (ratio 2 or 1/2) for several q,
// each classified by the log-log slope of the estimate toward the side's
// limit (R -> 0 at the origin, R -> inf at infinity): slope < -0.1 decaying,
// |slope| <= 0.1 plateau, slope > 0.1 diverging; any non-converged estimate
// makes the row inconclusive.  Witnesses are forwarded along the schedule in
// the direction of growing mask, so each row is monotone up to round-off.
struct DecayRow {
  double q = 0.0;
  std::vector<SupremumEstimate> estimates;  // in schedule order
  double slope = 0.0;
  std::string classification;
};

struct DecayReport {
  Side side = Side::Origin;
  std::vector<double> R_schedule;
  std::vector<DecayRow> rows;
};

DecayReport decay_report(const std::vector<double>& q_values,
                         const std::vector<double>& R_schedule, Side side,
                         const PotentialSpec& V, const PotentialSpec& K,
                         const RadialGrid& grid, const EstimatorOptions& opts = {});
// Same, over pre-sampled weights (tabulated potentials).
DecayReport decay_report(const std::vector<double>& q_values,
                         const std::vector<double>& R_schedule, Side side,
                         const WeightTable& V, const WeightTable& K,
                         const RadialGrid& grid, const EstimatorOptions& opts = {});

}  // namespace radsob
