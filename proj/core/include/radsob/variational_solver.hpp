#pragma once

#include <cstdint>

#include "radsob/errors.hpp"
#include "radsob/nonlinearity.hpp"
#include "radsob/radial_grid.hpp"

namespace radsob {

enum class SolutionKind { GlobalMin, MountainPass };

struct Solution {
  RadialFunction u;
  double energy = 0.0;
  double residual = 0.0;  // max over hat functions of |I'(u)e_i| / ||e_i||
  SolutionKind kind = SolutionKind::GlobalMin;
  double nonneg_violation = 0.0;  // max(0, -min u)
  int iterations = 0;
  double rim_level = 0.0;  // mountain pass: sampled positive rim infimum
  double delta = 0.0;      // slope regularization used in gradient assembly
};

struct SolverOptions {
  double tol = 0.0;  // 0 picks the mode default: 1e-6 (min), 1e-5 (mountain pass)
  int max_iterations = 400;
  int starts = 6;
  std::uint64_t seed = 0;
  double delta = 1e-10;
};

// Non-convergence carrying the best iterate reached; min-max runs attach
// the last discretized path as well.
struct SolveError : ConvergenceError {
  Solution best;
  std::vector<RadialFunction> path;
  SolveError(const std::string& what, Solution b);
};

// Functional value I(u) = (1/p) ||u||^p - integral of G(|x|, u), where
// G(r,t) = K(r) F(t) + Q(r) t.  `truncated` applies the nonnegativity device:
// the reaction is switched off for t < 0, so G(r,t) = G(r, max(t,0)).
double energy(const RadialFunction& u, const WeightTable& V, const WeightTable& K,
              const NonlinearitySpec& nl, bool truncated = false);

// Directional derivative I'(u)h and its nodal collection over hat functions.
// For p < 2 the flux |u'|^(p-2) u' is assembled as (u'^2 + delta^2)^((p-2)/2) u'.
double derivative(const RadialFunction& u, const RadialFunction& h,
                  const WeightTable& V, const WeightTable& K,
                  const NonlinearitySpec& nl, bool truncated = false,
                  double delta = 1e-10);
std::vector<double> gradient_vector(const RadialFunction& u, const WeightTable& V,
                                    const WeightTable& K, const NonlinearitySpec& nl,
                                    bool truncated = false, double delta = 1e-10);
double residual_norm(const RadialFunction& u, const WeightTable& V,
                     const WeightTable& K, const NonlinearitySpec& nl,
                     bool truncated = false, double delta = 1e-10);

// Global minimization for reactions growing slower than the norm term.
// Requires a sublinear lower bound on G or a nonzero forcing term; asserts a
// negative minimum under the former.  Nonnegativity by reflection.
Solution solve_sublinear(const PotentialSpec& V, const PotentialSpec& K,
                         const NonlinearitySpec& nl, const RadialGrid& grid,
                         const SolverOptions& opts = {});

// Min-max search for reactions growing faster than the norm term: positive
// rim, downhill scaling, discretized-path descent, then saddle refinement.
// Uses the truncated reaction, so the critical point is nonnegative.
Solution solve_mountain_pass(const PotentialSpec& V, const PotentialSpec& K,
                             const NonlinearitySpec& nl, const RadialGrid& grid,
                             const SolverOptions& opts = {});

}  // namespace radsob
