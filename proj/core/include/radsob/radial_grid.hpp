#pragma once

#include <vector>

#include "radsob/embedding_exponents.hpp"
#include "radsob/potential.hpp"

namespace radsob {

// Discretization of (0, inf) for radial integrals: nodes r_0 < ... < r_M,
// log-spaced by default.  Functions live on the nodes as piecewise-linear
// interpolants, constant left of r_0 and zero right of r_M.  The gradient
// term integrates the exact per-interval power of the slope against the
// exact mass of r^(N-1); zero-order terms use the trapezoid rule.
class RadialGrid {
public:
  RadialGrid(std::vector<double> nodes, const ProblemDims& dims);
  static RadialGrid log_spaced(double r_min, double r_max, int intervals,
                               const ProblemDims& dims);

  const std::vector<double>& nodes() const { return nodes_; }
  const ProblemDims& dims() const { return dims_; }
  double p() const { return p_; }
  int N() const { return dims_.N; }
  int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
  double r_min() const { return nodes_.front(); }
  double r_max() const { return nodes_.back(); }

  // Surface area of the unit sphere in R^N.
  double sphere_area() const { return area_; }
  // Exact mass of r^(N-1) over interval i: (r_{i+1}^N - r_i^N)/N.
  const std::vector<double>& interval_mass() const { return mass_; }
  // Trapezoid weights of r^(N-1) dr per node over (r_0, r_M).
  const std::vector<double>& node_weight() const { return weight_; }

private:
  std::vector<double> nodes_;
  ProblemDims dims_;
  double p_;
  double area_;
  std::vector<double> mass_;
  std::vector<double> weight_;
};

// Trapezoid node weights of r^(N-1) dr restricted to the ball of radius R
// (Origin) or its complement (Infinity).  Intervals cut by R contribute the
// exact trapezoid of the linear interpolant on the cut part, so for every R
// the two sides add up to the unrestricted weights.
std::vector<double> masked_node_weights(const RadialGrid& grid, double R, Side side);

// Nodal samples of a radial weight.  Nodes where the weight is non-finite
// are re-sampled at the geometric midpoints of the adjacent intervals; if
// still non-finite the node is flagged and any function living there is
// forced to vanish.
struct WeightTable {
  std::vector<double> value;
  std::vector<bool> forced_zero;
};
WeightTable weight_table(const RadialGrid& grid, const PotentialSpec& spec);

// Piecewise-linear radial function on a grid (non-owning reference).
// The last nodal value must vanish: the represented function is supported
// in [0, r_M] and continuous, constant u_0 near the origin.
struct RadialFunction {
  const RadialGrid* grid = nullptr;
  std::vector<double> values;

  double operator()(double r) const;
};

// Norm ( area * sum(|u'|^p r^(N-1)) + area * sum(V |u|^p r^(N-1)) )^(1/p).
// Returns +inf when u charges a forced-zero node or u_M != 0 (the jump at
// r_M would carry infinite gradient energy).
double w_norm(const RadialFunction& u, const WeightTable& V);
// The p-th power of the same quantity.
double w_norm_p(const RadialFunction& u, const WeightTable& V);

}  // namespace radsob
