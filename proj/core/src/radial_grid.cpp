#include "radsob/radial_grid.hpp"

#include <cmath>
#include <limits>

#include "radsob/errors.hpp"

namespace radsob {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RadialGrid::RadialGrid(std::vector<double> nodes, const ProblemDims& dims)
    : nodes_(std::move(nodes)), dims_(dims), p_(dims.p.to_double()) {
  if (nodes_.size() < 17) throw DomainError("radial grid needs at least 16 intervals");
  if (!(nodes_.front() > 0.0)) throw DomainError("radial grid nodes must be positive");
  for (size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (!(nodes_[i] < nodes_[i + 1]))
      throw DomainError("radial grid nodes must be strictly increasing");
  if (!std::isfinite(nodes_.back())) throw DomainError("radial grid nodes must be finite");

  int N = dims_.N;
  area_ = 2.0 * std::pow(M_PI, N / 2.0) / std::tgamma(N / 2.0);

  size_t M = nodes_.size() - 1;
  mass_.resize(M);
  for (size_t i = 0; i < M; ++i)
    mass_[i] = (std::pow(nodes_[i + 1], N) - std::pow(nodes_[i], N)) / N;

  weight_.assign(M + 1, 0.0);
  for (size_t i = 0; i < M; ++i) {
    double dr = nodes_[i + 1] - nodes_[i];
    weight_[i] += 0.5 * dr * std::pow(nodes_[i], N - 1);
    weight_[i + 1] += 0.5 * dr * std::pow(nodes_[i + 1], N - 1);
  }
}

RadialGrid RadialGrid::log_spaced(double r_min, double r_max, int intervals,
                                  const ProblemDims& dims) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
    throw DomainError("log grid needs 0 < r_min < r_max < inf");
  std::vector<double> nodes(intervals + 1);
  double l0 = std::log(r_min), l1 = std::log(r_max);
  for (int i = 0; i <= intervals; ++i)
    nodes[i] = std::exp(l0 + (l1 - l0) * i / intervals);
  nodes.front() = r_min;
  nodes.back() = r_max;
  return RadialGrid(std::move(nodes), dims);
}

std::vector<double> masked_node_weights(const RadialGrid& grid, double R, Side side) {
  const std::vector<double>& r = grid.nodes();
  int N = grid.N();
  size_t M = r.size() - 1;
  std::vector<double> w(M + 1, 0.0);
  for (size_t i = 0; i < M; ++i) {
    double a = r[i], b = r[i + 1], dr = b - a;
    double fa = std::pow(a, N - 1), fb = std::pow(b, N - 1);
    double ca, cb;  // inside-the-ball share of the trapezoid coefficients
    if (R >= b) {
      ca = 0.5 * dr * fa;
      cb = 0.5 * dr * fb;
    } else if (R <= a) {
      ca = cb = 0.0;
    } else {
      // Trapezoid of the linear interpolant of r^(N-1) over (a, R).
      double t = (R - a) / dr;
      ca = 0.5 * (R - a) * (2.0 - t) * fa;
      cb = 0.5 * (R - a) * t * fb;
    }
    if (side == Side::Origin) {
      w[i] += ca;
      w[i + 1] += cb;
    } else {
      w[i] += 0.5 * dr * fa - ca;
      w[i + 1] += 0.5 * dr * fb - cb;
    }
  }
  return w;
}

WeightTable weight_table(const RadialGrid& grid, const PotentialSpec& spec) {
  const std::vector<double>& r = grid.nodes();
  WeightTable out;
  out.value.resize(r.size());
  out.forced_zero.assign(r.size(), false);
  size_t forced = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    double v = spec.eval(r[i]);
    if (!std::isfinite(v)) {
      // Re-sample at the geometric midpoints of the adjacent intervals.
      double sum = 0.0;
      int n = 0;
      if (i > 0) {
        double m = spec.eval(std::sqrt(r[i - 1] * r[i]));
        if (std::isfinite(m)) sum += m, ++n;
      }
      if (i + 1 < r.size()) {
        double m = spec.eval(std::sqrt(r[i] * r[i + 1]));
        if (std::isfinite(m)) sum += m, ++n;
      }
      v = n ? sum / n : kInf;
    }
    out.value[i] = v;
    if (!std::isfinite(v)) {
      out.forced_zero[i] = true;
      ++forced;
    }
  }
  if (forced == r.size())
    throw DomainError("weight is singular across the entire grid");
  return out;
}

double RadialFunction::operator()(double r) const {
  const std::vector<double>& x = grid->nodes();
  if (r <= x.front()) return values.front();
  if (r >= x.back()) return r > x.back() ? 0.0 : values.back();
  // Binary search for the interval containing r.
  size_t lo = 0, hi = x.size() - 1;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    (x[mid] <= r ? lo : hi) = mid;
  }
  double t = (r - x[lo]) / (x[lo + 1] - x[lo]);
  return values[lo] + t * (values[lo + 1] - values[lo]);
}

double w_norm_p(const RadialFunction& u, const WeightTable& V) {
  const RadialGrid& g = *u.grid;
  const std::vector<double>& r = g.nodes();
  const std::vector<double>& vals = u.values;
  if (vals.back() != 0.0) return kInf;

  double p = g.p();
  double grad = 0.0;
  for (size_t i = 0; i + 1 < r.size(); ++i) {
    double s = (vals[i + 1] - vals[i]) / (r[i + 1] - r[i]);
    if (s != 0.0) grad += std::pow(std::fabs(s), p) * g.interval_mass()[i];
  }
  double pot = 0.0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (vals[i] == 0.0) continue;
    if (V.forced_zero[i]) return kInf;
    if (V.value[i] != 0.0)
      pot += V.value[i] * g.node_weight()[i] * std::pow(std::fabs(vals[i]), p);
  }
  return g.sphere_area() * (grad + pot);
}

double w_norm(const RadialFunction& u, const WeightTable& V) {
  return std::pow(w_norm_p(u, V), 1.0 / u.grid->p());
}

}  // namespace radsob
