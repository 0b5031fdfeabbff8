#include "radsob/sup_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "radsob/errors.hpp"

namespace radsob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective coefficients: area * K_i * masked trapezoid weight.  Non-finite
// entries mark nodes where any positive value overflows the integral.
std::vector<double> objective_coeffs(const RadialGrid& grid, const WeightTable& K,
                                     double R, Side side) {
  std::vector<double> mw = masked_node_weights(grid, R, side);
  for (size_t i = 0; i < mw.size(); ++i) mw[i] *= grid.sphere_area() * K.value[i];
  return mw;
}

double objective(const std::vector<double>& ko, const std::vector<double>& u, double q) {
  double sum = 0.0;
  for (size_t i = 0; i < u.size(); ++i)
    if (u[i] != 0.0 && ko[i] != 0.0) sum += ko[i] * std::pow(u[i], q);
  return sum;
}

struct Ascent {
  const RadialGrid& grid;
  const WeightTable& V;
  const std::vector<double>& ko;
  double q;
  const std::vector<char>& active;
  int budget;
  double rel_tol;

  bool diverged = false;
  int iterations = 0;

  // Normalize in place; false when the norm is zero or not finite.
  bool normalize(std::vector<double>& u) const {
    RadialFunction f{&grid, u};
    double n = w_norm(f, V);
    if (!(n > 0.0) || !std::isfinite(n)) return false;
    for (double& x : u) x /= n;
    return true;
  }

  // One preconditioned ascent step: solve the lagged linear system
  // A(u) v = K.u^(q-1), where A is the tridiagonal operator whose quadratic
  // form is the discrete norm (gradient-term coefficients |u'|^(p-2) m/dr^2
  // plus the V mass diagonal).  Inactive nodes pin v to zero, which splits
  // the grid into independent runs, each solved by the Thomas algorithm.
  // Plain gradient steps stall here: the norm's metric is dominated by the
  // second-difference operator, so the energy solve is the preconditioner.
  bool picard_step(const std::vector<double>& u, std::vector<double>& v) const {
    const std::vector<double>& r = grid.nodes();
    const std::vector<double>& m = grid.interval_mass();
    const std::vector<double>& w = grid.node_weight();
    double p = grid.p();
    constexpr double delta = 1e-10;  // keeps degenerate-slope coefficients positive
    size_t n = u.size();

    std::vector<double> ga(n - 1);
    for (size_t j = 0; j + 1 < n; ++j) {
      double dr = r[j + 1] - r[j];
      double s = (u[j + 1] - u[j]) / dr;
      ga[j] = std::pow(s * s + delta * delta, 0.5 * (p - 2.0)) * m[j] / (dr * dr);
    }

    std::fill(v.begin(), v.end(), 0.0);
    bool any = false;
    std::vector<double> diag, rhs, off;
    for (size_t lo = 0; lo < n;) {
      if (!active[lo]) {
        ++lo;
        continue;
      }
      size_t hi = lo;
      while (hi + 1 < n && active[hi + 1]) ++hi;
      size_t len = hi - lo + 1;
      diag.assign(len, 0.0);
      off.assign(len, 0.0);
      rhs.assign(len, 0.0);
      for (size_t i = 0; i < len; ++i) {
        size_t k = lo + i;
        double dg = ga[k];  // interval to the right always exists (node n-1 is pinned)
        if (k > 0) dg += ga[k - 1];
        if (V.value[k] != 0.0)
          dg += V.value[k] * w[k] *
                std::pow(u[k] * u[k] + delta * delta, 0.5 * (p - 2.0));
        diag[i] = dg;
        if (i + 1 < len) off[i] = -ga[k];
        rhs[i] = u[k] > 0.0 && ko[k] != 0.0 ? ko[k] * std::pow(u[k], q - 1.0) : 0.0;
      }
      // Thomas forward sweep and back substitution.
      for (size_t i = 1; i < len; ++i) {
        double f = off[i - 1] / diag[i - 1];
        diag[i] -= f * off[i - 1];
        rhs[i] -= f * rhs[i - 1];
      }
      double prev = rhs[len - 1] / diag[len - 1];
      v[hi] = prev;
      for (size_t i = len - 1; i-- > 0;) {
        prev = (rhs[i] - off[i] * prev) / diag[i];
        v[lo + i] = prev;
      }
      for (size_t i = 0; i < len; ++i) {
        if (v[lo + i] < 0.0) v[lo + i] = 0.0;
        if (v[lo + i] != 0.0) any = true;
      }
      lo = hi + 1;
    }
    return any;
  }

  // Ascent from one start; returns the best objective reached and whether
  // the stop was a convergence stop (not budget exhaustion).
  std::pair<double, bool> run(std::vector<double>& u) {
    for (size_t i = 0; i < u.size(); ++i)
      if (!active[i]) u[i] = 0.0;
    if (!normalize(u)) return {-1.0, false};
    double J = objective(ko, u, q);
    if (!std::isfinite(J)) {
      diverged = true;
      return {-1.0, false};
    }

    size_t n = u.size();
    std::vector<double> v(n), blend(n);
    int small_steps = 0;
    for (int it = 0; it < budget; ++it) {
      ++iterations;
      if (!picard_step(u, v) || !normalize(v))
        return {J, true};  // no objective mass reachable from here
      bool improved = false;
      double rel = 0.0;
      for (double t = 1.0; t >= 1e-6; t *= 0.5) {
        for (size_t i = 0; i < n; ++i) blend[i] = (1.0 - t) * u[i] + t * v[i];
        if (!normalize(blend)) continue;
        double Jb = objective(ko, blend, q);
        if (!std::isfinite(Jb)) {
          diverged = true;
          continue;
        }
        if (Jb > J) {
          rel = (Jb - J) / std::max(J, 1e-300);
          u.swap(blend);
          J = Jb;
          improved = true;
          break;
        }
      }
      if (!improved) return {J, true};  // fixed point of the iteration
      small_steps = rel < rel_tol ? small_steps + 1 : 0;
      if (small_steps >= 2) return {J, true};
    }
    return {J, false};
  }
};

SupremumEstimate estimate(double q, double R, const WeightTable& V, const WeightTable& K,
                          const RadialGrid& grid, Side side, const EstimatorOptions& opts) {
  if (!(q > 1.0) || !std::isfinite(q)) throw DomainError("estimator needs q > 1");
  if (!(R >= grid.r_min()) || !(R <= grid.r_max()))
    throw DomainError("estimator radius outside the grid span");

  std::vector<double> ko = objective_coeffs(grid, K, R, side);
  size_t n = grid.nodes().size();
  std::vector<char> active(n, 1);
  active.back() = 0;  // support ends at r_M
  for (size_t i = 0; i < n; ++i)
    if (V.forced_zero[i]) active[i] = 0;

  Ascent ascent{grid, V, ko, q, active, opts.max_iterations, opts.rel_tol};

  // Log-r bumps at staggered centers and widths; jitter is deterministic
  // per seed so runs are reproducible and starts are shared across R.
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  double l0 = std::log(grid.r_min()), l1 = std::log(grid.r_max());
  std::vector<std::vector<double>> starts;
  for (int s = 0; s < opts.starts; ++s) {
    double c = l0 + (l1 - l0) * (s + 1.0 + jitter(rng)) / (opts.starts + 1.0);
    double w = (0.5 + 1.5 * ((s % 3) / 2.0)) * (1.0 + 0.2 * jitter(rng));
    std::vector<double> u(n);
    for (size_t i = 0; i < n; ++i) {
      double x = (std::log(grid.nodes()[i]) - c) / w;
      u[i] = std::exp(-x * x);
    }
    starts.push_back(std::move(u));
  }
  for (const RadialFunction& f : opts.extra_starts) {
    std::vector<double> u(n);
    for (size_t i = 0; i < n; ++i) u[i] = std::fabs(f(grid.nodes()[i]));
    starts.push_back(std::move(u));
  }

  SupremumEstimate best;
  best.q = q;
  best.R = R;
  best.side = side;
  best.value = -1.0;
  for (std::vector<double>& u : starts) {
    auto [J, ok] = ascent.run(u);
    if (J > best.value) {
      best.value = J;
      best.converged = ok;
      best.witness = RadialFunction{&grid, u};
    }
  }
  best.iterations = ascent.iterations;
  best.diverged = ascent.diverged;
  if (ascent.diverged) best.converged = false;
  if (best.value < 0.0) {  // every start collapsed (e.g. V singular everywhere useful)
    best.value = 0.0;
    best.witness = RadialFunction{&grid, std::vector<double>(n, 0.0)};
  }
  return best;
}

}  // namespace

SupremumEstimate estimate_S0(double q, double R, const WeightTable& V,
                             const WeightTable& K, const RadialGrid& grid,
                             const EstimatorOptions& opts) {
  return estimate(q, R, V, K, grid, Side::Origin, opts);
}

SupremumEstimate estimate_Sinf(double q, double R, const WeightTable& V,
                               const WeightTable& K, const RadialGrid& grid,
                               const EstimatorOptions& opts) {
  return estimate(q, R, V, K, grid, Side::Infinity, opts);
}

DecayReport decay_report(const std::vector<double>& q_values,
                         const std::vector<double>& R_schedule, Side side,
                         const WeightTable& Vt, const WeightTable& Kt,
                         const RadialGrid& grid, const EstimatorOptions& opts) {
  if (R_schedule.size() < 2) throw DomainError("decay schedule needs at least two radii");
  double ratio = R_schedule[1] / R_schedule[0];
  if (std::fabs(ratio - 2.0) > 1e-9 && std::fabs(ratio - 0.5) > 1e-9)
    throw DomainError("decay schedule must be geometric with ratio 2 or 1/2");
  for (size_t i = 1; i + 1 < R_schedule.size(); ++i)
    if (std::fabs(R_schedule[i + 1] / R_schedule[i] - ratio) > 1e-9)
      throw DomainError("decay schedule must be geometric with ratio 2 or 1/2");

  // Process in the direction of growing mask (R up at the origin, R down at
  // infinity), forwarding witnesses so later estimates dominate earlier ones.
  std::vector<size_t> order(R_schedule.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return side == Side::Origin ? R_schedule[a] < R_schedule[b]
                                : R_schedule[a] > R_schedule[b];
  });

  DecayReport report;
  report.side = side;
  report.R_schedule = R_schedule;
  for (double q : q_values) {
    DecayRow row;
    row.q = q;
    row.estimates.resize(R_schedule.size());
    EstimatorOptions local = opts;
    for (size_t idx : order) {
      SupremumEstimate e = side == Side::Origin
                               ? estimate_S0(q, R_schedule[idx], Vt, Kt, grid, local)
                               : estimate_Sinf(q, R_schedule[idx], Vt, Kt, grid, local);
      local.extra_starts.push_back(e.witness);
      row.estimates[idx] = std::move(e);
    }

    bool all_ok = true;
    for (const SupremumEstimate& e : row.estimates) all_ok = all_ok && e.converged;
    if (!all_ok) {
      row.classification = "inconclusive";
      report.rows.push_back(std::move(row));
      continue;
    }

    // Least-squares slope of log(value) against log-distance toward the
    // side's limit.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t m = R_schedule.size();
    for (size_t i = 0; i < m; ++i) {
      double x = std::log(R_schedule[i]) * (side == Side::Origin ? -1.0 : 1.0);
      double y = std::log(std::max(row.estimates[i].value, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    row.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    row.classification = row.slope < -0.1 ? "decaying"
                         : (row.slope > 0.1 ? "diverging" : "plateau");
    report.rows.push_back(std::move(row));
  }
  return report;
}

DecayReport decay_report(const std::vector<double>& q_values,
                         const std::vector<double>& R_schedule, Side side,
                         const PotentialSpec& V, const PotentialSpec& K,
                         const RadialGrid& grid, const EstimatorOptions& opts) {
  return decay_report(q_values, R_schedule, side, weight_table(grid, V),
                      weight_table(grid, K), grid, opts);
}

}  // namespace radsob
