#include "radsob/sup_estimator.hpp"

#include <cmath>

#include "doctest.h"
#include "radsob/errors.hpp"

using namespace radsob;

namespace {

const ProblemDims d23(Rat(2), 3);

// Shared medium-resolution grid; the acceptance binary runs the full-size one.
const RadialGrid& grid256() {
  static RadialGrid g = RadialGrid::log_spaced(1e-4, 1e2, 256, d23);
  return g;
}

// Objective recomputed through the public quadrature pieces only.
double recompute(const SupremumEstimate& e, const RadialGrid& g, const char* Kspec) {
  WeightTable K = weight_table(g, PotentialSpec::parse(Kspec));
  std::vector<double> mw = masked_node_weights(g, e.R, e.side);
  double sum = 0.0;
  for (size_t i = 0; i < mw.size(); ++i)
    sum += K.value[i] * mw[i] * std::pow(std::fabs(e.witness.values[i]), e.q);
  return g.sphere_area() * sum;
}

}  // namespace

TEST_CASE("estimator validates q and R") {
  WeightTable V = weight_table(grid256(), PotentialSpec::parse("r^-1"));
  WeightTable K = weight_table(grid256(), PotentialSpec::parse("1"));
  CHECK_THROWS_AS(estimate_S0(1.0, 1.0, V, K, grid256()), DomainError);
  CHECK_THROWS_AS(estimate_S0(0.5, 1.0, V, K, grid256()), DomainError);
  CHECK_THROWS_AS(estimate_S0(4.0, 1e-6, V, K, grid256()), DomainError);
  CHECK_THROWS_AS(estimate_Sinf(4.0, 1e4, V, K, grid256()), DomainError);
}

TEST_CASE("witness feasibility: unit norm and reproducible objective") {
  WeightTable V = weight_table(grid256(), PotentialSpec::parse("r^-1"));
  WeightTable K = weight_table(grid256(), PotentialSpec::parse("1"));
  for (double R : {1.0, 0.25}) {
    SupremumEstimate e = estimate_S0(4.0, R, V, K, grid256());
    CHECK(e.converged);
    CHECK(e.value > 0.0);
    CHECK_FALSE(e.diverged);
    CHECK(std::fabs(w_norm(e.witness, V) - 1.0) <= 1e-8);
    CHECK(std::fabs(recompute(e, grid256(), "1") - e.value) <= 1e-9 * e.value);
  }
  SupremumEstimate tail = estimate_Sinf(4.0, 4.0, V, K, grid256());
  CHECK(tail.converged);
  CHECK(tail.value > 0.0);
  CHECK(std::fabs(w_norm(tail.witness, V) - 1.0) <= 1e-8);
  CHECK(std::fabs(recompute(tail, grid256(), "1") - tail.value) <= 1e-9 * tail.value);
}

TEST_CASE("same seed reproduces the estimate bit for bit") {
  WeightTable V = weight_table(grid256(), PotentialSpec::parse("r^-1"));
  WeightTable K = weight_table(grid256(), PotentialSpec::parse("1"));
  EstimatorOptions opts;
  opts.seed = 42;
  SupremumEstimate a = estimate_S0(4.0, 0.5, V, K, grid256(), opts);
  SupremumEstimate b = estimate_S0(4.0, 0.5, V, K, grid256(), opts);
  CHECK(a.value == b.value);
  CHECK(a.iterations == b.iterations);
  CHECK(a.witness.values == b.witness.values);
}

TEST_CASE("mask edge cases: empty masks give zero") {
  WeightTable V = weight_table(grid256(), PotentialSpec::parse("r^-1"));
  WeightTable K = weight_table(grid256(), PotentialSpec::parse("1"));
  SupremumEstimate none = estimate_S0(4.0, grid256().r_min(), V, K, grid256());
  CHECK(none.value == 0.0);
  CHECK(none.converged);
  SupremumEstimate tail = estimate_Sinf(4.0, grid256().r_max(), V, K, grid256());
  CHECK(tail.value == 0.0);
  CHECK(tail.converged);
}

TEST_CASE("singular K overflows the objective and is flagged") {
  WeightTable V = weight_table(grid256(), PotentialSpec::parse("1"));
  RadialGrid wide = RadialGrid::log_spaced(1e-6, 10.0, 128, d23);
  WeightTable Vw = weight_table(wide, PotentialSpec::parse("1"));
  WeightTable Kw = weight_table(wide, PotentialSpec::parse("exp(1/r)"));
  SupremumEstimate e = estimate_S0(2.0, 1.0, Vw, Kw, wide);
  CHECK(e.diverged);
  CHECK_FALSE(e.converged);
}

TEST_CASE("inverse-first-power V: decay on both sides at an interior exponent") {
  // V = r^-1, K = 1, q = 4 sits inside the certified range (10/3, 6).
  PotentialSpec V = PotentialSpec::parse("r^-1");
  PotentialSpec K = PotentialSpec::parse("1");
  EstimatorOptions opts;

  DecayReport origin = decay_report({4.0}, {1.0, 0.5, 0.25, 0.125, 0.0625}, Side::Origin,
                                    V, K, grid256(), opts);
  REQUIRE(origin.rows.size() == 1);
  const DecayRow& row = origin.rows[0];
  CHECK(row.classification == "decaying");
  // Estimates nonincreasing along the shrinking schedule, structurally.
  for (size_t i = 0; i + 1 < row.estimates.size(); ++i)
    CHECK(row.estimates[i + 1].value <= row.estimates[i].value + 3e-6);
  CHECK(row.estimates.back().value * 2.0 <= row.estimates.front().value);

  DecayReport tail = decay_report({4.0}, {1.0, 2.0, 4.0, 8.0, 16.0}, Side::Infinity,
                                  V, K, grid256(), opts);
  const DecayRow& trow = tail.rows[0];
  CHECK(trow.classification == "decaying");
  for (size_t i = 0; i + 1 < trow.estimates.size(); ++i)
    CHECK(trow.estimates[i + 1].value <= trow.estimates[i].value + 3e-6);
  CHECK(trow.estimates.back().value * 2.0 <= trow.estimates.front().value);
}

TEST_CASE("critical exponent with no potential: plateau by scale invariance") {
  PotentialSpec V = PotentialSpec::parse("0");
  PotentialSpec K = PotentialSpec::parse("1");
  DecayReport rep = decay_report({6.0}, {1.0, 0.5, 0.25, 0.125, 0.0625}, Side::Origin,
                                 V, K, grid256(), {});
  const DecayRow& row = rep.rows[0];
  CHECK(row.classification == "plateau");
  double lo = row.estimates[0].value, hi = row.estimates[0].value;
  for (const SupremumEstimate& e : row.estimates) {
    lo = std::min(lo, e.value);
    hi = std::max(hi, e.value);
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo <= 1.10);  // within 10% across the schedule
}

TEST_CASE("exponent above the certified origin range does not decay") {
  // V = 0, K = r^-1 near the origin admits (1, 4); at q = 5 concentration
  // at scale lambda inside any ball carries objective ~ lambda^(-1/2), so
  // the supremum is infinite at every R and the estimates must not decay
  // (the fixed grid saturates them at a mask-independent level).
  PotentialSpec V = PotentialSpec::parse("0");
  PotentialSpec K = PotentialSpec::parse("piecewise[(0,1): r^-1; (1,inf): r^-2]");
  DecayReport rep = decay_report({5.0}, {1.0, 0.5, 0.25, 0.125, 0.0625}, Side::Origin,
                                 V, K, grid256(), {});
  const DecayRow& row = rep.rows[0];
  CHECK(row.classification != "decaying");
  CHECK(row.classification != "inconclusive");
  CHECK(row.estimates.back().value * 2.0 > row.estimates.front().value);
  for (const SupremumEstimate& e : row.estimates) CHECK(e.converged);
}

TEST_CASE("grid refinement changes converged estimates by less than 2 percent") {
  RadialGrid fine = RadialGrid::log_spaced(1e-4, 1e2, 512, d23);
  WeightTable Vc = weight_table(grid256(), PotentialSpec::parse("r^-1"));
  WeightTable Kc = weight_table(grid256(), PotentialSpec::parse("1"));
  WeightTable Vf = weight_table(fine, PotentialSpec::parse("r^-1"));
  WeightTable Kf = weight_table(fine, PotentialSpec::parse("1"));

  SupremumEstimate coarse = estimate_S0(4.0, 1.0, Vc, Kc, grid256());
  SupremumEstimate refined = estimate_S0(4.0, 1.0, Vf, Kf, fine);
  CHECK(coarse.converged);
  CHECK(refined.converged);
  CHECK(std::fabs(coarse.value - refined.value) <= 0.02 * refined.value);

  // A finer-grid witness restricted to the coarse grid stays within
  // quadrature error of the finer estimate.
  EstimatorOptions seeded;
  seeded.extra_starts.push_back(refined.witness);
  SupremumEstimate reseeded = estimate_S0(4.0, 1.0, Vc, Kc, grid256(), seeded);
  CHECK(reseeded.value <= refined.value * 1.02);
  CHECK(reseeded.value >= coarse.value * (1.0 - 1e-12));
}

TEST_CASE("decay schedules must be geometric with ratio 2") {
  PotentialSpec V = PotentialSpec::parse("0");
  PotentialSpec K = PotentialSpec::parse("1");
  CHECK_THROWS_AS(decay_report({4.0}, {1.0}, Side::Origin, V, K, grid256(), {}),
                  DomainError);
  CHECK_THROWS_AS(decay_report({4.0}, {1.0, 0.3}, Side::Origin, V, K, grid256(), {}),
                  DomainError);
  CHECK_THROWS_AS(decay_report({4.0}, {1.0, 2.0, 8.0}, Side::Origin, V, K, grid256(), {}),
                  DomainError);
}
