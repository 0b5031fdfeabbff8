#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radsob/embedding_exponents.hpp"
#include "radsob/potential.hpp"

namespace radsob {

// Model reaction terms g(r,t) = K(r) f(t) + Q(r), with f drawn from a small
// catalog of profiles whose structural properties are known in closed form.
enum class Family {
  MinPower,       // sgn(t) min{|t|^(q1-1), |t|^(q2-1)}
  RationalPower,  // |t|^(q2-2) t / (1 + |t|^(q2-q1)), q1 <= q2
  PurePower,      // |t|^(q-2) t
  LogPerturbed,   // |t|^(q2-1+eps) ln|t| / (1 + |t|^(q2-q1+2eps)), even in t
  Zero,           // f == 0
  Custom,         // tabulated (t, f, F) on t >= 0, extended oddly
};

std::string family_name(Family f);

struct NonlinearitySpec {
  Family family = Family::Zero;
  double q1 = 0.0, q2 = 0.0;  // growth exponents; PurePower stores q in both
  double epsilon = 0.0;       // LogPerturbed bend parameter
  // Custom tables: t strictly increasing from 0; f odd and F even by extension.
  std::vector<double> t_table, f_table, F_table;
  std::optional<PotentialSpec> forcing;  // additive radial term Q in the reaction

  static NonlinearitySpec min_power(double q1, double q2);
  static NonlinearitySpec rational_power(double q1, double q2);
  static NonlinearitySpec pure_power(double q);
  static NonlinearitySpec log_perturbed(double q1, double q2, double epsilon);
  static NonlinearitySpec zero();
  static NonlinearitySpec custom(std::vector<double> t, std::vector<double> f,
                                 std::vector<double> F, double q1, double q2);

  double f(double t) const;
  double F(double t) const;       // antiderivative with F(0) = 0
  double fprime(double t) const;  // for solver Jacobians; numeric where needed
  bool is_zero() const;           // f == 0 and no forcing
};

enum class Verdict { Holds, Fails, Unknown };

std::string verdict_name(Verdict v);

struct HypothesisItem {
  Verdict verdict = Verdict::Unknown;
  double theta = 0.0, t0 = 0.0, m = 0.0;  // witnesses where meaningful
  std::string note;
};

// Structural facts about g that the existence arguments consume.  G denotes
// the primitive of g in t.
struct HypothesisReport {
  Family family = Family::Zero;
  double q1 = 0.0, q2 = 0.0;
  // Two-power envelope |f(t)| <= M min{|t|^(q1-1), |t|^(q2-1)} and its M.
  bool growth_envelope = false;
  double growth_constant = 0.0;
  HypothesisItem forcing_operator;  // h -> integral of Q h bounded on the space
  HypothesisItem ar_global;         // 0 <= theta G <= g t for all t >= 0, theta > p
  HypothesisItem positive_level;    // G(., t0) > 0 for some t0 > 0
  HypothesisItem ar_tail;           // theta G <= g t for t >= t0 only, G(., t0) > 0
  HypothesisItem min_power_lower;   // G >= m K min{t^q1, t^q2} for t >= 0
  HypothesisItem odd;               // g(r,-t) = -g(r,t)
  HypothesisItem sublinear_lower;   // G >= m K t^theta on [0, t0], theta < p
  HypothesisItem forcing_nonzero;   // Q nonzero on a set of positive measure
};

HypothesisReport check_hypotheses(const NonlinearitySpec& nl, const PotentialSpec& V,
                                  const PotentialSpec& K, const ProblemDims& dims);

}  // namespace radsob
