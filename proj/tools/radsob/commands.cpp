#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "radsob/errors.hpp"
#include "serialize.hpp"

namespace radsob::cli {
namespace {

Rat need_rat(const std::string& text, const char* flag, const std::string& who) {
  if (text.empty()) throw ParseError(who + " needs " + flag);
  return Rat::parse(text);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string alpha_formula(const BetaSegment& s) {
  if (s.alpha_unbounded) return "every alpha";
  if (s.alpha1.is_zero()) return s.alpha0.str();
  std::string out;
  if (!s.alpha0.is_zero()) out = s.alpha0.str() + " ";
  if (s.alpha1 == Rat(1))
    out += out.empty() ? "beta" : "+ beta";
  else if (s.alpha1 == Rat(-1))
    out += "- beta";
  else if (s.alpha1.sign() > 0)
    out += (out.empty() ? "" : "+ ") + s.alpha1.str() + "*beta";
  else
    out += "- " + (-s.alpha1).str() + "*beta";
  return out;
}

void conclusion_text(std::ostream& t, const EmbeddingConclusion& c) {
  switch (c.kind) {
    case EmbeddingKind::SingleSpace:
      t << "conclusion: compact embedding into a single weighted Lebesgue space, q in "
        << range_text(c.single) << "\n";
      break;
    case EmbeddingKind::SumSpace:
      t << "conclusion: compact embedding into a sum of weighted Lebesgue spaces, "
        << "q1 in " << range_text(c.q1) << ", q2 in " << range_text(c.q2) << "\n";
      break;
    case EmbeddingKind::None:
      t << "conclusion: no compact embedding certified\n";
      break;
  }
  if (!c.note.empty()) t << "  " << c.note << "\n";
}

void side_text(std::ostream& t, const ProfileCandidates& c, const EndRange& plain,
               const EndRange& best, const char* qname) {
  t << side_name(c.side) << ":\n";
  if (c.v_vanishes) t << "  V vanishes near this end\n";
  if (c.segments.empty()) {
    t << "  ess sup K/(r^alpha V^beta) < inf fails for every (alpha, beta)\n";
  } else {
    for (const auto& s : c.segments)
      t << "  beta in " << (s.lo_open ? "(" : "[") << s.beta_lo.str() << ", "
        << s.beta_hi.str() << (s.hi_open ? ")" : "]")
        << ": extremal alpha = " << alpha_formula(s) << "\n";
  }
  if (c.gamma_best)
    t << "  lower bound ess inf r^gamma V > 0 holds up to gamma = "
      << c.gamma_best->str() << "\n";
  if (best.refined) {
    t << "  ratio-only route: " << qname << " in " << range_text(plain.range);
    if (!plain.note.empty()) t << "  [" << plain.note << "]";
    t << "\n  refined route (gamma = " << best.gamma_used->str() << "): " << qname
      << " in " << range_text(best.range) << "\n";
  } else {
    t << "  " << qname << " route: " << range_text(best.range);
    if (!best.note.empty()) t << "  [" << best.note << "]";
    t << "\n";
  }
  auto profile_line = [&](const char* which, const AsymptoticProfile& p) {
    t << "  " << which << " endpoint profile: alpha = " << p.alpha.str()
      << ", beta = " << p.beta.str();
    if (p.gamma) t << ", gamma = " << p.gamma->str();
    t << "\n";
  };
  if (best.endpoint_lo) profile_line("lower", *best.endpoint_lo);
  if (best.endpoint_hi) profile_line("upper", *best.endpoint_hi);
}

}  // namespace

int cmd_ranges(const RangesOptions& o) {
  ProblemDims dims(Rat::parse(o.p), o.N);
  PotentialSpec V = PotentialSpec::parse(o.V);
  PotentialSpec K = PotentialSpec::parse(o.K);
  BestRanges br = best_ranges(V, K, dims);
  EndRange plain0 = end_range(br.origin, dims, /*allow_refined=*/false);
  EndRange plain_inf = end_range(br.infinity, dims, /*allow_refined=*/false);

  std::ostringstream t;
  t << "V = " << V.str() << "\nK = " << K.str() << "\np = " << dims.p.str()
    << ", N = " << dims.N << "\n\n";
  side_text(t, br.origin, plain0, br.origin_range, "q1");
  side_text(t, br.infinity, plain_inf, br.infinity_range, "q2");
  t << "\n";
  conclusion_text(t, br.conclusion);
  std::cout << t.str();

  if (!o.json_path.empty()) {
    json j{{"command", "ranges"},
           {"config",
            {{"V", V.str()}, {"K", K.str()}, {"p", dims.p.str()}, {"N", dims.N}}},
           {"origin",
            {{"candidates", candidates_json(br.origin)},
             {"ratio_route", end_range_json(plain0)},
             {"best", end_range_json(br.origin_range)}}},
           {"infinity",
            {{"candidates", candidates_json(br.infinity)},
             {"ratio_route", end_range_json(plain_inf)},
             {"best", end_range_json(br.infinity_range)}}},
           {"conclusion", conclusion_json(br.conclusion)}};
    emit(o.json_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_region(const RegionOptions& o) {
  ProblemDims dims(Rat::parse(o.p), o.N);
  Rat beta = Rat::parse(o.beta);
  Rat gamma = need_rat(o.gamma, "--gamma", "region");
  Rat amin = need_rat(o.alpha_min, "--alpha-min", "region");
  Rat amax = need_rat(o.alpha_max, "--alpha-max", "region");
  Rat qmin = Rat::parse(o.q_min);
  Rat qmax = need_rat(o.q_max, "--q-max", "region");
  if (o.steps < 1) throw ParseError("region needs --steps >= 1");
  if (!(amin < amax) || !(qmin < qmax))
    throw ParseError("region needs alpha-min < alpha-max and q-min < q-max");

  std::ostringstream csv;
  csv << "series,alpha,q,member\n";
  Rat da = (amax - amin) / Rat(o.steps);
  Rat dq = (qmax - qmin) / Rat(o.steps);
  for (int i = 0; i <= o.steps; ++i) {
    Rat alpha = amin + da * Rat(i);
    for (int k = 0; k <= o.steps; ++k) {
      Rat q = qmin + dq * Rat(k);
      bool in = region_contains(alpha, q, beta, gamma, dims);
      csv << "lattice," << alpha.str() << "," << q.str() << "," << (in ? 1 : 0) << "\n";
    }
  }
  bool have_lower = gamma != dims.n();
  bool have_double = gamma < dims.gamma_pole();
  Rat floor_q = max(Rat(1), dims.p * beta);
  for (int i = 0; i <= o.steps; ++i) {
    Rat alpha = amin + da * Rat(i);
    if (have_lower)
      csv << "curve_q_lower_star," << alpha.str() << ","
          << q_lower_star(alpha, beta, gamma, dims).str() << ",\n";
    if (have_double)
      csv << "curve_q_double_star," << alpha.str() << ","
          << q_double_star(alpha, beta, gamma, dims).str() << ",\n";
    csv << "curve_power_floor," << alpha.str() << "," << floor_q.str() << ",\n";
  }
  emit(o.out, csv.str());
  return kExitOk;
}

namespace {

// Largest power d of K = r^d keeping the origin exponent range open:
// d must exceed -1 - (p-1)N/p.
Rat origin_power_bound(const ProblemDims& dims) {
  return Rat(-1) - (dims.p - Rat(1)) * dims.n() / dims.p;
}

void ex_inverse_powers(const ExampleOptions& o, const ProblemDims& dims,
                       std::ostream& t, json& j) {
  Rat a = need_rat(o.a, "--a", "inverse-powers");
  if (!(a <= dims.p))
    throw DomainError(
        "inverse-powers needs a <= p: the lower potential bound at infinity "
        "uses gamma = a, admissible only up to p");
  Rat alpha = Rat(1) - a;
  Rat qs = q_star(alpha, Rat(0), dims);
  Rat qss = q_double_star(alpha, Rat(0), a, dims);
  std::string Vs = "r^" + (-a).str(), Ks = "r^" + alpha.str();
  t << "potentials: V = " << Vs << ", K = " << Ks << "\n";
  t << "origin range: q1 in (1, " << qs.str() << ")\n";
  t << "infinity threshold (gamma = " << a.str() << "): q2 > " << qss.str() << "\n";
  EmbeddingConclusion concl =
      combine(ExponentRange(Rat(1), qs), ExponentRange(qss, Rat::infinity()));
  conclusion_text(t, concl);
  BestRanges br = best_ranges(PotentialSpec::parse(Vs), PotentialSpec::parse(Ks), dims);
  j = json{{"id", o.id},
           {"params", {{"a", a.str()}}},
           {"q_upper_origin", qs.str()},
           {"q_lower_infinity", qss.str()},
           {"conclusion", conclusion_json(concl)},
           {"catalog", conclusion_json(br.conclusion)}};
}

void ex_zero_potential(const ExampleOptions& o, const ProblemDims& dims,
                       std::ostream& t, json& j) {
  Rat d = need_rat(o.d, "--d", "zero-potential");
  Rat bound = origin_power_bound(dims);
  if (!(d > bound))
    throw DomainError("zero-potential needs d > -1 - (p-1)N/p = " + bound.str());
  ExponentRange q1 =
      q1_interval(AsymptoticProfile(Side::Origin, d, Rat(0), std::nullopt, dims), dims);
  ExponentRange q2 =
      q2_interval(AsymptoticProfile(Side::Infinity, d, Rat(0), std::nullopt, dims), dims);
  t << "potentials: V = 0, K = r^" << d.str() << "\n";
  t << "origin range: q1 in " << range_text(q1) << "\n";
  t << "infinity range: q2 in " << range_text(q2) << "\n";
  EmbeddingConclusion concl = combine(q1, q2);
  conclusion_text(t, concl);
  t << "note: a single-space range needs K with a larger admissible alpha at "
       "the origin than at infinity\n";
  BestRanges br =
      best_ranges(PotentialSpec::parse("0"), PotentialSpec::parse("r^" + d.str()), dims);
  j = json{{"id", o.id},
           {"params", {{"d", d.str()}}},
           {"q1", range_json(q1)},
           {"q2", range_json(q2)},
           {"conclusion", conclusion_json(concl)},
           {"catalog", conclusion_json(br.conclusion)}};
}

void ex_exp_decay(const ExampleOptions& o, const ProblemDims& dims, std::ostream& t,
                  json& j) {
  Rat a = o.a.empty() ? Rat(1) : Rat::parse(o.a);
  Rat b = o.b.empty() ? Rat(1) : Rat::parse(o.b);
  Rat d = need_rat(o.d, "--d", "exp-decay");
  if (!(a > Rat(0)) || !(b > Rat(0)))
    throw DomainError("exp-decay needs positive decay rates a, b");
  Rat bound = origin_power_bound(dims);
  if (!(d > bound))
    throw DomainError("exp-decay needs d > -1 - (p-1)N/p = " + bound.str());
  Rat edge = q_star(d, Rat(0), dims);
  std::string Vs = "exp(-" + a.str() + "r)";
  std::string K1 = "r^" + d.str();
  std::string K2 = "r^" + d.str() + "*exp(-" + b.str() + "r)";
  t << "potentials: V = " << Vs << ", K1 = " << K1 << ", K2 = " << K2 << "\n";
  EmbeddingConclusion c1 = combine(ExponentRange(Rat(1), edge),
                                   ExponentRange(max(Rat(1), edge), Rat::infinity()));
  EmbeddingConclusion c2 =
      combine(ExponentRange(Rat(1), edge), ExponentRange(Rat(1), Rat::infinity()));
  t << "with K1 (power tail):\n  ";
  conclusion_text(t, c1);
  t << "with K2 (exponential tail, every alpha admissible at infinity):\n  ";
  conclusion_text(t, c2);
  BestRanges br1 =
      best_ranges(PotentialSpec::parse(Vs), PotentialSpec::parse(K1), dims);
  BestRanges br2 =
      best_ranges(PotentialSpec::parse(Vs), PotentialSpec::parse(K2), dims);
  j = json{{"id", o.id},
           {"params", {{"a", a.str()}, {"b", b.str()}, {"d", d.str()}}},
           {"power_tail",
            {{"conclusion", conclusion_json(c1)},
             {"catalog", conclusion_json(br1.conclusion)}}},
           {"exponential_tail",
            {{"conclusion", conclusion_json(c2)},
             {"catalog", conclusion_json(br2.conclusion)}}}};
}

void ex_exp_singularity(const ExampleOptions& o, const ProblemDims& dims,
                        std::ostream& t, json& j) {
  Rat b = need_rat(o.b, "--b", "exp-singularity");
  if (!(b > Rat(0) && b <= Rat(1)))
    throw DomainError("exp-singularity needs 0 < b <= 1");
  Rat floor0 = max(Rat(1), dims.p * b);
  Rat half = dims.p / Rat(2);
  std::string Vs = "exp(1/r)", Ks = "exp(" + b.str() + "/r)";
  t << "potentials: V = " << Vs << ", K = " << Ks << "\n";
  t << "origin threshold: q1 > max{1, p*b} = " << floor0.str() << "\n";

  EmbeddingConclusion main_c = combine(ExponentRange(floor0, Rat::infinity()),
                                       ExponentRange(dims.p, Rat::infinity()));
  t << "with V as given (infinity threshold p):\n  ";
  conclusion_text(t, main_c);

  EmbeddingConclusion support_c = combine(ExponentRange(floor0, Rat::infinity()),
                                          ExponentRange(dims.p_star(), Rat::infinity()));
  t << "with V cut off beyond r = 1 (infinity threshold p*):\n  ";
  conclusion_text(t, support_c);

  Rat tail_thr = max(Rat(1), half);
  EmbeddingConclusion tail_c = combine(ExponentRange(floor0, Rat::infinity()),
                                       ExponentRange(tail_thr, Rat::infinity()));
  t << "with V growing like r^N at infinity (threshold max{1, p/2}):\n  ";
  conclusion_text(t, tail_c);

  std::string V1 = "piecewise[(0,1): exp(1/r); (1,inf): 0]";
  std::string V2 = "exp(1/r) ~inf r^" + Rat(dims.N).str();
  BestRanges br = best_ranges(PotentialSpec::parse(Vs), PotentialSpec::parse(Ks), dims);
  BestRanges br1 = best_ranges(PotentialSpec::parse(V1), PotentialSpec::parse(Ks), dims);
  BestRanges br2 = best_ranges(PotentialSpec::parse(V2), PotentialSpec::parse(Ks), dims);
  j = json{{"id", o.id},
           {"params", {{"b", b.str()}}},
           {"main",
            {{"conclusion", conclusion_json(main_c)},
             {"catalog", conclusion_json(br.conclusion)}}},
           {"compact_support",
            {{"conclusion", conclusion_json(support_c)},
             {"catalog", conclusion_json(br1.conclusion)}}},
           {"power_tail",
            {{"conclusion", conclusion_json(tail_c)},
             {"catalog", conclusion_json(br2.conclusion)}}}};
}

void ex_steep_powers(const ExampleOptions& o, const ProblemDims& dims, std::ostream& t,
                     json& j) {
  Rat a = need_rat(o.a, "--a", "steep-powers");
  Rat b0 = need_rat(o.b0, "--b0", "steep-powers");
  Rat b = need_rat(o.b, "--b", "steep-powers");
  Rat lo_a = -dims.p * (dims.n() - Rat(1)) / (dims.p - Rat(1));
  if (!(a > lo_a && a < -dims.n()))
    throw DomainError("steep-powers needs -p(N-1)/(p-1) < a < -N, i.e. a in (" +
                      lo_a.str() + ", " + (-dims.n()).str() + ")");
  if (!(b0 > a)) throw DomainError("steep-powers needs b0 > a");
  PowerComparison pc = power_comparison(a, b0, b, dims);
  Rat q1lo = max(Rat(1), dims.p * (dims.n() + b0) / (dims.n() + a));
  Rat q2lo = max(Rat(1), dims.p * (dims.n() + b) / (dims.n() - dims.p));
  t << "potentials: V = r^" << a.str() << ", K = O(r^" << b0.str()
    << ") near 0 and O(r^" << b.str() << ") near infinity\n";
  t << "sum-space ranges: q1 in (" << q1lo.str() << ", " << pc.upper.str()
    << "), q2 > " << q2lo.str() << "\n";
  if (pc.single_space_ok)
    t << "single space: q in " << range_text(pc.range) << "\n";
  else
    t << "single space: none for these powers (needs (N+b)/(N-p) < "
         "(p(N-1)+p*b0-a)/(p(N-1)+a(p-1)))\n";
  t << "comparison with the prior power-potential criteria:\n";
  t << "  breakpoints: b1 = " << pc.b1.str() << ", b2 = " << pc.b2.str()
    << ", b3 = " << pc.b3.str() << "\n";
  t << "  superlinear criterion lower endpoint: " << pc.prior_super_lower.str()
    << "  (here: " << pc.combined_lower.str() << ")\n";
  t << "  sublinear criterion: "
    << (pc.prior_sub_lower ? "lower = " + pc.prior_sub_lower->str()
                           : std::string("lower undefined for this b"))
    << ", "
    << (pc.prior_sub_upper ? "upper = " + pc.prior_sub_upper->str()
                           : std::string("upper undefined for this b0"))
    << "  (here: upper = " << pc.upper.str() << ")\n";
  t << "  the combined range contains every range the prior criteria produce\n";

  std::string Ks =
      "piecewise[(0,1): r^" + b0.str() + "; (1,inf): r^" + b.str() + "]";
  BestRanges br =
      best_ranges(PotentialSpec::parse("r^" + a.str()), PotentialSpec::parse(Ks), dims);
  j = json{{"id", o.id},
           {"params", {{"a", a.str()}, {"b0", b0.str()}, {"b", b.str()}}},
           {"q1", range_json(ExponentRange(q1lo, pc.upper))},
           {"q2", range_json(ExponentRange(q2lo, Rat::infinity()))},
           {"single", range_json(pc.range)},
           {"single_space_ok", pc.single_space_ok},
           {"breakpoints",
            {{"b1", pc.b1.str()}, {"b2", pc.b2.str()}, {"b3", pc.b3.str()}}},
           {"prior_superlinear_lower", pc.prior_super_lower.str()},
           {"prior_sublinear_lower",
            pc.prior_sub_lower ? json(pc.prior_sub_lower->str()) : json()},
           {"prior_sublinear_upper",
            pc.prior_sub_upper ? json(pc.prior_sub_upper->str()) : json()},
           {"combined_lower", pc.combined_lower.str()},
           {"catalog", conclusion_json(br.conclusion)}};
}

void ex_power_equation(const ExampleOptions& o, const ProblemDims& dims,
                       std::ostream& t, json& j) {
  Rat a = o.a.empty() ? Rat(1) : Rat::parse(o.a);
  if (!(a > Rat(0))) throw DomainError("power-equation needs a positive decay rate a");
  Rat b0 = need_rat(o.b0, "--b0", "power-equation");
  Rat b = need_rat(o.b, "--b", "power-equation");
  if (!(b0 > -dims.n()))
    throw DomainError(
        "power-equation needs b0 > -N, else no exponent above p opens at the origin");
  ExponentRange q1 = region_slice(b0, Rat(0), dims.n(), dims);
  Rat qbar = q1.upper;
  Rat qund = q_threshold(b, Rat(0), dims);
  ExponentRange q2(qund, Rat::infinity());
  Rat mp_lo = max(dims.p, dims.p * (dims.n() + b) / (dims.n() - dims.p));
  ExponentRange mp_range(mp_lo, qbar);
  ExponentRange min_range(qund, dims.p);
  bool sum_only = mp_range.empty() && min_range.empty();

  std::string Vs = "r^" + (-dims.n()).str() + "*exp(-" + a.str() + "r)";
  t << "p-Laplace equation with potential V = " << Vs
    << " and weight K = O(r^" << b0.str() << ") near 0, O(r^" << b.str()
    << ") near infinity\n";
  t << "admissible exponents: q1 in " << range_text(q1) << ", q2 in "
    << range_text(q2) << "\n";
  t << "single-power reaction t^(q-1):\n";
  t << "  min-max route:      q in " << range_text(mp_range) << "\n";
  t << "  minimization route: q in " << range_text(min_range) << "\n";
  if (sum_only)
    t << "no single-space range; sum-space only: use a two-power reaction "
         "min{t^(q1-1), t^(q2-1)} with q1 in (" << dims.p.str() << ", "
      << qbar.str() << ") and q2 > " << qund.str() << "\n";

  json verdict;
  if (!o.q.empty()) {
    Rat qv = Rat::parse(o.q);
    std::string v;
    if (mp_range.contains(qv))
      v = "nonnegative radial solution via the min-max route";
    else if (min_range.contains(qv))
      v = "nonnegative radial solution via global minimization";
    else
      v = "not covered by the single-power ranges";
    t << "q = " << qv.str() << ": " << v << "\n";
    verdict = json{{"q", qv.str()}, {"verdict", v}};
  }
  j = json{{"id", o.id},
           {"params", {{"a", a.str()}, {"b0", b0.str()}, {"b", b.str()}}},
           {"q1", range_json(q1)},
           {"q2", range_json(q2)},
           {"min_max_range", range_json(mp_range)},
           {"minimization_range", range_json(min_range)},
           {"sum_space_only", sum_only},
           {"fallback",
            {{"q1", range_json(ExponentRange(dims.p, qbar))},
             {"q2", range_json(q2)}}},
           {"query", verdict}};
}

}  // namespace

int cmd_example(const ExampleOptions& o) {
  ProblemDims dims(Rat::parse(o.p), o.N);
  std::ostringstream t;
  json j;
  if (o.id == "inverse-powers")
    ex_inverse_powers(o, dims, t, j);
  else if (o.id == "zero-potential")
    ex_zero_potential(o, dims, t, j);
  else if (o.id == "exp-decay")
    ex_exp_decay(o, dims, t, j);
  else if (o.id == "exp-singularity")
    ex_exp_singularity(o, dims, t, j);
  else if (o.id == "steep-powers")
    ex_steep_powers(o, dims, t, j);
  else if (o.id == "power-equation")
    ex_power_equation(o, dims, t, j);
  else
    throw ParseError(
        "unknown example id: " + o.id +
        " (known: inverse-powers, zero-potential, exp-decay, exp-singularity, "
        "steep-powers, power-equation)");
  j["command"] = "example";
  j["config"] = json{{"p", dims.p.str()}, {"N", dims.N}};
  std::cout << t.str();
  if (!o.json_path.empty()) emit(o.json_path, j.dump(2) + "\n");
  return kExitOk;
}

namespace {

Side parse_side(const std::string& s) {
  if (s == "origin") return Side::Origin;
  if (s == "infinity") return Side::Infinity;
  throw ParseError("side must be origin or infinity, got " + s);
}

struct TabulatedWeights {
  std::vector<double> r;
  WeightTable V, K;
};

TabulatedWeights load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table: " + path);
  TabulatedWeights tw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double r, v, k;
    if (std::sscanf(line.c_str(), "%lf , %lf , %lf", &r, &v, &k) != 3) {
      if (lineno == 1) continue;  // header row
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected three comma-separated numbers r,V,K");
    }
    if (!tw.r.empty() && !(r > tw.r.back()))
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": radii must be strictly increasing");
    if (r <= 0.0)
      throw ParseError(path + ":" + std::to_string(lineno) + ": radii must be positive");
    if (v < 0.0 || k < 0.0)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": weights must be nonnegative");
    tw.r.push_back(r);
    tw.V.value.push_back(v);
    tw.K.value.push_back(k);
    bool bad = !std::isfinite(v) || !std::isfinite(k);
    tw.V.forced_zero.push_back(bad);
    tw.K.forced_zero.push_back(bad);
  }
  if (tw.r.size() < 2) throw ParseError(path + ": table needs at least two rows");
  return tw;
}

}  // namespace

int cmd_estimate(const EstimateOptions& o) {
  ProblemDims dims(Rat::parse(o.p), o.N);
  Side side = parse_side(o.side);
  if (o.q.empty()) throw ParseError("estimate needs --q");
  if (o.R.size() < 2) throw ParseError("estimate needs a --R schedule of at least two radii");
  bool tabulated = !o.table.empty();
  if (tabulated && (!o.V.empty() || !o.K.empty()))
    throw ParseError("give either --table or --V/--K, not both");
  if (!tabulated && (o.V.empty() || o.K.empty()))
    throw ParseError("estimate needs --V and --K, or --table");

  EstimatorOptions eopts;
  eopts.max_iterations = o.iterations;
  eopts.starts = o.starts;
  eopts.seed = o.seed;
  eopts.rel_tol = o.rel_tol;

  DecayReport rep;
  std::optional<BestRanges> br;
  json grid_cfg;
  if (tabulated) {
    TabulatedWeights tw = load_table(o.table);
    RadialGrid grid(tw.r, dims);
    rep = decay_report(o.q, o.R, side, tw.V, tw.K, grid, eopts);
    grid_cfg = json{{"table", o.table}, {"M", grid.intervals()}};
  } else {
    PotentialSpec V = PotentialSpec::parse(o.V);
    PotentialSpec K = PotentialSpec::parse(o.K);
    RadialGrid grid = RadialGrid::log_spaced(o.rmin, o.rmax, o.M, dims);
    rep = decay_report(o.q, o.R, side, V, K, grid, eopts);
    br = best_ranges(V, K, dims);
    grid_cfg = json{{"rmin", o.rmin}, {"rmax", o.rmax}, {"M", o.M}};
  }

  const ExponentRange* proven = nullptr;
  if (br)
    proven = side == Side::Origin ? &br->origin_range.range : &br->infinity_range.range;
  auto in_proven = [&](double q) {
    double lo = proven->lower.to_double(), hi = proven->upper.to_double();
    return q > lo && q < hi;
  };

  bool all_classified = true;
  std::ostringstream t;
  for (const DecayRow& row : rep.rows) {
    t << "q = " << row.q << ": " << row.classification;
    if (row.classification == "inconclusive")
      all_classified = false;
    else
      t << " (slope " << fmt_double(row.slope) << ")";
    if (proven) {
      t << (in_proven(row.q) ? "  [inside proven range " : "  [outside proven range ")
        << range_text(*proven) << "]";
    }
    t << "\n";
  }
  std::cout << t.str();

  if (!o.csv_path.empty()) {
    std::ostringstream csv;
    csv << "q,R,estimate,converged\n";
    for (const DecayRow& row : rep.rows)
      for (const SupremumEstimate& e : row.estimates)
        csv << fmt_double(e.q) << "," << fmt_double(e.R) << "," << fmt_double(e.value)
            << "," << (e.converged ? 1 : 0) << "\n";
    emit(o.csv_path, csv.str());
  }

  if (!o.json_path.empty()) {
    json rep_j = decay_json(rep);
    for (auto& row : rep_j["rows"])
      row["in_proven_range"] = proven ? json(in_proven(row["q"].get<double>())) : json();
    json j{{"command", "estimate"},
           {"config",
            {{"p", dims.p.str()},
             {"N", dims.N},
             {"V", o.V},
             {"K", o.K},
             {"side", o.side},
             {"q", o.q},
             {"R", o.R},
             {"grid", grid_cfg},
             {"starts", o.starts},
             {"iterations", o.iterations},
             {"rel_tol", o.rel_tol},
             {"seed", o.seed}}},
           {"report", rep_j}};
    j["proven_range"] = proven ? range_json(*proven) : json();
    emit(o.json_path, j.dump(2) + "\n");
  }
  return all_classified ? kExitOk : kExitNoConverge;
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok)
      throw ParseError(std::string(where) + ": unknown field \"" + item.key() + "\"");
  }
}

const json& require_field(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
  return *it;
}

Rat json_rat(const json& v, const char* key) {
  if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
  if (v.is_string()) return Rat::parse(v.get<std::string>());
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d == std::floor(d) && std::fabs(d) < 1e15)
      return Rat(static_cast<std::int64_t>(d));
    throw ParseError(std::string(key) +
                     ": write non-integer rationals exactly, e.g. \"3/2\"");
  }
  throw ParseError(std::string(key) + ": expected an integer or a rational string");
}

NonlinearitySpec parse_nonlinearity(const json& nj) {
  check_keys(nj, {"family", "q1", "q2", "epsilon", "forcing"}, "nonlinearity");
  std::string fam = require_field(nj, "family", "nonlinearity").get<std::string>();
  auto num = [&](const char* key) -> double {
    return require_field(nj, key, "nonlinearity").get<double>();
  };
  NonlinearitySpec nl;
  if (fam == "zero") {
    nl = NonlinearitySpec::zero();
  } else if (fam == "pure_power") {
    double q1 = num("q1");
    if (nj.contains("q2") && nj["q2"].get<double>() != q1)
      throw ParseError("nonlinearity: pure_power needs q1 == q2");
    nl = NonlinearitySpec::pure_power(q1);
  } else if (fam == "min_power") {
    nl = NonlinearitySpec::min_power(num("q1"), num("q2"));
  } else if (fam == "rational_power") {
    nl = NonlinearitySpec::rational_power(num("q1"), num("q2"));
  } else if (fam == "log_perturbed") {
    nl = NonlinearitySpec::log_perturbed(num("q1"), num("q2"), num("epsilon"));
  } else {
    throw ParseError("nonlinearity: unknown family \"" + fam +
                     "\" (known: zero, pure_power, min_power, rational_power, "
                     "log_perturbed)");
  }
  if (fam != "log_perturbed" && nj.contains("epsilon"))
    throw ParseError("nonlinearity: epsilon only applies to log_perturbed");
  if (nj.contains("forcing"))
    nl.forcing = PotentialSpec::parse(nj["forcing"].get<std::string>());
  return nl;
}

json nonlinearity_echo(const NonlinearitySpec& nl) {
  json j{{"family", family_name(nl.family)}, {"q1", nl.q1}, {"q2", nl.q2}};
  if (nl.family == Family::LogPerturbed) j["epsilon"] = nl.epsilon;
  j["forcing"] = nl.forcing ? json(nl.forcing->str()) : json();
  return j;
}

}  // namespace

int cmd_solve(const SolveCmdOptions& o) {
  std::ifstream in(o.problem);
  if (!in) throw ParseError("cannot open problem file: " + o.problem);
  json pj;
  try {
    pj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(o.problem + ": " + e.what());
  }
  check_keys(pj, {"p", "N", "V", "K", "nonlinearity", "grid", "mode", "tol", "seed"},
             "problem");
  Rat p = json_rat(require_field(pj, "p", "problem"), "p");
  int N = require_field(pj, "N", "problem").get<int>();
  ProblemDims dims(p, N);
  PotentialSpec V = PotentialSpec::parse(require_field(pj, "V", "problem").get<std::string>());
  PotentialSpec K = PotentialSpec::parse(require_field(pj, "K", "problem").get<std::string>());
  NonlinearitySpec nl = parse_nonlinearity(require_field(pj, "nonlinearity", "problem"));
  const json& gj = require_field(pj, "grid", "problem");
  check_keys(gj, {"rmin", "rmax", "M"}, "grid");
  double rmin = require_field(gj, "rmin", "grid").get<double>();
  double rmax = require_field(gj, "rmax", "grid").get<double>();
  int M = require_field(gj, "M", "grid").get<int>();
  RadialGrid grid = RadialGrid::log_spaced(rmin, rmax, M, dims);
  std::string mode = require_field(pj, "mode", "problem").get<std::string>();
  if (mode != "min" && mode != "mp")
    throw ParseError("problem: mode must be \"min\" or \"mp\"");

  SolverOptions sopts;
  sopts.tol = pj.value("tol", 0.0);
  sopts.seed = pj.value("seed", std::uint64_t{0});
  double tol_effective = sopts.tol > 0.0 ? sopts.tol : (mode == "min" ? 1e-6 : 1e-5);

  HypothesisReport hyp = check_hypotheses(nl, V, K, dims);

  Solution sol;
  bool converged = true;
  std::string error_msg;
  try {
    sol = mode == "min" ? solve_sublinear(V, K, nl, grid, sopts)
                        : solve_mountain_pass(V, K, nl, grid, sopts);
  } catch (const SolveError& e) {
    converged = false;
    error_msg = e.what();
    sol = e.best;
  }

  json out{{"command", "solve"},
           {"config",
            {{"p", p.str()},
             {"N", N},
             {"V", V.str()},
             {"K", K.str()},
             {"nonlinearity", nonlinearity_echo(nl)},
             {"grid", {{"rmin", rmin}, {"rmax", rmax}, {"M", M}}},
             {"mode", mode},
             {"tol", tol_effective},
             {"seed", sopts.seed},
             {"max_iterations", sopts.max_iterations},
             {"starts", sopts.starts},
             {"problem_file", o.problem}}},
           {"converged", converged},
           {"solution", solution_json(sol)},
           {"hypotheses", hypotheses_json(hyp)}};
  if (!converged) out["error"] = error_msg;
  emit(o.out, out.dump(2) + "\n");

  if (!o.csv_path.empty()) {
    std::ostringstream csv;
    csv << "r,u\n";
    const auto& nodes = grid.nodes();
    for (size_t i = 0; i < sol.u.values.size(); ++i)
      csv << fmt_double(nodes[i]) << "," << fmt_double(sol.u.values[i]) << "\n";
    emit(o.csv_path, csv.str());
  }
  if (!o.out.empty()) {
    std::cout << (converged ? "converged" : "not converged") << ": energy = "
              << fmt_double(sol.energy) << ", residual = " << fmt_double(sol.residual)
              << ", iterations = " << sol.iterations << "\n";
  }
  return converged ? kExitOk : kExitNoConverge;
}

}  // namespace radsob::cli
