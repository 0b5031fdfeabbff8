#include "serialize.hpp"

#include <fstream>
#include <iostream>

#include "radsob/errors.hpp"

namespace radsob::cli {

std::string side_name(Side s) { return s == Side::Origin ? "origin" : "infinity"; }

std::string kind_name(EmbeddingKind k) {
  switch (k) {
    case EmbeddingKind::None: return "none";
    case EmbeddingKind::SumSpace: return "sum_space";
    case EmbeddingKind::SingleSpace: return "single_space";
  }
  return "none";
}

json rat_json(const Rat& x) { return x.str(); }

json range_json(const ExponentRange& r) {
  return json{{"lower", rat_json(r.lower)},
              {"upper", rat_json(r.upper)},
              {"empty", r.empty()}};
}

json conclusion_json(const EmbeddingConclusion& c) {
  json j{{"kind", kind_name(c.kind)},
         {"q1", range_json(c.q1)},
         {"q2", range_json(c.q2)},
         {"compact", c.compact}};
  j["single"] = c.kind == EmbeddingKind::SingleSpace ? range_json(c.single) : json();
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json profile_json(const AsymptoticProfile& p) {
  json j{{"side", side_name(p.side)},
         {"alpha", rat_json(p.alpha)},
         {"beta", rat_json(p.beta)}};
  j["gamma"] = p.gamma ? rat_json(*p.gamma) : json();
  return j;
}

json segment_json(const BetaSegment& s, Side side) {
  json j{{"beta_lo", rat_json(s.beta_lo)},
         {"beta_hi", rat_json(s.beta_hi)},
         {"lo_open", s.lo_open},
         {"hi_open", s.hi_open}};
  if (s.alpha_unbounded) {
    j["alpha"] = side == Side::Origin ? "any (no upper bound)" : "any (no lower bound)";
  } else {
    j["alpha0"] = rat_json(s.alpha0);
    j["alpha1"] = rat_json(s.alpha1);
  }
  return j;
}

json candidates_json(const ProfileCandidates& c) {
  json segs = json::array();
  for (const auto& s : c.segments) segs.push_back(segment_json(s, c.side));
  json j{{"side", side_name(c.side)},
         {"segments", segs},
         {"v_vanishes", c.v_vanishes}};
  j["gamma_best"] = c.gamma_best ? rat_json(*c.gamma_best) : json();
  return j;
}

json end_range_json(const EndRange& e) {
  json j{{"range", range_json(e.range)}, {"refined", e.refined}};
  j["gamma_used"] = e.gamma_used ? rat_json(*e.gamma_used) : json();
  j["endpoint_lo"] = e.endpoint_lo ? profile_json(*e.endpoint_lo) : json();
  j["endpoint_hi"] = e.endpoint_hi ? profile_json(*e.endpoint_hi) : json();
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

namespace {
json item_json(const HypothesisItem& it) {
  json j{{"verdict", verdict_name(it.verdict)}};
  if (it.theta != 0.0) j["theta"] = it.theta;
  if (it.t0 != 0.0) j["t0"] = it.t0;
  if (it.m != 0.0) j["m"] = it.m;
  if (!it.note.empty()) j["note"] = it.note;
  return j;
}
}  // namespace

json hypotheses_json(const HypothesisReport& rep) {
  return json{{"family", family_name(rep.family)},
              {"q1", rep.q1},
              {"q2", rep.q2},
              {"growth_envelope", rep.growth_envelope},
              {"growth_constant", rep.growth_constant},
              {"forcing_operator", item_json(rep.forcing_operator)},
              {"ar_global", item_json(rep.ar_global)},
              {"positive_level", item_json(rep.positive_level)},
              {"ar_tail", item_json(rep.ar_tail)},
              {"min_power_lower", item_json(rep.min_power_lower)},
              {"odd", item_json(rep.odd)},
              {"sublinear_lower", item_json(rep.sublinear_lower)},
              {"forcing_nonzero", item_json(rep.forcing_nonzero)}};
}

json estimate_json(const SupremumEstimate& e) {
  return json{{"q", e.q},
              {"R", e.R},
              {"value", e.value},
              {"iterations", e.iterations},
              {"converged", e.converged},
              {"diverged", e.diverged}};
}

json decay_json(const DecayReport& rep) {
  json rows = json::array();
  for (const auto& row : rep.rows) {
    json ests = json::array();
    for (const auto& e : row.estimates) ests.push_back(estimate_json(e));
    rows.push_back(json{{"q", row.q},
                        {"slope", row.slope},
                        {"classification", row.classification},
                        {"estimates", ests}});
  }
  return json{{"side", side_name(rep.side)},
              {"R_schedule", rep.R_schedule},
              {"rows", rows}};
}

json solution_json(const Solution& s) {
  json j{{"kind", s.kind == SolutionKind::GlobalMin ? "global_min" : "mountain_pass"},
         {"energy", s.energy},
         {"residual", s.residual},
         {"iterations", s.iterations},
         {"nonneg_violation", s.nonneg_violation},
         {"delta", s.delta}};
  if (s.kind == SolutionKind::MountainPass) j["rim_level"] = s.rim_level;
  j["nodes"] = s.u.grid ? json(s.u.grid->nodes()) : json::array();
  j["values"] = s.u.values;
  return j;
}

std::string range_text(const ExponentRange& r) {
  if (r.empty()) return "empty";
  return "(" + r.lower.str() + ", " + r.upper.str() + ")";
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << content;
  if (!out) throw ParseError("cannot write output file: " + path);
}

}  // namespace radsob::cli
