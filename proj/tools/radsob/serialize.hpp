#pragma once

#include <string>

#include "json.hpp"
#include "radsob/embedding_exponents.hpp"
#include "radsob/nonlinearity.hpp"
#include "radsob/profile_analysis.hpp"
#include "radsob/sup_estimator.hpp"
#include "radsob/variational_solver.hpp"

namespace radsob::cli {

using nlohmann::json;

std::string side_name(Side s);
std::string kind_name(EmbeddingKind k);

json rat_json(const Rat& x);  // exact "num/den" / "inf" / "-inf" string

json range_json(const ExponentRange& r);
json conclusion_json(const EmbeddingConclusion& c);
json profile_json(const AsymptoticProfile& p);
json segment_json(const BetaSegment& s, Side side);
json candidates_json(const ProfileCandidates& c);
json end_range_json(const EndRange& e);
json hypotheses_json(const HypothesisReport& rep);
json estimate_json(const SupremumEstimate& e);
json decay_json(const DecayReport& rep);
json solution_json(const Solution& s);

// Human-readable one-line interval, exact endpoints: "(10/3, 6)" or "empty".
std::string range_text(const ExponentRange& r);

// Writes content to path, or to stdout when path is empty.
void emit(const std::string& path, const std::string& content);

}  // namespace radsob::cli
