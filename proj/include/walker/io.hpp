#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "walker/classify.hpp"
#include "walker/frames.hpp"
#include "walker/geodesics.hpp"
#include "walker/metric.hpp"
#include "walker/solitons.hpp"

namespace walker {

/// {"k", "point", "slots": ["a","b","c","d","e1",...], "components": [{"index": ["x","y","y","x"], "value"}]}
/// Zero components (|v| <= zero_tol * max(1, scale)) are omitted.
nlohmann::json to_json(const CovTensor& t, double zero_tol = 0.0);
nlohmann::json to_json(const ModelRecord& r);
nlohmann::json to_json(const ModelTag& m);
nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const SolitonCertificate& s);
nlohmann::json to_json(const CottonConsistency& c);
nlohmann::json to_json(const HomothetySearchResult& h);
nlohmann::json to_json(const Grid& g);
nlohmann::json to_json(const GeodesicTrajectory& tr, const Expr& f);
nlohmann::json to_json(const BlowupReport& rep);

/// Header t,x,y,xt,x',y',xt',energy and one row per state.
void write_trajectory_csv(std::ostream& os, const GeodesicTrajectory& tr, const Expr& f);
/// Same columns plus curvature, analytic, Y components and frame invariants.
void write_blowup_csv(std::ostream& os, const BlowupReport& rep);

}  // namespace walker
