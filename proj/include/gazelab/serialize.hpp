#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "gazelab/calibrate.hpp"
#include "gazelab/metrics.hpp"
#include "gazelab/params.hpp"
#include "gazelab/pipeline.hpp"
#include "gazelab/types.hpp"

namespace gazelab {

using Json = nlohmann::ordered_json;

/// Shortest round-trip text for a number, used for JSON object keys.
std::string number_key(double v);

Json to_json(const AnalysisParams& p);
/// Applies the keys present in `j` on top of `base`, then validates.
/// Throws InvalidParameter for unknown keys, wrong types or violated invariants.
AnalysisParams params_from_json(const Json& j, const AnalysisParams& base = {});

Json to_json(const RuleTable& r);
RuleTable rules_from_json(const Json& j, const RuleTable& base = {});

Json to_json(const SpatialMetrics& s, bool include_grid = true);
Json to_json(const LevelMetrics& m);
Json to_json(const MetricTrend& t);
Json to_json(const MultilevelComparison& c);
Json to_json(const Recommendation& r);
Json to_json(const std::vector<Recommendation>& rs);
Json to_json(const CalibrationReport& r);
Json to_json(const DatasetCalibration& c);
Json session_summary(const SessionRecord& s);

}  // namespace gazelab
