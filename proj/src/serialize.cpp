#include "gazelab/serialize.hpp"

#include <charconv>

#include "gazelab/error.hpp"

namespace gazelab {

std::string number_key(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

Json to_json(const AnalysisParams& p) {
    return Json{{"v_thresh_px_s", p.v_thresh_px_s},
                {"rt_min_ms", p.rt_min_ms},
                {"rt_max_ms", p.rt_max_ms},
                {"bounds_tol_px", p.bounds_tol_px},
                {"grid_cols", p.grid_cols},
                {"grid_rows", p.grid_rows},
                {"match_strategy", to_string(p.match_strategy)},
                {"min_fixation_ms", p.min_fixation_ms}};
}

namespace {

template <typename T>
T get_as(const Json& j, const std::string& key) {
    const auto& v = j.at(key);
    if constexpr (std::is_integral_v<T>) {
        if (v.is_number_integer()) return v.get<T>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d == static_cast<double>(static_cast<T>(d))) return static_cast<T>(d);
        }
        throw Error(ErrorCode::InvalidParameter, key + " must be an integer");
    } else {
        if (!v.is_number()) throw Error(ErrorCode::InvalidParameter, key + " must be a number");
        return v.get<T>();
    }
}

}  // namespace

AnalysisParams params_from_json(const Json& j, const AnalysisParams& base) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidParameter, "parameters must be a JSON object");
    AnalysisParams p = base;
    for (const auto& [key, value] : j.items()) {
        if (key == "v_thresh_px_s") p.v_thresh_px_s = get_as<double>(j, key);
        else if (key == "rt_min_ms") p.rt_min_ms = get_as<std::int64_t>(j, key);
        else if (key == "rt_max_ms") p.rt_max_ms = get_as<std::int64_t>(j, key);
        else if (key == "bounds_tol_px") p.bounds_tol_px = get_as<double>(j, key);
        else if (key == "grid_cols") p.grid_cols = get_as<int>(j, key);
        else if (key == "grid_rows") p.grid_rows = get_as<int>(j, key);
        else if (key == "min_fixation_ms") p.min_fixation_ms = get_as<std::int64_t>(j, key);
        else if (key == "match_strategy") {
            auto s = value.is_string() ? parse_match_strategy(value.get<std::string>()) : std::nullopt;
            if (!s) throw Error(ErrorCode::InvalidParameter, "match_strategy must be single-candidate or scan-forward");
            p.match_strategy = *s;
        } else {
            throw Error(ErrorCode::InvalidParameter, "unknown parameter '" + key + "'");
        }
    }
    validate(p);
    return p;
}

Json to_json(const RuleTable& r) {
    return Json{{"min_hit_rate", r.min_hit_rate},
                {"max_mean_rt_ms", r.max_mean_rt_ms},
                {"max_false_alarm_rate", r.max_false_alarm_rate},
                {"max_final_rt_increase", r.max_final_rt_increase},
                {"max_utilization_drop", r.max_utilization_drop},
                {"provenance", r.provenance}};
}

RuleTable rules_from_json(const Json& j, const RuleTable& base) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "rules must be an object");
    RuleTable r = base;
    bool custom = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "provenance") {
            r.provenance = value.get<std::string>();
            continue;
        }
        double* target = key == "min_hit_rate"            ? &r.min_hit_rate
                         : key == "max_mean_rt_ms"        ? &r.max_mean_rt_ms
                         : key == "max_false_alarm_rate"  ? &r.max_false_alarm_rate
                         : key == "max_final_rt_increase" ? &r.max_final_rt_increase
                         : key == "max_utilization_drop"  ? &r.max_utilization_drop
                                                          : nullptr;
        if (!target || !value.is_number()) throw Error(ErrorCode::InvalidConfig, "bad rule entry '" + key + "'");
        *target = value.get<double>();
        custom = true;
    }
    if (custom && !j.contains("provenance")) r.provenance = "user-config";
    return r;
}

Json to_json(const SpatialMetrics& s, bool include_grid) {
    Json j{{"path_length_px", s.path_length_px},
           {"screen_utilization", s.screen_utilization},
           {"peak_velocity_px_s", s.peak_velocity_px_s},
           {"mean_velocity_px_s", s.mean_velocity_px_s}};
    if (include_grid) {
        Json rows = Json::array();
        for (int r = 0; r < s.heatmap.rows; ++r) {
            Json row = Json::array();
            for (int c = 0; c < s.heatmap.cols; ++c) row.push_back(static_cast<std::int64_t>(s.heatmap.at(r, c)));
            rows.push_back(std::move(row));
        }
        j["heatmap"] = Json{{"rows", s.heatmap.rows}, {"cols", s.heatmap.cols}, {"counts", std::move(rows)}};
    }
    return j;
}

Json to_json(const LevelMetrics& m) {
    return Json{{"level", m.level},
                {"targets_shown", m.targets_shown},
                {"distractors_shown", m.distractors_shown},
                {"matched_pairs", m.matched_pairs},
                {"hit_rate", m.hit_rate},
                {"hit_rate_pct", format_percent(m.hit_rate)},
                {"correct_clicks", m.correct_clicks},
                {"incorrect_clicks", m.incorrect_clicks},
                {"neutral_clicks", m.neutral_clicks},
                {"false_alarm_rate", m.false_alarm_rate},
                {"false_alarm_rate_pct", format_percent(m.false_alarm_rate)},
                {"reaction_times_ms", m.reaction_times_ms},
                {"mean_rt_ms", m.mean_rt_ms},
                {"median_rt_ms", m.median_rt_ms},
                {"fixation_rate", m.fixation_rate},
                {"fixation_rate_pct", format_percent(m.fixation_rate)},
                {"fixation_count", m.fixation_count},
                {"saccade_count", m.saccade_count},
                {"fixation_events", m.fixation_events},
                {"samples_analyzed", m.samples_analyzed},
                {"samples_out_of_bounds", m.samples_out_of_bounds},
                {"duration_ms", m.duration_ms},
                {"spatial", to_json(m.spatial, false)},
                {"flags", m.flags}};
}

Json to_json(const MetricTrend& t) {
    Json rel = Json::array();
    for (const auto& r : t.relative_deltas) rel.push_back(r ? Json(*r) : Json(nullptr));
    Json steps = Json::array();
    for (auto s : t.step_trends) steps.push_back(to_string(s));
    return Json{{"metric", t.metric},
                {"higher_is_better", t.higher_is_better},
                {"levels", t.levels},
                {"values", t.values},
                {"deltas", t.deltas},
                {"relative_deltas", rel},
                {"step_trends", steps},
                {"overall", to_string(t.overall)}};
}

Json to_json(const MultilevelComparison& c) {
    Json levels = Json::array();
    for (const auto& m : c.per_level) levels.push_back(to_json(m));
    return Json{{"levels", c.per_level.size()},
                {"flat_tolerance", c.flat_tolerance},
                {"hit_rate_trend", to_json(c.hit_rate_trend)},
                {"rt_trend", to_json(c.rt_trend)},
                {"utilization_trend", to_json(c.utilization_trend)},
                {"mistakes_trend", to_json(c.mistakes_trend)},
                {"per_level", std::move(levels)}};
}

Json to_json(const Recommendation& r) {
    Json ev{{"metric", r.evidence.metric},
            {"level", r.evidence.level ? Json(*r.evidence.level) : Json(nullptr)},
            {"value", r.evidence.value},
            {"comparator", to_string(r.evidence.comparator)},
            {"threshold", r.evidence.threshold}};
    return Json{{"rule_id", r.rule_id}, {"severity", to_string(r.severity)}, {"message", r.message}, {"evidence", ev}};
}

Json to_json(const std::vector<Recommendation>& rs) {
    Json arr = Json::array();
    for (const auto& r : rs) arr.push_back(to_json(r));
    return arr;
}

Json to_json(const CalibrationReport& r) {
    Json pct = Json::object();
    for (const auto& [p, v] : r.velocity.velocity_percentiles) pct[number_key(p)] = v;
    Json retention = Json::object();
    for (const auto& [tol, frac] : r.retention_by_tolerance) retention[number_key(tol)] = frac;
    return Json{{"scope", r.scope},
                {"velocity_percentiles", pct},
                {"chosen_threshold_px_s", r.velocity.chosen_threshold_px_s},
                {"percentile", r.velocity.percentile},
                {"outlier_cut_percentile", r.velocity.outlier_cut_percentile},
                {"outlier_cut_px_s", r.velocity.outlier_cut_px_s},
                {"velocity_count", r.velocity.input_count},
                {"trimmed_count", r.velocity.trimmed_count},
                {"fixation_fraction_at_threshold", r.velocity.fixation_fraction_at_threshold},
                {"rt_window_ms", Json::array({r.rt_window.rt_min_ms, r.rt_window.rt_max_ms})},
                {"rt_window_fallback", r.rt_window.fallback},
                {"rt_count", r.rt_count},
                {"retention_by_tolerance", retention},
                {"velocity_histogram",
                 Json{{"edges", r.velocity_histogram.edges}, {"counts", r.velocity_histogram.counts}}}};
}

Json to_json(const DatasetCalibration& c) {
    Json levels = Json::object();
    for (const auto& [level, rep] : c.per_level) levels[std::to_string(level)] = to_json(rep);
    return Json{{"per_level", levels}, {"pooled", to_json(c.pooled)}, {"suggested_params", to_json(c.suggested)}};
}

Json session_summary(const SessionRecord& s) {
    Json issues = Json::array();
    for (const auto& i : s.issues) issues.push_back(Json{{"line", i.line_number}, {"reason", i.reason}});
    return Json{{"student_id", s.student_id},
                {"level", s.level},
                {"screen", Json::array({s.screen_w, s.screen_h})},
                {"rows_total", s.rows_total},
                {"rows_dropped", s.rows_dropped},
                {"event_only_rows", s.event_only_rows},
                {"samples", s.samples.size()},
                {"events", s.events.size()},
                {"issues", issues}};
}

}  // namespace gazelab
