#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gazelab/ingest.hpp"
#include "gazelab/metrics.hpp"
#include "gazelab/params.hpp"
#include "gazelab/serialize.hpp"

namespace gazelab {

/// Everything a batch run or service analysis needs besides the logs.
///
///   student_id = "s8"
///   [screen]   width = 1920, height = 1080
///   [params]   v_thresh_px_s, rt_min_ms, rt_max_ms, bounds_tol_px,
///              grid_cols, grid_rows, match_strategy, min_fixation_ms
///   [columns]  timestamp, gaze, event_kind, object_id, object_type,
///              object_pos, click_label
///   [rules]    min_hit_rate, max_mean_rt_ms, max_false_alarm_rate,
///              max_final_rt_increase, max_utilization_drop
///   [comparison] flat_tolerance = 0.05
struct Config {
    std::string student_id = "student";
    ScreenSize screen;
    AnalysisParams params;
    ColumnMapping columns;
    RuleTable rules;
    double flat_tolerance = 0.05;
};

/// Parses the subset of TOML used by config files: [table] headers, bare
/// keys, strings, integers, floats, booleans and single-line arrays.
/// Throws Error{InvalidConfig} with the offending line.
Json parse_toml(std::string_view text);

Config config_from_json(const Json& j, const Config& base = {});
Json to_json(const Config& c);

/// .json files are read as JSON; anything else is tried as TOML first and
/// then as JSON.
Config load_config(const std::filesystem::path& path);
Config parse_config_text(std::string_view text);

}  // namespace gazelab
