#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazelab/classify.hpp"
#include "gazelab/event_match.hpp"
#include "gazelab/params.hpp"
#include "gazelab/types.hpp"

namespace gazelab {

struct LevelMetrics {
    int level = 0;
    std::size_t targets_shown = 0;
    std::size_t distractors_shown = 0;
    std::size_t matched_pairs = 0;
    double hit_rate = 0.0;
    std::size_t correct_clicks = 0;
    std::size_t incorrect_clicks = 0;
    std::size_t neutral_clicks = 0;
    double false_alarm_rate = 0.0;
    std::vector<TimestampMs> reaction_times_ms;
    double mean_rt_ms = 0.0;
    double median_rt_ms = 0.0;
    SpatialMetrics spatial;
    double fixation_rate = 0.0;
    std::size_t fixation_count = 0;
    std::size_t saccade_count = 0;
    std::size_t fixation_events = 0;
    std::size_t samples_analyzed = 0;
    std::size_t samples_out_of_bounds = 0;
    TimestampMs duration_ms = 0;
    /// Guarded divisions and other degenerate cases, e.g. "no_targets".
    std::vector<std::string> flags;
};

struct SessionInputs {
    const SessionRecord& session;
    std::span<const GazeSample> samples;  // after bounds filtering
    std::span<const ClassifiedSample> classified;
    std::span<const FixationEvent> fixations;
    const Timeline& timeline;
    std::span<const MatchedResponse> matches;
    std::size_t samples_out_of_bounds = 0;
};

/// Throws EmptySession when the session has no samples.
LevelMetrics level_metrics(const SessionInputs& in, const AnalysisParams& params);

enum class Trend { Improving, Declining, Flat };
std::string_view to_string(Trend t);

struct MetricTrend {
    std::string metric;
    bool higher_is_better = true;
    std::vector<int> levels;
    std::vector<double> values;
    std::vector<double> deltas;            // values[i+1] - values[i]
    std::vector<std::optional<double>> relative_deltas;  // deltas[i] / |values[i]|, absent when values[i] is 0
    std::vector<Trend> step_trends;
    Trend overall = Trend::Flat;           // first level vs last level
};

struct MultilevelComparison {
    std::vector<LevelMetrics> per_level;   // sorted by level
    double flat_tolerance = 0.05;
    MetricTrend hit_rate_trend;
    MetricTrend rt_trend;
    MetricTrend utilization_trend;
    MetricTrend mistakes_trend;
};

/// Relative change a→b, labelled by direction and polarity; |rel| < tol is flat.
Trend classify_change(double from, double to, bool higher_is_better, double flat_tolerance);

MultilevelComparison compare_levels(std::vector<LevelMetrics> metrics, double flat_tolerance = 0.05);

enum class Severity { Info, Attention, Alert };
std::string_view to_string(Severity s);

enum class Comparator { Less, Greater };
std::string_view to_string(Comparator c);

struct Evidence {
    std::string metric;
    std::optional<int> level;
    double value = 0.0;
    Comparator comparator = Comparator::Less;
    double threshold = 0.0;

    bool holds() const { return comparator == Comparator::Less ? value < threshold : value > threshold; }
};

struct Recommendation {
    std::string rule_id;
    Severity severity = Severity::Info;
    std::string message;
    Evidence evidence;
};

/// Thresholds for the recommendation rules. These are engine defaults, not
/// clinically validated values.
struct RuleTable {
    double min_hit_rate = 0.70;
    double max_mean_rt_ms = 1000.0;
    double max_false_alarm_rate = 0.20;
    double max_final_rt_increase = 0.05;
    double max_utilization_drop = 0.50;
    std::string provenance = "engine-default";

    friend bool operator==(const RuleTable&, const RuleTable&) = default;
};

std::vector<Recommendation> recommend(const MultilevelComparison& comparison, const RuleTable& rules = {});

/// One decimal, half away from zero: 0.9375 -> "93.8%".
std::string format_percent(double fraction);

}  // namespace gazelab
