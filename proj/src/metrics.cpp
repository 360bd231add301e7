#include "gazelab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "gazelab/calibrate.hpp"
#include "gazelab/error.hpp"

namespace gazelab {

std::string_view to_string(Trend t) {
    switch (t) {
        case Trend::Improving: return "improving";
        case Trend::Declining: return "declining";
        case Trend::Flat: return "flat";
    }
    return "flat";
}

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::Info: return "info";
        case Severity::Attention: return "attention";
        case Severity::Alert: return "alert";
    }
    return "info";
}

std::string_view to_string(Comparator c) { return c == Comparator::Less ? "<" : ">"; }

std::string format_percent(double fraction) {
    const double tenths = std::round(fraction * 1000.0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", tenths / 10.0);
    return buf;
}

LevelMetrics level_metrics(const SessionInputs& in, const AnalysisParams& params) {
    if (in.session.samples.empty() || in.samples.empty()) {
        throw Error(ErrorCode::EmptySession, "level " + std::to_string(in.session.level) + " has no samples");
    }
    LevelMetrics m;
    m.level = in.session.level;

    for (const auto& ep : in.timeline.episodes) {
        if (is_target(ep.object_type)) ++m.targets_shown;
        if (is_distractor(ep.object_type)) ++m.distractors_shown;
    }
    for (const auto& c : in.timeline.clicks) {
        switch (c.click_label.value_or(ClickLabel::Neutral)) {
            case ClickLabel::Correct: ++m.correct_clicks; break;
            case ClickLabel::Incorrect: ++m.incorrect_clicks; break;
            case ClickLabel::Neutral: ++m.neutral_clicks; break;
        }
    }

    m.matched_pairs = in.matches.size();
    if (m.targets_shown > 0) {
        m.hit_rate = static_cast<double>(m.matched_pairs) / static_cast<double>(m.targets_shown);
    } else {
        m.flags.emplace_back("no_targets");
    }
    if (m.distractors_shown > 0) {
        m.false_alarm_rate = std::min(1.0, static_cast<double>(m.incorrect_clicks) / static_cast<double>(m.distractors_shown));
        if (m.incorrect_clicks > m.distractors_shown) m.flags.emplace_back("false_alarms_exceed_distractors");
    } else {
        m.flags.emplace_back("no_distractors");
    }

    for (const auto& r : in.matches) m.reaction_times_ms.push_back(r.reaction_ms);
    if (!m.reaction_times_ms.empty()) {
        const double sum = std::accumulate(m.reaction_times_ms.begin(), m.reaction_times_ms.end(), 0.0);
        m.mean_rt_ms = sum / static_cast<double>(m.reaction_times_ms.size());
        std::vector<double> rts(m.reaction_times_ms.begin(), m.reaction_times_ms.end());
        m.median_rt_ms = quantile(rts, 50.0);
    } else {
        m.flags.emplace_back("no_matches");
    }

    const auto velocities = classified_velocities(in.classified);
    m.spatial = spatial_metrics(in.samples, velocities, in.session.screen_w, in.session.screen_h, params.grid_cols,
                                params.grid_rows);

    const auto counts = count_movements(in.classified);
    m.fixation_count = counts.fixations;
    m.saccade_count = counts.saccades;
    if (counts.classified() > 0) {
        m.fixation_rate = fixation_rate(in.classified);
    } else {
        m.flags.emplace_back("no_classified_samples");
    }
    m.fixation_events = in.fixations.size();
    m.samples_analyzed = in.samples.size();
    m.samples_out_of_bounds = in.samples_out_of_bounds;

    m.duration_ms = in.session.samples.back().timestamp_ms;
    if (!in.session.events.empty()) m.duration_ms = std::max(m.duration_ms, in.session.events.back().timestamp_ms);
    return m;
}

Trend classify_change(double from, double to, bool higher_is_better, double flat_tolerance) {
    const double delta = to - from;
    if (delta == 0.0) return Trend::Flat;
    if (from != 0.0 && std::abs(delta / from) < flat_tolerance) return Trend::Flat;
    return (delta > 0.0) == higher_is_better ? Trend::Improving : Trend::Declining;
}

namespace {

template <typename Get>
MetricTrend make_trend(std::string name, bool higher_is_better, const std::vector<LevelMetrics>& levels,
                       double tol, Get get) {
    MetricTrend t;
    t.metric = std::move(name);
    t.higher_is_better = higher_is_better;
    for (const auto& m : levels) {
        t.levels.push_back(m.level);
        t.values.push_back(get(m));
    }
    for (std::size_t i = 1; i < t.values.size(); ++i) {
        const double d = t.values[i] - t.values[i - 1];
        t.deltas.push_back(d);
        t.relative_deltas.push_back(t.values[i - 1] != 0.0 ? std::optional(d / std::abs(t.values[i - 1]))
                                                          : std::nullopt);
        t.step_trends.push_back(classify_change(t.values[i - 1], t.values[i], higher_is_better, tol));
    }
    if (t.values.size() >= 2) {
        t.overall = classify_change(t.values.front(), t.values.back(), higher_is_better, tol);
    }
    return t;
}

}  // namespace

MultilevelComparison compare_levels(std::vector<LevelMetrics> metrics, double flat_tolerance) {
    std::stable_sort(metrics.begin(), metrics.end(),
                     [](const LevelMetrics& a, const LevelMetrics& b) { return a.level < b.level; });
    MultilevelComparison c;
    c.flat_tolerance = flat_tolerance;
    c.hit_rate_trend = make_trend("hit_rate", true, metrics, flat_tolerance, [](const LevelMetrics& m) { return m.hit_rate; });
    c.rt_trend = make_trend("mean_rt_ms", false, metrics, flat_tolerance, [](const LevelMetrics& m) { return m.mean_rt_ms; });
    c.utilization_trend = make_trend("screen_utilization", true, metrics, flat_tolerance,
                                     [](const LevelMetrics& m) { return m.spatial.screen_utilization; });
    c.mistakes_trend = make_trend("incorrect_clicks", false, metrics, flat_tolerance,
                                  [](const LevelMetrics& m) { return static_cast<double>(m.incorrect_clicks); });
    c.per_level = std::move(metrics);
    return c;
}

namespace {

std::string fmt_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::vector<Recommendation> recommend(const MultilevelComparison& comparison, const RuleTable& rules) {
    std::vector<Recommendation> out;
    auto add = [&](std::string id, Severity sev, std::string message, Evidence ev) {
        if (ev.holds()) out.push_back(Recommendation{std::move(id), sev, std::move(message), std::move(ev)});
    };

    for (const auto& m : comparison.per_level) {
        const std::string lvl = "Level " + std::to_string(m.level);
        if (m.targets_shown > 0) {
            add("attention-support", Severity::Alert,
                lvl + ": hit rate " + format_percent(m.hit_rate) +
                    " is low; consider structured attention-support activities and shorter task blocks.",
                Evidence{"hit_rate", m.level, m.hit_rate, Comparator::Less, rules.min_hit_rate});
        }
        if (!m.reaction_times_ms.empty()) {
            add("processing-speed", Severity::Attention,
                lvl + ": mean reaction time " + fmt_value(m.mean_rt_ms) +
                    " ms is slow; allow extra response time and practice speeded tasks.",
                Evidence{"mean_rt_ms", m.level, m.mean_rt_ms, Comparator::Greater, rules.max_mean_rt_ms});
        }
        if (m.distractors_shown > 0) {
            add("impulse-control", Severity::Attention,
                lvl + ": false-alarm rate " + format_percent(m.false_alarm_rate) +
                    " on distractors; practice inhibition (go/no-go style) exercises.",
                Evidence{"false_alarm_rate", m.level, m.false_alarm_rate, Comparator::Greater,
                         rules.max_false_alarm_rate});
        }
    }

    const auto& levels = comparison.per_level;
    if (levels.size() >= 2) {
        const auto& prev = levels[levels.size() - 2];
        const auto& last = levels.back();
        if (!prev.reaction_times_ms.empty() && !last.reaction_times_ms.empty() && prev.mean_rt_ms > 0.0) {
            const double rise = (last.mean_rt_ms - prev.mean_rt_ms) / prev.mean_rt_ms;
            add("fatigue-breaks", Severity::Attention,
                "Reaction time rose " + format_percent(rise) + " on the final level (Level " +
                    std::to_string(last.level) + "); schedule breaks before the final level to limit fatigue.",
                Evidence{"mean_rt_relative_increase", last.level, rise, Comparator::Greater,
                         rules.max_final_rt_increase});
        }
        const auto& first = levels.front();
        const double u0 = first.spatial.screen_utilization;
        if (u0 > 0.0) {
            const double drop = (u0 - last.spatial.screen_utilization) / u0;
            add("focus-narrowing", Severity::Info,
                "Screen utilization fell " + format_percent(drop) + " from Level " + std::to_string(first.level) +
                    " to Level " + std::to_string(last.level) + "; gaze concentrated on fewer regions.",
                Evidence{"utilization_relative_drop", last.level, drop, Comparator::Greater,
                         rules.max_utilization_drop});
        }
    }
    return out;
}

}  // namespace gazelab
