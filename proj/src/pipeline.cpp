#include "gazelab/pipeline.hpp"

#include <algorithm>

#include "gazelab/error.hpp"
#include "gazelab/ingest.hpp"

namespace gazelab {

SessionAnalysis analyze_session(const SessionRecord& session, const AnalysisParams& params) {
    validate(params);
    SessionAnalysis a;
    a.level = session.level;
    a.screen_w = session.screen_w;
    a.screen_h = session.screen_h;
    a.params = params;

    auto filtered = filter_bounds(session.samples, session.screen_w, session.screen_h, params.bounds_tol_px);
    a.samples = std::move(filtered.kept);
    a.samples_out_of_bounds = filtered.dropped;
    if (a.samples.empty()) {
        throw Error(ErrorCode::EmptySession,
                    "level " + std::to_string(session.level) + " has no samples inside the screen bounds");
    }

    a.classified = classify_ivt(a.samples, params.v_thresh_px_s);
    a.fixations = merge_fixations(a.classified, params.min_fixation_ms);
    a.timeline = build_timeline(session.events);
    const auto targets = target_episodes(a.timeline);
    const auto correct = clicks_with_label(a.timeline, ClickLabel::Correct);
    a.matches = match_responses(targets, correct, params.rt_min_ms, params.rt_max_ms, params.match_strategy);

    SessionInputs in{session, a.samples, a.classified, a.fixations, a.timeline, a.matches, a.samples_out_of_bounds};
    a.metrics = level_metrics(in, params);
    return a;
}

DatasetAnalysis analyze_dataset(const CombinedDataset& dataset, const AnalysisParams& params,
                                const RuleTable& rules, double flat_tolerance) {
    if (dataset.levels.empty()) throw Error(ErrorCode::IncompleteAnalysis, "dataset has no levels");
    DatasetAnalysis d;
    d.student_id = dataset.student_id;
    d.params = params;
    d.rules = rules;
    std::vector<LevelMetrics> metrics;
    for (const auto& [level, session] : dataset.levels) {
        d.levels.push_back(analyze_session(session, params));
        metrics.push_back(d.levels.back().metrics);
    }
    d.comparison = compare_levels(std::move(metrics), flat_tolerance);
    d.recommendations = recommend(d.comparison, rules);
    return d;
}

namespace {

CalibrationReport calibrate_one(std::string scope, const std::vector<double>& velocities,
                                const std::vector<std::int64_t>& rts, const std::vector<GazeSample>& samples,
                                int screen_w, int screen_h, const CalibrationOptions& o) {
    CalibrationReport r;
    r.scope = std::move(scope);
    r.velocity = calibrate_velocity_threshold(velocities, o.velocity_percentile, o.outlier_cut_percentile);
    r.rt_window = calibrate_rt_window(rts, o.rt_low_pct, o.rt_high_pct, o.rt_hard_cap_ms);
    r.rt_count = rts.size();
    r.retention_by_tolerance = tolerance_sweep(samples, screen_w, screen_h, o.tolerances);
    r.velocity_histogram = histogram(velocities, 0.0, r.velocity.outlier_cut_px_s, o.histogram_bins);
    return r;
}

}  // namespace

DatasetCalibration calibrate_dataset(const CombinedDataset& dataset, const AnalysisParams& base,
                                     const CalibrationOptions& options) {
    validate(base);
    if (dataset.levels.empty()) throw Error(ErrorCode::IncompleteAnalysis, "dataset has no levels");
    DatasetCalibration out;
    std::vector<double> pooled_v;
    std::vector<std::int64_t> pooled_rt;
    std::vector<GazeSample> pooled_samples;
    int screen_w = 0, screen_h = 0;

    for (const auto& [level, session] : dataset.levels) {
        const auto velocities = velocity_distribution(session.samples).velocities;
        const auto timeline = build_timeline(session.events);
        const auto matches = match_responses(target_episodes(timeline), clicks_with_label(timeline, ClickLabel::Correct),
                                             1, options.rt_hard_cap_ms, base.match_strategy);
        std::vector<std::int64_t> rts;
        for (const auto& m : matches) rts.push_back(m.reaction_ms);

        out.per_level[level] = calibrate_one("level " + std::to_string(level), velocities, rts, session.samples,
                                             session.screen_w, session.screen_h, options);
        pooled_v.insert(pooled_v.end(), velocities.begin(), velocities.end());
        pooled_rt.insert(pooled_rt.end(), rts.begin(), rts.end());
        pooled_samples.insert(pooled_samples.end(), session.samples.begin(), session.samples.end());
        screen_w = session.screen_w;
        screen_h = session.screen_h;
    }
    out.pooled = calibrate_one("pooled", pooled_v, pooled_rt, pooled_samples, screen_w, screen_h, options);

    out.suggested = base;
    out.suggested.v_thresh_px_s = out.pooled.velocity.chosen_threshold_px_s;
    out.suggested.rt_min_ms = out.pooled.rt_window.rt_min_ms;
    out.suggested.rt_max_ms = out.pooled.rt_window.rt_max_ms;
    if (!(out.suggested.v_thresh_px_s > 0.0)) out.suggested.v_thresh_px_s = base.v_thresh_px_s;
    return out;
}

}  // namespace gazelab
