#include "gazelab/report.hpp"

#include <algorithm>
#include <cmath>

#include "gazelab/csv.hpp"
#include "gazelab/error.hpp"

namespace gazelab {

namespace {

std::vector<ClickMarker> click_markers(const Timeline& tl, bool positioned_only) {
    std::vector<ClickMarker> out;
    for (const auto& c : tl.clicks) {
        if (positioned_only && !c.position_px) continue;
        out.push_back(ClickMarker{c.timestamp_ms, c.click_label.value_or(ClickLabel::Neutral), c.position_px});
    }
    return out;
}

double share(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

Grid gaussian_smooth(const Grid& grid, double sigma_cells) {
    if (!(sigma_cells > 0.0) || grid.cells.empty()) return grid;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma_cells));
    std::vector<double> kernel(2 * radius + 1);
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-0.5 * (k * k) / (sigma_cells * sigma_cells));
    }
    // Each cell spreads its count over the in-grid part of the kernel, so the
    // total count is unchanged.
    auto pass = [&](const Grid& in, bool horizontal) {
        Grid out{in.rows, in.cols, std::vector<double>(in.cells.size(), 0.0)};
        for (int r = 0; r < in.rows; ++r) {
            for (int c = 0; c < in.cols; ++c) {
                const double v = in.at(r, c);
                if (v == 0.0) continue;
                auto inside = [&](int k) {
                    const int rr = horizontal ? r : r + k;
                    const int cc = horizontal ? c + k : c;
                    return rr >= 0 && rr < in.rows && cc >= 0 && cc < in.cols;
                };
                double weight = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    if (inside(k)) weight += kernel[k + radius];
                }
                for (int k = -radius; k <= radius; ++k) {
                    if (!inside(k)) continue;
                    out.at(horizontal ? r : r + k, horizontal ? c + k : c) += v * kernel[k + radius] / weight;
                }
            }
        }
        return out;
    };
    return pass(pass(grid, true), false);
}

ChartBundle build_chart_bundle(const SessionAnalysis& a, const MultilevelComparison& comparison,
                               const ChartOptions& options) {
    if (count_movements(a.classified).classified() == 0) {
        throw Error(ErrorCode::IncompleteAnalysis, "level " + std::to_string(a.level) + " has no classified samples");
    }
    ChartBundle b;
    b.level = a.level;
    const auto& m = a.metrics;

    // Timeline
    auto& tl = b.timeline;
    tl.end_ms = m.duration_ms;
    for (const auto& ep : a.timeline.episodes) {
        tl.bars.push_back(TimelineBar{ep.object_id, ep.object_type, ep.appear_ms, ep.disappear_ms});
    }
    tl.clicks = click_markers(a.timeline, false);
    for (const auto& r : a.matches) {
        tl.matches.push_back(MatchAnnotation{r.target.object_id, r.target.appear_ms, r.click.timestamp_ms, r.reaction_ms});
    }

    // Scanpath and heatmap
    auto& sp = b.scanpath;
    sp.screen_w = a.screen_w;
    sp.screen_h = a.screen_h;
    sp.points.reserve(a.classified.size());
    for (const auto& c : a.classified) {
        sp.points.push_back(ScanpathPoint{c.sample.timestamp_ms, c.sample.x_px, c.sample.y_px, c.movement});
    }
    sp.fixation_events = a.fixations;
    sp.clicks = click_markers(a.timeline, true);
    sp.heatmap = m.spatial.heatmap;
    sp.heatmap_sigma_cells = options.heatmap_sigma_cells;
    sp.heatmap_display = gaussian_smooth(sp.heatmap, options.heatmap_sigma_cells);

    // Velocity
    auto& vs = b.velocity;
    vs.threshold_px_s = a.params.v_thresh_px_s;
    vs.peak_px_s = m.spatial.peak_velocity_px_s;
    vs.mean_px_s = m.spatial.mean_velocity_px_s;
    for (const auto& c : a.classified) {
        if (!c.velocity_px_s) continue;
        vs.points.push_back(VelocityPoint{c.sample.timestamp_ms, *c.velocity_px_s, c.movement});
        if (!vs.spans.empty() && vs.spans.back().movement == c.movement) {
            vs.spans.back().end_ms = c.sample.timestamp_ms;
        } else {
            vs.spans.push_back(MovementSpan{c.sample.timestamp_ms, c.sample.timestamp_ms, c.movement});
        }
    }
    vs.clicks = tl.clicks;

    // Dashboard
    auto& d = b.dashboard;
    d.hits = m.matched_pairs;
    d.misses = m.targets_shown - std::min(m.targets_shown, m.matched_pairs);
    d.hit_share = share(d.hits, d.hits + d.misses);
    d.miss_share = share(d.misses, d.hits + d.misses);
    d.rt_bin_ms = options.rt_bin_ms > 0 ? options.rt_bin_ms : 50;
    d.mean_rt_ms = m.mean_rt_ms;
    if (!m.reaction_times_ms.empty()) {
        const auto [lo, hi] = std::minmax_element(m.reaction_times_ms.begin(), m.reaction_times_ms.end());
        const TimestampMs first = (*lo / d.rt_bin_ms) * d.rt_bin_ms;
        const TimestampMs last = (*hi / d.rt_bin_ms) * d.rt_bin_ms;
        for (TimestampMs e = first; e <= last + d.rt_bin_ms; e += d.rt_bin_ms) d.rt_bin_edges.push_back(e);
        d.rt_bin_counts.assign(d.rt_bin_edges.size() - 1, 0);
        for (auto rt : m.reaction_times_ms) ++d.rt_bin_counts[static_cast<std::size_t>((rt - first) / d.rt_bin_ms)];
    }
    d.fixations = m.fixation_count;
    d.saccades = m.saccade_count;
    d.fixation_share = share(d.fixations, d.fixations + d.saccades);
    d.saccade_share = share(d.saccades, d.fixations + d.saccades);

    // Multilevel
    if (comparison.per_level.size() >= 2) {
        MultilevelSeries ml;
        for (const auto& lm : comparison.per_level) {
            ml.levels.push_back(lm.level);
            ml.success_rate.push_back(lm.hit_rate);
            ml.mean_rt_ms.push_back(lm.mean_rt_ms);
            ml.screen_utilization.push_back(lm.spatial.screen_utilization);
            ml.mistakes.push_back(static_cast<double>(lm.incorrect_clicks));
        }
        b.multilevel = std::move(ml);
    }
    return b;
}

namespace {

Json grid_json(const Grid& g) {
    Json rows = Json::array();
    for (int r = 0; r < g.rows; ++r) {
        Json row = Json::array();
        for (int c = 0; c < g.cols; ++c) row.push_back(g.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json click_json(const ClickMarker& c) {
    Json j{{"timestamp_ms", c.timestamp_ms}, {"label", to_string(c.label)}};
    if (c.position_px) j["position_px"] = Json::array({c.position_px->x, c.position_px->y});
    return j;
}

}  // namespace

Json to_json(const ChartBundle& b) {
    Json timeline{{"end_ms", b.timeline.end_ms}, {"bars", Json::array()}, {"clicks", Json::array()}, {"matches", Json::array()}};
    for (const auto& bar : b.timeline.bars) {
        timeline["bars"].push_back(Json{{"object_id", bar.object_id},
                                        {"type", to_string(bar.object_type)},
                                        {"appear_ms", bar.appear_ms},
                                        {"disappear_ms", bar.disappear_ms ? Json(*bar.disappear_ms) : Json(nullptr)}});
    }
    for (const auto& c : b.timeline.clicks) timeline["clicks"].push_back(click_json(c));
    for (const auto& mt : b.timeline.matches) {
        timeline["matches"].push_back(Json{{"target_id", mt.target_id},
                                           {"appear_ms", mt.appear_ms},
                                           {"click_ms", mt.click_ms},
                                           {"rt_ms", mt.rt_ms}});
    }

    Json scan{{"screen", Json::array({b.scanpath.screen_w, b.scanpath.screen_h})},
              {"points", Json::array()},
              {"fixation_events", Json::array()},
              {"clicks", Json::array()},
              {"heatmap", Json{{"rows", b.scanpath.heatmap.rows},
                               {"cols", b.scanpath.heatmap.cols},
                               {"counts", grid_json(b.scanpath.heatmap)},
                               {"display_sigma_cells", b.scanpath.heatmap_sigma_cells},
                               {"display", grid_json(b.scanpath.heatmap_display)}}}};
    for (const auto& p : b.scanpath.points) {
        scan["points"].push_back(Json{{"timestamp_ms", p.timestamp_ms}, {"x", p.x}, {"y", p.y}, {"movement", to_string(p.movement)}});
    }
    for (const auto& f : b.scanpath.fixation_events) {
        scan["fixation_events"].push_back(Json{{"start_ms", f.start_ms},
                                               {"end_ms", f.end_ms},
                                               {"duration_ms", f.duration_ms},
                                               {"centroid_px", Json::array({f.centroid_px.x, f.centroid_px.y})},
                                               {"sample_count", f.sample_count}});
    }
    for (const auto& c : b.scanpath.clicks) scan["clicks"].push_back(click_json(c));

    Json vel{{"threshold_px_s", b.velocity.threshold_px_s},
             {"peak_px_s", b.velocity.peak_px_s},
             {"mean_px_s", b.velocity.mean_px_s},
             {"points", Json::array()},
             {"spans", Json::array()},
             {"clicks", Json::array()}};
    for (const auto& p : b.velocity.points) {
        vel["points"].push_back(Json{{"timestamp_ms", p.timestamp_ms}, {"velocity_px_s", p.velocity_px_s}, {"movement", to_string(p.movement)}});
    }
    for (const auto& s : b.velocity.spans) {
        vel["spans"].push_back(Json{{"start_ms", s.start_ms}, {"end_ms", s.end_ms}, {"movement", to_string(s.movement)}});
    }
    for (const auto& c : b.velocity.clicks) vel["clicks"].push_back(click_json(c));

    const auto& d = b.dashboard;
    Json dash{{"hits", d.hits},
              {"misses", d.misses},
              {"hit_share", d.hit_share},
              {"miss_share", d.miss_share},
              {"hit_share_pct", format_percent(d.hit_share)},
              {"miss_share_pct", format_percent(d.miss_share)},
              {"rt_histogram", Json{{"bin_ms", d.rt_bin_ms}, {"edges", d.rt_bin_edges}, {"counts", d.rt_bin_counts}}},
              {"mean_rt_ms", d.mean_rt_ms},
              {"fixations", d.fixations},
              {"saccades", d.saccades},
              {"fixation_share", d.fixation_share},
              {"saccade_share", d.saccade_share},
              {"fixation_share_pct", format_percent(d.fixation_share)},
              {"saccade_share_pct", format_percent(d.saccade_share)}};

    Json j{{"level", b.level}, {"timeline", timeline}, {"scanpath", scan}, {"velocity", vel}, {"dashboard", dash}};
    if (b.multilevel) {
        const auto& ml = *b.multilevel;
        j["multilevel"] = Json{{"levels", ml.levels},
                               {"success_rate", ml.success_rate},
                               {"mean_rt_ms", ml.mean_rt_ms},
                               {"screen_utilization", ml.screen_utilization},
                               {"mistakes", ml.mistakes}};
        j["multilevel_omitted"] = false;
    } else {
        j["multilevel"] = nullptr;
        j["multilevel_omitted"] = true;
    }
    return j;
}

// ---- tables -------------------------------------------------------------

namespace {

std::string num(double v) { return number_key(v); }
std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string num(const std::optional<double>& v) { return v ? number_key(*v) : "n/a"; }

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out.push_back(';');
        if constexpr (std::is_same_v<T, std::string>) {
            out += xs[i];
        } else {
            out += num(xs[i]);
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> level_rows(const LevelMetrics& m) {
    return {
        {"level", std::to_string(m.level)},
        {"targets_shown", num(m.targets_shown)},
        {"distractors_shown", num(m.distractors_shown)},
        {"matched_pairs", num(m.matched_pairs)},
        {"hit_rate", num(m.hit_rate)},
        {"hit_rate_pct", format_percent(m.hit_rate)},
        {"correct_clicks", num(m.correct_clicks)},
        {"incorrect_clicks", num(m.incorrect_clicks)},
        {"neutral_clicks", num(m.neutral_clicks)},
        {"false_alarm_rate", num(m.false_alarm_rate)},
        {"false_alarm_rate_pct", format_percent(m.false_alarm_rate)},
        {"mean_rt_ms", num(m.mean_rt_ms)},
        {"median_rt_ms", num(m.median_rt_ms)},
        {"reaction_times_ms", join(m.reaction_times_ms)},
        {"fixation_count", num(m.fixation_count)},
        {"saccade_count", num(m.saccade_count)},
        {"fixation_rate", num(m.fixation_rate)},
        {"fixation_rate_pct", format_percent(m.fixation_rate)},
        {"fixation_events", num(m.fixation_events)},
        {"path_length_px", num(m.spatial.path_length_px)},
        {"screen_utilization", num(m.spatial.screen_utilization)},
        {"screen_utilization_pct", format_percent(m.spatial.screen_utilization)},
        {"peak_velocity_px_s", num(m.spatial.peak_velocity_px_s)},
        {"mean_velocity_px_s", num(m.spatial.mean_velocity_px_s)},
        {"samples_analyzed", num(m.samples_analyzed)},
        {"samples_out_of_bounds", num(m.samples_out_of_bounds)},
        {"duration_ms", num(m.duration_ms)},
        {"flags", join(m.flags)},
    };
}

std::string trend_steps(const MetricTrend& t) {
    std::vector<std::string> s;
    for (auto x : t.step_trends) s.emplace_back(to_string(x));
    return join(s);
}

}  // namespace

std::vector<Document> export_tables(const std::vector<LevelMetrics>& metrics, const MultilevelComparison& comparison,
                                    const std::vector<Recommendation>& recommendations, TableFormat format,
                                    const RuleTable& rules) {
    std::vector<LevelMetrics> sorted = metrics;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.level < b.level; });
    const MetricTrend* trends[] = {&comparison.hit_rate_trend, &comparison.rt_trend, &comparison.utilization_trend,
                                   &comparison.mistakes_trend};
    std::vector<Document> docs;

    if (format == TableFormat::Csv) {
        for (const auto& m : sorted) {
            std::string out = csv::format_row({"metric", "value"});
            for (const auto& [k, v] : level_rows(m)) out += csv::format_row({k, v});
            docs.push_back(Document{"level_" + std::to_string(m.level) + ".csv", std::move(out)});
        }

        std::vector<std::string> header{"metric"};
        for (const auto& m : comparison.per_level) header.push_back("level_" + std::to_string(m.level));
        header.insert(header.end(), {"overall_trend", "step_trends", "relative_deltas"});
        std::string cmp = csv::format_row(header);
        for (const auto* t : trends) {
            std::vector<std::string> row{t->metric};
            for (double v : t->values) row.push_back(num(v));
            row.emplace_back(to_string(t->overall));
            row.push_back(trend_steps(*t));
            row.push_back(join(t->relative_deltas));
            cmp += csv::format_row(row);
        }
        docs.push_back(Document{"comparison.csv", std::move(cmp)});

        std::string rec = csv::format_row(
            {"rule_id", "severity", "level", "metric", "value", "comparator", "threshold", "provenance", "message"});
        for (const auto& r : recommendations) {
            rec += csv::format_row({r.rule_id, std::string(to_string(r.severity)),
                                    r.evidence.level ? std::to_string(*r.evidence.level) : std::string(),
                                    r.evidence.metric, num(r.evidence.value),
                                    std::string(to_string(r.evidence.comparator)), num(r.evidence.threshold),
                                    rules.provenance, r.message});
        }
        docs.push_back(Document{"recommendations.csv", std::move(rec)});
        return docs;
    }

    for (const auto& m : sorted) {
        Json j{{"table", "level_" + std::to_string(m.level)}, {"metrics", to_json(m)}};
        docs.push_back(Document{"level_" + std::to_string(m.level) + ".json", j.dump(2) + "\n"});
    }
    Json cmp{{"table", "comparison"}, {"levels", Json::array()}, {"trends", Json::array()}};
    for (const auto& m : comparison.per_level) cmp["levels"].push_back(m.level);
    for (const auto* t : trends) cmp["trends"].push_back(to_json(*t));
    docs.push_back(Document{"comparison.json", cmp.dump(2) + "\n"});
    Json rec{{"table", "recommendations"}, {"rules", to_json(rules)}, {"recommendations", to_json(recommendations)}};
    docs.push_back(Document{"recommendations.json", rec.dump(2) + "\n"});
    return docs;
}

AnalysisOutputs render_outputs(const DatasetAnalysis& analysis, TableFormat format, const ChartOptions& options) {
    AnalysisOutputs out;
    out.tables = export_tables(analysis.comparison.per_level, analysis.comparison, analysis.recommendations, format,
                               analysis.rules);
    out.charts = Json{{"student_id", analysis.student_id}, {"levels", Json::object()}};
    for (const auto& level : analysis.levels) {
        out.bundles.push_back(build_chart_bundle(level, analysis.comparison, options));
        const auto& b = out.bundles.back();
        out.charts["levels"][std::to_string(b.level)] = to_json(b);
        for (const auto& id : chart_ids()) {
            if (id == "multilevel") continue;
            out.svgs.push_back(Document{"level_" + std::to_string(b.level) + "_" + id + ".svg", render_svg(b, id)});
        }
    }
    if (!out.bundles.empty() && out.bundles.front().multilevel) {
        out.svgs.push_back(Document{"multilevel.svg", render_svg(out.bundles.front(), "multilevel")});
    }
    return out;
}

}  // namespace gazelab
