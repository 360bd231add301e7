#include <doctest.h>

#include <algorithm>

#include "builders.hpp"
#include "gazelab/error.hpp"
#include "gazelab/ingest.hpp"
#include "gazelab/metrics.hpp"
#include "gazelab/pipeline.hpp"

using namespace gazelab;
using namespace gazelab::testing;

namespace {

LevelMetrics lm(int level, double hit, double rt, double util, std::size_t mistakes) {
    LevelMetrics m;
    m.level = level;
    m.targets_shown = 16;
    m.distractors_shown = 8;
    m.hit_rate = hit;
    m.mean_rt_ms = rt;
    m.reaction_times_ms = {static_cast<TimestampMs>(rt)};
    m.spatial.screen_utilization = util;
    m.incorrect_clicks = mistakes;
    m.false_alarm_rate = static_cast<double>(mistakes) / 8.0;
    return m;
}

// A short session: 16 targets 6 s apart, clicked 700 ms later except one,
// plus 4 distractors with one incorrect click.
std::string session_csv() {
    CsvBuilder b;
    TimestampMs t = 0;
    for (int i = 0; i < 16; ++i) {
        const TimestampMs base = i * 6000;
        for (; t < base + 6000; t += 100) b.sample(t, 500 + (t / 100) % 7, 400);
        const std::string id = "m" + std::to_string(i);
        b.event(base + 50, "appear", id, "mushroom_target");
        b.event(base + 850, "disappear", id, "mushroom_target");
        if (i != 3) b.event(base + 750, "click", "", "", "correct");
        if (i % 4 == 0) {
            const std::string fid = "f" + std::to_string(i);
            b.event(base + 3000, "appear", fid, "blue_flower");
            b.event(base + 3800, "disappear", fid, "blue_flower");
        }
    }
    b.event(3000 + 400, "click", "", "", "incorrect");
    return b.str();
}

}  // namespace

TEST_SUITE("metrics") {
    TEST_CASE("level metrics from the pipeline") {
        const auto rec = load_level_csv_text(session_csv(), {});
        const auto a = analyze_session(rec, AnalysisParams{});
        const auto& m = a.metrics;
        CHECK(m.targets_shown == 16);
        CHECK(m.matched_pairs == 15);
        CHECK(m.hit_rate == 0.9375);
        CHECK(format_percent(m.hit_rate) == "93.8%");
        CHECK(m.distractors_shown == 4);
        CHECK(m.incorrect_clicks == 1);
        CHECK(m.false_alarm_rate == 0.25);
        CHECK(m.reaction_times_ms.size() == 15);
        CHECK(m.mean_rt_ms == 700.0);
        CHECK(m.median_rt_ms == 700.0);
        CHECK(m.hit_rate >= 0.0);
        CHECK(m.matched_pairs <= std::min(m.targets_shown, m.correct_clicks));
        CHECK(m.duration_ms == rec.samples.back().timestamp_ms);
    }

    TEST_CASE("guarded divisions are flagged") {
        CsvBuilder b;
        b.sample(0, 10, 10).sample(100, 11, 10);
        const auto a = analyze_session(load_level_csv_text(b.str(), {}), AnalysisParams{});
        CHECK(a.metrics.hit_rate == 0.0);
        CHECK(a.metrics.false_alarm_rate == 0.0);
        CHECK(std::find(a.metrics.flags.begin(), a.metrics.flags.end(), "no_targets") != a.metrics.flags.end());
        CHECK(std::find(a.metrics.flags.begin(), a.metrics.flags.end(), "no_distractors") != a.metrics.flags.end());
    }

    TEST_CASE("format_percent") {
        CHECK(format_percent(0.9375) == "93.8%");
        CHECK(format_percent(149.0 / 167.0) == "89.2%");
        CHECK(format_percent(18.0 / 167.0) == "10.8%");
        CHECK(format_percent(1.0) == "100.0%");
        CHECK(format_percent(0.0) == "0.0%");
    }

    TEST_CASE("classify_change") {
        CHECK(classify_change(517, 480, false, 0.05) == Trend::Improving);
        CHECK(classify_change(480, 529, false, 0.05) == Trend::Declining);
        CHECK(classify_change(517, 529, false, 0.05) == Trend::Flat);
        CHECK(classify_change(0.41, 0.156, true, 0.05) == Trend::Declining);
        CHECK(classify_change(0, 2, false, 0.05) == Trend::Declining);
        CHECK(classify_change(3, 3, true, 0.05) == Trend::Flat);
    }

    TEST_CASE("compare_levels: reaction time improves then declines") {
        const auto c = compare_levels({lm(1, 0.94, 517, 0.41, 1), lm(2, 1.0, 480, 0.3, 1), lm(3, 1.0, 529, 0.156, 3)});
        CHECK(c.rt_trend.step_trends == std::vector<Trend>{Trend::Improving, Trend::Declining});
        CHECK(c.utilization_trend.overall == Trend::Declining);
        CHECK(c.mistakes_trend.overall == Trend::Declining);
        CHECK(c.hit_rate_trend.overall == Trend::Improving);
        REQUIRE(c.rt_trend.deltas.size() == 2);
        CHECK(c.rt_trend.deltas[0] == -37.0);
    }

    TEST_CASE("compare_levels sorts and degrades") {
        const auto c = compare_levels({lm(3, 1, 500, 0.1, 0), lm(1, 1, 500, 0.1, 0)});
        CHECK(c.per_level.front().level == 1);
        CHECK(c.rt_trend.levels == std::vector<int>{1, 3});

        const auto single = compare_levels({lm(1, 1, 500, 0.1, 0)});
        CHECK(single.rt_trend.deltas.empty());
        CHECK(single.rt_trend.overall == Trend::Flat);
        CHECK(single.hit_rate_trend.overall == Trend::Flat);
    }

    TEST_CASE("relative delta is absent from a zero base") {
        const auto c = compare_levels({lm(1, 1, 500, 0.1, 0), lm(2, 1, 500, 0.1, 2)});
        REQUIRE(c.mistakes_trend.relative_deltas.size() == 1);
        CHECK_FALSE(c.mistakes_trend.relative_deltas[0]);
    }

    TEST_CASE("recommendations") {
        SUBCASE("fatigue on the final level") {
            const auto recs =
                recommend(compare_levels({lm(1, 0.94, 517, 0.41, 1), lm(2, 1, 480, 0.3, 1), lm(3, 1, 529, 0.156, 3)}));
            const auto it = std::find_if(recs.begin(), recs.end(), [](const auto& r) { return r.rule_id == "fatigue-breaks"; });
            REQUIRE(it != recs.end());
            CHECK(it->evidence.level == 3);
            CHECK(it->evidence.value == doctest::Approx(49.0 / 480.0));
            CHECK(std::any_of(recs.begin(), recs.end(), [](const auto& r) { return r.rule_id == "focus-narrowing"; }));
            for (const auto& r : recs) CHECK(r.evidence.holds());
        }
        SUBCASE("perfect performance") {
            CHECK(recommend(compare_levels({lm(1, 1, 500, 0.1, 0), lm(2, 1, 500, 0.1, 0)})).empty());
        }
        SUBCASE("low hit rate") {
            const auto recs = recommend(compare_levels({lm(1, 0.5, 500, 0.1, 0)}));
            REQUIRE(recs.size() == 1);
            CHECK(recs[0].rule_id == "attention-support");
            CHECK(recs[0].severity == Severity::Alert);
            CHECK(recs[0].evidence.value == 0.5);
            CHECK(recs[0].evidence.threshold == 0.70);
            CHECK(recs[0].evidence.comparator == Comparator::Less);
        }
        SUBCASE("slow responses and false alarms") {
            const auto recs = recommend(compare_levels({lm(1, 1, 1200, 0.1, 4)}));
            REQUIRE(recs.size() == 2);
            CHECK(recs[0].rule_id == "processing-speed");
            CHECK(recs[1].rule_id == "impulse-control");
        }
        SUBCASE("custom thresholds") {
            RuleTable rules;
            rules.min_hit_rate = 0.95;
            const auto recs = recommend(compare_levels({lm(1, 0.9, 500, 0.1, 0)}), rules);
            REQUIRE(recs.size() == 1);
            CHECK(recs[0].evidence.threshold == 0.95);
        }
    }

    TEST_CASE("metrics are bit-identical on repeat") {
        const auto rec = load_level_csv_text(session_csv(), {});
        const auto a = analyze_session(rec, AnalysisParams{});
        const auto b = analyze_session(rec, AnalysisParams{});
        CHECK(a.metrics.mean_rt_ms == b.metrics.mean_rt_ms);
        CHECK(a.metrics.spatial.path_length_px == b.metrics.spatial.path_length_px);
        CHECK(a.metrics.spatial.heatmap.cells == b.metrics.spatial.heatmap.cells);
    }

    TEST_CASE("analyze_dataset and calibrate_dataset") {
        CombinedDataset ds;
        ds.student_id = "student";
        for (int level = 1; level <= 3; ++level) {
            LoadOptions o;
            o.level = level;
            ds.levels.emplace(level, load_level_csv_text(session_csv(), o));
        }
        const auto a = analyze_dataset(ds, AnalysisParams{});
        CHECK(a.levels.size() == 3);
        CHECK(a.comparison.per_level.size() == 3);
        const auto cal = calibrate_dataset(ds, AnalysisParams{});
        CHECK(cal.per_level.size() == 3);
        CHECK(cal.pooled.scope == "pooled");
        CHECK(cal.suggested.v_thresh_px_s == cal.pooled.velocity.chosen_threshold_px_s);
        CHECK(cal.pooled.rt_count == 45);
        CHECK(cal.suggested.rt_min_ms < cal.suggested.rt_max_ms);
    }
}
