#include "gazelab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "gazelab/csv.hpp"
#include "gazelab/error.hpp"
#include "gazelab/metrics.hpp"

namespace gazelab {

namespace {

// std distributions are implementation-defined; draw from the raw engine so
// the same seed gives the same file with any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

    double normal(double mean, double sd) {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

private:
    std::mt19937_64 engine_;
};

struct Row {
    TimestampMs t = 0;
    int order = 0;  // events before the sample at the same instant
    std::vector<std::string> fields;
};

std::string coord(double x, double y) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.1f, %.1f)", x, y);
    return buf;
}

constexpr TimestampMs kRtLow = 552;
constexpr TimestampMs kRtHigh = 4970;

}  // namespace

void validate(const SynthSpec& s) {
    auto fail = [](const char* what) { throw Error(ErrorCode::InvalidParameter, what); };
    if (s.targets < 0 || s.distractors < 0) fail("object counts must be >= 0");
    if (s.targets + s.distractors < 1) fail("need at least one object");
    if (!(s.hit_rate >= 0.0 && s.hit_rate <= 1.0)) fail("hit rate must lie in [0, 1]");
    if (!(s.rt_mean_ms >= 522.0 && s.rt_mean_ms <= 5000.0)) fail("rt mean must lie in [522, 5000] ms");
    if (s.false_alarms < 0 || s.false_alarms > s.distractors) fail("false alarms must lie in [0, distractors]");
    if (s.level < 1 || s.level > 3) fail("level must be 1, 2 or 3");
    if (s.sample_interval_ms < 1) fail("sample interval must be >= 1 ms");
    if (s.object_gap_ms <= kRtHigh + 100) fail("object gap must exceed the maximum reaction time");
    if (s.visible_ms < 1 || s.visible_ms >= s.object_gap_ms) fail("visible time must lie in [1, gap)");
    if (s.screen.width < 400 || s.screen.height < 400) fail("screen must be at least 400x400");
}

SynthSession synthesize_session(const SynthSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const double rt_sd = spec.rt_sd_ms < 0 ? spec.rt_mean_ms * 0.2 : spec.rt_sd_ms;
    const double W = spec.screen.width, H = spec.screen.height;

    struct Object {
        std::string id;
        ObjectType type;
        TimestampMs appear;
        double x, y;
        std::optional<TimestampMs> rt;  // response, when clicked
        bool false_alarm = false;
    };

    std::vector<ObjectType> kinds;
    for (int i = 0; i < spec.targets; ++i) kinds.push_back(ObjectType::MushroomTarget);
    for (int i = 0; i < spec.distractors; ++i) {
        kinds.push_back(i % 2 == 0 ? ObjectType::BlueFlower : ObjectType::YellowPurpleFlower);
    }
    rng.shuffle(kinds);

    std::vector<Object> objects;
    int target_no = 0, distractor_no = 0;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        Object o;
        o.type = kinds[k];
        o.id = is_target(o.type) ? "m" + std::to_string(++target_no) : "f" + std::to_string(++distractor_no);
        o.appear = 2000 + static_cast<TimestampMs>(k) * spec.object_gap_ms;
        o.x = std::round(rng.uniform(150.0, W - 150.0));
        o.y = std::round(rng.uniform(150.0, H - 150.0));
        objects.push_back(o);
    }

    std::vector<std::size_t> target_idx, distractor_idx;
    for (std::size_t i = 0; i < objects.size(); ++i) (is_target(objects[i].type) ? target_idx : distractor_idx).push_back(i);
    const auto hits = static_cast<std::size_t>(std::llround(spec.hit_rate * spec.targets));
    rng.shuffle(target_idx);
    for (std::size_t i = 0; i < hits; ++i) {
        const double rt = std::clamp(rng.normal(spec.rt_mean_ms, rt_sd), static_cast<double>(kRtLow),
                                     static_cast<double>(kRtHigh));
        objects[target_idx[i]].rt = static_cast<TimestampMs>(std::llround(rt));
    }
    rng.shuffle(distractor_idx);
    for (int i = 0; i < spec.false_alarms; ++i) {
        auto& o = objects[distractor_idx[static_cast<std::size_t>(i)]];
        o.false_alarm = true;
        o.rt = static_cast<TimestampMs>(std::llround(rng.uniform(300.0, 700.0)));
    }

    std::vector<Row> rows;
    const TimestampMs off = spec.clock_offset_ms;
    for (const auto& o : objects) {
        const std::string type(to_string(o.type));
        const std::string pos = coord(o.x, o.y);
        rows.push_back({o.appear, 0, {std::to_string(off + o.appear), "", "appear", o.id, type, pos, ""}});
        rows.push_back({o.appear + spec.visible_ms, 1,
                        {std::to_string(off + o.appear + spec.visible_ms), "", "disappear", o.id, type, pos, ""}});
        if (o.rt) {
            const TimestampMs t = o.appear + *o.rt;
            const std::string label = o.false_alarm ? "incorrect" : "correct";
            rows.push_back({t, 2,
                            {std::to_string(off + t), "", "click", "", type,
                             coord(o.x + rng.uniform(-15.0, 15.0), o.y + rng.uniform(-15.0, 15.0)), label}});
        }
    }

    // Gaze: fixate the most recent object (screen centre before the first),
    // with a saccade roughly 200 ms after each appearance.
    const TimestampMs end = objects.back().appear + spec.object_gap_ms;
    std::size_t next_obj = 0;
    double fx = W / 2, fy = H / 2;
    std::size_t samples = 0;
    for (TimestampMs t = 0; t <= end; t += spec.sample_interval_ms) {
        while (next_obj < objects.size() && objects[next_obj].appear + 200 <= t) {
            fx = objects[next_obj].x;
            fy = objects[next_obj].y;
            ++next_obj;
        }
        const double gx = std::round((fx + rng.normal(0.0, 2.0)) * 10.0) / 10.0;
        const double gy = std::round((fy + rng.normal(0.0, 2.0)) * 10.0) / 10.0;
        rows.push_back({t, 3, {std::to_string(off + t), coord(gx, gy), "", "", "", "", ""}});
        ++samples;
    }

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.t != b.t ? a.t < b.t : a.order < b.order;
    });

    SynthSession out;
    out.csv = csv::format_row({"timestamp_ms", "gaze", "event_kind", "object_id", "object_type", "object_pos", "click_label"});
    for (const auto& r : rows) out.csv += csv::format_row(r.fields);

    std::vector<TimestampMs> rts;
    for (const auto& o : objects) {
        if (is_target(o.type) && o.rt) rts.push_back(*o.rt);
    }
    double mean = 0.0;
    for (auto rt : rts) mean += static_cast<double>(rt);
    if (!rts.empty()) mean /= static_cast<double>(rts.size());
    const double hit_rate = spec.targets > 0 ? static_cast<double>(hits) / spec.targets : 0.0;
    const double fa_rate = spec.distractors > 0 ? static_cast<double>(spec.false_alarms) / spec.distractors : 0.0;

    out.truth = Json{{"seed", spec.seed},
                     {"level", spec.level},
                     {"student_id", spec.student_id},
                     {"targets", spec.targets},
                     {"distractors", spec.distractors},
                     {"hits", hits},
                     {"hit_rate", hit_rate},
                     {"hit_rate_pct", format_percent(hit_rate)},
                     {"incorrect_clicks", spec.false_alarms},
                     {"false_alarm_rate", fa_rate},
                     {"reaction_times_ms", rts},
                     {"mean_rt_ms", mean},
                     {"samples", samples},
                     {"rows", rows.size()}};
    return out;
}

}  // namespace gazelab
