#pragma once

// Independent reference implementations used to check the library. They
// favour obviousness over speed and share no code with src/.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_100;

struct Sample {
    std::int64_t t_ms;
    double x;
    double y;
};

enum class Label { Unclassified, Fixation, Saccade };

struct Classified {
    std::optional<Big> velocity;
    Label label = Label::Unclassified;
};

/// Velocity of every consecutive pair with 100-digit arithmetic on the exact
/// binary values of the inputs: |d| / (dt / 1000).
inline std::vector<Classified> ivt(const std::vector<Sample>& s, double threshold) {
    std::vector<Classified> out(s.size());
    const Big thr(threshold);
    for (std::size_t i = 1; i < s.size(); ++i) {
        const Big dx = Big(s[i].x) - Big(s[i - 1].x);
        const Big dy = Big(s[i].y) - Big(s[i - 1].y);
        const Big dt = Big(s[i].t_ms - s[i - 1].t_ms) / 1000;
        const Big v = sqrt(dx * dx + dy * dy) / dt;
        out[i].velocity = v;
        out[i].label = v <= thr ? Label::Fixation : Label::Saccade;
    }
    return out;
}

struct Target {
    std::string id;
    std::int64_t appear_ms;
};

struct Click {
    std::int64_t t_ms;
    std::int64_t line;
};

struct Pair {
    std::string target_id;
    std::int64_t click_line;
    std::int64_t rt_ms;

    bool operator==(const Pair&) const = default;
};

/// Step-by-step transcription of the greedy matching loop:
///   for each target t in appear order:
///     c <- earliest unused click with t.time < c.time
///     if c exists and rt_min <= c.time - t.time <= rt_max: pair (t, c), mark c used
/// Ties are ordered by click line, then by target id.
inline std::vector<Pair> greedy_match(std::vector<Target> targets, std::vector<Click> clicks, std::int64_t rt_min,
                                      std::int64_t rt_max) {
    std::sort(targets.begin(), targets.end(), [](const Target& a, const Target& b) {
        return a.appear_ms != b.appear_ms ? a.appear_ms < b.appear_ms : a.id < b.id;
    });
    std::sort(clicks.begin(), clicks.end(), [](const Click& a, const Click& b) {
        return a.t_ms != b.t_ms ? a.t_ms < b.t_ms : a.line < b.line;
    });
    std::vector<bool> used(clicks.size(), false);
    std::vector<Pair> out;
    for (const auto& t : targets) {
        std::optional<std::size_t> earliest;
        for (std::size_t j = 0; j < clicks.size(); ++j) {
            if (!used[j] && t.appear_ms < clicks[j].t_ms) {
                earliest = j;
                break;
            }
        }
        if (!earliest) continue;
        const std::int64_t rt = clicks[*earliest].t_ms - t.appear_ms;
        if (rt_min <= rt && rt <= rt_max) {
            used[*earliest] = true;
            out.push_back(Pair{t.id, clicks[*earliest].line, rt});
        }
    }
    return out;
}

/// Sort, then interpolate between the two closest ranks at (n-1)p/100.
inline double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const long double h = static_cast<long double>(v.size() - 1) * p / 100.0L;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const long double frac = h - static_cast<long double>(lo);
    return static_cast<double>(v[lo] + frac * (static_cast<long double>(v[hi]) - v[lo]));
}

}  // namespace oracle
