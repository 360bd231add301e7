#include "gazelab/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "gazelab/classify.hpp"
#include "gazelab/error.hpp"
#include "gazelab/ingest.hpp"

namespace gazelab {

double quantile_sorted(std::span<const double> sorted, double percentile) {
    if (sorted.empty()) throw Error(ErrorCode::InvalidParameter, "quantile of an empty set");
    if (!(percentile >= 0.0 && percentile <= 100.0)) {
        throw Error(ErrorCode::InvalidParameter, "percentile must lie in [0, 100]");
    }
    const double h = static_cast<double>(sorted.size() - 1) * (percentile / 100.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> values, double percentile) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, percentile);
}

VelocityDistribution velocity_distribution(std::span<const GazeSample> samples) {
    if (samples.size() < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 samples");
    VelocityDistribution out;
    out.velocities.reserve(samples.size() - 1);
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].timestamp_ms <= samples[i - 1].timestamp_ms) {
            throw Error(ErrorCode::NonMonotonicTimestamps, "at sample " + std::to_string(i));
        }
        const double v = point_velocity(samples[i - 1], samples[i]);
        if (std::isfinite(v)) {
            out.velocities.push_back(v);
        } else {
            ++out.non_finite_excluded;
        }
    }
    return out;
}

VelocityCalibration calibrate_velocity_threshold(std::span<const double> velocities, double percentile,
                                                 double outlier_cut_percentile) {
    if (!(percentile > 0.0 && percentile < 100.0)) {
        throw Error(ErrorCode::InvalidParameter, "percentile must lie in (0, 100)");
    }
    if (!(outlier_cut_percentile > 0.0 && outlier_cut_percentile <= 100.0)) {
        throw Error(ErrorCode::InvalidParameter, "outlier cut percentile must lie in (0, 100]");
    }
    VelocityCalibration cal;
    cal.percentile = percentile;
    cal.outlier_cut_percentile = outlier_cut_percentile;
    cal.input_count = velocities.size();

    std::vector<double> sorted;
    sorted.reserve(velocities.size());
    for (double v : velocities) {
        if (std::isfinite(v)) sorted.push_back(v);
    }
    if (sorted.empty()) throw Error(ErrorCode::EmptyAfterOutlierRemoval, "no finite velocities");
    std::sort(sorted.begin(), sorted.end());

    cal.outlier_cut_px_s = quantile_sorted(sorted, outlier_cut_percentile);
    sorted.erase(std::upper_bound(sorted.begin(), sorted.end(), cal.outlier_cut_px_s), sorted.end());
    if (sorted.empty()) throw Error(ErrorCode::EmptyAfterOutlierRemoval, "trim removed every value");
    cal.trimmed_count = sorted.size();

    cal.chosen_threshold_px_s = quantile_sorted(sorted, percentile);
    const auto at_or_below = std::upper_bound(sorted.begin(), sorted.end(), cal.chosen_threshold_px_s) - sorted.begin();
    cal.fixation_fraction_at_threshold = static_cast<double>(at_or_below) / static_cast<double>(sorted.size());

    for (double p : {5.0, 10.0, 25.0, 50.0, 75.0, 90.0, 95.0, 99.0}) {
        cal.velocity_percentiles[p] = quantile_sorted(sorted, p);
    }
    cal.velocity_percentiles[percentile] = cal.chosen_threshold_px_s;
    return cal;
}

RtWindow calibrate_rt_window(std::span<const std::int64_t> matched_rts_ms, double low_pct, double high_pct,
                             std::int64_t hard_cap_ms) {
    const RtWindow defaults{kDefaultRtMinMs, kDefaultRtMaxMs, true};
    if (matched_rts_ms.size() < kMinRtsForCalibration) return defaults;
    if (!(low_pct >= 0.0 && low_pct < high_pct && high_pct <= 100.0)) {
        throw Error(ErrorCode::InvalidParameter, "RT percentiles must satisfy 0 <= low < high <= 100");
    }
    std::vector<double> sorted(matched_rts_ms.begin(), matched_rts_ms.end());
    std::sort(sorted.begin(), sorted.end());
    RtWindow w;
    w.rt_min_ms = std::llround(quantile_sorted(sorted, low_pct));
    w.rt_max_ms = std::min(std::llround(quantile_sorted(sorted, high_pct)), static_cast<long long>(hard_cap_ms));
    if (w.rt_min_ms <= 0 || w.rt_min_ms >= w.rt_max_ms) return defaults;
    return w;
}

std::map<double, double> tolerance_sweep(std::span<const GazeSample> samples, int screen_w, int screen_h,
                                         std::span<const double> tolerances) {
    std::map<double, double> out;
    if (samples.empty()) return out;
    const std::vector<GazeSample> all(samples.begin(), samples.end());
    for (double tol : tolerances) {
        const auto kept = filter_bounds(all, screen_w, screen_h, tol).kept.size();
        out[tol] = static_cast<double>(kept) / static_cast<double>(all.size());
    }
    return out;
}

Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins) {
    Histogram h;
    if (bins == 0) return h;
    if (!(hi > lo)) hi = lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(bins);
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
    h.edges[bins] = hi;
    h.counts.assign(bins, 0);
    for (double v : values) {
        if (!(v >= lo && v <= hi)) continue;
        auto idx = static_cast<std::size_t>((v - lo) / width);
        if (idx >= bins) idx = bins - 1;
        ++h.counts[idx];
    }
    return h;
}

}  // namespace gazelab
