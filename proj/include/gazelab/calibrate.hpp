#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gazelab/types.hpp"

namespace gazelab {

/// Linear interpolation between closest ranks: h = (n-1)·p/100 on the
/// sorted data. Input need not be sorted. percentile in [0, 100].
double quantile(std::span<const double> values, double percentile);
double quantile_sorted(std::span<const double> sorted, double percentile);

struct VelocityDistribution {
    std::vector<double> velocities;
    std::size_t non_finite_excluded = 0;
};

/// n-1 point-to-point velocities. Needs >= 2 samples with strictly
/// increasing timestamps (TooFewSamples / NonMonotonicTimestamps).
VelocityDistribution velocity_distribution(std::span<const GazeSample> samples);

struct VelocityCalibration {
    double percentile = 75.0;
    double outlier_cut_percentile = 99.5;
    double outlier_cut_px_s = 0.0;
    std::size_t input_count = 0;
    std::size_t trimmed_count = 0;  // values remaining after the outlier trim
    double chosen_threshold_px_s = 0.0;
    double fixation_fraction_at_threshold = 0.0;
    std::map<double, double> velocity_percentiles;  // on the trimmed set
};

/// Drops non-finite values and everything above the outlier-cut percentile
/// (100 disables the trim), then picks the requested percentile.
VelocityCalibration calibrate_velocity_threshold(std::span<const double> velocities, double percentile = 75.0,
                                                 double outlier_cut_percentile = 99.5);

struct RtWindow {
    std::int64_t rt_min_ms = 522;
    std::int64_t rt_max_ms = 5000;
    bool fallback = false;

    friend bool operator==(const RtWindow&, const RtWindow&) = default;
};

inline constexpr std::int64_t kDefaultRtMinMs = 522;
inline constexpr std::int64_t kDefaultRtMaxMs = 5000;
inline constexpr std::size_t kMinRtsForCalibration = 10;

RtWindow calibrate_rt_window(std::span<const std::int64_t> matched_rts_ms, double low_pct = 2.5,
                             double high_pct = 97.5, std::int64_t hard_cap_ms = kDefaultRtMaxMs);

/// Fraction of samples surviving the bounds filter, per tolerance.
std::map<double, double> tolerance_sweep(std::span<const GazeSample> samples, int screen_w, int screen_h,
                                         std::span<const double> tolerances);

struct Histogram {
    std::vector<double> edges;  // bins + 1 entries
    std::vector<std::size_t> counts;
};

/// Equal-width bins over [lo, hi]; values outside are ignored, the last bin
/// is closed on the right.
Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins);

struct CalibrationReport {
    std::string scope;  // "level N" or "pooled"
    VelocityCalibration velocity;
    RtWindow rt_window;
    std::size_t rt_count = 0;
    std::map<double, double> retention_by_tolerance;
    Histogram velocity_histogram;
};

}  // namespace gazelab
