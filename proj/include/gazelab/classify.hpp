#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gazelab/types.hpp"

namespace gazelab {

enum class Movement { Unclassified, Fixation, Saccade };

std::string_view to_string(Movement m);

struct ClassifiedSample {
    GazeSample sample;
    std::optional<double> velocity_px_s;  // empty for the first sample
    Movement movement = Movement::Unclassified;
};

/// Point-to-point velocity in px/s between two samples.
double point_velocity(const GazeSample& prev, const GazeSample& cur);

/// Velocity-threshold identification. The first sample has no predecessor and
/// stays unclassified; every other sample is a fixation when its velocity is
/// at or below the threshold (inclusive) and a saccade otherwise.
/// Throws NonMonotonicTimestamps unless timestamps strictly increase.
std::vector<ClassifiedSample> classify_ivt(std::span<const GazeSample> samples, double v_thresh_px_s);

struct FixationEvent {
    TimestampMs start_ms = 0;
    TimestampMs end_ms = 0;
    TimestampMs duration_ms = 0;
    Point centroid_px;
    std::size_t sample_count = 0;
};

/// Collapses maximal runs of fixation samples into events, discarding runs
/// shorter than min_duration_ms.
std::vector<FixationEvent> merge_fixations(std::span<const ClassifiedSample> classified,
                                           TimestampMs min_duration_ms = 0);

struct Grid {
    int rows = 0;
    int cols = 0;
    std::vector<double> cells;  // row-major

    double at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return cells[static_cast<std::size_t>(r) * cols + c]; }
};

struct SpatialMetrics {
    double path_length_px = 0.0;
    double screen_utilization = 0.0;
    Grid heatmap;
    double peak_velocity_px_s = 0.0;
    double mean_velocity_px_s = 0.0;
};

/// Path length, grid coverage and velocity summary. Samples outside the
/// screen are clamped into the edge cells, so every sample is counted once.
SpatialMetrics spatial_metrics(std::span<const GazeSample> samples, std::span<const double> velocities,
                               int screen_w, int screen_h, int grid_cols, int grid_rows);

/// Velocities of all classified samples, in order.
std::vector<double> classified_velocities(std::span<const ClassifiedSample> classified);

struct MovementCounts {
    std::size_t fixations = 0;
    std::size_t saccades = 0;
    std::size_t classified() const { return fixations + saccades; }
};

MovementCounts count_movements(std::span<const ClassifiedSample> classified);

/// Fixation share among classified samples. Throws NoClassifiedSamples.
double fixation_rate(std::span<const ClassifiedSample> classified);

}  // namespace gazelab
