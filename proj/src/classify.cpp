#include "gazelab/classify.hpp"

#include <algorithm>
#include <cmath>

#include "gazelab/error.hpp"

namespace gazelab {

std::string_view to_string(Movement m) {
    switch (m) {
        case Movement::Fixation: return "fixation";
        case Movement::Saccade: return "saccade";
        case Movement::Unclassified: return "unclassified";
    }
    return "unclassified";
}

double point_velocity(const GazeSample& prev, const GazeSample& cur) {
    const double dx = cur.x_px - prev.x_px;
    const double dy = cur.y_px - prev.y_px;
    const double dt_s = static_cast<double>(cur.timestamp_ms - prev.timestamp_ms) / 1000.0;
    return std::sqrt(dx * dx + dy * dy) / dt_s;
}

std::vector<ClassifiedSample> classify_ivt(std::span<const GazeSample> samples, double v_thresh_px_s) {
    std::vector<ClassifiedSample> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        ClassifiedSample cs{samples[i], std::nullopt, Movement::Unclassified};
        if (i > 0) {
            if (samples[i].timestamp_ms <= samples[i - 1].timestamp_ms) {
                throw Error(ErrorCode::NonMonotonicTimestamps,
                            "sample " + std::to_string(i) + " at " + std::to_string(samples[i].timestamp_ms) +
                                " ms does not follow " + std::to_string(samples[i - 1].timestamp_ms) + " ms");
            }
            const double v = point_velocity(samples[i - 1], samples[i]);
            cs.velocity_px_s = v;
            cs.movement = v <= v_thresh_px_s ? Movement::Fixation : Movement::Saccade;
        }
        out.push_back(cs);
    }
    return out;
}

std::vector<FixationEvent> merge_fixations(std::span<const ClassifiedSample> classified,
                                           TimestampMs min_duration_ms) {
    std::vector<FixationEvent> events;
    std::size_t i = 0;
    while (i < classified.size()) {
        if (classified[i].movement != Movement::Fixation) {
            ++i;
            continue;
        }
        std::size_t j = i;
        double sx = 0.0, sy = 0.0;
        while (j < classified.size() && classified[j].movement == Movement::Fixation) {
            sx += classified[j].sample.x_px;
            sy += classified[j].sample.y_px;
            ++j;
        }
        FixationEvent ev;
        ev.start_ms = classified[i].sample.timestamp_ms;
        ev.end_ms = classified[j - 1].sample.timestamp_ms;
        ev.duration_ms = ev.end_ms - ev.start_ms;
        ev.sample_count = j - i;
        ev.centroid_px = Point{sx / static_cast<double>(ev.sample_count), sy / static_cast<double>(ev.sample_count)};
        if (ev.duration_ms >= min_duration_ms) events.push_back(ev);
        i = j;
    }
    return events;
}

SpatialMetrics spatial_metrics(std::span<const GazeSample> samples, std::span<const double> velocities,
                               int screen_w, int screen_h, int grid_cols, int grid_rows) {
    if (grid_cols < 1 || grid_rows < 1 || screen_w < 1 || screen_h < 1) {
        throw Error(ErrorCode::InvalidParameter, "grid and screen dimensions must be positive");
    }
    SpatialMetrics m;
    m.heatmap = Grid{grid_rows, grid_cols, std::vector<double>(static_cast<std::size_t>(grid_rows) * grid_cols, 0.0)};

    const double cell_w = static_cast<double>(screen_w) / grid_cols;
    const double cell_h = static_cast<double>(screen_h) / grid_rows;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (i > 0) m.path_length_px += std::hypot(s.x_px - samples[i - 1].x_px, s.y_px - samples[i - 1].y_px);
        const int c = std::clamp(static_cast<int>(std::floor(s.x_px / cell_w)), 0, grid_cols - 1);
        const int r = std::clamp(static_cast<int>(std::floor(s.y_px / cell_h)), 0, grid_rows - 1);
        m.heatmap.at(r, c) += 1.0;
    }
    const auto covered = std::count_if(m.heatmap.cells.begin(), m.heatmap.cells.end(), [](double v) { return v > 0.0; });
    m.screen_utilization = static_cast<double>(covered) / static_cast<double>(m.heatmap.cells.size());

    if (!velocities.empty()) {
        double sum = 0.0;
        for (double v : velocities) {
            sum += v;
            m.peak_velocity_px_s = std::max(m.peak_velocity_px_s, v);
        }
        m.mean_velocity_px_s = sum / static_cast<double>(velocities.size());
    }
    return m;
}

std::vector<double> classified_velocities(std::span<const ClassifiedSample> classified) {
    std::vector<double> out;
    out.reserve(classified.size());
    for (const auto& c : classified) {
        if (c.velocity_px_s) out.push_back(*c.velocity_px_s);
    }
    return out;
}

MovementCounts count_movements(std::span<const ClassifiedSample> classified) {
    MovementCounts counts;
    for (const auto& c : classified) {
        if (c.movement == Movement::Fixation) ++counts.fixations;
        if (c.movement == Movement::Saccade) ++counts.saccades;
    }
    return counts;
}

double fixation_rate(std::span<const ClassifiedSample> classified) {
    const auto counts = count_movements(classified);
    if (counts.classified() == 0) throw Error(ErrorCode::NoClassifiedSamples, "no classified samples");
    return static_cast<double>(counts.fixations) / static_cast<double>(counts.classified());
}

}  // namespace gazelab
