#pragma once

#include <map>
#include <vector>

#include "gazelab/calibrate.hpp"
#include "gazelab/classify.hpp"
#include "gazelab/event_match.hpp"
#include "gazelab/metrics.hpp"
#include "gazelab/params.hpp"
#include "gazelab/types.hpp"

namespace gazelab {

struct SessionAnalysis {
    int level = 0;
    int screen_w = 0;
    int screen_h = 0;
    AnalysisParams params;
    std::vector<GazeSample> samples;  // bounds-filtered
    std::size_t samples_out_of_bounds = 0;
    std::vector<ClassifiedSample> classified;
    std::vector<FixationEvent> fixations;
    Timeline timeline;
    std::vector<MatchedResponse> matches;
    LevelMetrics metrics;
};

/// Bounds filter, I-VT, fixation merge, timeline, matching and metrics for
/// one level, all under the given parameters.
SessionAnalysis analyze_session(const SessionRecord& session, const AnalysisParams& params);

struct DatasetAnalysis {
    std::string student_id;
    AnalysisParams params;
    RuleTable rules;
    std::vector<SessionAnalysis> levels;  // sorted by level
    MultilevelComparison comparison;
    std::vector<Recommendation> recommendations;
};

DatasetAnalysis analyze_dataset(const CombinedDataset& dataset, const AnalysisParams& params,
                                const RuleTable& rules = {}, double flat_tolerance = 0.05);

struct CalibrationOptions {
    double velocity_percentile = 75.0;
    double outlier_cut_percentile = 99.5;
    double rt_low_pct = 2.5;
    double rt_high_pct = 97.5;
    std::int64_t rt_hard_cap_ms = kDefaultRtMaxMs;
    std::vector<double> tolerances{0.0, 10.0, 25.0, 50.0, 100.0, 200.0};
    std::size_t histogram_bins = 60;
};

struct DatasetCalibration {
    std::map<int, CalibrationReport> per_level;
    CalibrationReport pooled;
    AnalysisParams suggested;  // base params with the pooled threshold and RT window applied
};

/// Data-driven suggestions; never alters an analysis by itself. Candidate
/// reaction times for the RT window come from matching with the widest
/// admissible window (1 ms to the hard cap).
DatasetCalibration calibrate_dataset(const CombinedDataset& dataset, const AnalysisParams& base,
                                     const CalibrationOptions& options = {});

}  // namespace gazelab
