#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gazelab/classify.hpp"
#include "gazelab/metrics.hpp"
#include "gazelab/pipeline.hpp"
#include "gazelab/serialize.hpp"

namespace gazelab {

// ---- chart series -------------------------------------------------------

struct TimelineBar {
    std::string object_id;
    ObjectType object_type = ObjectType::Unknown;
    TimestampMs appear_ms = 0;
    std::optional<TimestampMs> disappear_ms;
};

struct ClickMarker {
    TimestampMs timestamp_ms = 0;
    ClickLabel label = ClickLabel::Neutral;
    std::optional<Point> position_px;
};

struct MatchAnnotation {
    std::string target_id;
    TimestampMs appear_ms = 0;
    TimestampMs click_ms = 0;
    TimestampMs rt_ms = 0;
};

struct TimelineSeries {
    TimestampMs end_ms = 0;
    std::vector<TimelineBar> bars;
    std::vector<ClickMarker> clicks;
    std::vector<MatchAnnotation> matches;
};

struct ScanpathPoint {
    TimestampMs timestamp_ms = 0;
    double x = 0.0;
    double y = 0.0;
    Movement movement = Movement::Unclassified;
};

struct ScanpathSeries {
    int screen_w = 0;
    int screen_h = 0;
    std::vector<ScanpathPoint> points;  // every analysed sample in time order
    std::vector<FixationEvent> fixation_events;
    std::vector<ClickMarker> clicks;    // clicks that carry a position
    Grid heatmap;                       // raw counts, canonical
    Grid heatmap_display;               // Gaussian-smoothed copy for display only
    double heatmap_sigma_cells = 1.5;
};

struct VelocityPoint {
    TimestampMs timestamp_ms = 0;
    double velocity_px_s = 0.0;
    Movement movement = Movement::Fixation;
};

struct MovementSpan {
    TimestampMs start_ms = 0;
    TimestampMs end_ms = 0;
    Movement movement = Movement::Fixation;
};

struct VelocitySeries {
    double threshold_px_s = 0.0;
    double peak_px_s = 0.0;
    double mean_px_s = 0.0;
    std::vector<VelocityPoint> points;
    std::vector<MovementSpan> spans;
    std::vector<ClickMarker> clicks;
};

struct DashboardSeries {
    std::size_t hits = 0;
    std::size_t misses = 0;
    double hit_share = 0.0;
    double miss_share = 0.0;
    TimestampMs rt_bin_ms = 50;
    std::vector<TimestampMs> rt_bin_edges;
    std::vector<std::size_t> rt_bin_counts;
    double mean_rt_ms = 0.0;
    std::size_t fixations = 0;
    std::size_t saccades = 0;
    double fixation_share = 0.0;
    double saccade_share = 0.0;
};

struct MultilevelSeries {
    std::vector<int> levels;
    std::vector<double> success_rate;
    std::vector<double> mean_rt_ms;
    std::vector<double> screen_utilization;
    std::vector<double> mistakes;
};

struct ChartBundle {
    int level = 0;
    TimelineSeries timeline;
    ScanpathSeries scanpath;
    VelocitySeries velocity;
    DashboardSeries dashboard;
    std::optional<MultilevelSeries> multilevel;  // omitted with fewer than two levels
};

struct ChartOptions {
    TimestampMs rt_bin_ms = 50;
    double heatmap_sigma_cells = 1.5;
};

/// Throws IncompleteAnalysis when the analysis has no classified samples.
ChartBundle build_chart_bundle(const SessionAnalysis& analysis, const MultilevelComparison& comparison,
                               const ChartOptions& options = {});

/// Separable Gaussian blur, truncated at 3 sigma. Kernel weights falling
/// off the grid are renormalised away, so the total count is preserved.
Grid gaussian_smooth(const Grid& grid, double sigma_cells);

Json to_json(const ChartBundle& bundle);

/// Chart ids accepted by render_svg.
const std::vector<std::string>& chart_ids();

/// Deterministic SVG 1.1 document. Throws UnknownChart for an unknown id and
/// IncompleteAnalysis for "multilevel" when the bundle omits it.
std::string render_svg(const ChartBundle& bundle, std::string_view chart_id);

// ---- tables -------------------------------------------------------------

enum class TableFormat { Csv, Json };

struct Document {
    std::string name;  // file name, e.g. "level_1.csv"
    std::string content;
};

/// One table per level, then the comparison table, then recommendations.
std::vector<Document> export_tables(const std::vector<LevelMetrics>& metrics, const MultilevelComparison& comparison,
                                    const std::vector<Recommendation>& recommendations, TableFormat format,
                                    const RuleTable& rules = {});

// ---- full run -----------------------------------------------------------

struct AnalysisOutputs {
    std::vector<Document> tables;
    std::vector<ChartBundle> bundles;  // one per level
    Json charts;                       // {"levels": {"1": bundle, ...}}
    std::vector<Document> svgs;        // "level_1_timeline.svg", ..., "multilevel.svg"
};

/// Tables, chart bundles and SVG snapshots for a whole dataset analysis.
AnalysisOutputs render_outputs(const DatasetAnalysis& analysis, TableFormat format, const ChartOptions& options = {});

}  // namespace gazelab
