#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "gazelab/error.hpp"
#include "gazelab/types.hpp"

namespace gazelab {

/// Binds the logical log columns to the header names of a concrete export.
/// timestamp, gaze and event are required; the rest are optional and an
/// empty name means "not present in this export".
struct ColumnMapping {
    std::string timestamp = "timestamp_ms";
    std::string gaze = "gaze";
    std::string event_kind = "event_kind";
    std::string object_id = "object_id";
    std::string object_type = "object_type";
    std::string object_pos = "object_pos";
    std::string click_label = "click_label";
};

/// Loader failure that keeps the row-level diagnostics collected so far.
class IngestError : public Error {
public:
    IngestError(ErrorCode code, const std::string& message, std::vector<RowIssue> issues)
        : Error(code, message), issues_(std::move(issues)) {}

    const std::vector<RowIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<RowIssue> issues_;
};

struct ScreenSize {
    int width = 1920;
    int height = 1080;
};

/// Parses "(x, y)". Whitespace around tokens is allowed, as are signs and
/// decimals. Throws Error{MalformedCoordinate}.
Point parse_coordinate(std::string_view text);

/// Formats a point in the grammar accepted by parse_coordinate, shortest
/// representation that round-trips.
std::string format_coordinate(Point p);

struct LoadOptions {
    ColumnMapping columns;
    ScreenSize screen;
    int level = 1;
    std::string student_id = "student";
};

/// Loads one level's log. Rows with missing, zero or malformed gaze and rows
/// repeating an earlier sample timestamp are dropped and counted; rows that
/// carry only an event are kept as events. Timestamps are shifted so the
/// first retained sample sits at 0 ms. Missing click labels are derived from
/// object visibility.
SessionRecord load_level_csv(std::istream& in, const LoadOptions& options);
SessionRecord load_level_csv_text(std::string_view text, const LoadOptions& options);
SessionRecord load_level_file(const std::filesystem::path& path, const LoadOptions& options);

struct BoundsFilterResult {
    std::vector<GazeSample> kept;
    std::size_t dropped = 0;
};

/// Keeps samples inside the closed box [-tol, w+tol] x [-tol, h+tol].
BoundsFilterResult filter_bounds(const std::vector<GazeSample>& samples, int screen_w, int screen_h,
                                 double tol_px);

/// Fills absent click labels: correct while a target is visible, incorrect
/// while only distractors are, neutral otherwise. Events must be sorted.
void derive_click_labels(std::vector<GameEvent>& events);

CombinedDataset merge_levels(std::vector<SessionRecord> records);

}  // namespace gazelab
