#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazelab {

using TimestampMs = std::int64_t;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

struct GazeSample {
    TimestampMs timestamp_ms = 0;
    double x_px = 0.0;
    double y_px = 0.0;

    friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

enum class EventKind { Appear, Disappear, Click };

enum class ObjectType { MushroomTarget, BlueFlower, YellowPurpleFlower, Unknown };

enum class ClickLabel { Correct, Incorrect, Neutral };

std::string_view to_string(EventKind kind);
std::string_view to_string(ObjectType type);
std::string_view to_string(ClickLabel label);

// Lenient, case-insensitive parsers for the text found in game logs.
std::optional<EventKind> parse_event_kind(std::string_view text);
ObjectType parse_object_type(std::string_view text);
std::optional<ClickLabel> parse_click_label(std::string_view text);

inline bool is_target(ObjectType t) { return t == ObjectType::MushroomTarget; }
inline bool is_distractor(ObjectType t) {
    return t == ObjectType::BlueFlower || t == ObjectType::YellowPurpleFlower;
}

struct GameEvent {
    TimestampMs timestamp_ms = 0;
    EventKind kind = EventKind::Click;
    std::optional<std::string> object_id;
    ObjectType object_type = ObjectType::Unknown;
    std::optional<Point> position_px;
    std::optional<ClickLabel> click_label;
    /// Source line (1-based, header is line 1); final tie-breaker for ordering.
    std::int64_t line_number = 0;

    friend bool operator==(const GameEvent&, const GameEvent&) = default;
};

/// Canonical event order: timestamp, then appear < disappear < click, then line.
bool event_order_less(const GameEvent& a, const GameEvent& b);

struct RowIssue {
    std::int64_t line_number = 0;
    std::string reason;
};

struct SessionRecord {
    std::string student_id;
    int level = 1;
    int screen_w = 1920;
    int screen_h = 1080;
    std::vector<GazeSample> samples;
    std::vector<GameEvent> events;
    std::int64_t rows_total = 0;
    std::int64_t rows_dropped = 0;
    std::int64_t event_only_rows = 0;
    /// Raw timestamp subtracted during normalization.
    TimestampMs time_origin_ms = 0;
    std::vector<RowIssue> issues;
};

struct CombinedDataset {
    std::string student_id;
    std::map<int, SessionRecord> levels;
};

}  // namespace gazelab
