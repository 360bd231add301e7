#include "gazelab/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gazelab/csv.hpp"
#include "gazelab/error.hpp"

namespace gazelab {

namespace {

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view token) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    if (token.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<TimestampMs> parse_timestamp(std::string_view text) {
    auto value = parse_number(text);
    if (!value) return std::nullopt;
    return static_cast<TimestampMs>(std::llround(*value));
}

struct BoundColumns {
    std::size_t timestamp;
    std::size_t gaze;
    std::size_t event_kind;
    std::optional<std::size_t> object_id;
    std::optional<std::size_t> object_type;
    std::optional<std::size_t> object_pos;
    std::optional<std::size_t> click_label;
};

BoundColumns bind_columns(const csv::Table& table, const ColumnMapping& m) {
    auto required = [&](const std::string& name) {
        auto idx = name.empty() ? std::nullopt : table.column(name);
        if (!idx) throw Error(ErrorCode::MissingColumn, name.empty() ? "<unmapped>" : name);
        return *idx;
    };
    auto optional = [&](const std::string& name) -> std::optional<std::size_t> {
        if (name.empty()) return std::nullopt;
        return table.column(name);
    };
    return BoundColumns{required(m.timestamp), required(m.gaze),         required(m.event_kind),
                        optional(m.object_id), optional(m.object_type),  optional(m.object_pos),
                        optional(m.click_label)};
}

std::string_view field(const csv::Row& row, std::optional<std::size_t> idx) {
    if (!idx || *idx >= row.fields.size()) return {};
    return trim(row.fields[*idx]);
}

// Parses the event columns of one row. Returns nullopt with a reason when the
// row names an event that cannot be used.
std::optional<GameEvent> parse_event(const csv::Row& row, const BoundColumns& cols, TimestampMs ts,
                                     std::string& reason) {
    auto kind_text = field(row, cols.event_kind);
    auto kind = parse_event_kind(kind_text);
    if (!kind) {
        reason = "unknown event kind '" + std::string(kind_text) + "'";
        return std::nullopt;
    }
    GameEvent ev;
    ev.timestamp_ms = ts;
    ev.kind = *kind;
    ev.line_number = row.line_number;
    if (auto id = field(row, cols.object_id); !id.empty()) ev.object_id = std::string(id);
    ev.object_type = parse_object_type(field(row, cols.object_type));
    if (auto pos = field(row, cols.object_pos); !pos.empty()) {
        try {
            ev.position_px = parse_coordinate(pos);
        } catch (const Error&) {
            reason = "malformed object position";
            return std::nullopt;
        }
    }
    if (auto label = field(row, cols.click_label); !label.empty()) {
        ev.click_label = parse_click_label(label);
        if (!ev.click_label) {
            reason = "unknown click label '" + std::string(label) + "'";
            return std::nullopt;
        }
    }
    if (ev.kind != EventKind::Click) {
        ev.click_label.reset();
        if (ev.object_type == ObjectType::Unknown) {
            reason = "appear/disappear without a known object type";
            return std::nullopt;
        }
    }
    return ev;
}

}  // namespace

Point parse_coordinate(std::string_view text) {
    auto t = trim(text);
    if (t.size() < 2 || t.front() != '(' || t.back() != ')') {
        throw Error(ErrorCode::MalformedCoordinate, "expected '(x, y)', got '" + std::string(text) + "'");
    }
    auto inner = t.substr(1, t.size() - 2);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos || inner.find(',', comma + 1) != std::string_view::npos) {
        throw Error(ErrorCode::MalformedCoordinate, "expected two components in '" + std::string(text) + "'");
    }
    auto x = parse_number(inner.substr(0, comma));
    auto y = parse_number(inner.substr(comma + 1));
    if (!x || !y) {
        throw Error(ErrorCode::MalformedCoordinate, "non-numeric component in '" + std::string(text) + "'");
    }
    return Point{*x, *y};
}

std::string format_coordinate(Point p) {
    char buf[64];
    std::string out = "(";
    auto r = std::to_chars(buf, buf + sizeof buf, p.x);
    out.append(buf, r.ptr);
    out += ", ";
    r = std::to_chars(buf, buf + sizeof buf, p.y);
    out.append(buf, r.ptr);
    out += ")";
    return out;
}

SessionRecord load_level_csv(std::istream& in, const LoadOptions& options) {
    if (options.level < 1 || options.level > 3) {
        throw Error(ErrorCode::InvalidParameter, "level must be 1, 2 or 3");
    }
    if (options.screen.width < 1 || options.screen.height < 1) {
        throw Error(ErrorCode::InvalidParameter, "screen dimensions must be positive");
    }
    const csv::Table table = csv::read(in);
    if (table.header.empty()) throw Error(ErrorCode::MissingColumn, "no header row");
    const BoundColumns cols = bind_columns(table, options.columns);

    SessionRecord rec;
    rec.student_id = options.student_id;
    rec.level = options.level;
    rec.screen_w = options.screen.width;
    rec.screen_h = options.screen.height;

    auto drop = [&](const csv::Row& row, std::string reason) {
        ++rec.rows_dropped;
        rec.issues.push_back(RowIssue{row.line_number, std::move(reason)});
    };

    for (const auto& row : table.rows) {
        ++rec.rows_total;
        auto ts = parse_timestamp(field(row, cols.timestamp));
        if (!ts) {
            drop(row, "malformed timestamp");
            continue;
        }

        std::optional<GameEvent> event;
        std::string event_problem;
        if (!field(row, cols.event_kind).empty()) {
            event = parse_event(row, cols, *ts, event_problem);
        }

        std::optional<GazeSample> sample;
        std::string gaze_problem;
        auto gaze_text = field(row, cols.gaze);
        if (gaze_text.empty()) {
            gaze_problem = "missing gaze";
        } else {
            try {
                Point p = parse_coordinate(gaze_text);
                if (p.x == 0.0 && p.y == 0.0) {
                    gaze_problem = "zero coordinate";
                } else if (!rec.samples.empty() && *ts <= rec.samples.back().timestamp_ms) {
                    gaze_problem = *ts == rec.samples.back().timestamp_ms ? "duplicate timestamp"
                                                                          : "timestamp out of order";
                } else {
                    sample = GazeSample{*ts, p.x, p.y};
                }
            } catch (const Error& e) {
                gaze_problem = "malformed gaze";
            }
        }

        if (sample) {
            rec.samples.push_back(*sample);
            if (event) {
                rec.events.push_back(std::move(*event));
            } else if (!event_problem.empty()) {
                rec.issues.push_back(RowIssue{row.line_number, "event ignored: " + event_problem});
            }
        } else if (event) {
            ++rec.event_only_rows;
            if (!gaze_text.empty()) {
                rec.issues.push_back(RowIssue{row.line_number, "gaze ignored: " + gaze_problem});
            }
            rec.events.push_back(std::move(*event));
        } else {
            drop(row, event_problem.empty() ? gaze_problem : gaze_problem + "; " + event_problem);
        }
    }

    if (rec.samples.empty()) {
        throw IngestError(ErrorCode::EmptyAfterCleaning,
                          "no valid gaze samples among " + std::to_string(rec.rows_total) + " rows",
                          std::move(rec.issues));
    }

    rec.time_origin_ms = rec.samples.front().timestamp_ms;
    for (auto& s : rec.samples) s.timestamp_ms -= rec.time_origin_ms;
    for (auto& e : rec.events) e.timestamp_ms -= rec.time_origin_ms;
    std::stable_sort(rec.events.begin(), rec.events.end(), event_order_less);
    derive_click_labels(rec.events);
    return rec;
}

SessionRecord load_level_csv_text(std::string_view text, const LoadOptions& options) {
    std::istringstream in{std::string(text)};
    return load_level_csv(in, options);
}

SessionRecord load_level_file(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, path.string());
    return load_level_csv(in, options);
}

BoundsFilterResult filter_bounds(const std::vector<GazeSample>& samples, int screen_w, int screen_h,
                                 double tol_px) {
    if (!(tol_px >= 0.0)) throw Error(ErrorCode::InvalidParameter, "bounds tolerance must be >= 0");
    BoundsFilterResult out;
    out.kept.reserve(samples.size());
    const double x_hi = screen_w + tol_px;
    const double y_hi = screen_h + tol_px;
    for (const auto& s : samples) {
        if (s.x_px >= -tol_px && s.x_px <= x_hi && s.y_px >= -tol_px && s.y_px <= y_hi) {
            out.kept.push_back(s);
        } else {
            ++out.dropped;
        }
    }
    return out;
}

void derive_click_labels(std::vector<GameEvent>& events) {
    std::map<std::string, ObjectType> visible_by_id;
    std::map<ObjectType, int> anonymous_visible;

    for (auto& ev : events) {
        switch (ev.kind) {
            case EventKind::Appear:
                if (ev.object_id) {
                    visible_by_id[*ev.object_id] = ev.object_type;
                } else {
                    ++anonymous_visible[ev.object_type];
                }
                break;
            case EventKind::Disappear:
                if (ev.object_id) {
                    visible_by_id.erase(*ev.object_id);
                } else if (anonymous_visible[ev.object_type] > 0) {
                    --anonymous_visible[ev.object_type];
                }
                break;
            case EventKind::Click: {
                if (ev.click_label) break;
                bool target = anonymous_visible[ObjectType::MushroomTarget] > 0;
                bool distractor = anonymous_visible[ObjectType::BlueFlower] > 0 ||
                                  anonymous_visible[ObjectType::YellowPurpleFlower] > 0;
                for (const auto& [id, type] : visible_by_id) {
                    target = target || is_target(type);
                    distractor = distractor || is_distractor(type);
                }
                ev.click_label = target       ? ClickLabel::Correct
                                 : distractor ? ClickLabel::Incorrect
                                              : ClickLabel::Neutral;
                break;
            }
        }
    }
}

CombinedDataset merge_levels(std::vector<SessionRecord> records) {
    CombinedDataset out;
    for (auto& rec : records) {
        if (out.levels.empty()) {
            out.student_id = rec.student_id;
        } else if (rec.student_id != out.student_id) {
            throw Error(ErrorCode::MixedStudents, "'" + out.student_id + "' vs '" + rec.student_id + "'");
        }
        int level = rec.level;
        if (!out.levels.emplace(level, std::move(rec)).second) {
            throw Error(ErrorCode::DuplicateLevel, "level " + std::to_string(level) + " given twice");
        }
    }
    return out;
}

}  // namespace gazelab
