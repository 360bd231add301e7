#pragma once

// Small constructors shared by the unit and acceptance tests.

#include <string>
#include <vector>

#include "gazelab/csv.hpp"
#include "gazelab/event_match.hpp"
#include "gazelab/types.hpp"

namespace gazelab::testing {

inline GazeSample gs(TimestampMs t, double x, double y) { return GazeSample{t, x, y}; }

inline GameEvent appear(TimestampMs t, std::string id, ObjectType type = ObjectType::MushroomTarget) {
    GameEvent e;
    e.timestamp_ms = t;
    e.kind = EventKind::Appear;
    e.object_id = std::move(id);
    e.object_type = type;
    return e;
}

inline GameEvent disappear(TimestampMs t, std::string id, ObjectType type = ObjectType::MushroomTarget) {
    GameEvent e = appear(t, std::move(id), type);
    e.kind = EventKind::Disappear;
    return e;
}

inline GameEvent click(TimestampMs t, ClickLabel label = ClickLabel::Correct, std::int64_t line = 0) {
    GameEvent e;
    e.timestamp_ms = t;
    e.kind = EventKind::Click;
    e.click_label = label;
    e.line_number = line;
    return e;
}

inline ObjectEpisode target(TimestampMs t, std::string id = {}) {
    ObjectEpisode ep;
    ep.object_id = id.empty() ? "t@" + std::to_string(t) : std::move(id);
    ep.object_type = ObjectType::MushroomTarget;
    ep.appear_ms = t;
    return ep;
}

/// Builds a level CSV in the default column layout.
class CsvBuilder {
public:
    CsvBuilder() { lines_.push_back("timestamp_ms,gaze,event_kind,object_id,object_type,object_pos,click_label\n"); }

    CsvBuilder& sample(TimestampMs t, double x, double y) {
        return raw(std::to_string(t), "(" + num(x) + ", " + num(y) + ")");
    }

    CsvBuilder& raw(const std::string& t, const std::string& gaze, const std::string& kind = {},
                    const std::string& id = {}, const std::string& type = {}, const std::string& pos = {},
                    const std::string& label = {}) {
        lines_.push_back(csv::format_row({t, gaze, kind, id, type, pos, label}));
        return *this;
    }

    CsvBuilder& event(TimestampMs t, const std::string& kind, const std::string& id, const std::string& type,
                      const std::string& label = {}) {
        return raw(std::to_string(t), "", kind, id, type, "", label);
    }

    std::string str() const {
        std::string out;
        for (const auto& l : lines_) out += l;
        return out;
    }

    std::size_t rows() const { return lines_.size() - 1; }

private:
    static std::string num(double v) {
        std::string s = std::to_string(v);
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    std::vector<std::string> lines_;
};

}  // namespace gazelab::testing
