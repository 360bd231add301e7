#include "gazelab/types.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "gazelab/error.hpp"

namespace gazelab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedCoordinate: return "MalformedCoordinate";
        case ErrorCode::FileUnreadable: return "FileUnreadable";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::EmptyAfterCleaning: return "EmptyAfterCleaning";
        case ErrorCode::DuplicateLevel: return "DuplicateLevel";
        case ErrorCode::MixedStudents: return "MixedStudents";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::EmptyAfterOutlierRemoval: return "EmptyAfterOutlierRemoval";
        case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
        case ErrorCode::NoClassifiedSamples: return "NoClassifiedSamples";
        case ErrorCode::EmptySession: return "EmptySession";
        case ErrorCode::IncompleteAnalysis: return "IncompleteAnalysis";
        case ErrorCode::UnknownChart: return "UnknownChart";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Appear: return "appear";
        case EventKind::Disappear: return "disappear";
        case EventKind::Click: return "click";
    }
    return "click";
}

std::string_view to_string(ObjectType type) {
    switch (type) {
        case ObjectType::MushroomTarget: return "mushroom_target";
        case ObjectType::BlueFlower: return "blue_flower";
        case ObjectType::YellowPurpleFlower: return "yellow_purple_flower";
        case ObjectType::Unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string(ClickLabel label) {
    switch (label) {
        case ClickLabel::Correct: return "correct";
        case ClickLabel::Incorrect: return "incorrect";
        case ClickLabel::Neutral: return "neutral";
    }
    return "neutral";
}

namespace {

// Lowercase, trimmed, with spaces/dashes/slashes folded to underscores.
std::string normalize_token(std::string_view text) {
    auto b = text.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = text.find_last_not_of(" \t");
    std::string out;
    for (char c : text.substr(b, e - b + 1)) {
        if (c == ' ' || c == '-' || c == '/') {
            if (out.empty() || out.back() != '_') out.push_back('_');
        } else {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

}  // namespace

std::optional<EventKind> parse_event_kind(std::string_view text) {
    auto t = normalize_token(text);
    if (t == "appear" || t == "appeared" || t == "spawn" || t == "show") return EventKind::Appear;
    if (t == "disappear" || t == "disappeared" || t == "despawn" || t == "hide") return EventKind::Disappear;
    if (t == "click" || t == "clicked" || t == "touch" || t == "tap") return EventKind::Click;
    return std::nullopt;
}

ObjectType parse_object_type(std::string_view text) {
    auto t = normalize_token(text);
    if (t == "mushroom_target" || t == "mushroom" || t == "target") return ObjectType::MushroomTarget;
    if (t == "blue_flower" || t == "blueflower") return ObjectType::BlueFlower;
    if (t == "yellow_purple_flower" || t == "yellow_flower" || t == "purple_flower" ||
        t == "yellowpurpleflower") {
        return ObjectType::YellowPurpleFlower;
    }
    return ObjectType::Unknown;
}

std::optional<ClickLabel> parse_click_label(std::string_view text) {
    auto t = normalize_token(text);
    if (t == "correct") return ClickLabel::Correct;
    if (t == "incorrect" || t == "wrong") return ClickLabel::Incorrect;
    if (t == "neutral") return ClickLabel::Neutral;
    return std::nullopt;
}

bool event_order_less(const GameEvent& a, const GameEvent& b) {
    return std::tuple(a.timestamp_ms, static_cast<int>(a.kind), a.line_number) <
           std::tuple(b.timestamp_ms, static_cast<int>(b.kind), b.line_number);
}

}  // namespace gazelab
