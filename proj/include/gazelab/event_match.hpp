#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazelab/params.hpp"
#include "gazelab/types.hpp"

namespace gazelab {

struct ObjectEpisode {
    std::string object_id;  // synthesized as "<type>#<n>" when the log has none
    ObjectType object_type = ObjectType::Unknown;
    TimestampMs appear_ms = 0;
    std::optional<TimestampMs> disappear_ms;
    std::optional<Point> position_px;

    std::optional<TimestampMs> duration_ms() const {
        if (!disappear_ms) return std::nullopt;
        return *disappear_ms - appear_ms;
    }
};

struct Timeline {
    std::vector<ObjectEpisode> episodes;  // ordered by appear time
    std::vector<GameEvent> clicks;        // chronological
    std::size_t unmatched_disappears = 0;
    std::size_t reopened_objects = 0;     // appear for an id that was already visible
};

/// Joins appear/disappear pairs by object id, or by type in FIFO order when
/// ids are absent.
Timeline build_timeline(std::span<const GameEvent> events);

struct MatchedResponse {
    ObjectEpisode target;
    GameEvent click;
    TimestampMs reaction_ms = 0;
};

/// Greedy temporal matching of targets to clicks. Targets are taken in
/// appear order; a click can serve at most one target and must come strictly
/// after the target's appearance with a reaction time inside
/// [rt_min_ms, rt_max_ms]. Inputs are sorted internally.
std::vector<MatchedResponse> match_responses(std::span<const ObjectEpisode> targets,
                                             std::span<const GameEvent> clicks, TimestampMs rt_min_ms,
                                             TimestampMs rt_max_ms,
                                             MatchStrategy strategy = MatchStrategy::SingleCandidate);

std::vector<ObjectEpisode> target_episodes(const Timeline& timeline);
std::vector<GameEvent> clicks_with_label(const Timeline& timeline, ClickLabel label);

}  // namespace gazelab
