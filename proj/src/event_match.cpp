#include "gazelab/event_match.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace gazelab {

Timeline build_timeline(std::span<const GameEvent> events) {
    std::vector<GameEvent> sorted(events.begin(), events.end());
    std::stable_sort(sorted.begin(), sorted.end(), event_order_less);

    Timeline tl;
    std::map<std::string, std::size_t> open_by_id;
    std::map<ObjectType, std::deque<std::size_t>> open_anonymous;
    std::map<ObjectType, std::size_t> anonymous_counter;

    for (const auto& ev : sorted) {
        switch (ev.kind) {
            case EventKind::Appear: {
                ObjectEpisode ep;
                ep.object_type = ev.object_type;
                ep.appear_ms = ev.timestamp_ms;
                ep.position_px = ev.position_px;
                const std::size_t idx = tl.episodes.size();
                if (ev.object_id) {
                    ep.object_id = *ev.object_id;
                    auto [it, inserted] = open_by_id.insert_or_assign(*ev.object_id, idx);
                    if (!inserted) ++tl.reopened_objects;
                } else {
                    ep.object_id = std::string(to_string(ev.object_type)) + "#" +
                                   std::to_string(++anonymous_counter[ev.object_type]);
                    open_anonymous[ev.object_type].push_back(idx);
                }
                tl.episodes.push_back(std::move(ep));
                break;
            }
            case EventKind::Disappear: {
                std::optional<std::size_t> idx;
                if (ev.object_id) {
                    if (auto it = open_by_id.find(*ev.object_id); it != open_by_id.end()) {
                        idx = it->second;
                        open_by_id.erase(it);
                    }
                } else if (auto& q = open_anonymous[ev.object_type]; !q.empty()) {
                    idx = q.front();
                    q.pop_front();
                }
                if (!idx) {
                    ++tl.unmatched_disappears;
                    break;
                }
                auto& ep = tl.episodes[*idx];
                ep.disappear_ms = ev.timestamp_ms;
                if (!ep.position_px) ep.position_px = ev.position_px;
                break;
            }
            case EventKind::Click:
                tl.clicks.push_back(ev);
                break;
        }
    }
    return tl;
}

namespace {

// "Next unused click at or after i" with path compression.
class UnusedIndex {
public:
    explicit UnusedIndex(std::size_t n) : next_(n + 1) { std::iota(next_.begin(), next_.end(), 0); }

    std::size_t find(std::size_t i) {
        std::size_t root = i;
        while (next_[root] != root) root = next_[root];
        while (next_[i] != root) {
            const std::size_t up = next_[i];
            next_[i] = root;
            i = up;
        }
        return root;
    }

    void consume(std::size_t i) { next_[i] = i + 1; }

private:
    std::vector<std::size_t> next_;
};

}  // namespace

std::vector<MatchedResponse> match_responses(std::span<const ObjectEpisode> targets,
                                             std::span<const GameEvent> clicks, TimestampMs rt_min_ms,
                                             TimestampMs rt_max_ms, MatchStrategy strategy) {
    std::vector<ObjectEpisode> ts(targets.begin(), targets.end());
    std::stable_sort(ts.begin(), ts.end(), [](const ObjectEpisode& a, const ObjectEpisode& b) {
        if (a.appear_ms != b.appear_ms) return a.appear_ms < b.appear_ms;
        return a.object_id < b.object_id;
    });
    std::vector<GameEvent> cs(clicks.begin(), clicks.end());
    std::stable_sort(cs.begin(), cs.end(), event_order_less);

    std::vector<TimestampMs> times(cs.size());
    std::transform(cs.begin(), cs.end(), times.begin(), [](const GameEvent& c) { return c.timestamp_ms; });

    const std::size_t n = cs.size();
    UnusedIndex unused(n);
    std::vector<MatchedResponse> out;

    for (const auto& t : ts) {
        std::size_t start = std::upper_bound(times.begin(), times.end(), t.appear_ms) - times.begin();
        if (strategy == MatchStrategy::ScanForward && rt_min_ms > 0) {
            start = std::lower_bound(times.begin() + static_cast<std::ptrdiff_t>(start), times.end(),
                                     t.appear_ms + rt_min_ms) -
                    times.begin();
        }
        const std::size_t c = unused.find(start);
        if (c >= n) continue;
        const TimestampMs rt = times[c] - t.appear_ms;
        if (rt >= rt_min_ms && rt <= rt_max_ms) {
            unused.consume(c);
            out.push_back(MatchedResponse{t, cs[c], rt});
        }
    }
    return out;
}

std::vector<ObjectEpisode> target_episodes(const Timeline& timeline) {
    std::vector<ObjectEpisode> out;
    for (const auto& ep : timeline.episodes) {
        if (is_target(ep.object_type)) out.push_back(ep);
    }
    return out;
}

std::vector<GameEvent> clicks_with_label(const Timeline& timeline, ClickLabel label) {
    std::vector<GameEvent> out;
    for (const auto& c : timeline.clicks) {
        if (c.click_label == label) out.push_back(c);
    }
    return out;
}

}  // namespace gazelab
