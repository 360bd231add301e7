#include <doctest.h>

#include "builders.hpp"
#include "gazelab/event_match.hpp"

using namespace gazelab;
using namespace gazelab::testing;

TEST_SUITE("event_match") {
    TEST_CASE("timeline pairs appear and disappear by id") {
        const std::vector<GameEvent> ev{appear(1000, "m1"), disappear(1800, "m1")};
        const auto tl = build_timeline(ev);
        REQUIRE(tl.episodes.size() == 1);
        CHECK(tl.episodes[0].duration_ms() == 800);
        CHECK(tl.unmatched_disappears == 0);
    }

    TEST_CASE("disappear without appear is dropped with a warning") {
        const std::vector<GameEvent> ev{disappear(500, "ghost")};
        const auto tl = build_timeline(ev);
        CHECK(tl.episodes.empty());
        CHECK(tl.unmatched_disappears == 1);
    }

    TEST_CASE("interleaved objects keep appear order") {
        const std::vector<GameEvent> ev{appear(100, "a"), appear(200, "b", ObjectType::BlueFlower),
                                        disappear(300, "a"), disappear(400, "b", ObjectType::BlueFlower),
                                        click(250)};
        const auto tl = build_timeline(ev);
        REQUIRE(tl.episodes.size() == 2);
        CHECK(tl.episodes[0].object_id == "a");
        CHECK(tl.episodes[1].object_id == "b");
        CHECK(tl.episodes[1].disappear_ms == 400);
        CHECK(tl.clicks.size() == 1);
        CHECK(target_episodes(tl).size() == 1);
    }

    TEST_CASE("anonymous objects pair first-in first-out per type") {
        GameEvent a1 = appear(100, "");
        a1.object_id.reset();
        GameEvent a2 = a1;
        a2.timestamp_ms = 200;
        GameEvent d1 = disappear(300, "");
        d1.object_id.reset();
        GameEvent d2 = d1;
        d2.timestamp_ms = 400;
        const std::vector<GameEvent> ev{a1, a2, d1, d2};
        const auto tl = build_timeline(ev);
        REQUIRE(tl.episodes.size() == 2);
        CHECK(tl.episodes[0].disappear_ms == 300);
        CHECK(tl.episodes[1].disappear_ms == 400);
        CHECK(tl.episodes[0].object_id != tl.episodes[1].object_id);
    }

    TEST_CASE("single candidate: too-early click leaves the target unmatched") {
        const std::vector<ObjectEpisode> t{target(1000)};
        const std::vector<GameEvent> c{click(1200), click(1600)};
        CHECK(match_responses(t, c, 522, 5000).empty());
        const auto scan = match_responses(t, c, 522, 5000, MatchStrategy::ScanForward);
        REQUIRE(scan.size() == 1);
        CHECK(scan[0].click.timestamp_ms == 1600);
        CHECK(scan[0].reaction_ms == 600);
    }

    TEST_CASE("greedy order") {
        const std::vector<ObjectEpisode> t{target(0), target(100)};
        const std::vector<GameEvent> c{click(700), click(800)};
        const auto m = match_responses(t, c, 522, 5000);
        REQUIRE(m.size() == 2);
        CHECK(m[0].target.appear_ms == 0);
        CHECK(m[0].reaction_ms == 700);
        CHECK(m[1].target.appear_ms == 100);
        CHECK(m[1].reaction_ms == 700);
    }

    TEST_CASE("click at the same instant as the appearance is not after it") {
        const std::vector<ObjectEpisode> t{target(1000)};
        const std::vector<GameEvent> c{click(1000), click(1600)};
        const auto m = match_responses(t, c, 1, 5000);
        REQUIRE(m.size() == 1);
        CHECK(m[0].click.timestamp_ms == 1600);
    }

    TEST_CASE("window bounds are inclusive") {
        const std::vector<ObjectEpisode> t{target(0), target(10000)};
        const std::vector<GameEvent> c{click(522), click(15000)};
        CHECK(match_responses(t, c, 522, 5000).size() == 2);
    }

    TEST_CASE("16 targets with 15 in-window clicks") {
        std::vector<ObjectEpisode> t;
        std::vector<GameEvent> c;
        for (int i = 0; i < 16; ++i) {
            t.push_back(target(i * 6000));
            if (i != 7) c.push_back(click(i * 6000 + 700));
        }
        CHECK(match_responses(t, c, 522, 5000).size() == 15);
    }

    TEST_CASE("input order does not matter") {
        std::vector<ObjectEpisode> t{target(300), target(0), target(100)};
        std::vector<GameEvent> c{click(1500, ClickLabel::Correct, 3), click(700, ClickLabel::Correct, 1),
                                 click(900, ClickLabel::Correct, 2)};
        const auto a = match_responses(t, c, 522, 5000);
        std::reverse(t.begin(), t.end());
        std::reverse(c.begin(), c.end());
        const auto b = match_responses(t, c, 522, 5000);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].target.object_id == b[i].target.object_id);
            CHECK(a[i].click == b[i].click);
        }
    }

    TEST_CASE("clicks_with_label filters") {
        const std::vector<GameEvent> ev{click(1, ClickLabel::Correct), click(2, ClickLabel::Incorrect),
                                        click(3, ClickLabel::Neutral), click(4, ClickLabel::Correct)};
        const auto tl = build_timeline(ev);
        CHECK(clicks_with_label(tl, ClickLabel::Correct).size() == 2);
        CHECK(clicks_with_label(tl, ClickLabel::Incorrect).size() == 1);
    }
}
