#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "builders.hpp"
#include "gazelab/csv.hpp"
#include "gazelab/ingest.hpp"

using namespace gazelab;
using gazelab::testing::CsvBuilder;

TEST_SUITE("ingest") {
    TEST_CASE("parse_coordinate accepts the log grammar") {
        CHECK(parse_coordinate("(1250, 680)") == Point{1250.0, 680.0});
        CHECK(parse_coordinate("(0, 0)") == Point{0.0, 0.0});
        CHECK(parse_coordinate("(12.5,-3)") == Point{12.5, -3.0});
        CHECK(parse_coordinate("  ( +4 ,  5.25 ) ") == Point{4.0, 5.25});
    }

    TEST_CASE("parse_coordinate rejects malformed text") {
        for (const char* bad : {"1250, 680", "(1250, 680", "(a, 1)", "(1, 2, 3)", "(1)", "()", "(1,)", "(nan, 1)"}) {
            CAPTURE(bad);
            CHECK_THROWS_AS(parse_coordinate(bad), Error);
            try {
                parse_coordinate(bad);
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::MalformedCoordinate);
            }
        }
    }

    TEST_CASE("format_coordinate round-trips") {
        for (Point p : {Point{1250, 680}, Point{0.1, -3.25}, Point{1e-7, 12345.678}}) {
            CHECK(parse_coordinate(format_coordinate(p)) == p);
        }
    }

    TEST_CASE("timestamps are normalized to the first retained sample") {
        CsvBuilder b;
        b.sample(5000, 10, 10).sample(5016, 11, 10).sample(5033, 12, 10);
        const auto rec = load_level_csv_text(b.str(), {});
        REQUIRE(rec.samples.size() == 3);
        CHECK(rec.samples[0].timestamp_ms == 0);
        CHECK(rec.samples[1].timestamp_ms == 16);
        CHECK(rec.samples[2].timestamp_ms == 33);
        CHECK(rec.time_origin_ms == 5000);
        CHECK(rec.rows_total == 3);
        CHECK(rec.rows_dropped == 0);
    }

    TEST_CASE("invalid gaze rows are dropped and counted") {
        CsvBuilder b;
        b.sample(0, 100, 100);
        b.raw("10", "");             // missing
        b.raw("20", "(0, 0)");       // zero coordinate
        b.raw("30", "(12; 40)");     // malformed
        b.raw("abc", "(5, 5)");      // malformed timestamp
        b.sample(0, 120, 100);       // repeats an earlier timestamp
        b.sample(40, 130, 100);
        const auto rec = load_level_csv_text(b.str(), {});
        CHECK(rec.rows_total == 7);
        CHECK(rec.rows_dropped == 5);
        CHECK(rec.samples.size() == 2);
        CHECK(rec.issues.size() == 5);
        CHECK(rec.rows_total == static_cast<std::int64_t>(rec.samples.size()) + rec.rows_dropped + rec.event_only_rows);
    }

    TEST_CASE("all-zero gaze column gives EmptyAfterCleaning with diagnostics") {
        CsvBuilder b;
        for (int i = 0; i < 5; ++i) b.raw(std::to_string(i * 10), "(0,0)");
        try {
            load_level_csv_text(b.str(), {});
            FAIL("expected throw");
        } catch (const IngestError& e) {
            CHECK(e.code() == ErrorCode::EmptyAfterCleaning);
            CHECK(e.issues().size() == 5);
            CHECK(e.issues().front().line_number == 2);
        }
    }

    TEST_CASE("event-only rows are kept as events") {
        CsvBuilder b;
        b.sample(1000, 500, 500);
        b.event(1100, "appear", "m1", "mushroom");
        b.sample(1200, 500, 500);
        b.event(1900, "disappear", "m1", "mushroom");
        b.raw("1300", "(510, 505)", "click", "", "", "(510, 505)", "correct");
        const auto rec = load_level_csv_text(b.str(), {});
        CHECK(rec.samples.size() == 3);
        CHECK(rec.event_only_rows == 2);
        REQUIRE(rec.events.size() == 3);
        CHECK(rec.events[0].kind == EventKind::Appear);
        CHECK(rec.events[0].timestamp_ms == 100);
        CHECK(rec.events[1].kind == EventKind::Click);
        CHECK(rec.events[1].click_label == ClickLabel::Correct);
        CHECK(rec.events[1].position_px == Point{510, 505});
        CHECK(rec.events[2].kind == EventKind::Disappear);
    }

    TEST_CASE("events sort by time then appear < disappear < click then line") {
        CsvBuilder b;
        b.sample(0, 1, 1);
        b.raw("50", "", "click", "", "", "", "neutral");
        b.event(50, "disappear", "a", "blue_flower");
        b.event(50, "appear", "b", "blue_flower");
        b.event(10, "appear", "a", "blue_flower");
        b.raw("50", "", "click", "", "", "", "incorrect");
        const auto rec = load_level_csv_text(b.str(), {});
        REQUIRE(rec.events.size() == 5);
        CHECK(rec.events[0].timestamp_ms == 10);
        CHECK(rec.events[1].kind == EventKind::Appear);
        CHECK(rec.events[2].kind == EventKind::Disappear);
        CHECK(rec.events[3].click_label == ClickLabel::Neutral);
        CHECK(rec.events[4].click_label == ClickLabel::Incorrect);
        for (std::size_t i = 1; i < rec.events.size(); ++i) {
            CHECK_FALSE(event_order_less(rec.events[i], rec.events[i - 1]));
        }
    }

    TEST_CASE("missing click labels are derived from visibility") {
        CsvBuilder b;
        b.sample(0, 1, 1);
        b.raw("5", "", "click", "", "", "", "");                 // nothing visible
        b.event(10, "appear", "f1", "blue_flower");
        b.raw("20", "", "click", "", "", "", "");                // distractor visible
        b.event(30, "appear", "m1", "mushroom_target");
        b.raw("40", "", "click", "", "", "", "");                // target visible
        b.event(50, "disappear", "m1", "mushroom_target");
        b.event(60, "disappear", "f1", "blue_flower");
        b.raw("70", "", "click", "", "", "", "");
        const auto rec = load_level_csv_text(b.str(), {});
        std::vector<ClickLabel> labels;
        for (const auto& e : rec.events) {
            if (e.kind == EventKind::Click) labels.push_back(*e.click_label);
        }
        CHECK(labels == std::vector<ClickLabel>{ClickLabel::Neutral, ClickLabel::Incorrect, ClickLabel::Correct,
                                                ClickLabel::Neutral});
    }

    TEST_CASE("appear without a known type is rejected") {
        CsvBuilder b;
        b.sample(0, 1, 1);
        b.event(10, "appear", "x", "rock");
        const auto rec = load_level_csv_text(b.str(), {});
        CHECK(rec.events.empty());
        CHECK(rec.rows_dropped == 1);
    }

    TEST_CASE("column mapping binds custom headers") {
        const std::string text =
            "t,pos,evt\n"
            "100,\"(5, 6)\",\n"
            "200,\"(7, 8)\",\n";
        LoadOptions opts;
        opts.columns = ColumnMapping{"t", "pos", "evt", "", "", "", ""};
        const auto rec = load_level_csv_text(text, opts);
        CHECK(rec.samples.size() == 2);

        opts.columns.gaze = "gaze_xy";
        try {
            load_level_csv_text(text, opts);
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MissingColumn);
            CHECK(std::string(e.what()).find("gaze_xy") != std::string::npos);
        }
    }

    TEST_CASE("unreadable file") {
        try {
            load_level_file("/nonexistent/level1.csv", {});
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::FileUnreadable);
        }
    }

    TEST_CASE("load_level_file reads from disk") {
        const auto path = std::filesystem::temp_directory_path() / "gazelab_ingest_test.csv";
        {
            std::ofstream out(path);
            out << CsvBuilder().sample(10, 1, 2).sample(20, 3, 4).str();
        }
        const auto rec = load_level_file(path, {});
        CHECK(rec.samples.size() == 2);
        std::filesystem::remove(path);
    }

    TEST_CASE("filter_bounds uses a closed box") {
        const std::vector<GazeSample> s{{0, 1960, 500}, {1, 1971, 500}, {2, -50, -50}, {3, 100, 1131}};
        auto r = filter_bounds(s, 1920, 1080, 50);
        CHECK(r.kept.size() == 2);
        CHECK(r.dropped == 2);
        CHECK(r.kept[0].x_px == 1960);
        CHECK(r.kept[1].x_px == -50);

        auto edge = filter_bounds({{0, 1920, 1080}, {1, 0.0001, 0}}, 1920, 1080, 0);
        CHECK(edge.kept.size() == 2);
        CHECK_THROWS_AS(filter_bounds(s, 1920, 1080, -1), Error);
    }

    TEST_CASE("merge_levels enforces one student and unique levels") {
        SessionRecord a;
        a.student_id = "s1";
        a.level = 1;
        SessionRecord b = a;
        b.level = 2;
        auto ds = merge_levels({a, b});
        CHECK(ds.student_id == "s1");
        CHECK(ds.levels.size() == 2);

        CHECK_THROWS_AS(merge_levels({a, a}), Error);
        SessionRecord c = b;
        c.student_id = "s2";
        try {
            merge_levels({a, c});
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MixedStudents);
        }
    }

    TEST_CASE("level outside 1..3 is rejected") {
        LoadOptions opts;
        opts.level = 4;
        CHECK_THROWS_AS(load_level_csv_text(CsvBuilder().sample(0, 1, 1).str(), opts), Error);
    }
}

TEST_SUITE("csv") {
    TEST_CASE("quoted fields, escaped quotes and embedded newlines") {
        const auto t = csv::read_string("\xEF\xBB\xBF" "a,b,c\n1,\"x, y\",\"he said \"\"hi\"\"\"\n\n2,\"multi\nline\",z\r\n");
        REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
        REQUIRE(t.rows.size() == 2);
        CHECK(t.rows[0].fields[1] == "x, y");
        CHECK(t.rows[0].fields[2] == "he said \"hi\"");
        CHECK(t.rows[1].fields[1] == "multi\nline");
        CHECK(t.rows[1].fields[2] == "z");
        CHECK(t.rows[0].line_number == 2);
        CHECK(t.rows[1].line_number == 4);
        CHECK(t.column("c") == 2u);
        CHECK_FALSE(t.column("d"));
    }

    TEST_CASE("format_row round-trips through read") {
        const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "line\nbreak", ""};
        const auto t = csv::read_string("h1,h2,h3,h4,h5\n" + csv::format_row(fields));
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0].fields == fields);
        CHECK(csv::escape("plain") == "plain");
    }
}
