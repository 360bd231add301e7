#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <future>
#include <thread>

#include "gazelab/service.hpp"
#include "gazelab/synth.hpp"

using namespace gazelab;
namespace fs = std::filesystem;

namespace {

std::string synth_level(int level, double hit_rate, int false_alarms) {
    SynthSpec s;
    s.level = level;
    s.hit_rate = hit_rate;
    s.false_alarms = false_alarms;
    s.seed = 100 + static_cast<std::uint64_t>(level);
    return synthesize_session(s).csv;
}

httplib::MultipartFormDataItems three_levels() {
    return {
        {"level1", synth_level(1, 1.0, 0), "level1.csv", "text/csv"},
        {"level2", synth_level(2, 0.875, 1), "level2.csv", "text/csv"},
        {"level3", synth_level(3, 0.75, 3), "level3.csv", "text/csv"},
        {"student_id", "s8", "", ""},
    };
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

// Runs the /v1 routes on an ephemeral loopback port for the test's lifetime.
class Harness {
public:
    explicit Harness(const fs::path& root) : store_(root, Config{}) {
        service::register_routes(server_, store_);
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~Harness() {
        server_.stop();
        thread_.join();
    }

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(30, 0);
        return c;
    }

    service::AnalysisStore& store() { return store_; }

private:
    service::AnalysisStore store_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

Json body(const httplib::Result& r) {
    REQUIRE(r);
    return Json::parse(r->body);
}

std::string upload(httplib::Client& c) {
    auto r = c.Post("/v1/sessions", three_levels());
    REQUIRE(r);
    REQUIRE((r->status == 201 || r->status == 200));
    return body(r).at("session_id").get<std::string>();
}

std::string analyze(httplib::Client& c, const std::string& sid, const Json& params, int expect_status = 0,
                    bool* cached = nullptr) {
    auto r = c.Post("/v1/sessions/" + sid + "/analyze", params.dump(), "application/json");
    REQUIRE(r);
    if (expect_status) CHECK(r->status == expect_status);
    const Json j = body(r);
    if (cached) *cached = j.at("cached").get<bool>();
    return j.at("analysis_id").get<std::string>();
}

double level1_fixation_rate(httplib::Client& c, const std::string& aid) {
    auto r = c.Get("/v1/analyses/" + aid + "/tables?format=json");
    REQUIRE(r);
    return body(r).at("tables").at(0).at("content").at("metrics").at("fixation_rate").get<double>();
}

}  // namespace

TEST_SUITE("service") {
    TEST_CASE("health") {
        Harness h(fresh_dir("gazelab_svc_health"));
        auto c = h.client();
        auto r = c.Get("/v1/health");
        REQUIRE(r);
        CHECK(r->status == 200);
        CHECK(body(r).at("status") == "ok");
    }

    TEST_CASE("upload, analyze, read back five tables") {
        Harness h(fresh_dir("gazelab_svc_flow"));
        auto c = h.client();
        auto up = c.Post("/v1/sessions", three_levels());
        REQUIRE(up);
        CHECK(up->status == 201);
        const Json info = body(up);
        CHECK(info.at("student_id") == "s8");
        CHECK(info.at("levels").size() == 3);
        const std::string sid = info.at("session_id");

        auto again = c.Post("/v1/sessions", three_levels());
        REQUIRE(again);
        CHECK(again->status == 200);
        CHECK(body(again).at("session_id") == sid);
        CHECK(body(again).at("created") == false);

        const std::string aid = analyze(c, sid, Json::object(), 201);
        for (const char* fmt : {"json", "csv"}) {
            auto t = c.Get("/v1/analyses/" + aid + "/tables?format=" + fmt);
            REQUIRE(t);
            CHECK(t->status == 200);
            const Json j = body(t);
            CHECK(j.at("count") == 5);
            CHECK(j.at("tables").size() == 5);
        }
        auto bad_fmt = c.Get("/v1/analyses/" + aid + "/tables?format=xml");
        REQUIRE(bad_fmt);
        CHECK(bad_fmt->status == 400);

        auto rec = c.Get("/v1/analyses/" + aid + "/recommendations");
        REQUIRE(rec);
        CHECK(rec->status == 200);
        for (const auto& r : body(rec).at("recommendations")) CHECK(r.contains("evidence"));

        auto cal = c.Get("/v1/analyses/" + aid + "/calibration");
        REQUIRE(cal);
        CHECK(cal->status == 200);
        CHECK(body(cal).contains("pooled"));
    }

    TEST_CASE("charts") {
        Harness h(fresh_dir("gazelab_svc_charts"));
        auto c = h.client();
        const std::string aid = analyze(c, upload(c), Json::object());
        for (const char* chart : {"timeline", "scanpath", "heatmap", "velocity", "dashboard"}) {
            CAPTURE(chart);
            auto r = c.Get("/v1/analyses/" + aid + "/charts/" + chart);
            REQUIRE(r);
            CHECK(r->status == 200);
            CHECK(body(r).at("levels").size() == 3);
            auto svg = c.Get("/v1/analyses/" + aid + "/charts/" + chart + "?format=svg&level=2");
            REQUIRE(svg);
            CHECK(svg->status == 200);
            CHECK(svg->get_header_value("Content-Type") == "image/svg+xml");
            CHECK(svg->body.find("<svg") != std::string::npos);
        }
        auto ml = c.Get("/v1/analyses/" + aid + "/charts/multilevel");
        REQUIRE(ml);
        CHECK(body(ml).at("omitted") == false);
        CHECK(body(ml).at("series").at("levels").size() == 3);

        auto vel = c.Get("/v1/analyses/" + aid + "/charts/velocity?level=1");
        CHECK(body(vel).at("levels").at("1").at("threshold_px_s") == 721.0);

        auto unknown = c.Get("/v1/analyses/" + aid + "/charts/fig");
        REQUIRE(unknown);
        CHECK(unknown->status == 404);
    }

    TEST_CASE("parameter changes create new analyses and hit the cache on repeat") {
        Harness h(fresh_dir("gazelab_svc_cache"));
        auto c = h.client();
        const std::string sid = upload(c);
        bool cached = true;
        const std::string base = analyze(c, sid, Json::object(), 201, &cached);
        CHECK_FALSE(cached);

        const std::string a600 = analyze(c, sid, Json{{"v_thresh_px_s", 600}}, 201, &cached);
        CHECK(a600 != base);
        CHECK_FALSE(cached);
        CHECK(analyze(c, sid, Json{{"v_thresh_px_s", 600}}, 200, &cached) == a600);
        CHECK(cached);
        CHECK(h.store().analysis_count() == 2);

        const std::string slow = analyze(c, sid, Json{{"v_thresh_px_s", 30}});
        CHECK(level1_fixation_rate(c, slow) != level1_fixation_rate(c, base));

        auto t1 = c.Get("/v1/analyses/" + a600 + "/tables");
        auto t2 = c.Get("/v1/analyses/" + a600 + "/tables");
        REQUIRE(t1);
        REQUIRE(t2);
        CHECK(t1->body == t2->body);
    }

    TEST_CASE("error statuses") {
        Harness h(fresh_dir("gazelab_svc_errors"));
        auto c = h.client();
        const std::string sid = upload(c);

        auto inv = c.Post("/v1/sessions/" + sid + "/analyze", R"({"rt_min_ms": 6000, "rt_max_ms": 5000})",
                          "application/json");
        REQUIRE(inv);
        CHECK(inv->status == 422);
        CHECK(body(inv).at("error").at("code") == "InvalidParameter");

        auto unknown_key = c.Post("/v1/sessions/" + sid + "/analyze", R"({"speed": 1})", "application/json");
        REQUIRE(unknown_key);
        CHECK(unknown_key->status == 422);

        auto not_json = c.Post("/v1/sessions/" + sid + "/analyze", "{oops", "application/json");
        REQUIRE(not_json);
        CHECK(not_json->status == 400);

        auto missing = c.Post("/v1/sessions/0123456789abcdef/analyze", "{}", "application/json");
        REQUIRE(missing);
        CHECK(missing->status == 404);
        auto missing_analysis = c.Get("/v1/analyses/0123456789abcdef/tables");
        REQUIRE(missing_analysis);
        CHECK(missing_analysis->status == 404);

        httplib::MultipartFormDataItems zero{
            {"level1", "timestamp_ms,gaze,event_kind\n1,\"(0, 0)\",\n2,\"(0,0)\",\n", "level1.csv", "text/csv"}};
        auto bad = c.Post("/v1/sessions", zero);
        REQUIRE(bad);
        CHECK(bad->status == 400);
        const Json err = body(bad).at("error");
        CHECK(err.at("code") == "EmptyAfterCleaning");
        CHECK(err.at("diagnostics").size() == 2);
        CHECK(err.at("diagnostics").at(0).at("line") == 2);

        httplib::MultipartFormDataItems no_col{{"level1", "time,gaze\n1,\"(1, 1)\"\n", "level1.csv", "text/csv"}};
        auto col = c.Post("/v1/sessions", no_col);
        REQUIRE(col);
        CHECK(col->status == 400);
        CHECK(body(col).at("error").at("code") == "MissingColumn");

        auto raw = c.Post("/v1/sessions", "level1", "text/plain");
        REQUIRE(raw);
        CHECK(raw->status == 400);
    }

    TEST_CASE("oversize upload") {
        Harness h(fresh_dir("gazelab_svc_big"));
        auto c = h.client();
        httplib::MultipartFormDataItems big{
            {"level1", std::string(service::kMaxUploadBytes + 1024, 'x'), "level1.csv", "text/csv"}};
        auto r = c.Post("/v1/sessions", big);
        REQUIRE(r);
        CHECK(r->status == 413);
    }

    TEST_CASE("concurrent identical analyses agree") {
        Harness h(fresh_dir("gazelab_svc_conc"));
        auto c = h.client();
        const std::string sid = upload(c);
        std::vector<std::future<std::pair<std::string, std::string>>> jobs;
        for (int i = 0; i < 8; ++i) {
            jobs.push_back(std::async(std::launch::async, [&h, sid] {
                auto cl = h.client();
                auto r = cl.Post("/v1/sessions/" + sid + "/analyze", R"({"v_thresh_px_s": 500})", "application/json");
                const std::string aid = Json::parse(r->body).at("analysis_id");
                auto t = cl.Get("/v1/analyses/" + aid + "/tables?format=csv");
                return std::make_pair(aid, t->body);
            }));
        }
        const auto first = jobs.front().get();
        for (std::size_t i = 1; i < jobs.size(); ++i) CHECK(jobs[i].get() == first);
        CHECK(h.store().analysis_count() == 1);
    }

    TEST_CASE("sessions persist across restarts") {
        const auto root = fresh_dir("gazelab_svc_persist");
        std::string sid;
        {
            service::AnalysisStore store(root, Config{});
            std::vector<service::UploadFile> files;
            for (const auto& item : three_levels()) {
                if (item.name == "student_id") continue;
                files.push_back({item.name, item.filename, item.content});
            }
            sid = store.add_session(files, std::string("s8")).id;
        }
        CHECK(fs::exists(root / "index.json"));
        CHECK(fs::exists(root / "sessions" / sid / "level_2.csv"));
        service::AnalysisStore reopened(root, Config{});
        CHECK(reopened.session_count() == 1);
        const auto result = reopened.analyze(sid, Json::object());
        CHECK(reopened.analysis(result.analysis_id)->tables.at("json").at("count") == 5);
        CHECK_THROWS_AS(reopened.analysis("ffff"), service::NotFound);
    }
}
