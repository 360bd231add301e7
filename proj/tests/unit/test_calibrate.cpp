#include <doctest.h>

#include <algorithm>
#include <random>

#include "builders.hpp"
#include "gazelab/calibrate.hpp"
#include "gazelab/error.hpp"

using namespace gazelab;
using gazelab::testing::gs;

TEST_SUITE("calibrate") {
    TEST_CASE("velocity distribution") {
        std::vector<GazeSample> s{gs(0, 0, 0), gs(100, 100, 0)};
        CHECK(velocity_distribution(s).velocities == std::vector<double>{1000.0});
        s = {gs(0, 0, 0), gs(16, 0, 0)};
        CHECK(velocity_distribution(s).velocities == std::vector<double>{0.0});
        s = {gs(0, 0, 0), gs(10, 3, 4), gs(20, 6, 8)};
        const auto v = velocity_distribution(s).velocities;
        REQUIRE(v.size() == 2);
        CHECK(v[0] == v[1]);

        s = {gs(0, 0, 0)};
        try {
            velocity_distribution(s);
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::TooFewSamples);
        }
    }

    TEST_CASE("linear-interpolation quantile") {
        std::vector<double> v(1000);
        for (int i = 0; i < 1000; ++i) v[i] = i + 1;
        CHECK(quantile(v, 75) == doctest::Approx(750.25));
        CHECK(quantile(v, 0) == 1.0);
        CHECK(quantile(v, 100) == 1000.0);
        CHECK(quantile(std::vector<double>{3.0}, 40) == 3.0);
        CHECK(quantile(std::vector<double>{4.0, 1.0, 3.0, 2.0}, 50) == 2.5);
    }

    TEST_CASE("threshold with and without trimming") {
        std::vector<double> v(1000);
        for (int i = 0; i < 1000; ++i) v[i] = i + 1;
        const auto untrimmed = calibrate_velocity_threshold(v, 75, 100);
        CHECK(untrimmed.chosen_threshold_px_s == doctest::Approx(750.25));
        CHECK(untrimmed.trimmed_count == 1000);
        CHECK(untrimmed.fixation_fraction_at_threshold == doctest::Approx(0.75));

        v.push_back(1e9);
        const auto trimmed = calibrate_velocity_threshold(v, 75, 99.5);
        CHECK(trimmed.trimmed_count < v.size());
        CHECK(trimmed.outlier_cut_px_s < 1e9);
        CHECK(trimmed.fixation_fraction_at_threshold >= 0.75);
        double prev = -1;
        for (const auto& [p, q] : trimmed.velocity_percentiles) {
            CHECK(q >= prev);
            prev = q;
        }
    }

    TEST_CASE("threshold rejects bad input") {
        CHECK_THROWS_AS(calibrate_velocity_threshold(std::vector<double>{}, 75), Error);
        CHECK_THROWS_AS(calibrate_velocity_threshold(std::vector<double>{1, 2, 3}, 0), Error);
        CHECK_THROWS_AS(calibrate_velocity_threshold(std::vector<double>{1, 2, 3}, 100), Error);
    }

    TEST_CASE("under-thresholding captures a small fixation share") {
        // Mostly fast motion with a thin slow tail: a 30 px/s cut keeps ~4%.
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> slow(0.0, 30.0), fast(30.0, 3000.0);
        std::vector<double> v;
        for (int i = 0; i < 10000; ++i) v.push_back(i % 25 == 0 ? slow(rng) : fast(rng));
        const double share = static_cast<double>(std::count_if(v.begin(), v.end(), [](double x) { return x <= 30.0; })) /
                             static_cast<double>(v.size());
        CHECK(share == doctest::Approx(0.04).epsilon(0.01));
        CHECK(calibrate_velocity_threshold(v).chosen_threshold_px_s > 30.0);
    }

    TEST_CASE("rt window") {
        CHECK(calibrate_rt_window(std::vector<std::int64_t>{600, 700}) == RtWindow{522, 5000, true});
        CHECK(calibrate_rt_window(std::vector<std::int64_t>(20, 600)) == RtWindow{522, 5000, true});

        std::vector<std::int64_t> rts;
        for (int i = 0; i <= 3500; ++i) rts.push_back(500 + i);
        const auto w = calibrate_rt_window(rts);
        CHECK_FALSE(w.fallback);
        CHECK(std::llabs(w.rt_min_ms - 588) <= 1);
        CHECK(std::llabs(w.rt_max_ms - 3913) <= 1);

        std::vector<std::int64_t> slow;
        for (int i = 0; i < 100; ++i) slow.push_back(3000 + 100 * i);
        CHECK(calibrate_rt_window(slow).rt_max_ms == 5000);
    }

    TEST_CASE("tolerance sweep") {
        std::vector<GazeSample> s;
        for (int i = 0; i < 9; ++i) s.push_back(gs(i, 100, 100));
        s.push_back(gs(9, 1980, 100));  // 60 px off the right edge
        const std::vector<double> tols{50, 100};
        const auto r = tolerance_sweep(s, 1920, 1080, tols);
        CHECK(r.at(50) == doctest::Approx(0.9));
        CHECK(r.at(100) == 1.0);
        CHECK(tolerance_sweep(s, 1920, 1080, std::vector<double>{}).empty());
    }

    TEST_CASE("histogram") {
        const std::vector<double> v{0, 1, 2, 3, 4, 10, 11};
        const auto h = histogram(v, 0, 4, 4);
        REQUIRE(h.edges.size() == 5);
        CHECK(h.counts == std::vector<std::size_t>{1, 1, 1, 2});
    }
}
