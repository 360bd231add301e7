#pragma once

#include <cstdint>
#include <string>

#include "gazelab/ingest.hpp"
#include "gazelab/serialize.hpp"

namespace gazelab {

/// Parameters of a synthetic attention-game session. Objects appear one at a
/// time, far enough apart that every response belongs to the object that
/// preceded it, so the expected metrics are known exactly.
struct SynthSpec {
    int targets = 16;
    int distractors = 8;
    double hit_rate = 1.0;
    double rt_mean_ms = 700.0;
    double rt_sd_ms = -1.0;          // negative: 20% of the mean
    int false_alarms = 0;            // incorrect clicks on distractors
    std::uint64_t seed = 42;
    int level = 1;
    std::string student_id = "synthetic";
    TimestampMs sample_interval_ms = 100;
    TimestampMs object_gap_ms = 6000;
    TimestampMs visible_ms = 800;
    TimestampMs clock_offset_ms = 10000;
    ScreenSize screen;
};

struct SynthSession {
    std::string csv;
    Json truth;  // expected counts and reaction times
};

/// Throws InvalidParameter for out-of-range settings.
void validate(const SynthSpec& spec);

SynthSession synthesize_session(const SynthSpec& spec);

}  // namespace gazelab
