#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace gazelab {

enum class MatchStrategy {
    /// Examine only the earliest unused click after each target.
    SingleCandidate,
    /// Keep scanning forward for the first unused in-window click.
    ScanForward,
};

std::string_view to_string(MatchStrategy s);
std::optional<MatchStrategy> parse_match_strategy(std::string_view text);

struct AnalysisParams {
    double v_thresh_px_s = 721.0;
    std::int64_t rt_min_ms = 522;
    std::int64_t rt_max_ms = 5000;
    double bounds_tol_px = 50.0;
    int grid_cols = 20;
    int grid_rows = 20;
    MatchStrategy match_strategy = MatchStrategy::SingleCandidate;
    std::int64_t min_fixation_ms = 0;

    friend bool operator==(const AnalysisParams&, const AnalysisParams&) = default;
};

/// Throws Error{InvalidParameter} naming the first violated invariant.
void validate(const AnalysisParams& params);

}  // namespace gazelab
