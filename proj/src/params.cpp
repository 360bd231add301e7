#include "gazelab/params.hpp"

#include <cmath>

#include "gazelab/error.hpp"

namespace gazelab {

std::string_view to_string(MatchStrategy s) {
    return s == MatchStrategy::ScanForward ? "scan-forward" : "single-candidate";
}

std::optional<MatchStrategy> parse_match_strategy(std::string_view text) {
    if (text == "single-candidate" || text == "single_candidate") return MatchStrategy::SingleCandidate;
    if (text == "scan-forward" || text == "scan_forward") return MatchStrategy::ScanForward;
    return std::nullopt;
}

void validate(const AnalysisParams& p) {
    auto fail = [](const char* what) { throw Error(ErrorCode::InvalidParameter, what); };
    if (!(std::isfinite(p.v_thresh_px_s) && p.v_thresh_px_s > 0.0)) fail("v_thresh_px_s must be > 0");
    if (p.rt_min_ms <= 0) fail("rt_min_ms must be > 0");
    if (p.rt_min_ms >= p.rt_max_ms) fail("rt_min_ms must be < rt_max_ms");
    if (!(p.bounds_tol_px >= 0.0)) fail("bounds_tol_px must be >= 0");
    if (p.grid_cols < 1 || p.grid_rows < 1) fail("grid dimensions must be >= 1");
    if (p.min_fixation_ms < 0) fail("min_fixation_ms must be >= 0");
}

}  // namespace gazelab
