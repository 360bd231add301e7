#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gazelab/calibrate.hpp"
#include "gazelab/classify.hpp"
#include "gazelab/config.hpp"
#include "gazelab/event_match.hpp"
#include "gazelab/ingest.hpp"
#include "gazelab/pipeline.hpp"
#include "gazelab/report.hpp"
#include "gazelab/serialize.hpp"
#include "gazelab/synth.hpp"
#include "gazelab/version.hpp"

namespace py = pybind11;
using namespace gazelab;

namespace {

// Structured results cross the boundary as JSON text; the Python wrapper
// decodes them so both sides share one serialisation.

std::vector<GazeSample> to_samples(const std::vector<std::tuple<TimestampMs, double, double>>& rows) {
    std::vector<GazeSample> out;
    out.reserve(rows.size());
    for (const auto& [t, x, y] : rows) out.push_back(GazeSample{t, x, y});
    return out;
}

std::vector<std::pair<std::optional<double>, std::string>> classify(
    const std::vector<std::tuple<TimestampMs, double, double>>& rows, double v_thresh_px_s) {
    const auto samples = to_samples(rows);
    std::vector<std::pair<std::optional<double>, std::string>> out;
    for (const auto& c : classify_ivt(samples, v_thresh_px_s)) {
        const char* label = c.movement == Movement::Fixation  ? "fixation"
                            : c.movement == Movement::Saccade ? "saccade"
                                                              : "unclassified";
        out.emplace_back(c.velocity_px_s, label);
    }
    return out;
}

std::vector<std::tuple<std::string, TimestampMs, TimestampMs>> match(
    const std::vector<std::pair<std::string, TimestampMs>>& targets, const std::vector<TimestampMs>& clicks,
    TimestampMs rt_min_ms, TimestampMs rt_max_ms, const std::string& strategy) {
    const auto s = parse_match_strategy(strategy);
    if (!s) throw Error(ErrorCode::InvalidParameter, "unknown match strategy '" + strategy + "'");
    std::vector<ObjectEpisode> eps;
    for (const auto& [id, appear] : targets) {
        ObjectEpisode e;
        e.object_id = id;
        e.object_type = ObjectType::MushroomTarget;
        e.appear_ms = appear;
        eps.push_back(e);
    }
    std::vector<GameEvent> cs;
    for (std::size_t i = 0; i < clicks.size(); ++i) {
        GameEvent e;
        e.kind = EventKind::Click;
        e.click_label = ClickLabel::Correct;
        e.timestamp_ms = clicks[i];
        e.line_number = static_cast<std::int64_t>(i);
        cs.push_back(e);
    }
    std::vector<std::tuple<std::string, TimestampMs, TimestampMs>> out;
    for (const auto& m : match_responses(eps, cs, rt_min_ms, rt_max_ms, *s)) {
        out.emplace_back(m.target.object_id, m.click.line_number, m.reaction_ms);
    }
    return out;
}

std::string calibrate_velocity(const std::vector<double>& velocities, double percentile, double outlier_cut) {
    const auto c = calibrate_velocity_threshold(velocities, percentile, outlier_cut);
    Json pct = Json::object();
    for (const auto& [p, v] : c.velocity_percentiles) pct[number_key(p)] = v;
    return Json{{"percentile", c.percentile},
                {"outlier_cut_percentile", c.outlier_cut_percentile},
                {"outlier_cut_px_s", c.outlier_cut_px_s},
                {"input_count", c.input_count},
                {"trimmed_count", c.trimmed_count},
                {"chosen_threshold_px_s", c.chosen_threshold_px_s},
                {"fixation_fraction_at_threshold", c.fixation_fraction_at_threshold},
                {"velocity_percentiles", pct}}
        .dump();
}

std::string load_summary(const std::string& csv_text, int level, const std::string& config_text) {
    const Config cfg = config_text.empty() ? Config{} : parse_config_text(config_text);
    const LoadOptions opts{cfg.columns, cfg.screen, level, cfg.student_id};
    return session_summary(load_level_csv_text(csv_text, opts)).dump();
}

CombinedDataset load_dataset(const std::map<int, std::string>& levels, const Config& cfg) {
    std::vector<SessionRecord> records;
    for (const auto& [level, text] : levels) {
        records.push_back(load_level_csv_text(text, LoadOptions{cfg.columns, cfg.screen, level, cfg.student_id}));
    }
    return merge_levels(std::move(records));
}

std::string analyze(const std::map<int, std::string>& levels, const std::string& config_text,
                    const std::string& params_json, const std::string& table_format) {
    if (table_format != "csv" && table_format != "json") {
        throw Error(ErrorCode::InvalidParameter, "table_format must be csv or json");
    }
    const Config cfg = config_text.empty() ? Config{} : parse_config_text(config_text);
    const AnalysisParams params =
        params_json.empty() ? cfg.params : params_from_json(Json::parse(params_json), cfg.params);
    const CombinedDataset ds = load_dataset(levels, cfg);
    const DatasetAnalysis a = analyze_dataset(ds, params, cfg.rules, cfg.flat_tolerance);
    const AnalysisOutputs out = render_outputs(a, table_format == "json" ? TableFormat::Json : TableFormat::Csv);

    Json tables = Json::array();
    for (const auto& d : out.tables) tables.push_back(Json{{"name", d.name}, {"content", d.content}});
    Json svgs = Json::object();
    for (const auto& d : out.svgs) svgs[d.name] = d.content;
    Json metrics = Json::object();
    for (const auto& lv : a.levels) metrics[std::to_string(lv.level)] = to_json(lv.metrics);
    return Json{{"student_id", a.student_id},
                {"params", to_json(a.params)},
                {"metrics", metrics},
                {"comparison", to_json(a.comparison)},
                {"recommendations", to_json(a.recommendations)},
                {"tables", tables},
                {"charts", out.charts},
                {"svgs", svgs}}
        .dump();
}

std::string calibrate(const std::map<int, std::string>& levels, const std::string& config_text) {
    const Config cfg = config_text.empty() ? Config{} : parse_config_text(config_text);
    return to_json(calibrate_dataset(load_dataset(levels, cfg), cfg.params)).dump();
}

std::pair<std::string, std::string> synth(int targets, int distractors, double hit_rate, double rt_mean_ms,
                                          double rt_sd_ms, int false_alarms, std::uint64_t seed, int level,
                                          const std::string& student_id) {
    SynthSpec s;
    s.targets = targets;
    s.distractors = distractors;
    s.hit_rate = hit_rate;
    s.rt_mean_ms = rt_mean_ms;
    s.rt_sd_ms = rt_sd_ms;
    s.false_alarms = false_alarms;
    s.seed = seed;
    s.level = level;
    s.student_id = student_id;
    const auto out = synthesize_session(s);
    return {out.csv, out.truth.dump()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of gazelab: ingest, I-VT classification, event matching, metrics and reports.";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "GazelabError", PyExc_ValueError);

    m.def(
        "parse_coordinate",
        [](const std::string& text) {
            const Point p = parse_coordinate(text);
            return std::make_pair(p.x, p.y);
        },
        py::arg("text"));
    m.def("classify", &classify, py::arg("samples"), py::arg("v_thresh_px_s") = 721.0,
          "Label (t_ms, x, y) samples; returns (velocity or None, label) per sample.");
    m.def("match", &match, py::arg("targets"), py::arg("clicks"), py::arg("rt_min_ms") = kDefaultRtMinMs,
          py::arg("rt_max_ms") = kDefaultRtMaxMs, py::arg("strategy") = "single_candidate",
          "Greedy matching of (id, appear_ms) targets to click times; returns (id, click index, rt_ms).");
    m.def(
        "quantile", [](const std::vector<double>& v, double p) { return quantile(v, p); }, py::arg("values"),
        py::arg("percentile"));
    m.def("calibrate_velocity_json", &calibrate_velocity, py::arg("velocities"), py::arg("percentile") = 75.0,
          py::arg("outlier_cut_percentile") = 99.5);
    m.def("load_summary_json", &load_summary, py::arg("csv_text"), py::arg("level") = 1, py::arg("config_text") = "");
    m.def("analyze_json", &analyze, py::arg("levels"), py::arg("config_text") = "", py::arg("params_json") = "",
          py::arg("table_format") = "csv");
    m.def("calibrate_json", &calibrate, py::arg("levels"), py::arg("config_text") = "");
    m.def("synth", &synth, py::arg("targets") = 16, py::arg("distractors") = 8, py::arg("hit_rate") = 1.0,
          py::arg("rt_mean_ms") = 700.0, py::arg("rt_sd_ms") = -1.0, py::arg("false_alarms") = 0,
          py::arg("seed") = 42, py::arg("level") = 1, py::arg("student_id") = "synthetic",
          "Returns (csv_text, truth_json).");
}
