#include "gazelab/cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <regex>
#include <set>
#include <sstream>

#include "gazelab/config.hpp"
#include "gazelab/hash.hpp"
#include "gazelab/ingest.hpp"
#include "gazelab/pipeline.hpp"
#include "gazelab/report.hpp"
#include "gazelab/serialize.hpp"
#include "gazelab/service.hpp"
#include "gazelab/synth.hpp"
#include "gazelab/version.hpp"

namespace gazelab::cli {

namespace fs = std::filesystem;

namespace {

/// Failure reading or writing files; maps to exit code 1.
class IoFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("gazelab");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* env = std::getenv("GAZELAB_LOG_LEVEL")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"; keep info in that case.
        if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const fs::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoFailure("cannot create " + path.parent_path().string() + ": " + ec.message());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoFailure("short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IoFailure("cannot rename onto " + path.string() + ": " + ec.message());
}

std::optional<int> level_from_name(const std::string& name) {
    static const std::regex re("level[ _-]?([1-3])", std::regex::icase);
    std::smatch m;
    if (std::regex_search(name, m, re)) return std::stoi(m[1].str());
    return std::nullopt;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        const fs::path p(in);
        std::error_code ec;
        if (in == "-") {
            files.push_back(p);
        } else if (fs::is_directory(p, ec)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && entry.path().extension() == ".csv") found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            if (found.empty()) throw IoFailure("no .csv files in " + p.string());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(p, ec)) {
            files.push_back(p);
        } else {
            throw IoFailure("input not found: " + p.string());
        }
    }
    return files;
}

int report_error(const std::exception& e, int code) {
    spdlog::error("{}", e.what());
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const IoFailure& e) {
        return report_error(e, kExitIo);
    } catch (const IngestError& e) {
        for (const auto& issue : e.issues()) spdlog::debug("line {}: {}", issue.line_number, issue.reason);
        return report_error(e, kExitValidation);
    } catch (const Error& e) {
        return report_error(e, e.code() == ErrorCode::FileUnreadable ? kExitIo : kExitValidation);
    } catch (const fs::filesystem_error& e) {
        return report_error(e, kExitIo);
    } catch (const Json::exception& e) {
        return report_error(e, kExitValidation);
    }
}

// ---- analyze ----------------------------------------------------------

struct AnalyzeArgs {
    std::vector<std::string> inputs;
    std::string config;
    std::string out;
    std::optional<int> level;
    bool calibrate = false;
    std::string match_strategy;
    std::string table_format = "csv";
    std::optional<double> v_thresh;
    std::optional<std::int64_t> rt_min;
    std::optional<std::int64_t> rt_max;
    std::optional<double> bounds_tol;
    std::optional<std::string> student;
};

int run_analyze(const AnalyzeArgs& a) {
    Config config;
    std::string config_text;
    if (!a.config.empty()) {
        if (!fs::is_regular_file(a.config)) throw IoFailure("config not found: " + a.config);
        config_text = read_file(a.config);
        config = load_config(a.config);
    }
    if (a.student) config.student_id = *a.student;
    Json overrides = Json::object();
    if (!a.match_strategy.empty()) overrides["match_strategy"] = a.match_strategy;
    if (a.v_thresh) overrides["v_thresh_px_s"] = *a.v_thresh;
    if (a.rt_min) overrides["rt_min_ms"] = *a.rt_min;
    if (a.rt_max) overrides["rt_max_ms"] = *a.rt_max;
    if (a.bounds_tol) overrides["bounds_tol_px"] = *a.bounds_tol;
    const AnalysisParams params = params_from_json(overrides, config.params);

    const auto files = expand_inputs(a.inputs);
    if (a.level && files.size() != 1) throw Error(ErrorCode::InvalidParameter, "--level needs exactly one input file");

    std::vector<SessionRecord> records;
    Json inputs = Json::array();
    std::set<int> used;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto& f = files[i];
        int level = a.level.value_or(level_from_name(f.filename().string()).value_or(static_cast<int>(i) + 1));
        const std::string content = f == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_file(f);
        LoadOptions opts{config.columns, config.screen, level, config.student_id};
        records.push_back(load_level_csv_text(content, opts));
        const auto& rec = records.back();
        spdlog::info("level {}: {} rows, {} samples, {} dropped, {} event-only", level, rec.rows_total,
                     rec.samples.size(), rec.rows_dropped, rec.event_only_rows);
        inputs.push_back(Json{{"file", f.filename().string()}, {"level", level}, {"sha256", sha256_hex(content)}});
    }
    const CombinedDataset dataset = merge_levels(std::move(records));
    const DatasetAnalysis analysis = analyze_dataset(dataset, params, config.rules, config.flat_tolerance);
    const TableFormat format = a.table_format == "json" ? TableFormat::Json : TableFormat::Csv;
    const AnalysisOutputs outputs = render_outputs(analysis, format);

    const fs::path out(a.out);
    Json written = Json::array();
    auto emit = [&](const fs::path& rel, const std::string& content) {
        write_atomic(out / rel, content);
        written.push_back(Json{{"path", rel.generic_string()}, {"sha256", sha256_hex(content)}});
    };
    for (const auto& doc : outputs.tables) emit(fs::path("tables") / doc.name, doc.content);
    emit("charts.json", outputs.charts.dump(2) + "\n");
    for (const auto& doc : outputs.svgs) emit(fs::path("svg") / doc.name, doc.content);
    if (a.calibrate) {
        const DatasetCalibration cal = calibrate_dataset(dataset, params);
        emit("calibration.json", to_json(cal).dump(2) + "\n");
        emit("suggested_params.json", to_json(cal.suggested).dump(2) + "\n");
        spdlog::info("suggested v_thresh {:.2f} px/s, rt window [{}, {}] ms", cal.suggested.v_thresh_px_s,
                     cal.suggested.rt_min_ms, cal.suggested.rt_max_ms);
    }

    Json manifest{{"tool", "gazelab"},
                  {"version", kVersion},
                  {"student_id", analysis.student_id},
                  {"inputs", inputs},
                  {"config_sha256", config_text.empty() ? Json(nullptr) : Json(sha256_hex(config_text))},
                  {"params", to_json(params)},
                  {"rules", to_json(config.rules)},
                  {"flat_tolerance", config.flat_tolerance},
                  {"table_format", a.table_format},
                  {"outputs", written}};
    write_atomic(out / "run_manifest.json", manifest.dump(2) + "\n");

    for (const auto& lv : analysis.levels) {
        spdlog::info("level {}: hit rate {}, fixation rate {}", lv.level, format_percent(lv.metrics.hit_rate),
                     format_percent(lv.metrics.fixation_rate));
    }
    spdlog::info("wrote {} files to {}", written.size() + 1, out.string());
    return kExitOk;
}

// ---- synth ------------------------------------------------------------

int run_synth(const SynthSpec& spec, const std::string& out) {
    validate(spec);
    const SynthSession s = synthesize_session(spec);
    if (out == "-") {
        std::cout << s.csv;
        return kExitOk;
    }
    fs::path csv_path(out);
    fs::path truth_path = csv_path;
    truth_path.replace_extension(".truth.json");
    write_atomic(csv_path, s.csv);
    write_atomic(truth_path, s.truth.dump(2) + "\n");
    spdlog::info("wrote {} and {}", csv_path.string(), truth_path.string());
    return kExitOk;
}

// ---- serve ------------------------------------------------------------

int run_serve(const std::string& host, int port, const std::string& store_dir, const std::string& config_path) {
    Config config;
    if (!config_path.empty()) config = load_config(config_path);
    service::AnalysisStore store(store_dir, config);
    httplib::Server server;
    service::register_routes(server, store);
    spdlog::info("listening on http://{}:{}/v1 (store {})", host, port, store_dir);
    if (!server.listen(host, port)) throw IoFailure("cannot bind " + host + ":" + std::to_string(port));
    return kExitOk;
}

}  // namespace

int run(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Gaze analytics for attention-game eye-tracking logs"};
    app.set_version_flag("--version", std::string("gazelab ") + kVersion);
    app.require_subcommand(1);
    app.footer("Environment: GAZELAB_LOG_LEVEL=trace|debug|info|warn|error|off\n"
               "Exit codes: 0 success, 1 I/O error, 2 validation error");

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "Analyze level logs and write tables, charts and a manifest");
    analyze->add_option("--input,-i", aa.inputs, "Level CSV files, directories of them, or - for stdin")->required();
    analyze->add_option("--config,-c", aa.config, "TOML or JSON config");
    analyze->add_option("--out,-o", aa.out, "Output directory")->required();
    analyze->add_option("--level", aa.level, "Level of a single input file")->check(CLI::Range(1, 3));
    analyze->add_flag("--calibrate", aa.calibrate, "Also write calibration.json and suggested_params.json");
    analyze->add_option("--match-strategy", aa.match_strategy, "single-candidate or scan-forward")
        ->check(CLI::IsMember({"single-candidate", "scan-forward"}));
    analyze->add_option("--table-format", aa.table_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    analyze->add_option("--v-thresh", aa.v_thresh, "Velocity threshold, px/s");
    analyze->add_option("--rt-min", aa.rt_min, "Reaction-time window lower bound, ms");
    analyze->add_option("--rt-max", aa.rt_max, "Reaction-time window upper bound, ms");
    analyze->add_option("--bounds-tol", aa.bounds_tol, "Screen bounds tolerance, px");
    analyze->add_option("--student", aa.student, "Student id (overrides the config)");

    SynthSpec spec;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic session CSV with a ground-truth sidecar");
    synth->add_option("--targets", spec.targets, "Targets shown");
    synth->add_option("--distractors", spec.distractors, "Distractors shown");
    synth->add_option("--hit-rate", spec.hit_rate, "Fraction of targets answered inside the window");
    synth->add_option("--rt-mean", spec.rt_mean_ms, "Mean reaction time, ms");
    synth->add_option("--rt-sd", spec.rt_sd_ms, "Reaction time spread, ms (default 20% of the mean)");
    synth->add_option("--false-alarms", spec.false_alarms, "Incorrect clicks on distractors");
    synth->add_option("--seed", spec.seed, "Random seed");
    synth->add_option("--level", spec.level, "Level number")->check(CLI::Range(1, 3));
    synth->add_option("--student", spec.student_id, "Student id in the sidecar");
    synth->add_option("--out,-o", synth_out, "Output CSV path, or - for stdout")->required();

    std::string host = "127.0.0.1";
    int port = 8750;
    std::string store_dir = "gazelab-store";
    std::string serve_config;
    auto* serve = app.add_subcommand("serve", "Run the /v1 HTTP analysis service");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
    serve->add_option("--store", store_dir, "Session storage directory");
    serve->add_option("--config,-c", serve_config, "Default TOML or JSON config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    if (*analyze) return guarded([&] { return run_analyze(aa); });
    if (*synth) return guarded([&] { return run_synth(spec, synth_out); });
    return guarded([&] { return run_serve(host, port, store_dir, serve_config); });
}

}  // namespace gazelab::cli
