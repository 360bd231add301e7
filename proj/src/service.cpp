#include "gazelab/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>

#include "gazelab/hash.hpp"
#include "gazelab/ingest.hpp"
#include "gazelab/version.hpp"

namespace gazelab::service {

namespace fs = std::filesystem;

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::FileUnreadable, "cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<int> level_hint(const std::string& text) {
    static const std::regex re("level[ _-]?([1-3])", std::regex::icase);
    std::smatch m;
    if (std::regex_search(text, m, re)) return std::stoi(m[1].str());
    return std::nullopt;
}

Json tables_json(const std::vector<Document>& docs, bool parse_json) {
    Json arr = Json::array();
    for (const auto& d : docs) {
        arr.push_back(Json{{"name", d.name}, {"content", parse_json ? Json::parse(d.content) : Json(d.content)}});
    }
    return Json{{"count", docs.size()}, {"tables", arr}};
}

}  // namespace

AnalysisStore::AnalysisStore(fs::path root, Config defaults) : root_(std::move(root)), defaults_(std::move(defaults)) {
    fs::create_directories(root_ / "sessions");
    read_index();
}

void AnalysisStore::read_index() {
    const auto index = root_ / "index.json";
    if (!fs::exists(index)) return;
    const Json j = Json::parse(read_text(index));
    for (const auto& [id, entry] : j.at("sessions").items()) {
        SessionEntry e;
        e.hash = entry.at("hash").get<std::string>();
        e.student_id = entry.at("student_id").get<std::string>();
        for (const auto& [level, file] : entry.at("files").items()) e.files[std::stoi(level)] = file.get<std::string>();
        sessions_.emplace(id, std::move(e));
    }
}

// Caller holds the unique lock.
void AnalysisStore::write_index() const {
    Json sessions = Json::object();
    for (const auto& [id, e] : sessions_) {
        Json files = Json::object();
        for (const auto& [level, file] : e.files) files[std::to_string(level)] = file;
        sessions[id] = Json{{"hash", e.hash}, {"student_id", e.student_id}, {"files", files}};
    }
    write_atomic(root_ / "index.json", Json{{"version", 1}, {"sessions", sessions}}.dump(2) + "\n");
}

SessionInfo AnalysisStore::add_session(const std::vector<UploadFile>& files, const std::optional<std::string>& student_id) {
    if (files.empty()) throw Error(ErrorCode::MissingColumn, "no CSV files in upload");
    const std::string student = student_id.value_or(defaults_.student_id);

    std::vector<SessionRecord> records;
    std::map<int, const UploadFile*> by_level;
    Json summaries = Json::array();
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto& f = files[i];
        int level = level_hint(f.field).value_or(level_hint(f.filename).value_or(static_cast<int>(i) + 1));
        LoadOptions opts{defaults_.columns, defaults_.screen, level, student};
        records.push_back(load_level_csv_text(f.content, opts));
        summaries.push_back(session_summary(records.back()));
        by_level[level] = &f;
    }
    auto dataset = std::make_shared<const CombinedDataset>(merge_levels(std::move(records)));

    std::string fingerprint = "student " + student + "\n";
    for (const auto& [level, f] : by_level) fingerprint += "level " + std::to_string(level) + " " + sha256_hex(f->content) + "\n";
    fingerprint += to_json(defaults_).at("columns").dump();
    fingerprint += Json::array({defaults_.screen.width, defaults_.screen.height}).dump();
    const std::string hash = sha256_hex(fingerprint);
    const std::string id = hash.substr(0, 16);

    SessionInfo info{id, hash, false, Json{{"session_id", id}, {"student_id", student}, {"levels", summaries}}};
    std::unique_lock lock(mutex_);
    if (auto it = sessions_.find(id); it != sessions_.end()) {
        if (!it->second.dataset) it->second.dataset = dataset;
        return info;
    }
    SessionEntry e{hash, student, {}, dataset};
    for (const auto& [level, f] : by_level) {
        const std::string name = "level_" + std::to_string(level) + ".csv";
        write_atomic(root_ / "sessions" / id / name, f->content);
        e.files[level] = name;
    }
    write_atomic(root_ / "sessions" / id / "meta.json", info.summary.dump(2) + "\n");
    sessions_.emplace(id, std::move(e));
    write_index();
    info.created = true;
    return info;
}

std::shared_ptr<const CombinedDataset> AnalysisStore::dataset_for(const std::string& session_id) {
    {
        std::shared_lock lock(mutex_);
        auto it = sessions_.find(session_id);
        if (it == sessions_.end()) throw NotFound("unknown session '" + session_id + "'");
        if (it->second.dataset) return it->second.dataset;
    }
    // Indexed on disk but not parsed since start-up.
    std::unique_lock lock(mutex_);
    auto& e = sessions_.at(session_id);
    if (!e.dataset) {
        std::vector<SessionRecord> records;
        for (const auto& [level, file] : e.files) {
            LoadOptions opts{defaults_.columns, defaults_.screen, level, e.student_id};
            records.push_back(load_level_file(root_ / "sessions" / session_id / file, opts));
        }
        e.dataset = std::make_shared<const CombinedDataset>(merge_levels(std::move(records)));
    }
    return e.dataset;
}

AnalysisResult AnalysisStore::analyze(const std::string& session_id, const Json& overrides) {
    const AnalysisParams params = params_from_json(overrides.is_null() ? Json::object() : overrides, defaults_.params);
    const auto dataset = dataset_for(session_id);
    std::string session_hash;
    {
        std::shared_lock lock(mutex_);
        session_hash = sessions_.at(session_id).hash;
    }
    const std::string key = session_hash + "|" + to_json(params).dump() + "|" + to_json(defaults_.rules).dump() + "|" +
                            number_key(defaults_.flat_tolerance);
    const std::string analysis_id = sha256_hex(key).substr(0, 16);
    {
        std::shared_lock lock(mutex_);
        if (analyses_.count(analysis_id)) return AnalysisResult{analysis_id, true};
    }

    const DatasetAnalysis analysis = analyze_dataset(*dataset, params, defaults_.rules, defaults_.flat_tolerance);
    auto rec = std::make_shared<AnalysisRecord>();
    rec->id = analysis_id;
    rec->session_id = session_id;
    rec->params = params;
    const auto json_out = render_outputs(analysis, TableFormat::Json);
    const auto csv_tables = export_tables(analysis.comparison.per_level, analysis.comparison, analysis.recommendations,
                                          TableFormat::Csv, analysis.rules);
    rec->tables = Json{{"json", tables_json(json_out.tables, true)}, {"csv", tables_json(csv_tables, false)}};
    rec->charts = json_out.charts;
    rec->bundles = json_out.bundles;
    rec->recommendations = Json{{"rules", to_json(analysis.rules)}, {"recommendations", to_json(analysis.recommendations)}};
    try {
        rec->calibration = to_json(calibrate_dataset(*dataset, params));
    } catch (const Error& e) {
        rec->calibration = Json{{"error", e.what()}};
    }

    std::unique_lock lock(mutex_);
    auto [it, inserted] = analyses_.emplace(analysis_id, std::move(rec));
    return AnalysisResult{analysis_id, !inserted};
}

std::shared_ptr<const AnalysisRecord> AnalysisStore::analysis(const std::string& analysis_id) const {
    std::shared_lock lock(mutex_);
    auto it = analyses_.find(analysis_id);
    if (it == analyses_.end()) throw NotFound("unknown analysis '" + analysis_id + "'");
    return it->second;
}

std::size_t AnalysisStore::session_count() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
}

std::size_t AnalysisStore::analysis_count() const {
    std::shared_lock lock(mutex_);
    return analyses_.size();
}

// ---- HTTP ---------------------------------------------------------------

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message,
                const Json& diagnostics = Json::array()) {
    send_json(res, status, Json{{"error", Json{{"code", code}, {"message", message}, {"diagnostics", diagnostics}}}});
}

Json issues_json(const std::vector<RowIssue>& issues) {
    Json arr = Json::array();
    for (const auto& i : issues) arr.push_back(Json{{"line", i.line_number}, {"reason", i.reason}});
    return arr;
}

// Maps library failures onto HTTP statuses; `validation_status` is used for
// parameter invariant violations.
template <typename Fn>
void guarded(httplib::Response& res, int validation_status, Fn&& fn) {
    try {
        fn();
    } catch (const NotFound& e) {
        send_error(res, 404, "NotFound", e.what());
    } catch (const IngestError& e) {
        send_error(res, 400, std::string(to_string(e.code())), e.what(), issues_json(e.issues()));
    } catch (const Error& e) {
        const int status = e.code() == ErrorCode::InvalidParameter ? validation_status : 400;
        send_error(res, status, std::string(to_string(e.code())), e.what());
    } catch (const Json::exception& e) {
        send_error(res, 400, "InvalidJson", e.what());
    } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
    }
}

}  // namespace

void register_routes(httplib::Server& server, AnalysisStore& store) {
    server.set_payload_max_length(kMaxUploadBytes);

    server.Get("/v1/health", [&store](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, Json{{"status", "ok"}, {"version", kVersion}, {"sessions", store.session_count()},
                                 {"analyses", store.analysis_count()}});
    });

    server.Post("/v1/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 400, [&] {
            if (!req.is_multipart_form_data()) {
                send_error(res, 400, "NotMultipart", "expected multipart/form-data with CSV files");
                return;
            }
            std::vector<UploadFile> files;
            std::optional<std::string> student;
            std::size_t total = 0;
            for (const auto& [name, part] : req.files) {
                if (name == "student_id" && part.filename.empty()) {
                    student = part.content;
                    continue;
                }
                total += part.content.size();
                files.push_back(UploadFile{name, part.filename, part.content});
            }
            if (total > kMaxUploadBytes) {
                send_error(res, 413, "PayloadTooLarge", "upload exceeds 10 MB");
                return;
            }
            if (files.empty()) {
                send_error(res, 400, "NoFiles", "no CSV files in upload");
                return;
            }
            const auto info = store.add_session(files, student);
            Json body = info.summary;
            body["created"] = info.created;
            send_json(res, info.created ? 201 : 200, body);
        });
    });

    server.Post(R"(/v1/sessions/([0-9a-f]+)/analyze)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 422, [&] {
            const Json overrides = req.body.empty() ? Json::object() : Json::parse(req.body);
            const auto result = store.analyze(req.matches[1], overrides);
            send_json(res, result.cached ? 200 : 201,
                      Json{{"analysis_id", result.analysis_id}, {"session_id", std::string(req.matches[1])},
                           {"cached", result.cached}});
        });
    });

    server.Get(R"(/v1/analyses/([0-9a-f]+)/tables)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 422, [&] {
            const auto rec = store.analysis(req.matches[1]);
            const std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
            if (format != "json" && format != "csv") {
                send_error(res, 400, "BadFormat", "format must be json or csv");
                return;
            }
            send_json(res, 200, rec->tables.at(format));
        });
    });

    server.Get(R"(/v1/analyses/([0-9a-f]+)/charts/([a-z]+))", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 422, [&] {
            const auto rec = store.analysis(req.matches[1]);
            const std::string chart = req.matches[2];
            const auto& ids = chart_ids();
            if (std::find(ids.begin(), ids.end(), chart) == ids.end()) {
                send_error(res, 404, "UnknownChart", "unknown chart '" + chart + "'");
                return;
            }
            std::optional<int> level;
            if (req.has_param("level")) level = std::stoi(req.get_param_value("level"));
            const bool svg = req.has_param("format") && req.get_param_value("format") == "svg";
            if (svg) {
                const ChartBundle* bundle = &rec->bundles.front();
                for (const auto& b : rec->bundles) {
                    if (level && b.level == *level) bundle = &b;
                }
                if (level && bundle->level != *level) throw NotFound("no level " + std::to_string(*level));
                res.status = 200;
                res.set_content(render_svg(*bundle, chart), "image/svg+xml");
                return;
            }
            Json out{{"chart", chart}, {"levels", Json::object()}};
            for (const auto& [lv, bundle] : rec->charts.at("levels").items()) {
                if (level && std::to_string(*level) != lv) continue;
                if (chart == "heatmap") {
                    out["levels"][lv] = bundle.at("scanpath").at("heatmap");
                } else {
                    out["levels"][lv] = bundle.at(chart);
                }
            }
            if (chart == "multilevel") {
                const auto& first = rec->charts.at("levels").begin().value();
                out = Json{{"chart", chart}, {"omitted", first.at("multilevel_omitted")}, {"series", first.at("multilevel")}};
            }
            send_json(res, 200, out);
        });
    });

    server.Get(R"(/v1/analyses/([0-9a-f]+)/calibration)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 422, [&] { send_json(res, 200, store.analysis(req.matches[1])->calibration); });
    });

    server.Get(R"(/v1/analyses/([0-9a-f]+)/recommendations)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 422, [&] { send_json(res, 200, store.analysis(req.matches[1])->recommendations); });
    });
}

}  // namespace gazelab::service
