#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "gazelab/config.hpp"
#include "gazelab/pipeline.hpp"
#include "gazelab/report.hpp"
#include "gazelab/serialize.hpp"

namespace httplib {
class Server;
}

namespace gazelab::service {

inline constexpr std::size_t kMaxUploadBytes = 10 * 1024 * 1024;

/// Lookup of an id the store does not know.
class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct UploadFile {
    std::string field;     // multipart field name, e.g. "level1"
    std::string filename;  // client file name, may be empty
    std::string content;
};

struct SessionInfo {
    std::string id;
    std::string content_hash;
    bool created = false;
    Json summary;
};

struct AnalysisResult {
    std::string analysis_id;
    bool cached = false;
};

/// Everything the read endpoints serve for one analysis.
struct AnalysisRecord {
    std::string id;
    std::string session_id;
    AnalysisParams params;
    Json tables;           // {"tables": [{"name", "content"}...]}
    Json charts;           // {"levels": {"1": bundle}}
    std::vector<ChartBundle> bundles;
    Json calibration;
    Json recommendations;
};

/// Content-addressed session storage on local disk plus an in-memory
/// analysis cache keyed by (session hash, parameters). Safe for concurrent use.
class AnalysisStore {
public:
    AnalysisStore(std::filesystem::path root, Config defaults);

    /// Level of each file: "levelN" field name, else "levelN" in the file
    /// name, else upload order. Throws gazelab::Error / IngestError.
    SessionInfo add_session(const std::vector<UploadFile>& files, const std::optional<std::string>& student_id);

    /// Throws NotFound or Error{InvalidParameter}.
    AnalysisResult analyze(const std::string& session_id, const Json& overrides);

    std::shared_ptr<const AnalysisRecord> analysis(const std::string& analysis_id) const;

    std::size_t session_count() const;
    std::size_t analysis_count() const;
    const Config& defaults() const { return defaults_; }

private:
    struct SessionEntry {
        std::string hash;
        std::string student_id;
        std::map<int, std::string> files;  // level -> file name inside the session directory
        std::shared_ptr<const CombinedDataset> dataset;
    };

    std::shared_ptr<const CombinedDataset> dataset_for(const std::string& session_id);
    void write_index() const;
    void read_index();

    std::filesystem::path root_;
    Config defaults_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, SessionEntry> sessions_;
    std::map<std::string, std::shared_ptr<const AnalysisRecord>> analyses_;
};

/// Installs the /v1 routes on `server`.
void register_routes(httplib::Server& server, AnalysisStore& store);

}  // namespace gazelab::service
