#include "gazelab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gazelab/error.hpp"

namespace gazelab {

namespace {

class TomlLine {
public:
    TomlLine(std::string_view text, int line_no) : s_(text), line_(line_no) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool at_end_or_comment() {
        skip_ws();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    bool consume(char c) {
        skip_ws();
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    std::string key() {
        skip_ws();
        if (peek() == '"') return basic_string();
        const std::size_t start = pos_;
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected a key");
        return std::string(s_.substr(start, pos_ - start));
    }

    Json value() {
        skip_ws();
        const char c = peek();
        if (c == '"') return basic_string();
        if (c == '\'') return literal_string();
        if (c == '[') return array();
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return true;
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return false;
        }
        return number();
    }

private:
    std::string basic_string() {
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < s_.size()) {
            char c = s_[pos_++];
            if (c == '"') return out;
            if (c == '\\') {
                if (pos_ >= s_.size()) break;
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            } else {
                out.push_back(c);
            }
        }
        fail("unterminated string");
    }

    std::string literal_string() {
        ++pos_;
        const auto end = s_.find('\'', pos_);
        if (end == std::string_view::npos) fail("unterminated string");
        std::string out(s_.substr(pos_, end - pos_));
        pos_ = end + 1;
        return out;
    }

    Json array() {
        ++pos_;
        Json arr = Json::array();
        if (consume(']')) return arr;
        while (true) {
            arr.push_back(value());
            if (consume(']')) return arr;
            if (!consume(',')) fail("expected ',' or ']' in array");
            if (consume(']')) return arr;
        }
    }

    Json number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::string_view("+-0123456789._eE").find(s_[pos_]) != std::string_view::npos) ++pos_;
        std::string tok;
        for (char c : s_.substr(start, pos_ - start)) {
            if (c != '_') tok.push_back(c);
        }
        if (!tok.empty() && tok.front() == '+') tok.erase(0, 1);
        if (tok.empty()) fail("expected a value");
        const bool is_float = tok.find_first_of(".eE") != std::string::npos;
        if (!is_float) {
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec == std::errc() && p == tok.data() + tok.size()) return v;
        } else {
            double v = 0.0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec == std::errc() && p == tok.data() + tok.size()) return v;
        }
        fail("malformed number '" + tok + "'");
    }

    std::string_view s_;
    int line_;
    std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Json parse_toml(std::string_view text) {
    Json root = Json::object();
    Json* table = &root;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

        TomlLine line(raw, line_no);
        if (line.at_end_or_comment()) continue;
        if (line.consume('[')) {
            if (line.peek() == '[') line.fail("arrays of tables are not supported");
            table = &root;
            do {
                const std::string name = line.key();
                if (table->contains(name) && !(*table)[name].is_object()) line.fail("'" + name + "' is not a table");
                table = &(*table)[name];
                if (table->is_null()) *table = Json::object();
            } while (line.consume('.'));
            if (!line.consume(']')) line.fail("expected ']'");
        } else {
            const std::string key = line.key();
            if (!line.consume('=')) line.fail("expected '=' after key");
            if (table->contains(key)) line.fail("duplicate key '" + key + "'");
            (*table)[key] = line.value();
        }
        if (!line.at_end_or_comment()) line.fail("trailing characters");
    }
    return root;
}

Config config_from_json(const Json& j, const Config& base) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "configuration must be an object");
    Config c = base;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "student_id") {
                c.student_id = value.get<std::string>();
            } else if (key == "screen") {
                if (value.contains("width")) c.screen.width = value.at("width").get<int>();
                if (value.contains("height")) c.screen.height = value.at("height").get<int>();
                if (c.screen.width < 1 || c.screen.height < 1) {
                    throw Error(ErrorCode::InvalidConfig, "screen dimensions must be positive");
                }
            } else if (key == "params") {
                c.params = params_from_json(value, c.params);
            } else if (key == "columns") {
                auto& m = c.columns;
                for (const auto& [col, name] : value.items()) {
                    std::string* target = col == "timestamp"     ? &m.timestamp
                                          : col == "gaze"        ? &m.gaze
                                          : col == "event_kind"  ? &m.event_kind
                                          : col == "object_id"   ? &m.object_id
                                          : col == "object_type" ? &m.object_type
                                          : col == "object_pos"  ? &m.object_pos
                                          : col == "click_label" ? &m.click_label
                                                                 : nullptr;
                    if (!target) throw Error(ErrorCode::InvalidConfig, "unknown column binding '" + col + "'");
                    *target = name.get<std::string>();
                }
            } else if (key == "rules") {
                c.rules = rules_from_json(value, c.rules);
            } else if (key == "comparison") {
                if (value.contains("flat_tolerance")) c.flat_tolerance = value.at("flat_tolerance").get<double>();
                if (!(c.flat_tolerance >= 0.0)) throw Error(ErrorCode::InvalidConfig, "flat_tolerance must be >= 0");
            } else {
                throw Error(ErrorCode::InvalidConfig, "unknown section '" + key + "'");
            }
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    return c;
}

Json to_json(const Config& c) {
    const auto& m = c.columns;
    return Json{{"student_id", c.student_id},
                {"screen", Json{{"width", c.screen.width}, {"height", c.screen.height}}},
                {"params", to_json(c.params)},
                {"columns", Json{{"timestamp", m.timestamp},
                                 {"gaze", m.gaze},
                                 {"event_kind", m.event_kind},
                                 {"object_id", m.object_id},
                                 {"object_type", m.object_type},
                                 {"object_pos", m.object_pos},
                                 {"click_label", m.click_label}}},
                {"rules", to_json(c.rules)},
                {"comparison", Json{{"flat_tolerance", c.flat_tolerance}}}};
}

Config parse_config_text(std::string_view text) {
    try {
        return config_from_json(parse_toml(text));
    } catch (const Error& toml_error) {
        if (toml_error.code() != ErrorCode::InvalidConfig) throw;
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::exception&) {
            throw toml_error;
        }
        return config_from_json(j);
    }
}

Config load_config(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    if (path.extension() == ".json") {
        try {
            return config_from_json(Json::parse(text));
        } catch (const Json::parse_error& e) {
            throw Error(ErrorCode::InvalidConfig, e.what());
        }
    }
    return parse_config_text(text);
}

}  // namespace gazelab
