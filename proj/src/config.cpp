#include "factreward/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "factreward/error.hpp"
#include "factreward/text.hpp"

namespace factreward {

using json = nlohmann::json;

namespace {

class TomlParser {
  public:
    explicit TomlParser(std::string_view src) : src_(src) {}

    json parse() {
        json root = json::object();
        json* table = &root;
        while (true) {
            skip_blank_lines();
            if (eof()) {
                break;
            }
            if (peek() == '[') {
                ++pos_;
                skip_ws();
                auto path = parse_key_path();
                skip_ws();
                expect(']');
                table = &root;
                for (const auto& part : path) {
                    json& next = (*table)[part];
                    if (next.is_null()) {
                        next = json::object();
                    } else if (!next.is_object()) {
                        fail("'" + part + "' is not a table");
                    }
                    table = &next;
                }
            } else {
                parse_key_value(*table);
            }
            end_of_line();
        }
        return root;
    }

  private:
    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return eof() ? '\0' : src_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidConfig("config line " + std::to_string(line_) + ": " + what);
    }

    void expect(char c) {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) {
            ++pos_;
        }
    }

    void skip_comment() {
        if (peek() == '#') {
            while (!eof() && peek() != '\n') {
                ++pos_;
            }
        }
    }

    void newline() {
        if (peek() == '\r') {
            ++pos_;
        }
        if (peek() == '\n') {
            ++pos_;
            ++line_;
        }
    }

    void skip_blank_lines() {
        while (!eof()) {
            skip_ws();
            skip_comment();
            if (peek() == '\n' || peek() == '\r') {
                newline();
            } else {
                break;
            }
        }
    }

    // Whitespace, comments and newlines inside arrays.
    void skip_all() {
        while (!eof()) {
            skip_ws();
            skip_comment();
            if (peek() == '\n' || peek() == '\r') {
                newline();
            } else {
                break;
            }
        }
    }

    void end_of_line() {
        skip_ws();
        skip_comment();
        if (!eof() && peek() != '\n' && peek() != '\r') {
            fail("unexpected trailing characters");
        }
        newline();
    }

    std::string parse_simple_key() {
        if (peek() == '"') {
            return parse_basic_string();
        }
        if (peek() == '\'') {
            return parse_literal_string();
        }
        std::string key;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                key.push_back(c);
                ++pos_;
            } else {
                break;
            }
        }
        if (key.empty()) {
            fail("expected a key");
        }
        return key;
    }

    std::vector<std::string> parse_key_path() {
        std::vector<std::string> path{parse_simple_key()};
        skip_ws();
        while (peek() == '.') {
            ++pos_;
            skip_ws();
            path.push_back(parse_simple_key());
            skip_ws();
        }
        return path;
    }

    void parse_key_value(json& table) {
        auto path = parse_key_path();
        skip_ws();
        expect('=');
        skip_ws();
        json* target = &table;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            json& next = (*target)[path[i]];
            if (next.is_null()) {
                next = json::object();
            } else if (!next.is_object()) {
                fail("'" + path[i] + "' is not a table");
            }
            target = &next;
        }
        if (target->contains(path.back())) {
            fail("duplicate key '" + path.back() + "'");
        }
        (*target)[path.back()] = parse_value();
    }

    json parse_value() {
        const char c = peek();
        if (c == '"') return parse_basic_string();
        if (c == '\'') return parse_literal_string();
        if (c == '[') return parse_array();
        if (c == '{') return parse_inline_table();
        if (src_.substr(pos_).starts_with("true")) {
            pos_ += 4;
            return true;
        }
        if (src_.substr(pos_).starts_with("false")) {
            pos_ += 5;
            return false;
        }
        return parse_number();
    }

    std::string parse_basic_string() {
        expect('"');
        std::string out;
        while (true) {
            if (eof() || peek() == '\n') {
                fail("unterminated string");
            }
            const char c = src_[pos_++];
            if (c == '"') {
                return out;
            }
            if (c != '\\') {
                out.push_back(c);
                continue;
            }
            const char e = eof() ? '\0' : src_[pos_++];
            switch (e) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                case 'b': out.push_back('\b'); break;
                case 'f': out.push_back('\f'); break;
                case 'u':
                case 'U': {
                    const std::size_t width = e == 'u' ? 4 : 8;
                    if (pos_ + width > src_.size()) {
                        fail("truncated unicode escape");
                    }
                    std::uint32_t cp = 0;
                    auto [p, ec] = std::from_chars(src_.data() + pos_, src_.data() + pos_ + width,
                                                   cp, 16);
                    if (ec != std::errc{} || p != src_.data() + pos_ + width) {
                        fail("bad unicode escape");
                    }
                    pos_ += width;
                    out += text::to_utf8(std::u32string(1, static_cast<char32_t>(cp)));
                    break;
                }
                default: fail(std::string("unknown escape '\\") + e + "'");
            }
        }
    }

    std::string parse_literal_string() {
        expect('\'');
        const auto close = src_.find('\'', pos_);
        const auto nl = src_.find('\n', pos_);
        if (close == std::string_view::npos || close > nl) {
            fail("unterminated literal string");
        }
        std::string out(src_.substr(pos_, close - pos_));
        pos_ = close + 1;
        return out;
    }

    json parse_array() {
        expect('[');
        json arr = json::array();
        skip_all();
        while (peek() != ']') {
            arr.push_back(parse_value());
            skip_all();
            if (peek() == ',') {
                ++pos_;
                skip_all();
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
        ++pos_;
        return arr;
    }

    json parse_inline_table() {
        expect('{');
        json table = json::object();
        skip_ws();
        if (peek() == '}') {
            ++pos_;
            return table;
        }
        while (true) {
            parse_key_value(table);
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                skip_ws();
            } else if (peek() == '}') {
                ++pos_;
                return table;
            } else {
                fail("expected ',' or '}' in inline table");
            }
        }
    }

    json parse_number() {
        std::string digits;
        bool is_float = false;
        while (!eof()) {
            const char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') {
                digits.push_back(c);
            } else if (c == '.' || c == 'e' || c == 'E') {
                digits.push_back(c);
                is_float = true;
            } else if (c != '_') {
                break;
            }
            ++pos_;
        }
        if (digits.empty()) {
            fail("expected a value");
        }
        const char* first = digits.data() + (digits.front() == '+' ? 1 : 0);
        const char* last = digits.data() + digits.size();
        if (is_float) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || p != last) {
                fail("bad float '" + digits + "'");
            }
            return v;
        }
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || p != last) {
            fail("bad integer '" + digits + "'");
        }
        return v;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

void reject_unknown(const json& table, std::string_view section,
                    std::initializer_list<std::string_view> known) {
    for (const auto& [key, _] : table.items()) {
        bool ok = false;
        for (auto k : known) {
            ok = ok || key == k;
        }
        if (!ok) {
            throw InvalidConfig("unknown key '" + key + "' in [" + std::string(section) + "]");
        }
    }
}

double number(const json& j, std::string_view what) {
    if (!j.is_number()) {
        throw InvalidConfig(std::string(what) + " must be a number");
    }
    return j.get<double>();
}

std::int64_t integer(const json& j, std::string_view what) {
    if (!j.is_number_integer()) {
        throw InvalidConfig(std::string(what) + " must be an integer");
    }
    return j.get<std::int64_t>();
}

std::string string(const json& j, std::string_view what) {
    if (!j.is_string()) {
        throw InvalidConfig(std::string(what) + " must be a string");
    }
    return j.get<std::string>();
}

std::filesystem::path path_value(const json& j, std::string_view what,
                                 const std::filesystem::path& base) {
    std::filesystem::path p = string(j, what);
    return p.is_absolute() || base.empty() ? p : base / p;
}

RewardConfig custom_reward(const json& j, const RewardConfig& base) {
    reject_unknown(j, "reward.custom", {"name", "alpha", "beta", "epsilon", "mu", "f", "g"});
    RewardConfig cfg = base;
    cfg.name = j.contains("name") ? string(j["name"], "reward.custom.name") : "custom";
    if (j.contains("alpha")) cfg.alpha = number(j["alpha"], "alpha");
    if (j.contains("beta")) cfg.beta = number(j["beta"], "beta");
    if (j.contains("epsilon")) cfg.epsilon = number(j["epsilon"], "epsilon");
    if (j.contains("mu")) cfg.mu = number(j["mu"], "mu");
    if (j.contains("f")) {
        const auto& f = j["f"];
        static constexpr std::array<std::string_view, 5> keys = {
            "correct", "hedged_correct", "vague", "hedged_wrong", "wrong"};
        if (!f.is_object() || f.size() != keys.size()) {
            throw InvalidConfig("reward.custom.f must map all five labels");
        }
        reject_unknown(f, "reward.custom.f", {keys[0], keys[1], keys[2], keys[3], keys[4]});
        for (std::size_t i = 0; i < keys.size(); ++i) {
            cfg.f_map[i] = number(f.at(std::string(keys[i])), "reward.custom.f");
        }
    }
    if (j.contains("g")) {
        const auto& g = j["g"];
        if (!g.is_array() || g.size() != 5) {
            throw InvalidConfig("reward.custom.g must list values for scores 1..5");
        }
        for (std::size_t i = 0; i < 5; ++i) {
            cfg.g_map[i] = number(g[i], "reward.custom.g");
        }
    }
    return cfg;
}

}  // namespace

json parse_toml(std::string_view source) { return TomlParser(source).parse(); }

void PipelineConfig::validate() const {
    judge.validate();
    reward.validate();
    if (max_in_flight < 1) throw InvalidConfig("judge.max_in_flight must be >= 1");
    if (retry_backoff_ms < 0) throw InvalidConfig("judge.retry_backoff_ms must be >= 0");
    if (context_count < 1) throw InvalidConfig("retrieval.contexts must be >= 1");
    if (bm25.k1 < 0.0 || bm25.b < 0.0 || bm25.b > 1.0) {
        throw InvalidConfig("retrieval.k1 must be >= 0 and retrieval.b within [0, 1]");
    }
    if (!(min_ratio > 0.0 && min_ratio <= 1.0)) {
        throw InvalidConfig("alignment.min_ratio must lie in (0, 1]");
    }
    if (!(max_unresolved_rate >= 0.0 && max_unresolved_rate <= 1.0)) {
        throw InvalidConfig("alignment.max_unresolved_rate must lie in [0, 1]");
    }
    if (workers < 1) throw InvalidConfig("run.workers must be >= 1");
}

PipelineConfig config_from_toml(std::string_view source, const std::filesystem::path& base_dir) {
    const json root = parse_toml(source);
    PipelineConfig cfg;
    reject_unknown(root, "", {"judge", "reward", "retrieval", "alignment", "paths", "run", "trainer"});

    if (root.contains("judge")) {
        const auto& j = root["judge"];
        reject_unknown(j, "judge",
                       {"base_url", "model", "timeout", "max_retries", "temperature",
                        "max_in_flight", "retry_backoff_ms", "mock_fixture"});
        if (j.contains("base_url")) cfg.judge.base_url = string(j["base_url"], "judge.base_url");
        if (j.contains("model")) cfg.judge.model = string(j["model"], "judge.model");
        if (j.contains("timeout")) cfg.judge.timeout_seconds = number(j["timeout"], "judge.timeout");
        if (j.contains("max_retries")) {
            cfg.judge.max_retries = static_cast<int>(integer(j["max_retries"], "judge.max_retries"));
        }
        if (j.contains("temperature")) {
            cfg.judge.temperature = number(j["temperature"], "judge.temperature");
        }
        if (j.contains("max_in_flight")) {
            cfg.max_in_flight = integer(j["max_in_flight"], "judge.max_in_flight");
        }
        if (j.contains("retry_backoff_ms")) {
            cfg.retry_backoff_ms =
                static_cast<int>(integer(j["retry_backoff_ms"], "judge.retry_backoff_ms"));
        }
        if (j.contains("mock_fixture")) {
            cfg.mock_fixture = path_value(j["mock_fixture"], "judge.mock_fixture", base_dir);
        }
    }

    if (root.contains("reward")) {
        const auto& r = root["reward"];
        reject_unknown(r, "reward", {"preset", "custom"});
        if (r.contains("preset")) cfg.reward = preset(string(r["preset"], "reward.preset"));
        if (r.contains("custom")) cfg.reward = custom_reward(r["custom"], cfg.reward);
    }

    if (root.contains("retrieval")) {
        const auto& r = root["retrieval"];
        reject_unknown(r, "retrieval", {"contexts", "k1", "b"});
        if (r.contains("contexts")) {
            const auto n = integer(r["contexts"], "retrieval.contexts");
            if (n < 1) throw InvalidConfig("retrieval.contexts must be >= 1");
            cfg.context_count = static_cast<std::size_t>(n);
        }
        if (r.contains("k1")) cfg.bm25.k1 = number(r["k1"], "retrieval.k1");
        if (r.contains("b")) cfg.bm25.b = number(r["b"], "retrieval.b");
    }

    if (root.contains("alignment")) {
        const auto& a = root["alignment"];
        reject_unknown(a, "alignment", {"min_ratio", "max_unresolved_rate"});
        if (a.contains("min_ratio")) cfg.min_ratio = number(a["min_ratio"], "alignment.min_ratio");
        if (a.contains("max_unresolved_rate")) {
            cfg.max_unresolved_rate =
                number(a["max_unresolved_rate"], "alignment.max_unresolved_rate");
        }
    }

    if (root.contains("paths")) {
        const auto& p = root["paths"];
        reject_unknown(p, "paths", {"input", "output", "corpus", "token_offsets"});
        if (p.contains("input")) cfg.input = path_value(p["input"], "paths.input", base_dir);
        if (p.contains("output")) cfg.output = path_value(p["output"], "paths.output", base_dir);
        if (p.contains("corpus")) cfg.corpus = path_value(p["corpus"], "paths.corpus", base_dir);
        if (p.contains("token_offsets")) {
            cfg.token_offsets = path_value(p["token_offsets"], "paths.token_offsets", base_dir);
        }
    }

    if (root.contains("run")) {
        const auto& r = root["run"];
        reject_unknown(r, "run", {"workers"});
        if (r.contains("workers")) {
            const auto n = integer(r["workers"], "run.workers");
            if (n < 1) throw InvalidConfig("run.workers must be >= 1");
            cfg.workers = static_cast<std::size_t>(n);
        }
    }

    if (root.contains("trainer")) {
        cfg.trainer = root["trainer"];
    }

    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidConfig("cannot open config '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_toml(buf.str(), path.parent_path());
}

}  // namespace factreward
