#include "factreward/artifacts.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "factreward/error.hpp"

namespace factreward {

namespace {

VerificationLabel label_from_string(const std::string& s) {
    for (auto label : kAllLabels) {
        if (to_string(label) == s) {
            return label;
        }
    }
    throw DataError("unknown verification label '" + s + "' in artifact");
}

RewardKind kind_from_string(const std::string& s) {
    if (s == "Truth") return RewardKind::Truth;
    if (s == "Info") return RewardKind::Info;
    throw DataError("unknown reward kind '" + s + "' in artifact");
}

ojson call_json(const CallRecord& c) {
    ojson j;
    j["attempts"] = c.attempts;
    j["ok"] = c.ok;
    j["note"] = c.note;
    return j;
}

CallRecord call_from_json(const ojson& j) {
    return {j.at("attempts").get<int>(), j.at("ok").get<bool>(), j.value("note", std::string{})};
}

template <typename Fn>
auto guarded(const std::string& what, Fn fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(what + ": " + e.what());
    }
}

}  // namespace

double round_sig9(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    const double out = std::strtod(buf, nullptr);
    return out == 0.0 ? 0.0 : out;
}

std::string id_key(const ojson& id) { return id.is_string() ? id.get<std::string>() : id.dump(); }

ojson to_json(const AnnotationRecord& record) {
    const auto& a = record.annotation;
    ojson j;
    j["id"] = record.id;
    j["prompt"] = a.prompt;
    j["response"] = a.response;
    ojson sentences = ojson::array();
    for (const auto& s : a.sentences) {
        ojson js;
        js["index"] = s.index;
        js["text"] = s.text;
        ojson statements = ojson::array();
        for (const auto& st : s.statements) {
            ojson jst;
            jst["text"] = st.text;
            jst["verification"] =
                st.verification ? ojson(std::string(to_string(*st.verification))) : ojson(nullptr);
            jst["info"] = st.info ? ojson(st.info->value()) : ojson(nullptr);
            statements.push_back(std::move(jst));
        }
        js["statements"] = std::move(statements);
        sentences.push_back(std::move(js));
    }
    j["sentences"] = std::move(sentences);
    ojson provenance = ojson::array();
    for (const auto& p : a.provenance) {
        ojson jp;
        jp["sentence"] = p.sentence;
        jp["statement"] = p.statement;
        jp["contexts"] = p.contexts;
        jp["verification"] = call_json(p.verification);
        jp["assessment"] = call_json(p.assessment);
        provenance.push_back(std::move(jp));
    }
    j["provenance"] = std::move(provenance);
    if (record.error) {
        j["error"] = *record.error;
    }
    return j;
}

AnnotationRecord annotation_from_json(const ojson& j) {
    return guarded("annotation record", [&] {
        AnnotationRecord r;
        r.id = j.at("id");
        r.annotation.prompt = j.at("prompt").get<std::string>();
        r.annotation.response = j.at("response").get<std::string>();
        for (const auto& js : j.at("sentences")) {
            SentenceAnnotation s;
            s.index = js.at("index").get<std::uint32_t>();
            s.text = js.at("text").get<std::string>();
            for (const auto& jst : js.at("statements")) {
                StatementAnnotation st;
                st.text = jst.at("text").get<std::string>();
                if (const auto& v = jst.at("verification"); !v.is_null()) {
                    st.verification = label_from_string(v.get<std::string>());
                }
                if (const auto& v = jst.at("info"); !v.is_null()) {
                    st.info = InfoScore(v.get<int>());
                }
                s.statements.push_back(std::move(st));
            }
            r.annotation.sentences.push_back(std::move(s));
        }
        if (j.contains("provenance")) {
            for (const auto& jp : j.at("provenance")) {
                StatementProvenance p;
                p.sentence = jp.at("sentence").get<std::uint32_t>();
                p.statement = jp.at("statement").get<std::size_t>();
                p.contexts = jp.at("contexts").get<std::vector<std::string>>();
                p.verification = call_from_json(jp.at("verification"));
                p.assessment = call_from_json(jp.at("assessment"));
                r.annotation.provenance.push_back(std::move(p));
            }
        }
        if (j.contains("error")) {
            r.error = j.at("error").get<std::string>();
        }
        return r;
    });
}

ojson to_json(const RewardRecord& record) {
    ojson j;
    j["id"] = record.id;
    j["response"] = record.response;
    ojson events = ojson::array();
    for (const auto& e : record.events) {
        ojson je;
        je["offset"] = e.offset;
        je["value"] = round_sig9(e.value);
        je["kind"] = std::string(to_string(e.kind));
        events.push_back(std::move(je));
    }
    j["events"] = std::move(events);
    if (record.token_rewards) {
        ojson values = ojson::array();
        for (double v : *record.token_rewards) {
            values.push_back(round_sig9(v));
        }
        j["token_rewards"] = std::move(values);
    }
    j["config_name"] = record.config_name;
    return j;
}

RewardRecord reward_from_json(const ojson& j) {
    return guarded("reward record", [&] {
        RewardRecord r;
        r.id = j.at("id");
        r.response = j.at("response").get<std::string>();
        for (const auto& je : j.at("events")) {
            r.events.push_back({je.at("offset").get<std::size_t>(), je.at("value").get<double>(),
                                kind_from_string(je.at("kind").get<std::string>())});
        }
        if (j.contains("token_rewards")) {
            r.token_rewards = j.at("token_rewards").get<std::vector<double>>();
        }
        r.config_name = j.at("config_name").get<std::string>();
        return r;
    });
}

ojson to_json(const ojson& id, const ResponseMetrics& m) {
    ojson j;
    j["id"] = id;
    j["correct"] = m.correct_count;
    j["incorrect"] = m.incorrect_count;
    j["responded"] = m.responded;
    j["factscore"] = m.factscore ? ojson(round_sig9(*m.factscore)) : ojson(nullptr);
    return j;
}

ojson to_json(const DatasetMetrics& m) {
    ojson j;
    j["total"] = m.total;
    j["responded"] = m.responded;
    j["avg_correct"] = round_sig9(m.avg_correct);
    j["avg_incorrect"] = round_sig9(m.avg_incorrect);
    j["response_ratio"] = round_sig9(m.response_ratio);
    j["score"] = round_sig9(m.score);
    j["refusals_only"] = m.refusals_only;
    j["avg_correct_all"] = round_sig9(m.avg_correct_all);
    j["avg_incorrect_all"] = round_sig9(m.avg_incorrect_all);
    return j;
}

std::vector<ojson> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::vector<ojson> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            rows.push_back(ojson::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<ojson>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    for (const auto& row : rows) {
        out << row.dump() << '\n';
    }
    if (!out) {
        throw DataError("write to '" + path.string() + "' failed");
    }
}

std::vector<InputRecord> read_inputs(const std::filesystem::path& path) {
    std::vector<InputRecord> out;
    std::size_t n = 0;
    for (const auto& j : read_jsonl(path)) {
        ++n;
        out.push_back(guarded(path.string() + " record " + std::to_string(n), [&] {
            return InputRecord{j.at("id"), j.at("prompt").get<std::string>(),
                               j.at("response").get<std::string>()};
        }));
    }
    return out;
}

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path) {
    std::vector<AnnotationRecord> out;
    for (const auto& j : read_jsonl(path)) {
        out.push_back(annotation_from_json(j));
    }
    return out;
}

std::vector<RewardRecord> read_rewards(const std::filesystem::path& path) {
    std::vector<RewardRecord> out;
    for (const auto& j : read_jsonl(path)) {
        out.push_back(reward_from_json(j));
    }
    return out;
}

std::map<std::string, TokenOffsets> read_token_offsets(const std::filesystem::path& path) {
    std::map<std::string, TokenOffsets> out;
    for (const auto& j : read_jsonl(path)) {
        guarded("token offsets", [&] {
            TokenOffsets offsets;
            for (const auto& pair : j.at("offsets")) {
                offsets.ranges.push_back(
                    {pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>()});
            }
            out[id_key(j.at("id"))] = std::move(offsets);
            return 0;
        });
    }
    return out;
}

}  // namespace factreward
