#include "factreward/judge.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "factreward/error.hpp"
#include "factreward/prompts.hpp"
#include "factreward/text.hpp"

namespace factreward {

using json = nlohmann::json;

void JudgeEndpoint::validate() const {
    if (!(timeout_seconds > 0.0)) {
        throw InvalidConfig("judge timeout must be positive");
    }
    if (max_retries < 0) {
        throw InvalidConfig("judge max_retries must be >= 0");
    }
    if (base_url.find("://") == std::string::npos) {
        throw InvalidConfig("judge base_url needs a scheme: '" + base_url + "'");
    }
}

// ---------------------------------------------------------------------------
// HTTP judge

HttpJudge::HttpJudge(JudgeEndpoint endpoint, std::optional<std::string> api_key)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)) {
    endpoint_.validate();
    const auto scheme_end = endpoint_.base_url.find("://") + 3;
    const auto path_start = endpoint_.base_url.find('/', scheme_end);
    origin_ = endpoint_.base_url.substr(0, path_start);
    std::string prefix =
        path_start == std::string::npos ? std::string{} : endpoint_.base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') {
        prefix.pop_back();
    }
    path_ = prefix + "/chat/completions";
}

std::optional<std::string> HttpJudge::api_key_from_env() {
    if (const char* key = std::getenv("FACTREWARD_API_KEY"); key != nullptr && *key != '\0') {
        return std::string(key);
    }
    return std::nullopt;
}

std::string HttpJudge::complete(const std::string& prompt) {
    httplib::Client client(origin_);
    const auto timeout = std::chrono::duration<double>(endpoint_.timeout_seconds);
    const auto sec = static_cast<time_t>(timeout.count());
    const auto usec = static_cast<time_t>((timeout.count() - static_cast<double>(sec)) * 1e6);
    client.set_connection_timeout(sec, usec);
    client.set_read_timeout(sec, usec);
    client.set_write_timeout(sec, usec);

    httplib::Headers headers;
    if (api_key_) {
        headers.emplace("Authorization", "Bearer " + *api_key_);
    }

    const json body = {
        {"model", endpoint_.model},
        {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", endpoint_.temperature},
    };

    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
        throw JudgeUnavailable("judge request to " + origin_ + path_ +
                               " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw JudgeUnavailable("judge returned HTTP " + std::to_string(res->status));
    }
    try {
        const auto reply = json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw JudgeUnavailable(std::string("unexpected judge reply: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Mock judge

std::string prompt_hash(std::string_view prompt) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(prompt.data(), prompt.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) {
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return out.str();
}

MockJudge::MockJudge(std::map<std::string, std::optional<std::string>> replies)
    : replies_(std::move(replies)) {}

MockJudge MockJudge::load(const std::filesystem::path& fixture) {
    std::ifstream in(fixture);
    if (!in) {
        throw DataError("cannot open mock judge fixture '" + fixture.string() + "'");
    }
    std::map<std::string, std::optional<std::string>> replies;
    try {
        const auto j = json::parse(in);
        for (const auto& [hash, reply] : j.items()) {
            if (reply.is_null()) {
                replies.emplace(hash, std::nullopt);
            } else {
                replies.emplace(hash, reply.get<std::string>());
            }
        }
    } catch (const json::exception& e) {
        throw DataError("mock judge fixture '" + fixture.string() + "': " + e.what());
    }
    return MockJudge(std::move(replies));
}

std::string MockJudge::complete(const std::string& prompt) {
    const auto hash = prompt_hash(prompt);
    const auto it = replies_.find(hash);
    if (it == replies_.end()) {
        throw JudgeUnavailable("mock judge has no reply for prompt " + hash);
    }
    if (!it->second) {
        throw JudgeUnavailable("mock judge scripted failure for prompt " + hash);
    }
    return *it->second;
}

// ---------------------------------------------------------------------------
// Annotator

std::string format_materials(const std::vector<RetrievedPassage>& passages) {
    std::string out;
    for (const auto& p : passages) {
        if (!out.empty()) {
            out += '\n';
        }
        out += "- ";
        out += p.text;
    }
    return out;
}

Annotator::Annotator(Judge& judge, const DocumentStore& store, AnnotatorOptions options)
    : judge_(judge),
      store_(store),
      options_(options),
      in_flight_(std::make_unique<std::counting_semaphore<>>(
          std::max<std::ptrdiff_t>(1, options.max_in_flight))) {
    if (options_.max_retries < 0) {
        throw InvalidConfig("max_retries must be >= 0");
    }
}

std::string Annotator::call_judge(const std::string& prompt) const {
    in_flight_->acquire();
    struct Release {
        std::counting_semaphore<>& sem;
        ~Release() { sem.release(); }
    } release{*in_flight_};
    return judge_.complete(prompt);
}

template <typename Parse>
auto Annotator::call_with_retries(const std::string& prompt, Parse parse, CallRecord& record) const
    -> std::optional<decltype(parse(std::string_view{}))> {
    const int attempts = 1 + options_.max_retries;
    for (int i = 0; i < attempts; ++i) {
        if (i > 0 && options_.retry_backoff_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(options_.retry_backoff_ms * i));
        }
        record.attempts = i + 1;
        try {
            auto value = parse(call_judge(prompt));
            record.ok = true;
            record.note.clear();
            return value;
        } catch (const Error& e) {
            record.note = e.what();
        }
    }
    record.ok = false;
    return std::nullopt;
}

ResponseAnnotation Annotator::annotate(const std::string& prompt,
                                       const std::string& response) const {
    ResponseAnnotation out{prompt, response, {}, {}};
    if (text::trim(response).empty()) {
        return out;
    }

    CallRecord extraction;
    auto sentences = call_with_retries(
        render_prompt(JudgeTask::Extract, {{"response", response}}),
        [](std::string_view reply) { return parse_extraction(reply); }, extraction);
    if (!sentences) {
        throw JudgeUnavailable("extraction failed after " + std::to_string(extraction.attempts) +
                               " attempt(s): " + extraction.note);
    }
    out.sentences = std::move(*sentences);

    struct Job {
        StatementAnnotation* statement;
        StatementProvenance provenance;
    };
    std::vector<Job> jobs;
    for (auto& sentence : out.sentences) {
        for (std::size_t k = 0; k < sentence.statements.size(); ++k) {
            StatementProvenance prov;
            prov.sentence = sentence.index;
            prov.statement = k;
            jobs.push_back({&sentence.statements[k], std::move(prov)});
        }
    }

    auto run = [&](Job& job) {
        auto& st = *job.statement;
        auto& prov = job.provenance;

        const auto passages = store_.retrieve(st.text, options_.context_count);
        for (const auto& p : passages) {
            prov.contexts.push_back(p.id);
        }

        try {
            const auto verify_prompt = render_prompt(
                JudgeTask::Verify,
                {{"materials", format_materials(passages)}, {"statement", st.text}});
            st.verification = call_with_retries(
                verify_prompt, [](std::string_view r) { return parse_verification(r); },
                prov.verification);
        } catch (const MissingSlot& e) {
            prov.verification.note = e.what();
        }
        if (!st.verification) {
            st.verification = VerificationLabel::Vague;
            prov.verification.note = "fallback Vague: " + prov.verification.note;
        }

        try {
            const auto assess_prompt =
                render_prompt(JudgeTask::Assess,
                              {{"question", prompt}, {"response", response}, {"statement", st.text}});
            st.info = call_with_retries(
                assess_prompt, [](std::string_view r) { return parse_assessment(r); },
                prov.assessment);
        } catch (const MissingSlot& e) {
            prov.assessment.note = e.what();
        }
        if (!st.info) {
            st.info = InfoScore(kFallbackInfoScore);
            prov.assessment.note =
                "fallback score " + std::to_string(kFallbackInfoScore) + ": " + prov.assessment.note;
        }
    };

    if (options_.parallel_statements && jobs.size() > 1) {
        std::vector<std::future<void>> pending;
        pending.reserve(jobs.size());
        for (auto& job : jobs) {
            pending.push_back(std::async(std::launch::async, run, std::ref(job)));
        }
        for (auto& f : pending) {
            f.get();
        }
    } else {
        for (auto& job : jobs) {
            run(job);
        }
    }

    out.provenance.reserve(jobs.size());
    for (auto& job : jobs) {
        out.provenance.push_back(std::move(job.provenance));
    }
    return out;
}

}  // namespace factreward
