#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "factreward/annotation.hpp"
#include "factreward/document_store.hpp"

namespace factreward {

/// Connection settings for a chat-completion style judge.
struct JudgeEndpoint {
    std::string base_url = "http://127.0.0.1:8000/v1";
    std::string model = "judge";
    double timeout_seconds = 60.0;
    int max_retries = 2;
    double temperature = 0.0;

    /// Throws InvalidConfig when timeout <= 0 or max_retries < 0.
    void validate() const;
};

/// Anything that turns a prompt into a reply. Implementations throw
/// JudgeUnavailable when no reply can be produced.
class Judge {
  public:
    virtual ~Judge() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

/// POSTs {model, messages: [{role: "user", content}], temperature} to
/// `<base_url>/chat/completions` and returns choices[0].message.content.
/// The bearer token, when present, is sent as Authorization.
class HttpJudge : public Judge {
  public:
    HttpJudge(JudgeEndpoint endpoint, std::optional<std::string> api_key);

    /// Reads the token from FACTREWARD_API_KEY.
    static std::optional<std::string> api_key_from_env();

    std::string complete(const std::string& prompt) override;

    const JudgeEndpoint& endpoint() const noexcept { return endpoint_; }

  private:
    JudgeEndpoint endpoint_;
    std::optional<std::string> api_key_;
    std::string origin_;  // scheme://host[:port]
    std::string path_;    // <prefix>/chat/completions
};

/// Hex SHA-256 of the prompt bytes; the key used by mock fixtures.
std::string prompt_hash(std::string_view prompt);

/// Scripted judge: replies are looked up by prompt hash. A null entry in the
/// fixture simulates a failing call.
class MockJudge : public Judge {
  public:
    explicit MockJudge(std::map<std::string, std::optional<std::string>> replies);

    /// JSON object mapping prompt hash to reply string (or null).
    static MockJudge load(const std::filesystem::path& fixture);

    std::string complete(const std::string& prompt) override;

  private:
    std::map<std::string, std::optional<std::string>> replies_;
};

struct CallRecord {
    int attempts = 0;
    bool ok = false;
    std::string note;

    bool operator==(const CallRecord&) const = default;
};

struct StatementProvenance {
    std::uint32_t sentence = 0;     // SentenceAnnotation::index
    std::size_t statement = 0;      // position within the sentence
    std::vector<std::string> contexts;  // retrieved document ids, ranked
    CallRecord verification;
    CallRecord assessment;

    bool operator==(const StatementProvenance&) const = default;
};

struct ResponseAnnotation {
    std::string prompt;
    std::string response;
    std::vector<SentenceAnnotation> sentences;
    std::vector<StatementProvenance> provenance;

    bool operator==(const ResponseAnnotation&) const = default;
};

struct AnnotatorOptions {
    int max_retries = 2;
    std::size_t context_count = kDefaultContextCount;
    std::ptrdiff_t max_in_flight = 8;
    bool parallel_statements = true;
    int retry_backoff_ms = 0;
};

/// Score used when every assessment attempt fails.
inline constexpr int kFallbackInfoScore = 1;

/// Runs extraction, then per statement one verification (with retrieved
/// materials) and one assessment call. Failed verification falls back to
/// Vague, failed assessment to kFallbackInfoScore; both are noted in the
/// provenance. Shareable across threads; the in-flight cap is per annotator.
class Annotator {
  public:
    Annotator(Judge& judge, const DocumentStore& store, AnnotatorOptions options = {});

    /// Throws JudgeUnavailable when extraction fails after all retries.
    ResponseAnnotation annotate(const std::string& prompt, const std::string& response) const;

    const AnnotatorOptions& options() const noexcept { return options_; }

  private:
    template <typename Parse>
    auto call_with_retries(const std::string& prompt, Parse parse, CallRecord& record) const
        -> std::optional<decltype(parse(std::string_view{}))>;

    std::string call_judge(const std::string& prompt) const;

    Judge& judge_;
    const DocumentStore& store_;
    AnnotatorOptions options_;
    std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

/// Materials block for the verification prompt: one "- text" line per passage.
std::string format_materials(const std::vector<RetrievedPassage>& passages);

}  // namespace factreward
