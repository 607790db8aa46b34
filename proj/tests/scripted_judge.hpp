#pragma once

// Test judges that answer by inspecting the prompt.

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "factreward/error.hpp"
#include "factreward/judge.hpp"
#include "factreward/prompts.hpp"

namespace testing_support {

inline std::string between(const std::string& s, const std::string& open, const std::string& close) {
    const auto a = s.rfind(open);
    if (a == std::string::npos) {
        return {};
    }
    const auto start = a + open.size();
    const auto b = s.find(close, start);
    return s.substr(start, b == std::string::npos ? std::string::npos : b - start);
}

inline factreward::JudgeTask task_of(const std::string& prompt) {
    if (prompt.starts_with("- Find every sentence")) return factreward::JudgeTask::Extract;
    if (prompt.starts_with("Choose from")) return factreward::JudgeTask::Verify;
    return factreward::JudgeTask::Assess;
}

/// Replies through per-task callbacks keyed by the slot of interest: the
/// response for extraction, the statement for verification and assessment.
class ScriptedJudge : public factreward::Judge {
  public:
    ScriptedJudge() = default;
    ScriptedJudge(const ScriptedJudge& other)
        : extract(other.extract), verify(other.verify), assess(other.assess), calls(other.calls.load()) {}

    std::function<std::string(const std::string& response)> extract;
    std::function<std::string(const std::string& statement)> verify;
    std::function<std::string(const std::string& statement)> assess;

    std::string complete(const std::string& prompt) override {
        ++calls;
        switch (task_of(prompt)) {
            case factreward::JudgeTask::Extract:
                return extract(between(prompt, "And then comes your task:\n# Response\n",
                                       "\n\n# Statements"));
            case factreward::JudgeTask::Verify:
                return verify(between(prompt, "# Statement\n", "\n# Verification"));
            case factreward::JudgeTask::Assess:
                return assess(between(prompt, "# Statement\n", "\n# Evaluation"));
        }
        return {};
    }

    std::atomic<int> calls{0};
};

/// Wraps a judge and remembers prompt hash -> reply for building mock fixtures.
class RecordingJudge : public factreward::Judge {
  public:
    explicit RecordingJudge(factreward::Judge& inner) : inner_(inner) {}

    std::string complete(const std::string& prompt) override {
        auto reply = inner_.complete(prompt);
        std::lock_guard lock(mutex_);
        replies[factreward::prompt_hash(prompt)] = reply;
        return reply;
    }

    std::map<std::string, std::optional<std::string>> replies;

  private:
    factreward::Judge& inner_;
    std::mutex mutex_;
};

}  // namespace testing_support
