#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "factreward/annotation.hpp"

namespace factreward {

/// Weights and label maps for the two reward terms.
///
///   truth = alpha * f(label) * |g(info)|
///   info  = beta * ln(mu + max(epsilon, sum of g over the sentence's statements))
struct RewardConfig {
    std::string name;
    double alpha = 1.0;
    double beta = 1.0;
    double epsilon = 0.0;
    double mu = 1.0;
    std::array<double, 5> f_map{};  // indexed by VerificationLabel
    std::array<double, 5> g_map{};  // indexed by InfoScore - 1

    double f(VerificationLabel label) const { return f_map[static_cast<std::size_t>(label)]; }
    double g(InfoScore score) const { return g_map[static_cast<std::size_t>(score.value() - 1)]; }

    /// Throws InvalidConfig unless mu + epsilon > 0 and every value is finite.
    void validate() const;
};

RewardConfig qwen_preset();
RewardConfig llama_preset();
/// "qwen" or "llama"; throws InvalidConfig otherwise.
RewardConfig preset(std::string_view name);

enum class RewardKind : std::uint8_t { Truth, Info };
std::string_view to_string(RewardKind kind);

struct RewardEvent {
    std::size_t offset;  // absolute character position in the response
    double value;
    RewardKind kind;

    bool operator==(const RewardEvent&) const = default;
};

/// Per-token character ranges from the caller's tokenizer, sorted, disjoint.
struct TokenOffsets {
    std::vector<CharRange> ranges;
};

struct RewardVector {
    std::vector<double> values;
};

double truth_reward(VerificationLabel label, InfoScore info, const RewardConfig& cfg);
double info_reward(const std::vector<InfoScore>& scores, const RewardConfig& cfg);

/// Lower bound of info_reward: beta * ln(mu + epsilon).
double info_reward_floor(const RewardConfig& cfg);

struct EventBuild {
    std::vector<RewardEvent> events;
    // Sentence indices skipped because the sentence itself could not be located.
    std::vector<std::uint32_t> missing_sentence_spans;
};

/// One Truth event per located statement at its last character, then one Info
/// event per located sentence at the sentence's last character. Unlocated
/// statements still count toward the sentence's informativeness sum. Statements
/// must carry both labels (throws InvalidConfig otherwise).
EventBuild build_reward_events(std::string_view response,
                               const std::vector<SentenceAnnotation>& resolved,
                               const RewardConfig& cfg);

/// Adds each event to the token containing its offset. Throws UncoveredOffset
/// for offsets that fall in a gap or past the last token, and InvalidConfig
/// when the ranges are unsorted or overlapping.
RewardVector to_token_rewards(const std::vector<RewardEvent>& events, const TokenOffsets& offsets);

}  // namespace factreward
