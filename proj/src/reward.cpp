#include "factreward/reward.hpp"

#include <algorithm>
#include <cmath>

#include "factreward/error.hpp"
#include "factreward/text.hpp"

namespace factreward {

void RewardConfig::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(alpha) || !finite(beta) || !finite(epsilon) || !finite(mu) ||
        !std::all_of(f_map.begin(), f_map.end(), finite) ||
        !std::all_of(g_map.begin(), g_map.end(), finite)) {
        throw InvalidConfig("reward config '" + name + "' has non-finite values");
    }
    if (!(mu + epsilon > 0.0)) {
        throw InvalidConfig("reward config '" + name + "' needs mu + epsilon > 0");
    }
}

// Both presets share alpha/beta/epsilon/mu and differ in the label maps.
RewardConfig qwen_preset() {
    return RewardConfig{.name = "qwen",
                        .alpha = 1.0,
                        .beta = 1.2,
                        .epsilon = -0.9,
                        .mu = 1.0,
                        .f_map = {0.45, 0.35, -1.0, -1.5, -1.7},
                        .g_map = {-0.2, 0.1, 0.75, 1.0, 1.25}};
}

RewardConfig llama_preset() {
    return RewardConfig{.name = "llama",
                        .alpha = 1.0,
                        .beta = 1.2,
                        .epsilon = -0.9,
                        .mu = 1.0,
                        .f_map = {0.2, 0.1, -1.8, -2.0, -2.2},
                        .g_map = {-0.1, 0.6, 0.8, 1.0, 1.2}};
}

RewardConfig preset(std::string_view name) {
    const auto key = text::to_lower_ascii(name);
    if (key == "qwen") return qwen_preset();
    if (key == "llama") return llama_preset();
    throw InvalidConfig("unknown reward preset '" + std::string(name) + "'");
}

std::string_view to_string(RewardKind kind) {
    return kind == RewardKind::Truth ? "Truth" : "Info";
}

double truth_reward(VerificationLabel label, InfoScore info, const RewardConfig& cfg) {
    return cfg.alpha * cfg.f(label) * std::abs(cfg.g(info));
}

double info_reward(const std::vector<InfoScore>& scores, const RewardConfig& cfg) {
    double total = 0.0;
    for (auto s : scores) {
        total += cfg.g(s);
    }
    return cfg.beta * std::log(cfg.mu + std::max(cfg.epsilon, total));
}

double info_reward_floor(const RewardConfig& cfg) {
    return cfg.beta * std::log(cfg.mu + cfg.epsilon);
}

EventBuild build_reward_events(std::string_view response,
                               const std::vector<SentenceAnnotation>& resolved,
                               const RewardConfig& cfg) {
    const std::size_t length = text::char_length(response);
    EventBuild out;
    for (const auto& sentence : resolved) {
        if (!sentence.span || sentence.span->length() == 0 || sentence.span->end > length) {
            out.missing_sentence_spans.push_back(sentence.index);
            continue;
        }
        std::vector<InfoScore> scores;
        scores.reserve(sentence.statements.size());
        for (const auto& st : sentence.statements) {
            if (!st.verification || !st.info) {
                throw InvalidConfig("statement '" + st.text + "' in sentence " +
                                    std::to_string(sentence.index) + " is missing labels");
            }
            scores.push_back(*st.info);
            if (st.span && st.span->length() > 0 && st.span->end <= length) {
                out.events.push_back({st.span->end - 1, truth_reward(*st.verification, *st.info, cfg),
                                      RewardKind::Truth});
            }
        }
        if (!scores.empty()) {
            out.events.push_back(
                {sentence.span->end - 1, info_reward(scores, cfg), RewardKind::Info});
        }
    }
    return out;
}

RewardVector to_token_rewards(const std::vector<RewardEvent>& events, const TokenOffsets& offsets) {
    const auto& ranges = offsets.ranges;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (ranges[i].end < ranges[i].start || (i > 0 && ranges[i].start < ranges[i - 1].end)) {
            throw InvalidConfig("token offsets must be sorted and non-overlapping (token " +
                                std::to_string(i) + ")");
        }
    }
    RewardVector out{std::vector<double>(ranges.size(), 0.0)};
    for (const auto& ev : events) {
        // First token whose end lies beyond the offset; it holds the offset
        // unless the offset sits in a gap.
        auto it = std::upper_bound(ranges.begin(), ranges.end(), ev.offset,
                                   [](std::size_t off, const CharRange& r) { return off < r.end; });
        if (it == ranges.end() || !it->contains(ev.offset)) {
            throw UncoveredOffset(ev.offset, "reward event at character " +
                                                 std::to_string(ev.offset) +
                                                 " is not covered by any token");
        }
        out.values[static_cast<std::size_t>(it - ranges.begin())] += ev.value;
    }
    return out;
}

}  // namespace factreward
