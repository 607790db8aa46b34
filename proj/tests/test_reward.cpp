#include <doctest.h>

#include <cmath>
#include <random>

#include "factreward/error.hpp"
#include "factreward/reward.hpp"

using namespace factreward;

namespace {

using L = VerificationLabel;

// alpha * f * |g| evaluated by hand from the preset tables; rows follow
// Correct, HedgedCorrect, Vague, HedgedWrong, Wrong and columns scores 1..5.
constexpr double kQwenTruth[5][5] = {
    {0.09, 0.045, 0.3375, 0.45, 0.5625},
    {0.07, 0.035, 0.2625, 0.35, 0.4375},
    {-0.2, -0.1, -0.75, -1.0, -1.25},
    {-0.3, -0.15, -1.125, -1.5, -1.875},
    {-0.34, -0.17, -1.275, -1.7, -2.125},
};
constexpr double kLlamaTruth[5][5] = {
    {0.02, 0.12, 0.16, 0.2, 0.24},
    {0.01, 0.06, 0.08, 0.1, 0.12},
    {-0.18, -1.08, -1.44, -1.8, -2.16},
    {-0.2, -1.2, -1.6, -2.0, -2.4},
    {-0.22, -1.32, -1.76, -2.2, -2.64},
};

std::vector<InfoScore> scores(std::initializer_list<int> values) {
    std::vector<InfoScore> out;
    for (int v : values) {
        out.emplace_back(v);
    }
    return out;
}

}  // namespace

TEST_CASE("presets validate") {
    CHECK_NOTHROW(qwen_preset().validate());
    CHECK_NOTHROW(llama_preset().validate());
    CHECK(preset("QWEN").name == "qwen");
    CHECK_THROWS_AS(preset("mistral"), InvalidConfig);

    auto bad = qwen_preset();
    bad.mu = 0.9;  // mu + epsilon == 0
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = qwen_preset();
    bad.g_map[2] = NAN;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
}

TEST_CASE("truth reward examples") {
    const auto q = qwen_preset();
    CHECK(truth_reward(L::Correct, InfoScore(4), q) == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(truth_reward(L::Wrong, InfoScore(5), q) == doctest::Approx(-2.125).epsilon(1e-12));

    auto zero = q;
    zero.alpha = 0.0;
    for (auto label : kAllLabels) {
        for (int s = 1; s <= 5; ++s) {
            CHECK(truth_reward(label, InfoScore(s), zero) == 0.0);
        }
    }
}

TEST_CASE("truth reward golden tables") {
    const auto q = qwen_preset();
    const auto l = llama_preset();
    for (std::size_t i = 0; i < 5; ++i) {
        for (int s = 1; s <= 5; ++s) {
            CHECK(std::abs(truth_reward(kAllLabels[i], InfoScore(s), q) - kQwenTruth[i][s - 1]) <
                  1e-9);
            CHECK(std::abs(truth_reward(kAllLabels[i], InfoScore(s), l) - kLlamaTruth[i][s - 1]) <
                  1e-9);
        }
    }
}

TEST_CASE("truth reward keeps the sign of f") {
    for (const auto& cfg : {qwen_preset(), llama_preset()}) {
        for (auto label : kAllLabels) {
            for (int s = 1; s <= 5; ++s) {
                const double r = truth_reward(label, InfoScore(s), cfg);
                CHECK(std::signbit(r) == std::signbit(cfg.f(label)));
            }
        }
    }
}

TEST_CASE("info reward examples") {
    const auto q = qwen_preset();
    CHECK(std::abs(info_reward(scores({4}), q) - 0.8317766166719344) < 1e-9);
    // Sum below epsilon hits the floor 1.2 * ln(0.1).
    CHECK(std::abs(info_reward(scores({1, 1, 1, 1, 1}), q) - (-2.7631021115928545)) < 1e-9);
    CHECK(std::abs(info_reward_floor(q) - (-2.7631021115928545)) < 1e-9);

    // g sums to zero: 1.2 * ln(1) = 0.
    auto zero_sum = q;
    zero_sum.g_map = {0.0, 0.0, 0.0, 0.0, 0.0};
    zero_sum.epsilon = -0.5;
    CHECK(info_reward(scores({3, 2}), zero_sum) == 0.0);
}

TEST_CASE("info reward floor and monotonicity") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> score(1, 5), count(1, 6);
    for (const auto& cfg : {qwen_preset(), llama_preset()}) {
        const double floor = info_reward_floor(cfg);
        for (int i = 0; i < 2000; ++i) {
            std::vector<InfoScore> s;
            const int n = count(rng);
            for (int k = 0; k < n; ++k) {
                s.emplace_back(score(rng));
            }
            const double r = info_reward(s, cfg);
            CHECK(r >= floor - 1e-12);
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (s[k].value() < 5) {
                    auto up = s;
                    up[k] = InfoScore(s[k].value() + 1);
                    CHECK(info_reward(up, cfg) >= r);
                }
            }
        }
    }
}

TEST_CASE("build_reward_events on one sentence") {
    const std::string response = "Arthur's Magazine was likely started first.";
    std::vector<SentenceAnnotation> resolved = {
        {1,
         response,
         {{.text = response,
           .verification = L::Correct,
           .info = InfoScore(4),
           .span = CharRange{0, 43}}},
         CharRange{0, 43},
         1.0,
         false}};
    const auto built = build_reward_events(response, resolved, qwen_preset());
    REQUIRE(built.events.size() == 2);
    CHECK(built.events[0].kind == RewardKind::Truth);
    CHECK(built.events[0].offset == 42);
    CHECK(built.events[0].value == doctest::Approx(0.45));
    CHECK(built.events[1].kind == RewardKind::Info);
    CHECK(built.events[1].offset == 42);
    CHECK(std::abs(built.events[1].value - 0.8317766166719344) < 1e-9);

    CHECK(build_reward_events(response, {}, qwen_preset()).events.empty());
}

TEST_CASE("build_reward_events with two statements") {
    const std::string response = "A is true and B is false.";
    std::vector<SentenceAnnotation> resolved = {
        {1,
         response,
         {{.text = "A is true", .verification = L::Correct, .info = InfoScore(4), .span = CharRange{0, 9}},
          {.text = "B is false", .verification = L::Wrong, .info = InfoScore(5), .span = CharRange{14, 24}}},
         CharRange{0, 25},
         1.0,
         false}};
    const auto built = build_reward_events(response, resolved, qwen_preset());
    REQUIRE(built.events.size() == 3);
    CHECK(built.events[0] == RewardEvent{8, built.events[0].value, RewardKind::Truth});
    CHECK(built.events[0].value == doctest::Approx(0.45));
    CHECK(built.events[1].offset == 23);
    CHECK(built.events[1].value == doctest::Approx(-2.125));
    CHECK(built.events[2].offset == 24);
    // 1.2 * ln(1 + 2.25)
    CHECK(std::abs(built.events[2].value - 1.4143859956099754) < 1e-9);
}

TEST_CASE("unlocated statements keep their informativeness") {
    const std::string response = "A is true and B is false.";
    std::vector<SentenceAnnotation> resolved = {
        {1,
         response,
         {{.text = "A is true", .verification = L::Correct, .info = InfoScore(4), .span = CharRange{0, 9}},
          {.text = "unplaceable", .verification = L::Wrong, .info = InfoScore(5), .flagged = true}},
         CharRange{0, 25},
         1.0,
         false},
        {2, "missing", {{.text = "x", .verification = L::Correct, .info = InfoScore(3)}}, std::nullopt,
         std::nullopt, true}};
    const auto built = build_reward_events(response, resolved, qwen_preset());
    REQUIRE(built.events.size() == 2);
    CHECK(built.events[0].kind == RewardKind::Truth);
    CHECK(std::abs(built.events[1].value - 1.4143859956099754) < 1e-9);
    REQUIRE(built.missing_sentence_spans.size() == 1);
    CHECK(built.missing_sentence_spans[0] == 2);
}

TEST_CASE("unlabelled statements are rejected") {
    std::vector<SentenceAnnotation> resolved = {
        {1, "abc", {{.text = "abc", .span = CharRange{0, 3}}}, CharRange{0, 3}, 1.0, false}};
    CHECK_THROWS_AS(build_reward_events("abc", resolved, qwen_preset()), InvalidConfig);
}

TEST_CASE("to_token_rewards") {
    const TokenOffsets offsets{{{0, 5}, {5, 12}, {12, 20}}};
    auto v = to_token_rewards({{10, 0.45, RewardKind::Truth}}, offsets);
    CHECK(v.values == std::vector<double>{0.0, 0.45, 0.0});

    v = to_token_rewards({{6, 0.45, RewardKind::Truth}, {11, -2.125, RewardKind::Info}}, offsets);
    CHECK(v.values[1] == doctest::Approx(-1.675));

    v = to_token_rewards({}, offsets);
    CHECK(v.values == std::vector<double>(3, 0.0));

    const TokenOffsets gappy{{{0, 5}, {7, 12}}};
    CHECK_THROWS_AS(to_token_rewards({{6, 1.0, RewardKind::Truth}}, gappy), UncoveredOffset);
    CHECK_THROWS_AS(to_token_rewards({{12, 1.0, RewardKind::Truth}}, gappy), UncoveredOffset);
    CHECK_THROWS_AS(to_token_rewards({}, TokenOffsets{{{0, 5}, {3, 8}}}), InvalidConfig);
}

TEST_CASE("projection conserves reward mass") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        TokenOffsets offsets;
        std::size_t pos = 0;
        for (int t = 0; t < 20; ++t) {
            const std::size_t len = 1 + rng() % 5;
            offsets.ranges.push_back({pos, pos + len});
            pos += len;
        }
        std::vector<RewardEvent> events;
        double total = 0.0;
        for (int e = 0; e < 15; ++e) {
            events.push_back({rng() % pos, value(rng), RewardKind::Truth});
            total += events.back().value;
        }
        const auto v = to_token_rewards(events, offsets);
        double sum = 0.0;
        for (double x : v.values) {
            sum += x;
        }
        CHECK(std::abs(sum - total) < 1e-9);
        CHECK(v.values.size() == offsets.ranges.size());
    }
}
