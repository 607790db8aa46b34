#include <doctest.h>

#include <algorithm>
#include <random>

#include "factreward/error.hpp"
#include "factreward/evaluator.hpp"

using namespace factreward;
using L = VerificationLabel;

namespace {

std::vector<SentenceAnnotation> labelled(std::initializer_list<L> labels) {
    SentenceAnnotation s{1, "s", {}, {}, {}, false};
    for (auto l : labels) {
        s.statements.push_back({.text = "x", .verification = l, .info = InfoScore(3)});
    }
    if (s.statements.empty()) {
        return {};
    }
    return {s};
}

ResponseMetrics with_score(double fs, std::size_t correct, std::size_t incorrect) {
    return {correct, incorrect, true, fs};
}

const ResponseMetrics kRefusal{0, 0, false, std::nullopt};

}  // namespace

TEST_CASE("score_response") {
    auto m = score_response(labelled({L::Correct, L::Correct, L::Correct, L::Wrong}));
    CHECK(m.correct_count == 3);
    CHECK(m.incorrect_count == 1);
    CHECK(m.responded);
    CHECK(*m.factscore == 0.75);

    m = score_response(std::vector<SentenceAnnotation>{});
    CHECK_FALSE(m.responded);
    CHECK_FALSE(m.factscore);

    m = score_response(labelled({L::Correct, L::HedgedCorrect}));
    CHECK(*m.factscore == 1.0);

    m = score_response(labelled({L::Vague, L::HedgedWrong, L::HedgedCorrect, L::Wrong}));
    CHECK(m.correct_count == 1);
    CHECK(m.incorrect_count == 3);
    CHECK(*m.factscore == 0.25);
}

TEST_CASE("aggregate examples") {
    auto d = aggregate({with_score(1.0, 2, 0), with_score(0.5, 1, 1)});
    CHECK(d.score == 0.75);
    CHECK(d.response_ratio == 1.0);
    CHECK(d.avg_correct == 1.5);
    CHECK(d.avg_incorrect == 0.5);

    d = aggregate({with_score(0.8, 4, 1), kRefusal});
    CHECK(d.response_ratio == 0.5);
    CHECK(d.score == 0.8);
    CHECK(d.avg_correct == 4.0);
    CHECK(d.avg_incorrect == 1.0);
    CHECK(d.avg_correct_all == 2.0);
    CHECK(d.avg_incorrect_all == 0.5);
    CHECK_FALSE(d.refusals_only);

    d = aggregate({kRefusal, kRefusal});
    CHECK(d.response_ratio == 0.0);
    CHECK(d.score == 0.0);
    CHECK(d.refusals_only);

    CHECK_THROWS_AS(aggregate({}), EmptyBatch);
}

TEST_CASE("aggregate properties") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> count(0, 6);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<ResponseMetrics> batch;
        const int n = 1 + trial % 8;
        for (int i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(count(rng));
            const auto w = static_cast<std::size_t>(count(rng));
            batch.push_back(c + w == 0 ? kRefusal
                                       : with_score(static_cast<double>(c) / double(c + w), c, w));
        }
        const auto d = aggregate(batch);

        double lo = 1.0, hi = 0.0;
        for (const auto& m : batch) {
            if (m.factscore) {
                lo = std::min(lo, *m.factscore);
                hi = std::max(hi, *m.factscore);
            }
        }
        if (!d.refusals_only) {
            CHECK(d.score >= lo - 1e-12);
            CHECK(d.score <= hi + 1e-12);
        }

        auto shuffled = batch;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto p = aggregate(shuffled);
        CHECK(p.score == doctest::Approx(d.score).epsilon(1e-12));
        CHECK(p.response_ratio == d.response_ratio);
        CHECK(p.avg_correct == doctest::Approx(d.avg_correct).epsilon(1e-12));
        CHECK(p.avg_incorrect == doctest::Approx(d.avg_incorrect).epsilon(1e-12));

        auto more = batch;
        more.push_back(kRefusal);
        const auto r = aggregate(more);
        CHECK(r.response_ratio < d.response_ratio + (d.response_ratio == 0.0 ? 1e-12 : 0.0));
        CHECK(r.score == d.score);
    }
}

TEST_CASE("table layout") {
    const auto t = format_table("hotpot", aggregate({with_score(0.75, 3, 1)}));
    CHECK(t.find("#Cor.") != std::string::npos);
    CHECK(t.find("%Res.") != std::string::npos);
    CHECK(t.find("0.750") != std::string::npos);
    CHECK(t.find("hotpot") != std::string::npos);
}
