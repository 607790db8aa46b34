#include <doctest.h>

#include "arthur.hpp"
#include "factreward/error.hpp"
#include "factreward/prompts.hpp"

using namespace factreward;

TEST_CASE("extract prompt") {
    const auto p = render_prompt(JudgeTask::Extract, {{"response", arthur::kResponse}});
    CHECK(p.starts_with("- Find every sentence containing object facts.\n"
                        "- Break sentences into atomic statements.\n"));
    CHECK(p.find("\nBreak sentences into atomic statements.") == std::string::npos);
    CHECK(p.find("- Break sentences into atomic statements.\n") != std::string::npos);
    CHECK(p.find("If there is no valid sentence, output \"No statements\".") != std::string::npos);
    CHECK(p.ends_with("And then comes your task:\n# Response\n" + arthur::kResponse +
                      "\n\n# Statements"));
    // The embedded example is the same reply the parser test uses.
    CHECK(p.find("# Statements\n" + arthur::kExtractionReply + "\n\nAnd then comes") !=
          std::string::npos);
    CHECK(p.find("# Response\n" + arthur::kResponse + "\n\n# Statements\n>> Sentence 1") !=
          std::string::npos);
}

TEST_CASE("verify prompt") {
    const auto p = render_prompt(JudgeTask::Verify,
                                 {{"materials", "- m1\n- m2"}, {"statement", "S holds."}});
    CHECK(p.starts_with("Choose from \"Correct\", \"Vague\" and \"Wrong\" for the verification of "
                        "the statement.\n"));
    CHECK(p.find("Directly output the verification result without explanation.\nHere is an "
                 "example:\n\n# Materials\n- First for Women") != std::string::npos);
    CHECK(p.find("\n- " + arthur::kArthursMagazine + "\n") != std::string::npos);
    CHECK(p.find("# Verification\nCorrect\n\nAnd then comes your task:\n") != std::string::npos);
    CHECK(p.ends_with("# Materials\n- m1\n- m2\n# Statement\nS holds.\n# Verification"));

    CHECK_THROWS_AS(render_prompt(JudgeTask::Verify, {{"materials", ""}, {"statement", "S"}}),
                    MissingSlot);
    CHECK_THROWS_AS(render_prompt(JudgeTask::Verify, {{"statement", "S"}}), MissingSlot);
}

TEST_CASE("assess prompt") {
    const auto p = render_prompt(
        JudgeTask::Assess, {{"question", "Q?"}, {"response", "R."}, {"statement", "S."}});
    CHECK(p.starts_with("Evaluate the helpfulness of the statement:\n- \"5\": The statement answer "
                        "the question.\n"));
    CHECK(p.find("# Question\n" + arthur::kQuestion + "\n# Response\n" + arthur::kResponse +
                 "\n# Statement\nArthur's Magazine was possibly founded in 1923.\n# "
                 "Evaluation\n4\n\n") != std::string::npos);
    CHECK(p.ends_with("# Question\nQ?\n# Response\nR.\n# Statement\nS.\n# Evaluation"));
    CHECK_THROWS_AS(render_prompt(JudgeTask::Assess, {{"question", "Q"}, {"response", "R"}}),
                    MissingSlot);
}

TEST_CASE("templates carry only their own slots") {
    CHECK(prompt_template(JudgeTask::Extract).find("{response}") != std::string_view::npos);
    CHECK(prompt_template(JudgeTask::Verify).find("{materials}") != std::string_view::npos);
    CHECK(prompt_template(JudgeTask::Assess).find("{question}") != std::string_view::npos);
    // Extra slots are ignored.
    CHECK_NOTHROW(render_prompt(JudgeTask::Extract, {{"response", "x"}, {"unused", "y"}}));
}
