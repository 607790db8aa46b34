#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace factreward {

/// Half-open range of Unicode scalar offsets, [start, end).
struct CharRange {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - start; }
    bool contains(std::size_t offset) const noexcept { return offset >= start && offset < end; }
    bool operator==(const CharRange&) const = default;
};

enum class VerificationLabel : std::uint8_t { Correct, HedgedCorrect, Vague, HedgedWrong, Wrong };

inline constexpr std::array<VerificationLabel, 5> kAllLabels = {
    VerificationLabel::Correct, VerificationLabel::HedgedCorrect, VerificationLabel::Vague,
    VerificationLabel::HedgedWrong, VerificationLabel::Wrong};

/// Canonical spelling used in artifacts ("Correct", "HedgedCorrect", ...).
std::string_view to_string(VerificationLabel label);

/// Helpfulness score on the 1..5 scale. Construction outside the scale throws
/// OutOfRangeScore.
class InfoScore {
  public:
    static constexpr int kMin = 1;
    static constexpr int kMax = 5;

    explicit InfoScore(int value);

    int value() const noexcept { return value_; }
    bool operator==(const InfoScore&) const = default;

  private:
    int value_;
};

struct StatementAnnotation {
    std::string text;
    std::optional<VerificationLabel> verification;
    std::optional<InfoScore> info;
    // Filled by span alignment, absolute offsets in the response.
    std::optional<CharRange> span;
    std::optional<double> ratio;
    bool flagged = false;

    bool operator==(const StatementAnnotation&) const = default;
};

struct SentenceAnnotation {
    std::uint32_t index = 0;
    std::string text;
    std::vector<StatementAnnotation> statements;
    std::optional<CharRange> span;
    std::optional<double> ratio;
    bool flagged = false;

    bool operator==(const SentenceAnnotation&) const = default;
};

/// Parses a reply to the extraction prompt.
///
/// Wire grammar: a line matching `>> Sentence N: text` opens a sentence, each
/// following `* text` line adds a statement to it. Sentences that end up with
/// no statements are dropped. A reply consisting of `No statements` yields an
/// empty list. Blank and unrecognised lines are ignored.
///
/// Throws MalformedAnnotation when a statement precedes any sentence, a header
/// ordinal is not numeric or ordinals do not strictly increase, or the reply
/// holds no recognisable content at all.
std::vector<SentenceAnnotation> parse_extraction(std::string_view raw);

/// Inverse of parse_extraction for well-formed annotations.
std::string render_extraction(const std::vector<SentenceAnnotation>& sentences);

/// First non-blank line, case-insensitive, one trailing '.' stripped.
/// Throws UnknownLabel.
VerificationLabel parse_verification(std::string_view raw);

/// First non-blank token as an integer in [1, 5].
/// Throws MalformedScore or OutOfRangeScore.
InfoScore parse_assessment(std::string_view raw);

}  // namespace factreward
