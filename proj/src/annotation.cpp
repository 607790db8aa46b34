#include "factreward/annotation.hpp"

#include <charconv>
#include <regex>

#include "factreward/error.hpp"
#include "factreward/text.hpp"

namespace factreward {

namespace {

constexpr std::string_view kNoStatements = "No statements";
constexpr std::string_view kHeaderPrefix = ">> Sentence ";
constexpr std::string_view kStatementPrefix = "* ";

bool is_digits(std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

void flush(std::vector<SentenceAnnotation>& out, std::optional<SentenceAnnotation>& current) {
    if (current && !current->statements.empty()) {
        out.push_back(std::move(*current));
    }
    current.reset();
}

}  // namespace

std::string_view to_string(VerificationLabel label) {
    switch (label) {
        case VerificationLabel::Correct: return "Correct";
        case VerificationLabel::HedgedCorrect: return "HedgedCorrect";
        case VerificationLabel::Vague: return "Vague";
        case VerificationLabel::HedgedWrong: return "HedgedWrong";
        case VerificationLabel::Wrong: return "Wrong";
    }
    return "Vague";
}

InfoScore::InfoScore(int value) : value_(value) {
    if (value < kMin || value > kMax) {
        throw OutOfRangeScore("informativeness score " + std::to_string(value) +
                              " outside [1, 5]");
    }
}

std::vector<SentenceAnnotation> parse_extraction(std::string_view raw) {
    static const std::regex header(R"(^>> Sentence ([^:]*):(.*)$)");

    std::vector<SentenceAnnotation> out;
    std::optional<SentenceAnnotation> current;
    bool saw_header = false;
    bool saw_sentinel = false;
    std::uint32_t last_index = 0;

    for (auto line : text::split_lines(raw)) {
        if (line.starts_with(kHeaderPrefix)) {
            std::match_results<std::string_view::const_iterator> m;
            if (!std::regex_match(line.begin(), line.end(), m, header)) {
                throw MalformedAnnotation("malformed sentence header: '" + std::string(line) + "'");
            }
            const std::string ordinal_str = m[1].str();
            auto ordinal = text::trim(ordinal_str);
            std::uint32_t index = 0;
            if (!is_digits(ordinal) ||
                std::from_chars(ordinal.data(), ordinal.data() + ordinal.size(), index).ec !=
                    std::errc{}) {
                throw MalformedAnnotation("non-numeric sentence ordinal: '" + std::string(line) +
                                          "'");
            }
            if (saw_header && index <= last_index) {
                throw MalformedAnnotation("sentence ordinals must increase: " +
                                          std::to_string(index) + " after " +
                                          std::to_string(last_index));
            }
            flush(out, current);
            saw_header = true;
            last_index = index;
            current.emplace();
            current->index = index;
            const std::string rest = m[2].str();
            current->text = std::string(text::trim(rest));
        } else if (line.starts_with(kStatementPrefix) || line == "*") {
            if (!current) {
                throw MalformedAnnotation("statement before any sentence header: '" +
                                          std::string(line) + "'");
            }
            auto body = text::trim(line.substr(1));
            if (!body.empty()) {
                StatementAnnotation statement;
                statement.text = std::string(body);
                current->statements.push_back(std::move(statement));
            }
        } else if (text::trim(line) == kNoStatements) {
            saw_sentinel = true;
        }
    }
    flush(out, current);

    if (!saw_header && !saw_sentinel) {
        throw MalformedAnnotation("extraction reply has neither sentences nor the '" +
                                  std::string(kNoStatements) + "' sentinel");
    }
    return out;
}

std::string render_extraction(const std::vector<SentenceAnnotation>& sentences) {
    if (sentences.empty()) {
        return std::string(kNoStatements);
    }
    std::string out;
    for (const auto& s : sentences) {
        out += kHeaderPrefix;
        out += std::to_string(s.index);
        out += ": ";
        out += s.text;
        out += '\n';
        for (const auto& st : s.statements) {
            out += kStatementPrefix;
            out += st.text;
            out += '\n';
        }
    }
    return out;
}

VerificationLabel parse_verification(std::string_view raw) {
    std::string_view first;
    for (auto line : text::split_lines(raw)) {
        if (!text::trim(line).empty()) {
            first = text::trim(line);
            break;
        }
    }
    auto token = first;
    if (token.ends_with('.')) {
        token.remove_suffix(1);
        token = text::trim(token);
    }
    std::string key = text::to_lower_ascii(token);
    // "Hedged Correct" and "HedgedCorrect" are the same label.
    if (auto sp = key.find(' '); sp != std::string::npos && key.starts_with("hedged")) {
        auto rest = text::trim(std::string_view(key).substr(sp));
        key = "hedged" + std::string(rest);
    }

    if (key == "correct") return VerificationLabel::Correct;
    if (key == "hedgedcorrect") return VerificationLabel::HedgedCorrect;
    if (key == "vague") return VerificationLabel::Vague;
    if (key == "hedgedwrong") return VerificationLabel::HedgedWrong;
    if (key == "wrong") return VerificationLabel::Wrong;
    throw UnknownLabel(std::string(first));
}

InfoScore parse_assessment(std::string_view raw) {
    auto body = text::trim(raw);
    auto end = body.find_first_of(" \t\r\n\f\v");
    auto token = body.substr(0, end);
    if (token.empty()) {
        throw MalformedScore("empty assessment reply");
    }
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc::result_out_of_range) {
        throw OutOfRangeScore("assessment score '" + std::string(token) + "' outside [1, 5]");
    }
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw MalformedScore("assessment reply is not an integer: '" + std::string(token) + "'");
    }
    if (value < InfoScore::kMin || value > InfoScore::kMax) {
        throw OutOfRangeScore("assessment score " + std::string(token) + " outside [1, 5]");
    }
    return InfoScore(static_cast<int>(value));
}

}  // namespace factreward
