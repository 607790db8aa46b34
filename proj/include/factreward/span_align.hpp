#pragma once

#include <string_view>
#include <vector>

#include "factreward/annotation.hpp"

namespace factreward {

struct AlignmentResult {
    CharRange range;      // in the haystack
    std::size_t matched;  // aligned characters
    double ratio;         // matched / needle length
};

/// Locates `needle` in `haystack` with a longest common subsequence. The range
/// runs from the first to one past the last haystack character taking part in
/// the alignment. Among maximal alignments the one ending leftmost is chosen,
/// and for that end the tightest (latest) start. Throws NoAlignment when no
/// character is shared.
AlignmentResult lcs_locate(std::u32string_view needle, std::u32string_view haystack);

/// Longest common contiguous substring; ties go to the smallest haystack start.
/// Throws NoAlignment when no character is shared.
AlignmentResult substring_locate(std::u32string_view needle, std::u32string_view haystack);

/// Like substring_locate, additionally reporting where the match starts in the needle.
struct SubstringMatch {
    AlignmentResult alignment;
    std::size_t needle_start;
};
SubstringMatch substring_match(std::u32string_view needle, std::u32string_view haystack);

inline constexpr double kDefaultMinRatio = 0.7;

/// Anchors every sentence in `response` (longest common substring) and every
/// statement inside its sentence's span (longest common subsequence). Spans are
/// absolute character offsets in the response. Items aligning below
/// `min_ratio` keep an empty span and are flagged; statements of a flagged
/// sentence are flagged as well.
std::vector<SentenceAnnotation> resolve_spans(std::string_view response,
                                              std::vector<SentenceAnnotation> annotation,
                                              double min_ratio = kDefaultMinRatio);

}  // namespace factreward
