#include "factreward/span_align.hpp"

#include <algorithm>

#include "factreward/error.hpp"
#include "factreward/text.hpp"

namespace factreward {

namespace {

void require_non_empty(std::u32string_view needle, std::u32string_view haystack) {
    if (needle.empty() || haystack.empty()) {
        throw NoAlignment("alignment requires non-empty needle and haystack");
    }
}

}  // namespace

AlignmentResult lcs_locate(std::u32string_view needle, std::u32string_view haystack) {
    require_non_empty(needle, haystack);
    const std::size_t n = needle.size();
    const std::size_t m = haystack.size();

    // prefix[j] after row i holds LCS(needle[0, i), haystack[0, j)).
    std::vector<std::size_t> prev(m + 1, 0), cur(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = 0;
        for (std::size_t j = 1; j <= m; ++j) {
            cur[j] = needle[i - 1] == haystack[j - 1] ? prev[j - 1] + 1
                                                       : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    const std::size_t best = prev[m];
    if (best == 0) {
        throw NoAlignment("no common subsequence");
    }
    // Leftmost end: smallest haystack prefix already achieving the optimum.
    const std::size_t end = static_cast<std::size_t>(
        std::find(prev.begin(), prev.end(), best) - prev.begin());

    // suffix[s] after row i holds LCS(needle[i, n), haystack[s, end)).
    std::vector<std::size_t> next(end + 1, 0), row(end + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
        row[end] = 0;
        for (std::size_t s = end; s-- > 0;) {
            row[s] = needle[i] == haystack[s] ? next[s + 1] + 1 : std::max(next[s], row[s + 1]);
        }
        std::swap(next, row);
    }
    std::size_t start = 0;
    for (std::size_t s = end; s-- > 0;) {
        if (next[s] == best) {
            start = s;
            break;
        }
    }
    return {CharRange{start, end}, best, static_cast<double>(best) / static_cast<double>(n)};
}

SubstringMatch substring_match(std::u32string_view needle, std::u32string_view haystack) {
    require_non_empty(needle, haystack);
    const std::size_t n = needle.size();
    const std::size_t m = haystack.size();

    // run[j] = length of the common suffix of needle[0, i) and haystack[0, j).
    std::vector<std::size_t> prev(m + 1, 0), cur(m + 1, 0);
    std::size_t best = 0;
    std::size_t best_hay_start = 0;
    std::size_t best_needle_start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = 0;
        for (std::size_t j = 1; j <= m; ++j) {
            cur[j] = needle[i - 1] == haystack[j - 1] ? prev[j - 1] + 1 : 0;
            const std::size_t len = cur[j];
            if (len == 0) {
                continue;
            }
            const std::size_t hay_start = j - len;
            if (len > best || (len == best && hay_start < best_hay_start)) {
                best = len;
                best_hay_start = hay_start;
                best_needle_start = i - len;
            }
        }
        std::swap(prev, cur);
    }
    if (best == 0) {
        throw NoAlignment("no common substring");
    }
    return {AlignmentResult{CharRange{best_hay_start, best_hay_start + best}, best,
                            static_cast<double>(best) / static_cast<double>(n)},
            best_needle_start};
}

AlignmentResult substring_locate(std::u32string_view needle, std::u32string_view haystack) {
    return substring_match(needle, haystack).alignment;
}

std::vector<SentenceAnnotation> resolve_spans(std::string_view response,
                                              std::vector<SentenceAnnotation> annotation,
                                              double min_ratio) {
    const std::u32string hay = text::to_u32(response);

    auto flag_all = [](SentenceAnnotation& sentence) {
        sentence.span.reset();
        sentence.flagged = true;
        for (auto& st : sentence.statements) {
            st.span.reset();
            st.ratio.reset();
            st.flagged = true;
        }
    };

    for (auto& sentence : annotation) {
        const std::u32string needle = text::to_u32(sentence.text);
        sentence.ratio.reset();
        if (needle.empty() || hay.empty()) {
            flag_all(sentence);
            continue;
        }
        AlignmentResult located{};
        try {
            located = substring_locate(needle, hay);
        } catch (const NoAlignment&) {
            flag_all(sentence);
            continue;
        }
        sentence.ratio = located.ratio;
        if (located.ratio < min_ratio) {
            flag_all(sentence);
            continue;
        }
        sentence.span = located.range;
        sentence.flagged = false;

        const std::u32string_view scope =
            std::u32string_view(hay).substr(located.range.start, located.range.length());
        for (auto& st : sentence.statements) {
            st.span.reset();
            st.ratio.reset();
            st.flagged = true;
            const std::u32string st_needle = text::to_u32(st.text);
            if (st_needle.empty()) {
                continue;
            }
            try {
                const auto hit = lcs_locate(st_needle, scope);
                st.ratio = hit.ratio;
                if (hit.ratio >= min_ratio) {
                    st.span = CharRange{located.range.start + hit.range.start,
                                        located.range.start + hit.range.end};
                    st.flagged = false;
                }
            } catch (const NoAlignment&) {
            }
        }
    }
    return annotation;
}

}  // namespace factreward
