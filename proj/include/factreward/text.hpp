#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace factreward::text {

/// Decodes UTF-8 into Unicode scalar values. Throws DataError on invalid input.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t char_length(std::string_view utf8);

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> split_lines(std::string_view s);

}  // namespace factreward::text
