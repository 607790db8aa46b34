#include "factreward/text.hpp"

#include <algorithm>
#include <cctype>

#include <boost/locale/encoding_utf.hpp>

#include "factreward/error.hpp"

namespace factreward::text {

std::u32string to_u32(std::string_view utf8) {
    try {
        return boost::locale::conv::utf_to_utf<char32_t>(
            utf8.data(), utf8.data() + utf8.size(), boost::locale::conv::stop);
    } catch (const boost::locale::conv::conversion_error&) {
        throw DataError("invalid UTF-8 input");
    }
}

std::string to_utf8(std::u32string_view text) {
    return boost::locale::conv::utf_to_utf<char>(text.data(), text.data() + text.size(),
                                                 boost::locale::conv::stop);
}

std::size_t char_length(std::string_view utf8) { return to_u32(utf8).size(); }

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split_lines(std::string_view s) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto nl = s.find('\n', pos);
        auto line = s.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
    return lines;
}

}  // namespace factreward::text
