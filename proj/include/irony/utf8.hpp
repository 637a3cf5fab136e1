#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace irony::utf8 {

// Invalid sequences decode to U+FFFD, one per offending byte.
std::u32string decode(std::string_view text);
void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view text);
std::size_t length(std::string_view text);

// Last `n` code points of `text` (whole string when shorter).
std::string suffix(std::string_view text, std::size_t n);
std::string prefix(std::string_view text, std::size_t n);

}  // namespace irony::utf8
