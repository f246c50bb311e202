#pragma once

#include <string>
#include <string_view>

namespace vfa::utf8 {

// Throws Error(Parse) on malformed input.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);
std::string encode(char32_t codepoint);

// "U+672A" style label for diagnostics.
std::string codepoint_label(char32_t codepoint);

}  // namespace vfa::utf8
