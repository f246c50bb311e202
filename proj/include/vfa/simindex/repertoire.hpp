#pragma once

#include <string>
#include <vector>

namespace vfa::simindex {

// A repertoire source is either a codepoint range "U+4E00-U+9FFF" (inclusive)
// or a path to a UTF-8 file whose non-whitespace characters form the set.
// Lines starting with '#' are comments. Result is sorted and unique.
// Throws Error(Io) or Error(Parse).
std::vector<char32_t> load_repertoire(const std::string &source);

}  // namespace vfa::simindex
