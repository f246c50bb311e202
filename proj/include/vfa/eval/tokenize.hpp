#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vfa::eval {

// English word tokenizer following the Treebank-style rules of the NLTK
// word tokenizer applied to a single sentence: quotes normalized to `` and '',
// punctuation split off, clitics ('s, n't, 'll, ...) split at the apostrophe.
// Throws Error(Parse) on invalid UTF-8.
std::vector<std::string> tokenize_en(std::string_view text);

}  // namespace vfa::eval
