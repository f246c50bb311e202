#include "vfa/models/segmenter.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vfa/error.hpp"
#include "vfa/utf8.hpp"

namespace vfa::models {

namespace {

bool ascii_alnum(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

}  // namespace

LongestMatchSegmenter::LongestMatchSegmenter(const std::vector<std::u32string> &words, std::string name)
    : name_(std::move(name)) {
  for (const auto &w : words) add_word(w);
}

LongestMatchSegmenter LongestMatchSegmenter::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open word list " + path);
  std::vector<std::u32string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string word;
    if (fields >> word) words.push_back(utf8::decode(word));
  }
  return LongestMatchSegmenter(words, std::filesystem::path(path).filename().string());
}

void LongestMatchSegmenter::add_word(std::u32string word) {
  if (word.size() < 2) return;
  max_len_ = std::max(max_len_, word.size());
  words_.insert(std::move(word));
}

std::vector<Word> LongestMatchSegmenter::segment(std::u32string_view text) const {
  std::vector<Word> out;
  size_t i = 0;
  while (i < text.size()) {
    size_t len = 1;
    for (size_t l = std::min(max_len_, text.size() - i); l >= 2; --l) {
      if (words_.count(std::u32string(text.substr(i, l)))) {
        len = l;
        break;
      }
    }
    if (len == 1 && ascii_alnum(text[i])) {
      while (i + len < text.size() && ascii_alnum(text[i + len])) ++len;
    }
    out.push_back({i, len});
    i += len;
  }
  return out;
}

std::string LongestMatchSegmenter::identity() const {
  return "longest-match:" + name_ + "(" + std::to_string(words_.size()) + " words)";
}

std::vector<std::u32string> word_texts(std::u32string_view text, const std::vector<Word> &words) {
  std::vector<std::u32string> out;
  out.reserve(words.size());
  for (const auto &w : words) out.emplace_back(text.substr(w.begin, w.length));
  return out;
}

}  // namespace vfa::models
