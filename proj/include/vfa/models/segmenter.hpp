#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace vfa::models {

struct Word {
  size_t begin = 0;   // character offset
  size_t length = 0;  // characters
};

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  // Words tile the text exactly: contiguous, in order, no gaps.
  virtual std::vector<Word> segment(std::u32string_view text) const = 0;
  virtual std::string identity() const = 0;
};

// Greedy forward longest match against a word list; characters not covered by
// any listed word become single-character words, except runs of ASCII letters
// and digits, which stay together.
class LongestMatchSegmenter final : public Segmenter {
 public:
  explicit LongestMatchSegmenter(const std::vector<std::u32string> &words, std::string name = "custom");

  // One word per line (first whitespace-separated field), '#' comments.
  // Throws Error(Io).
  static LongestMatchSegmenter load(const std::string &path);

  void add_word(std::u32string word);
  std::vector<Word> segment(std::u32string_view text) const override;
  std::string identity() const override;

 private:
  std::unordered_set<std::u32string> words_;
  size_t max_len_ = 1;
  std::string name_;
};

std::vector<std::u32string> word_texts(std::u32string_view text, const std::vector<Word> &words);

}  // namespace vfa::models
