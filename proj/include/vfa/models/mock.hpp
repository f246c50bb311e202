#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "vfa/models/backends.hpp"

namespace vfa::models {

struct LexiconEntry {
  std::u32string zh;
  std::string en;  // space-separated English tokens
  double frequency = 0.0;
  std::vector<std::u32string> alternatives;  // synonyms used for back-translation variants
};

// Deterministic desk-scale stand-in for the victim and auxiliary translators.
//
// zh -> en, scanning left to right:
//   1. longest lexicon word (>= 2 chars) matching exactly;
//   2. otherwise the longest lexicon word (>= 2 chars) matching with exactly one
//      differing character, where the input has an ideograph: if the lexicon's character at that spot is in the
//      sensitivity table the word becomes the table's perturbation, otherwise
//      the typo is tolerated and the word translates normally;
//   3. otherwise a single-character lexicon entry;
//   4. otherwise the character is copied through.
// en -> zh: greedy longest English phrase from the reverse lexicon; variant i>0
// swaps one phrase for an alternative.
class MockCorpusModel final : public Translator {
 public:
  MockCorpusModel(std::vector<LexiconEntry> lexicon, std::map<char32_t, std::string> sensitivity);

  // Lexicon TSV: zh \t en \t frequency [\t alt,alt...]; sensitivity TSV:
  // char \t perturbation. '#' comments. Throws Error(Io) / Error(Parse).
  static MockCorpusModel load(const std::string &lexicon_path, const std::string &sensitivity_path);

  std::vector<std::string> translate_n(const std::string &text, const std::string &src, const std::string &tgt,
                                       size_t n) const override;
  std::string identity() const override { return "mock:corpus-lexicon/v1"; }

  std::string translate_zh_en(std::u32string_view text) const;
  std::vector<std::string> translate_en_zh(const std::string &text, size_t n) const;

  const std::vector<LexiconEntry> &lexicon() const noexcept { return lexicon_; }
  const std::map<char32_t, std::string> &sensitivity() const noexcept { return sensitivity_; }

 private:
  std::vector<LexiconEntry> lexicon_;
  std::map<char32_t, std::string> sensitivity_;
  std::unordered_map<std::u32string, size_t> by_zh_;
  // Words grouped by length for the fuzzy pass, sorted for deterministic ties.
  std::map<size_t, std::vector<size_t>> by_length_;
  std::map<std::vector<std::string>, size_t> by_en_;
  size_t max_zh_ = 1;
  size_t max_en_ = 1;
};

// Context-free mock masked LM: p(token) = frequency / total lexicon frequency;
// tokens absent from the table get probability 0 (maximal importance).
class MockMaskedLM final : public MaskedLM {
 public:
  explicit MockMaskedLM(const std::vector<LexiconEntry> &lexicon);
  std::vector<double> token_probabilities(const std::vector<std::string> &tokens) const override;
  std::string identity() const override { return "mock:unigram-frequency/v1"; }

 private:
  std::unordered_map<std::string, double> probability_;
};

// Jaccard index of character-bigram sets, with begin/end markers so that
// single characters still form bigrams. Range [0,1].
class MockSentenceSimilarity final : public SentenceSimilarity {
 public:
  double similarity(const std::string &a, const std::string &b) const override;
  std::string identity() const override { return "mock:char-bigram-jaccard/v1"; }
};

}  // namespace vfa::models
