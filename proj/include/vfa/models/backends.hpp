#pragma once

#include <string>
#include <vector>

namespace vfa::models {

// Every backend is called concurrently by attack workers; implementations must
// be thread-safe. Remote failures surface as Error(BackendUnavailable),
// Error(Timeout) or Error(MalformedResponse).

class Translator {
 public:
  virtual ~Translator() = default;
  // Up to `n` distinct translations, best first. Backends without n-best
  // support return a single entry.
  virtual std::vector<std::string> translate_n(const std::string &text, const std::string &src,
                                               const std::string &tgt, size_t n) const = 0;
  virtual std::string identity() const = 0;
};

class MaskedLM {
 public:
  virtual ~MaskedLM() = default;
  // Probability of each true token when its position is masked.
  virtual std::vector<double> token_probabilities(const std::vector<std::string> &tokens) const = 0;
  virtual std::string identity() const = 0;
};

class SentenceSimilarity {
 public:
  virtual ~SentenceSimilarity() = default;
  virtual double similarity(const std::string &a, const std::string &b) const = 0;
  virtual std::string identity() const = 0;
};

// Single best translation. Throws Error(Empty) for empty text.
std::string translate(const Translator &model, const std::string &text, const std::string &src,
                      const std::string &tgt);

// Back-translations of the reference `y` into the source language through the
// auxiliary model: at most n, non-empty, deduplicated by exact match, in the
// backend's order. `x` is accepted for interface symmetry and not consulted.
std::vector<std::string> reverse_translations(const Translator &aux, const std::string &x, const std::string &y,
                                              size_t n, const std::string &src_lang = "zh",
                                              const std::string &tgt_lang = "en");

// Throws Error(Empty) for no tokens and Error(LengthMismatch) when the backend
// answers with a different number of scores.
std::vector<double> mlm_importance(const MaskedLM &model, const std::vector<std::string> &words);

// Throws Error(Empty) when either text is empty.
double sentence_similarity(const SentenceSimilarity &model, const std::string &a, const std::string &b);

}  // namespace vfa::models
