#pragma once

#include <array>
#include <string>
#include <vector>

namespace vfa::metrics {

using Tokens = std::vector<std::string>;

struct BleuScore {
  double value = 0.0;
  // Modified n-gram precisions for n = 1..4 after smoothing.
  std::array<double, 4> precisions{};
  double brevity_penalty = 0.0;
  std::string smoothing = "add-epsilon-0.1";
};

// Sentence-level BLEU-4 with uniform weights. Zero n-gram match counts are
// replaced by epsilon=0.1 over the n-gram total; if not even one unigram
// matches the score is 0. Brevity penalty uses the closest reference length
// (shorter wins ties). Throws Error(EmptyReference) when `references` is empty.
BleuScore sentence_bleu(const Tokens &hypothesis, const std::vector<Tokens> &references);

// Corpus BLEU-4 with pooled n-gram counts and lengths, same smoothing rule.
double corpus_bleu(const std::vector<Tokens> &hypotheses, const std::vector<std::vector<Tokens>> &references);

}  // namespace vfa::metrics
