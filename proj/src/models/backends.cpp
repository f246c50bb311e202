#include "vfa/models/backends.hpp"

#include <algorithm>

#include "vfa/error.hpp"

namespace vfa::models {

std::string translate(const Translator &model, const std::string &text, const std::string &src,
                      const std::string &tgt) {
  if (text.empty()) throw Error(ErrorCode::Empty, "cannot translate empty text");
  auto out = model.translate_n(text, src, tgt, 1);
  if (out.empty()) throw Error(ErrorCode::MalformedResponse, model.identity() + " returned no translation");
  return out.front();
}

std::vector<std::string> reverse_translations(const Translator &aux, const std::string & /*x*/,
                                              const std::string &y, size_t n, const std::string &src_lang,
                                              const std::string &tgt_lang) {
  if (n == 0) return {};
  if (y.empty()) throw Error(ErrorCode::Empty, "cannot back-translate an empty reference");
  std::vector<std::string> out;
  for (auto &candidate : aux.translate_n(y, tgt_lang, src_lang, n)) {
    if (candidate.empty() || std::find(out.begin(), out.end(), candidate) != out.end()) continue;
    out.push_back(std::move(candidate));
    if (out.size() == n) break;
  }
  return out;
}

std::vector<double> mlm_importance(const MaskedLM &model, const std::vector<std::string> &words) {
  if (words.empty()) throw Error(ErrorCode::Empty, "importance needs at least one token");
  auto scores = model.token_probabilities(words);
  if (scores.size() != words.size()) {
    throw Error(ErrorCode::LengthMismatch, model.identity() + " returned " + std::to_string(scores.size()) +
                                               " scores for " + std::to_string(words.size()) + " tokens");
  }
  return scores;
}

double sentence_similarity(const SentenceSimilarity &model, const std::string &a, const std::string &b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::Empty, "sentence similarity needs two non-empty texts");
  return model.similarity(a, b);
}

}  // namespace vfa::models
