#include "vfa/metrics/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "vfa/error.hpp"

namespace vfa::metrics {

namespace {

constexpr int kMaxOrder = 4;
constexpr double kEpsilon = 0.1;

using NgramCounts = std::map<std::vector<std::string>, long>;

NgramCounts count_ngrams(const Tokens &tokens, int n) {
  NgramCounts counts;
  if (tokens.size() < static_cast<size_t>(n)) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

struct Fraction {
  long numerator = 0;
  long denominator = 1;
};

// Clipped n-gram matches over the union of references, denominator >= 1.
Fraction modified_precision(const Tokens &hypothesis, const std::vector<Tokens> &references, int n) {
  const NgramCounts counts = count_ngrams(hypothesis, n);
  std::vector<NgramCounts> ref_counts;
  ref_counts.reserve(references.size());
  for (const auto &ref : references) ref_counts.push_back(count_ngrams(ref, n));

  Fraction out;
  long total = 0;
  for (const auto &[gram, count] : counts) {
    long max_ref = 0;
    for (const auto &rc : ref_counts) {
      auto it = rc.find(gram);
      if (it != rc.end()) max_ref = std::max(max_ref, it->second);
    }
    out.numerator += std::min(count, max_ref);
    total += count;
  }
  out.denominator = std::max(1L, total);
  return out;
}

size_t closest_ref_length(const std::vector<Tokens> &references, size_t hyp_len) {
  size_t best = references.front().size();
  for (const auto &ref : references) {
    const auto diff = [&](size_t r) { return r > hyp_len ? r - hyp_len : hyp_len - r; };
    const size_t r = ref.size();
    if (diff(r) < diff(best) || (diff(r) == diff(best) && r < best)) best = r;
  }
  return best;
}

double brevity_penalty(size_t closest_ref_len, size_t hyp_len) {
  if (hyp_len > closest_ref_len) return 1.0;
  if (hyp_len == 0) return 0.0;
  return std::exp(1.0 - static_cast<double>(closest_ref_len) / static_cast<double>(hyp_len));
}

void require_references(const std::vector<Tokens> &references) {
  if (references.empty() ||
      std::all_of(references.begin(), references.end(), [](const Tokens &r) { return r.empty(); })) {
    throw Error(ErrorCode::EmptyReference, "BLEU needs at least one non-empty reference");
  }
}

BleuScore combine(const std::array<Fraction, kMaxOrder> &pooled, size_t hyp_len, size_t ref_len) {
  BleuScore score;
  score.brevity_penalty = brevity_penalty(ref_len, hyp_len);
  if (pooled[0].numerator == 0) {
    score.value = 0.0;
    return score;
  }
  double log_sum = 0.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    const auto &f = pooled[static_cast<size_t>(n)];
    const double p = f.numerator == 0 ? kEpsilon / static_cast<double>(f.denominator)
                                      : static_cast<double>(f.numerator) / static_cast<double>(f.denominator);
    score.precisions[static_cast<size_t>(n)] = p;
    log_sum += 0.25 * std::log(p);
  }
  score.value = score.brevity_penalty * std::exp(log_sum);
  return score;
}

}  // namespace

BleuScore sentence_bleu(const Tokens &hypothesis, const std::vector<Tokens> &references) {
  require_references(references);
  std::array<Fraction, kMaxOrder> pooled{};
  for (int n = 1; n <= kMaxOrder; ++n) pooled[static_cast<size_t>(n - 1)] = modified_precision(hypothesis, references, n);
  return combine(pooled, hypothesis.size(), closest_ref_length(references, hypothesis.size()));
}

double corpus_bleu(const std::vector<Tokens> &hypotheses, const std::vector<std::vector<Tokens>> &references) {
  if (hypotheses.size() != references.size()) {
    throw Error(ErrorCode::LengthMismatch, "hypothesis and reference counts differ");
  }
  std::array<Fraction, kMaxOrder> pooled{};
  for (auto &f : pooled) f.denominator = 0;
  size_t hyp_len = 0, ref_len = 0;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    require_references(references[i]);
    for (int n = 1; n <= kMaxOrder; ++n) {
      const Fraction f = modified_precision(hypotheses[i], references[i], n);
      pooled[static_cast<size_t>(n - 1)].numerator += f.numerator;
      pooled[static_cast<size_t>(n - 1)].denominator += f.denominator;
    }
    hyp_len += hypotheses[i].size();
    ref_len += closest_ref_length(references[i], hypotheses[i].size());
  }
  if (hypotheses.empty()) return 0.0;
  return combine(pooled, hyp_len, ref_len).value;
}

}  // namespace vfa::metrics
