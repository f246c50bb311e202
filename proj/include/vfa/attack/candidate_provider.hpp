#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "vfa/glyph/cache.hpp"
#include "vfa/metrics/perceptual.hpp"
#include "vfa/simindex/candidates.hpp"

namespace vfa::attack {

struct RankedCandidate {
  char32_t ch = 0;
  simindex::Source source = simindex::Source::Rad;
  std::optional<double> cosine;
  std::optional<double> mse;
  double local = 0.0;  // perceptual similarity of the candidate cell to the original cell
};

// S = S_rad ∪ S_pix for one character, ordered by descending local perceptual
// similarity, ties by ascending codepoint.
struct RankedCandidates {
  char32_t origin = 0;
  std::vector<RankedCandidate> items;
};

// Builds and memoizes candidate sets. Only characters covered by the pixel
// index or the glyph dictionary are attackable; anything else has no
// candidates. Safe for concurrent use.
class CandidateProvider {
 public:
  // Either source may be null. `m`, `k` are clamped to the index size.
  CandidateProvider(const simindex::GlyphDictionary *dictionary, const simindex::PixelIndex *index,
                    const glyph::GlyphCache &glyphs, const metrics::PerceptualMetric &metric, size_t m, size_t k);

  std::shared_ptr<const RankedCandidates> candidates(char32_t c) const;
  bool attackable(char32_t c) const;

 private:
  RankedCandidates compute(char32_t c) const;

  const simindex::GlyphDictionary *dictionary_;
  const simindex::PixelIndex *index_;
  const glyph::GlyphCache &glyphs_;
  const metrics::PerceptualMetric &metric_;
  size_t m_;
  size_t k_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<char32_t, std::shared_ptr<const RankedCandidates>> cache_;
};

}  // namespace vfa::attack
