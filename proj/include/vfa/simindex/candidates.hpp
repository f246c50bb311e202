#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vfa/glyph/renderer.hpp"
#include "vfa/simindex/dictionary.hpp"
#include "vfa/simindex/pixel_index.hpp"

namespace vfa::simindex {

enum class Source { Rad, Pix, Both };

std::string to_string(Source source);

struct Candidate {
  char32_t ch = 0;
  Source source = Source::Rad;
  // Present for pix and both entries.
  std::optional<double> cosine;
  std::optional<double> mse;
};

struct CandidateSet {
  char32_t origin = 0;
  std::vector<Candidate> candidates;

  bool empty() const noexcept { return candidates.empty(); }
  size_t size() const noexcept { return candidates.size(); }
  const Candidate *find(char32_t c) const;
};

// S_rad: characters sharing a radical with `c`, ascending codepoint.
CandidateSet radical_candidates(char32_t c, const GlyphDictionary &dict);

// S_pix: PixelIndex::query() wrapped as candidates, MSE order preserved.
CandidateSet pixel_candidates(char32_t c, const PixelIndex &index, const glyph::Renderer &renderer, size_t m,
                              size_t k);

// S = S_rad ∪ S_pix. Pix entries keep their order and scores (tagged Both when
// also radical matches), followed by radical-only entries by codepoint.
// Throws Error(OriginMismatch) when the sets describe different characters.
CandidateSet merge_candidates(const CandidateSet &rad, const CandidateSet &pix);

}  // namespace vfa::simindex
