#include "vfa/attack/candidate_provider.hpp"

#include <algorithm>
#include <mutex>

#include "vfa/error.hpp"

namespace vfa::attack {

CandidateProvider::CandidateProvider(const simindex::GlyphDictionary *dictionary, const simindex::PixelIndex *index,
                                     const glyph::GlyphCache &glyphs, const metrics::PerceptualMetric &metric,
                                     size_t m, size_t k)
    : dictionary_(dictionary), index_(index), glyphs_(glyphs), metric_(metric), m_(m), k_(k) {
  if (index_ && index_->geometry_digest() != glyphs_.renderer().geometry_digest()) {
    throw Error(ErrorCode::GeometryMismatch, "pixel index geometry " + index_->geometry_digest().substr(0, 16) +
                                                 " does not match the renderer " +
                                                 glyphs_.renderer().geometry_digest().substr(0, 16) +
                                                 "; rebuild it with build-index");
  }
  if (index_) {
    const size_t cap = index_->repertoire().size() - 1;
    m_ = std::min(m_, cap);
    k_ = std::min(k_, m_);
  }
}

bool CandidateProvider::attackable(char32_t c) const {
  return (index_ && index_->contains(c)) || (dictionary_ && dictionary_->contains(c));
}

std::shared_ptr<const RankedCandidates> CandidateProvider::candidates(char32_t c) const {
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(c);
    if (it != cache_.end()) return it->second;
  }
  auto computed = std::make_shared<const RankedCandidates>(compute(c));
  std::unique_lock lock(mutex_);
  return cache_.emplace(c, std::move(computed)).first->second;
}

RankedCandidates CandidateProvider::compute(char32_t c) const {
  RankedCandidates out{c, {}};
  if (!attackable(c) || !glyphs_.renderer().has_glyph(c)) return out;

  simindex::CandidateSet rad{c, {}};
  if (dictionary_) rad = simindex::radical_candidates(c, *dictionary_);
  simindex::CandidateSet pix{c, {}};
  if (index_ && k_ >= 1) {
    try {
      const auto cell = glyphs_.cell(c);
      for (const auto &hit : index_->query(c, *cell, m_, k_)) {
        pix.candidates.push_back({hit.ch, simindex::Source::Pix, hit.cosine, hit.mse});
      }
    } catch (const Error &e) {
      if (e.code() != ErrorCode::ZeroVector) throw;  // blank glyph: no pixel neighbours
    }
  }
  const auto merged = simindex::merge_candidates(rad, pix);
  const auto original = glyphs_.cell(c);
  for (const auto &cand : merged.candidates) {
    if (!glyphs_.renderer().has_glyph(cand.ch)) continue;
    const double local = metric_.similarity(*glyphs_.cell(cand.ch), *original);
    out.items.push_back({cand.ch, cand.source, cand.cosine, cand.mse, local});
  }
  std::sort(out.items.begin(), out.items.end(), [](const RankedCandidate &a, const RankedCandidate &b) {
    return a.local != b.local ? a.local > b.local : a.ch < b.ch;
  });
  return out;
}

}  // namespace vfa::attack
