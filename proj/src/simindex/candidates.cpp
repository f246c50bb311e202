#include "vfa/simindex/candidates.hpp"

#include <algorithm>
#include <unordered_set>

#include "vfa/error.hpp"
#include "vfa/utf8.hpp"

namespace vfa::simindex {

std::string to_string(Source source) {
  switch (source) {
    case Source::Rad:
      return "rad";
    case Source::Pix:
      return "pix";
    case Source::Both:
      return "both";
  }
  return "?";
}

const Candidate *CandidateSet::find(char32_t c) const {
  for (const auto &cand : candidates) {
    if (cand.ch == c) return &cand;
  }
  return nullptr;
}

CandidateSet radical_candidates(char32_t c, const GlyphDictionary &dict) {
  CandidateSet set{c, {}};
  for (char32_t other : dict.radical_candidates(c)) set.candidates.push_back({other, Source::Rad, {}, {}});
  return set;
}

CandidateSet pixel_candidates(char32_t c, const PixelIndex &index, const glyph::Renderer &renderer, size_t m,
                              size_t k) {
  CandidateSet set{c, {}};
  for (const auto &hit : index.query(c, renderer, m, k)) {
    set.candidates.push_back({hit.ch, Source::Pix, hit.cosine, hit.mse});
  }
  return set;
}

CandidateSet merge_candidates(const CandidateSet &rad, const CandidateSet &pix) {
  if (rad.origin != pix.origin) {
    throw Error(ErrorCode::OriginMismatch, "cannot merge candidates of " + utf8::codepoint_label(rad.origin) +
                                               " with candidates of " + utf8::codepoint_label(pix.origin));
  }
  std::unordered_set<char32_t> in_rad;
  for (const auto &c : rad.candidates) in_rad.insert(c.ch);
  CandidateSet out{rad.origin, {}};
  std::unordered_set<char32_t> seen;
  for (auto c : pix.candidates) {
    if (c.ch == out.origin || !seen.insert(c.ch).second) continue;
    if (in_rad.count(c.ch)) c.source = Source::Both;
    out.candidates.push_back(c);
  }
  std::vector<Candidate> rad_only;
  for (const auto &c : rad.candidates) {
    if (c.ch == out.origin || !seen.insert(c.ch).second) continue;
    rad_only.push_back({c.ch, Source::Rad, {}, {}});
  }
  std::sort(rad_only.begin(), rad_only.end(), [](const Candidate &a, const Candidate &b) { return a.ch < b.ch; });
  out.candidates.insert(out.candidates.end(), rad_only.begin(), rad_only.end());
  return out;
}

}  // namespace vfa::simindex
