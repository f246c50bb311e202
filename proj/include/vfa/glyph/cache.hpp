#pragma once

#include <memory>
#include <shared_mutex>
#include <string_view>
#include <unordered_map>

#include "vfa/glyph/renderer.hpp"

namespace vfa::glyph {

// Memoizes per-character cells and assembles sentences from them. Output is
// pixel-identical to Renderer::render_sentence because cells never overlap.
class GlyphCache {
 public:
  explicit GlyphCache(const Renderer &renderer) : renderer_(&renderer) {}

  const Renderer &renderer() const noexcept { return *renderer_; }

  std::shared_ptr<const GlyphBitmap> cell(char32_t c) const;
  GlyphBitmap sentence(std::u32string_view text) const;

 private:
  const Renderer *renderer_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<char32_t, std::shared_ptr<const GlyphBitmap>> cells_;
};

}  // namespace vfa::glyph
