#include "vfa/glyph/cache.hpp"

#include <mutex>
#include <string>
#include <vector>

#include "vfa/error.hpp"

namespace vfa::glyph {

std::shared_ptr<const GlyphBitmap> GlyphCache::cell(char32_t c) const {
  {
    std::shared_lock lock(mutex_);
    auto it = cells_.find(c);
    if (it != cells_.end()) return it->second;
  }
  auto rendered = std::make_shared<const GlyphBitmap>(renderer_->render_char(c));
  std::unique_lock lock(mutex_);
  return cells_.emplace(c, std::move(rendered)).first->second;
}

GlyphBitmap GlyphCache::sentence(std::u32string_view text) const {
  const auto &cfg = renderer_->config();
  if (text.empty()) throw Error(ErrorCode::Empty, "cannot render empty text");
  if (text.size() > cfg.max_chars) {
    throw Error(ErrorCode::TooLong,
                std::to_string(text.size()) + " characters exceeds limit of " + std::to_string(cfg.max_chars));
  }
  const int cw = cfg.cell_width;
  const int width = static_cast<int>(text.size()) * cw;
  std::vector<float> pixels(static_cast<size_t>(width) * cfg.cell_height);
  for (size_t i = 0; i < text.size(); ++i) {
    const auto glyph = cell(text[i]);
    const auto src = glyph->pixels();
    for (int y = 0; y < cfg.cell_height; ++y) {
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(y) * cw, cw,
                  pixels.begin() + static_cast<std::ptrdiff_t>(y) * width + static_cast<std::ptrdiff_t>(i) * cw);
    }
  }
  return GlyphBitmap(width, cfg.cell_height, std::move(pixels), std::u32string(text));
}

}  // namespace vfa::glyph
