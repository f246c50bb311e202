#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vfa/glyph/bitmap.hpp"

namespace vfa::glyph {

struct RenderConfig {
  // Font files tried in order; the first font that maps a codepoint wins.
  std::vector<std::string> fonts;
  // Pixels per em.
  double font_size = 18.0;
  int cell_width = 24;
  int cell_height = 24;
  float background = 1.0f;
  float foreground = 0.0f;
  bool antialias = true;
  size_t max_chars = 512;
};

// Rasterizes characters into fixed cells and sentences into horizontal runs
// of cells, so character i always owns columns [i*cell_width, (i+1)*cell_width).
//
// Construction loads every font once; afterwards all methods are const and
// safe to call from any number of threads.
class Renderer {
 public:
  // Throws Error(FontLoad) for unreadable/unparseable fonts and
  // Error(BadConfig) when a glyph em box cannot fit inside the cell.
  explicit Renderer(RenderConfig config);
  ~Renderer();
  Renderer(Renderer &&) noexcept;
  Renderer &operator=(Renderer &&) noexcept;

  const RenderConfig &config() const noexcept { return config_; }

  // Stable digest of everything that affects pixels: font contents, size,
  // cell geometry, intensities and anti-aliasing. Indexes carry it.
  const std::string &geometry_digest() const noexcept { return digest_; }

  // Human readable summary of the geometry, echoed into persisted artifacts.
  std::string geometry_summary() const;

  bool has_glyph(char32_t c) const;

  // Throws Error(NoGlyph) when no configured font maps `c`.
  GlyphBitmap render_char(char32_t c) const;

  // Throws Error(Empty) for empty text, Error(TooLong) beyond max_chars,
  // Error(NoGlyph) for the first unmappable codepoint.
  GlyphBitmap render_sentence(std::u32string_view text) const;
  GlyphBitmap render_sentence(std::string_view utf8_text) const;

 private:
  struct Face;

  const Face *face_for(char32_t c, int *glyph_index) const;
  void draw_into(std::vector<float> &canvas, int canvas_width, int x_offset, char32_t c) const;

  RenderConfig config_;
  std::vector<std::unique_ptr<Face>> faces_;
  std::string digest_;
};

}  // namespace vfa::glyph
