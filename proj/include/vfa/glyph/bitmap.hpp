#pragma once

#include <span>
#include <string>
#include <vector>

namespace vfa::glyph {

// Row-major grayscale raster with intensities in [0,1]. This is the image a
// character or sentence maps to; every similarity metric consumes it.
class GlyphBitmap {
 public:
  // Throws Error(BadParams) if the dimensions or intensities are invalid.
  GlyphBitmap(int width, int height, std::vector<float> pixels, std::u32string text = {});

  static GlyphBitmap filled(int width, int height, float value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  size_t size() const noexcept { return pixels_.size(); }
  std::span<const float> pixels() const noexcept { return pixels_; }
  float at(int x, int y) const { return pixels_[static_cast<size_t>(y) * width_ + x]; }
  const std::u32string &text() const noexcept { return text_; }

  // Copy widened to `width` columns; new columns take `fill`.
  GlyphBitmap padded_to_width(int width, float fill) const;

  friend bool operator==(const GlyphBitmap &a, const GlyphBitmap &b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.pixels_ == b.pixels_;
  }

 private:
  int width_;
  int height_;
  std::vector<float> pixels_;
  std::u32string text_;
};

}  // namespace vfa::glyph
