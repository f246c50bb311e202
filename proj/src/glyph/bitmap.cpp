#include "vfa/glyph/bitmap.hpp"

#include <cmath>

#include "vfa/error.hpp"

namespace vfa::glyph {

GlyphBitmap::GlyphBitmap(int width, int height, std::vector<float> pixels, std::u32string text)
    : width_(width), height_(height), pixels_(std::move(pixels)), text_(std::move(text)) {
  if (width_ <= 0 || height_ <= 0) {
    throw Error(ErrorCode::BadParams, "bitmap dimensions must be positive");
  }
  if (pixels_.size() != static_cast<size_t>(width_) * static_cast<size_t>(height_)) {
    throw Error(ErrorCode::BadParams, "pixel count does not match width x height");
  }
  for (float v : pixels_) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw Error(ErrorCode::BadParams, "intensity outside [0,1]");
    }
  }
}

GlyphBitmap GlyphBitmap::filled(int width, int height, float value) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::BadParams, "bitmap dimensions must be positive");
  return GlyphBitmap(width, height, std::vector<float>(static_cast<size_t>(width) * height, value));
}

GlyphBitmap GlyphBitmap::padded_to_width(int width, float fill) const {
  if (width < width_) throw Error(ErrorCode::BadParams, "cannot pad to a narrower width");
  if (width == width_) return *this;
  std::vector<float> out(static_cast<size_t>(width) * height_, fill);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      out[static_cast<size_t>(y) * width + x] = at(x, y);
    }
  }
  return GlyphBitmap(width, height_, std::move(out), text_);
}

}  // namespace vfa::glyph
