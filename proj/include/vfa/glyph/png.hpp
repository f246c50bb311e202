#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vfa/glyph/bitmap.hpp"

namespace vfa::glyph {

// 8-bit grayscale PNG; intensities are scaled by 255 and rounded.
std::vector<std::uint8_t> encode_png(const GlyphBitmap &bitmap);
void write_png(const GlyphBitmap &bitmap, const std::string &path);

// Accepts 8-bit grayscale PNGs (what encode_png produces).
GlyphBitmap decode_png(const std::vector<std::uint8_t> &bytes);

std::string base64_encode(const std::vector<std::uint8_t> &bytes);
std::vector<std::uint8_t> base64_decode(const std::string &text);

}  // namespace vfa::glyph
