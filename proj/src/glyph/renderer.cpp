#include "vfa/glyph/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vfa/digest.hpp"
#include "vfa/error.hpp"
#include "vfa/utf8.hpp"

#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wunused-function"
#define STBTT_STATIC
#define STB_TRUETYPE_IMPLEMENTATION
#include "stb_truetype.h"
#pragma GCC diagnostic pop

namespace vfa::glyph {

struct Renderer::Face {
  std::string path;
  std::vector<unsigned char> data;
  std::string content_digest;
  stbtt_fontinfo info{};
  float scale = 0.0f;
  // Baseline position measured from the top of the cell, in pixels.
  float baseline = 0.0f;
};

namespace {

std::vector<unsigned char> read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FontLoad, "cannot open font file " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

Renderer::Renderer(RenderConfig config) : config_(std::move(config)) {
  if (config_.fonts.empty()) throw Error(ErrorCode::BadConfig, "no fonts configured");
  if (!(config_.font_size > 0.0)) throw Error(ErrorCode::BadConfig, "font size must be positive");
  if (config_.cell_width <= 0 || config_.cell_height <= 0) {
    throw Error(ErrorCode::BadConfig, "cell dimensions must be positive");
  }
  if (config_.max_chars == 0) throw Error(ErrorCode::BadConfig, "max_chars must be positive");
  for (float v : {config_.background, config_.foreground}) {
    if (!(v >= 0.0f && v <= 1.0f)) throw Error(ErrorCode::BadConfig, "intensities must lie in [0,1]");
  }

  std::ostringstream stamp;
  stamp << "vfa-render-v1";
  for (const auto &path : config_.fonts) {
    auto face = std::make_unique<Face>();
    face->path = path;
    face->data = read_file(path);
    const int offset = stbtt_GetFontOffsetForIndex(face->data.data(), 0);
    if (offset < 0 || !stbtt_InitFont(&face->info, face->data.data(), offset)) {
      throw Error(ErrorCode::FontLoad, "not a usable TrueType/OpenType font: " + path);
    }
    face->content_digest = to_hex(sha256(std::span<const std::uint8_t>(face->data)));
    face->scale = stbtt_ScaleForMappingEmToPixels(&face->info, static_cast<float>(config_.font_size));

    int ascent = 0, descent = 0, gap = 0;
    if (!stbtt_GetFontVMetricsOS2(&face->info, &ascent, &descent, &gap)) {
      stbtt_GetFontVMetrics(&face->info, &ascent, &descent, &gap);
    }
    const float box = static_cast<float>(ascent - descent) * face->scale;
    if (box > static_cast<float>(config_.cell_height) + 0.5f ||
        config_.font_size > static_cast<double>(config_.cell_width)) {
      throw Error(ErrorCode::BadConfig,
                  "cell " + std::to_string(config_.cell_width) + "x" + std::to_string(config_.cell_height) +
                      " too small for font size " + std::to_string(config_.font_size) + " of " + path);
    }
    face->baseline = (static_cast<float>(config_.cell_height) - box) / 2.0f +
                     static_cast<float>(ascent) * face->scale;
    stamp << '|' << face->content_digest;
    faces_.push_back(std::move(face));
  }
  stamp << "|size=" << config_.font_size << "|cell=" << config_.cell_width << 'x' << config_.cell_height
        << "|bg=" << config_.background << "|fg=" << config_.foreground << "|aa=" << config_.antialias;
  digest_ = to_hex(sha256(stamp.str()));
}

Renderer::~Renderer() = default;
Renderer::Renderer(Renderer &&) noexcept = default;
Renderer &Renderer::operator=(Renderer &&) noexcept = default;

std::string Renderer::geometry_summary() const {
  std::ostringstream out;
  out << "font_size=" << config_.font_size << " cell=" << config_.cell_width << 'x' << config_.cell_height
      << " antialias=" << (config_.antialias ? "on" : "off") << " background=" << config_.background
      << " foreground=" << config_.foreground << " fonts=";
  for (size_t i = 0; i < faces_.size(); ++i) {
    if (i) out << ',';
    out << faces_[i]->path << "(sha256:" << faces_[i]->content_digest.substr(0, 16) << ")";
  }
  return out.str();
}

const Renderer::Face *Renderer::face_for(char32_t c, int *glyph_index) const {
  for (const auto &face : faces_) {
    const int g = stbtt_FindGlyphIndex(&face->info, static_cast<int>(c));
    if (g != 0) {
      *glyph_index = g;
      return face.get();
    }
  }
  return nullptr;
}

bool Renderer::has_glyph(char32_t c) const {
  int g = 0;
  return face_for(c, &g) != nullptr;
}

void Renderer::draw_into(std::vector<float> &canvas, int canvas_width, int x_offset, char32_t c) const {
  int glyph = 0;
  const Face *face = face_for(c, &glyph);
  if (face == nullptr) {
    throw Error(ErrorCode::NoGlyph, "no configured font has a glyph for " + utf8::codepoint_label(c));
  }
  int advance = 0, lsb = 0;
  stbtt_GetGlyphHMetrics(&face->info, glyph, &advance, &lsb);
  const float origin_x = (static_cast<float>(config_.cell_width) - static_cast<float>(advance) * face->scale) / 2.0f;
  const float ix = std::floor(origin_x);
  const float iy = std::floor(face->baseline);
  const float shift_x = origin_x - ix;
  const float shift_y = face->baseline - iy;

  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  stbtt_GetGlyphBitmapBoxSubpixel(&face->info, glyph, face->scale, face->scale, shift_x, shift_y, &x0, &y0, &x1,
                                  &y1);
  const int w = x1 - x0;
  const int h = y1 - y0;
  if (w <= 0 || h <= 0) return;  // blank glyph such as a space

  std::vector<unsigned char> coverage(static_cast<size_t>(w) * h, 0);
  stbtt_MakeGlyphBitmapSubpixel(&face->info, coverage.data(), w, h, w, face->scale, face->scale, shift_x, shift_y,
                                glyph);

  const float bg = config_.background;
  const float fg = config_.foreground;
  const int left = static_cast<int>(ix) + x0;
  const int top = static_cast<int>(iy) + y0;
  // Ink outside the cell is clipped so each character stays inside its own columns.
  for (int y = 0; y < h; ++y) {
    const int cy = top + y;
    if (cy < 0 || cy >= config_.cell_height) continue;
    for (int x = 0; x < w; ++x) {
      const int cx = left + x;
      if (cx < 0 || cx >= config_.cell_width) continue;
      unsigned char a = coverage[static_cast<size_t>(y) * w + x];
      if (!config_.antialias) a = a >= 128 ? 255 : 0;
      if (a == 0) continue;
      const float t = static_cast<float>(a) / 255.0f;
      float v = bg + (fg - bg) * t;
      v = std::clamp(v, 0.0f, 1.0f);
      canvas[static_cast<size_t>(cy) * canvas_width + x_offset + cx] = v;
    }
  }
}

GlyphBitmap Renderer::render_char(char32_t c) const {
  std::vector<float> pixels(static_cast<size_t>(config_.cell_width) * config_.cell_height, config_.background);
  draw_into(pixels, config_.cell_width, 0, c);
  return GlyphBitmap(config_.cell_width, config_.cell_height, std::move(pixels), std::u32string(1, c));
}

GlyphBitmap Renderer::render_sentence(std::u32string_view text) const {
  if (text.empty()) throw Error(ErrorCode::Empty, "cannot render empty text");
  if (text.size() > config_.max_chars) {
    throw Error(ErrorCode::TooLong, std::to_string(text.size()) + " characters exceeds limit of " +
                                        std::to_string(config_.max_chars));
  }
  const int width = static_cast<int>(text.size()) * config_.cell_width;
  std::vector<float> pixels(static_cast<size_t>(width) * config_.cell_height, config_.background);
  for (size_t i = 0; i < text.size(); ++i) {
    draw_into(pixels, width, static_cast<int>(i) * config_.cell_width, text[i]);
  }
  return GlyphBitmap(width, config_.cell_height, std::move(pixels), std::u32string(text));
}

GlyphBitmap Renderer::render_sentence(std::string_view utf8_text) const {
  return render_sentence(utf8::decode(utf8_text));
}

}  // namespace vfa::glyph
