#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"
#include "vfa/error.hpp"
#include "vfa/glyph/cache.hpp"
#include "vfa/glyph/png.hpp"
#include "vfa/glyph/renderer.hpp"
#include "vfa/metrics/image.hpp"
#include "vfa/utf8.hpp"

using namespace vfa;
using vfa::glyph::GlyphBitmap;

namespace {

size_t ink_pixels(const GlyphBitmap &bmp, float background) {
  return static_cast<size_t>(
      std::count_if(bmp.pixels().begin(), bmp.pixels().end(), [&](float v) { return v != background; }));
}

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "expected vfa::Error";
  return ErrorCode::BadConfig;
}

}  // namespace

TEST(RenderChar, CjkCharacterHasInk) {
  const auto &r = test::shared_renderer();
  const auto bmp = r.render_char(U'未');
  EXPECT_EQ(bmp.width(), 24);
  EXPECT_EQ(bmp.height(), 24);
  EXPECT_GT(ink_pixels(bmp, r.config().background), 20u);
}

TEST(RenderChar, Deterministic) {
  const auto &r = test::shared_renderer();
  EXPECT_EQ(r.render_char(U'未'), r.render_char(U'未'));
  glyph::Renderer second(test::default_render_config());
  EXPECT_EQ(r.render_char(U'未'), second.render_char(U'未'));
  EXPECT_EQ(r.geometry_digest(), second.geometry_digest());
}

TEST(RenderChar, VisuallySimilarPairIsCloserThanUnrelatedChar) {
  const auto &r = test::shared_renderer();
  const auto wei = r.render_char(U'未');
  const auto mo = r.render_char(U'末');
  const auto hai = r.render_char(U'海');
  EXPECT_LT(metrics::mse(wei, mo), metrics::mse(wei, hai));
}

TEST(RenderChar, IntensitiesInRangeAndBlankGlyphIsPureBackground) {
  const auto &r = test::shared_renderer();
  for (char32_t c : std::u32string(U"海未A,。")) {
    const auto bmp = r.render_char(c);
    for (float v : bmp.pixels()) {
      ASSERT_GE(v, 0.0f);
      ASSERT_LE(v, 1.0f);
    }
  }
  const auto space = r.render_char(U' ');
  EXPECT_EQ(ink_pixels(space, r.config().background), 0u);
}

TEST(RenderChar, MissingGlyphIsAnError) {
  const auto &r = test::shared_renderer();
  EXPECT_FALSE(r.has_glyph(U'\U00020000'));
  EXPECT_EQ(code_of([&] { r.render_char(U'\U00020000'); }), ErrorCode::NoGlyph);
}

TEST(RenderChar, FallbackFontCoversMissingCodepoints) {
  auto cfg = test::default_render_config();
  EXPECT_FALSE(test::shared_renderer().has_glyph(U'Ş'));
  cfg.fonts.push_back("/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf");
  glyph::Renderer with_fallback(cfg);
  EXPECT_TRUE(with_fallback.has_glyph(U'Ş'));
  EXPECT_NE(with_fallback.geometry_digest(), test::shared_renderer().geometry_digest());
  // Primary font still wins for codepoints it maps.
  EXPECT_EQ(with_fallback.render_char(U'未'), test::shared_renderer().render_char(U'未'));
}

TEST(Renderer, ConfigurationErrors) {
  auto cfg = test::default_render_config();
  cfg.fonts = {"/nonexistent/font.ttf"};
  EXPECT_EQ(code_of([&] { glyph::Renderer r(cfg); }), ErrorCode::FontLoad);

  cfg = test::default_render_config();
  cfg.cell_width = 12;
  cfg.cell_height = 12;
  EXPECT_EQ(code_of([&] { glyph::Renderer r(cfg); }), ErrorCode::BadConfig);

  cfg = test::default_render_config();
  cfg.font_size = 0;
  EXPECT_EQ(code_of([&] { glyph::Renderer r(cfg); }), ErrorCode::BadConfig);
}

TEST(RenderSentence, EmptyAndTooLongAreRejected) {
  const auto &r = test::shared_renderer();
  EXPECT_EQ(code_of([&] { r.render_sentence(std::u32string_view{}); }), ErrorCode::Empty);
  auto cfg = test::default_render_config();
  cfg.max_chars = 4;
  glyph::Renderer small(cfg);
  EXPECT_EQ(code_of([&] { small.render_sentence(std::string_view("今天天气好")); }), ErrorCode::TooLong);
  EXPECT_NO_THROW(small.render_sentence(std::string_view("今天天气")));
}

TEST(RenderSentence, SingleCharacterEqualsRenderChar) {
  const auto &r = test::shared_renderer();
  EXPECT_EQ(r.render_sentence(std::string_view("未")), r.render_char(U'未'));
}

TEST(RenderSentence, WidthIsCharacterCountTimesCell) {
  const auto &r = test::shared_renderer();
  const auto bmp = r.render_sentence(std::string_view("机器翻译模型"));
  EXPECT_EQ(bmp.width(), 6 * 24);
  EXPECT_EQ(bmp.height(), 24);
}

TEST(RenderSentence, OneCharacterChangeIsConfinedToItsCell) {
  const auto &r = test::shared_renderer();
  const auto a = r.render_sentence(std::string_view("我们未来见"));
  const auto b = r.render_sentence(std::string_view("我们末来见"));
  const int cell = r.config().cell_width;
  bool any_diff = false;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (a.at(x, y) != b.at(x, y)) {
        any_diff = true;
        ASSERT_EQ(x / cell, 2) << "pixel (" << x << "," << y << ") outside the changed cell";
      }
    }
  }
  EXPECT_TRUE(any_diff);
}

TEST(RenderSentence, MixedScriptSentenceNeedsEveryGlyph) {
  const auto &r = test::shared_renderer();
  EXPECT_NO_THROW(r.render_sentence(std::string_view("GPU很快。")));
  EXPECT_EQ(code_of([&] { r.render_sentence(std::string_view("a\xF0\xA0\x80\x80" "b")); }), ErrorCode::NoGlyph);
}

TEST(GlyphCache, SentenceMatchesRendererExactly) {
  const auto &r = test::shared_renderer();
  glyph::GlyphCache cache(r);
  const std::string text = "我们在海边看见了一只狗。";
  EXPECT_EQ(cache.sentence(utf8::decode(text)), r.render_sentence(std::string_view(text)));
  EXPECT_EQ(*cache.cell(U'海'), r.render_char(U'海'));
}

TEST(Png, RoundTripPreservesQuantizedPixels) {
  const auto &r = test::shared_renderer();
  const auto bmp = r.render_sentence(std::string_view("未末"));
  const auto decoded = glyph::decode_png(glyph::encode_png(bmp));
  ASSERT_EQ(decoded.width(), bmp.width());
  ASSERT_EQ(decoded.height(), bmp.height());
  for (size_t i = 0; i < bmp.size(); ++i) {
    EXPECT_NEAR(decoded.pixels()[i], bmp.pixels()[i], 0.5f / 255.0f + 1e-6f);
  }
  const auto bytes = glyph::encode_png(bmp);
  EXPECT_EQ(glyph::base64_decode(glyph::base64_encode(bytes)), bytes);
}

TEST(GlyphBitmap, RejectsInvalidContents) {
  EXPECT_EQ(code_of([] { GlyphBitmap(0, 3, {}); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([] { GlyphBitmap(2, 2, {0, 0, 0}); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([] { GlyphBitmap(1, 1, {1.5f}); }), ErrorCode::BadParams);
}
