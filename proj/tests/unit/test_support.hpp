#pragma once

#include <random>
#include <string>

#include "vfa/glyph/bitmap.hpp"
#include "vfa/glyph/renderer.hpp"

namespace vfa::test {

glyph::RenderConfig default_render_config();

// Shared renderer over the bundled font (constructed once per process).
const glyph::Renderer &shared_renderer();

std::string fixture_path(const std::string &name);

// Intensities drawn uniformly from {0, 1/255, ..., 1}.
glyph::GlyphBitmap random_bitmap(std::mt19937_64 &rng, int width, int height);

}  // namespace vfa::test
