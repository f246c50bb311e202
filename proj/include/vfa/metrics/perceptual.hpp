#pragma once

#include <span>
#include <string>
#include <string_view>

#include "vfa/glyph/bitmap.hpp"
#include "vfa/glyph/cache.hpp"

namespace vfa::metrics {

using glyph::GlyphBitmap;

// Perceptual similarity between two images; higher means more alike.
// Implementations must be symmetric and safe for concurrent calls.
class PerceptualMetric {
 public:
  virtual ~PerceptualMetric() = default;
  virtual double similarity(const GlyphBitmap &a, const GlyphBitmap &b) const = 0;
  // Value for identical inputs.
  virtual double max_similarity() const { return 1.0; }
  // Recorded in every result that uses the metric.
  virtual std::string identity() const = 0;
};

// Built-in metric used when no remote perceptual backend is configured:
// multiscale_ssim(), so identical bitmaps score exactly 1.
class SurrogatePerceptual final : public PerceptualMetric {
 public:
  double similarity(const GlyphBitmap &a, const GlyphBitmap &b) const override;
  std::string identity() const override { return "surrogate:multiscale-ssim-mean/v1"; }
};

// Throws Error(DimMismatch) for differently sized operands.
double perceptual_similarity(const GlyphBitmap &a, const GlyphBitmap &b, const PerceptualMetric &metric);

struct Replacement {
  size_t position = 0;  // character index in the perturbed text
  char32_t original = 0;
  char32_t replacement = 0;
};

struct PerceptualScore {
  double global = 0.0;
  // Sum over every character of the perturbed text; unreplaced characters
  // contribute max_similarity() each.
  double local_sum = 0.0;
  double epsilon = 0.0;
  double combined = 0.0;  // global + epsilon * local_sum
  std::string metric;
};

enum class LengthPolicy {
  // Reference and perturbed texts must have equal length (substitution only).
  Strict,
  // Narrower render is padded with background so texts of different lengths
  // can still be compared globally.
  PadToWider,
};

// Global term on whole-sentence renders plus epsilon-weighted local terms.
// Throws Error(LengthMismatch) under Strict when lengths differ, and
// Error(BadParams) when a replacement does not describe `perturbed`.
PerceptualScore sentence_perceptual(const glyph::GlyphCache &glyphs, const PerceptualMetric &metric,
                                    std::u32string_view reference, std::u32string_view perturbed,
                                    std::span<const Replacement> replaced, double epsilon,
                                    LengthPolicy policy = LengthPolicy::Strict);

}  // namespace vfa::metrics
