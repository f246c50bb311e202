#include "vfa/metrics/perceptual.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "vfa/error.hpp"
#include "vfa/metrics/image.hpp"
#include "vfa/utf8.hpp"

namespace vfa::metrics {

double SurrogatePerceptual::similarity(const GlyphBitmap &a, const GlyphBitmap &b) const {
  return multiscale_ssim(a, b);
}

double perceptual_similarity(const GlyphBitmap &a, const GlyphBitmap &b, const PerceptualMetric &metric) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimMismatch, "perceptual similarity needs equally sized images");
  }
  return metric.similarity(a, b);
}

PerceptualScore sentence_perceptual(const glyph::GlyphCache &glyphs, const PerceptualMetric &metric,
                                    std::u32string_view reference, std::u32string_view perturbed,
                                    std::span<const Replacement> replaced, double epsilon, LengthPolicy policy) {
  if (policy == LengthPolicy::Strict && reference.size() != perturbed.size()) {
    throw Error(ErrorCode::LengthMismatch, "reference has " + std::to_string(reference.size()) +
                                               " characters, perturbed text has " + std::to_string(perturbed.size()));
  }
  std::set<size_t> seen;
  for (const auto &r : replaced) {
    if (r.position >= perturbed.size() || perturbed[r.position] != r.replacement) {
      throw Error(ErrorCode::BadParams, "replacement at position " + std::to_string(r.position) +
                                            " does not match the perturbed text");
    }
    if (!seen.insert(r.position).second) {
      throw Error(ErrorCode::BadParams, "position " + std::to_string(r.position) + " replaced twice");
    }
  }

  PerceptualScore score;
  score.epsilon = epsilon;
  score.metric = metric.identity();

  GlyphBitmap ref_image = glyphs.sentence(reference);
  GlyphBitmap pert_image = glyphs.sentence(perturbed);
  if (ref_image.width() != pert_image.width()) {
    const int width = std::max(ref_image.width(), pert_image.width());
    const float bg = glyphs.renderer().config().background;
    ref_image = ref_image.padded_to_width(width, bg);
    pert_image = pert_image.padded_to_width(width, bg);
  }
  score.global = metric.similarity(pert_image, ref_image);

  double local = 0.0;
  for (const auto &r : replaced) {
    local += metric.similarity(*glyphs.cell(r.replacement), *glyphs.cell(r.original));
  }
  local += static_cast<double>(perturbed.size() - replaced.size()) * metric.max_similarity();
  score.local_sum = local;
  score.combined = score.global + epsilon * score.local_sum;
  return score;
}

}  // namespace vfa::metrics
