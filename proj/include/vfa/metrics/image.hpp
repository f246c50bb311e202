#pragma once

#include "vfa/glyph/bitmap.hpp"

namespace vfa::metrics {

using glyph::GlyphBitmap;

// All functions throw Error(DimMismatch) when the operands differ in size.

double mse(const GlyphBitmap &a, const GlyphBitmap &b);

// Cosine of the mean-centered, flattened intensity vectors.
// Throws Error(ZeroVector) when either centered vector is zero (a blank glyph).
double cosine(const GlyphBitmap &a, const GlyphBitmap &b);

inline constexpr int kSsimWindow = 7;

// Mean SSIM over every fully contained 7x7 window, uniform weights, sample
// covariance, C1=(0.01L)^2, C2=(0.03L)^2 with L=1.
// Throws Error(TooSmall) when a side is shorter than the window.
double ssim(const GlyphBitmap &a, const GlyphBitmap &b);

// Equal-weight mean of ssim() over a 2x average-pooled pyramid, descending
// while both sides stay >= the window (at most 5 levels). Similarity-oriented:
// identical inputs give 1.
double multiscale_ssim(const GlyphBitmap &a, const GlyphBitmap &b);

}  // namespace vfa::metrics
