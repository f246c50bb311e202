#include "vfa/metrics/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "vfa/error.hpp"

namespace vfa::metrics {

namespace {

void require_same_shape(const GlyphBitmap &a, const GlyphBitmap &b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimMismatch, std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                                            std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

// Summed-area table with a zero border row/column: (w+1) x (h+1).
class Integral {
 public:
  Integral(int w, int h) : w_(w), table_(static_cast<size_t>(w + 1) * (h + 1), 0.0) {}

  template <typename F>
  void fill(int w, int h, F &&value) {
    for (int y = 0; y < h; ++y) {
      double row = 0.0;
      for (int x = 0; x < w; ++x) {
        row += value(x, y);
        at(x + 1, y + 1) = at(x + 1, y) + row;
      }
    }
  }

  double box(int x, int y, int size) const {
    return at(x + size, y + size) - at(x, y + size) - at(x + size, y) + at(x, y);
  }

 private:
  double &at(int x, int y) { return table_[static_cast<size_t>(y) * (w_ + 1) + x]; }
  double at(int x, int y) const { return table_[static_cast<size_t>(y) * (w_ + 1) + x]; }

  int w_;
  std::vector<double> table_;
};

GlyphBitmap downsample(const GlyphBitmap &img) {
  const int w = img.width() / 2;
  const int h = img.height() / 2;
  std::vector<float> out(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float s = img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) + img.at(2 * x, 2 * y + 1) +
                      img.at(2 * x + 1, 2 * y + 1);
      out[static_cast<size_t>(y) * w + x] = std::min(1.0f, std::max(0.0f, s / 4.0f));
    }
  }
  return GlyphBitmap(w, h, std::move(out));
}

}  // namespace

double mse(const GlyphBitmap &a, const GlyphBitmap &b) {
  require_same_shape(a, b);
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double sum = 0.0;
  for (size_t i = 0; i < pa.size(); ++i) {
    const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(pa.size());
}

double cosine(const GlyphBitmap &a, const GlyphBitmap &b) {
  require_same_shape(a, b);
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  const double n = static_cast<double>(pa.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (size_t i = 0; i < pa.size(); ++i) {
    mean_a += pa[i];
    mean_b += pb[i];
  }
  mean_a /= n;
  mean_b /= n;
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (size_t i = 0; i < pa.size(); ++i) {
    const double da = pa[i] - mean_a;
    const double db = pb[i] - mean_b;
    dot += da * db;
    norm_a += da * da;
    norm_b += db * db;
  }
  if (norm_a <= 0.0 || norm_b <= 0.0) {
    throw Error(ErrorCode::ZeroVector, "cosine undefined for a constant bitmap");
  }
  return std::clamp(dot / std::sqrt(norm_a * norm_b), -1.0, 1.0);
}

double ssim(const GlyphBitmap &a, const GlyphBitmap &b) {
  require_same_shape(a, b);
  const int w = a.width();
  const int h = a.height();
  if (w < kSsimWindow || h < kSsimWindow) {
    throw Error(ErrorCode::TooSmall, "SSIM needs at least " + std::to_string(kSsimWindow) + " pixels per side");
  }
  Integral sx(w, h), sy(w, h), sxx(w, h), syy(w, h), sxy(w, h);
  sx.fill(w, h, [&](int x, int y) { return static_cast<double>(a.at(x, y)); });
  sy.fill(w, h, [&](int x, int y) { return static_cast<double>(b.at(x, y)); });
  sxx.fill(w, h, [&](int x, int y) { const double v = a.at(x, y); return v * v; });
  syy.fill(w, h, [&](int x, int y) { const double v = b.at(x, y); return v * v; });
  sxy.fill(w, h, [&](int x, int y) { return static_cast<double>(a.at(x, y)) * static_cast<double>(b.at(x, y)); });

  constexpr double kDynamicRange = 1.0;
  constexpr double c1 = (0.01 * kDynamicRange) * (0.01 * kDynamicRange);
  constexpr double c2 = (0.03 * kDynamicRange) * (0.03 * kDynamicRange);
  constexpr double np = kSsimWindow * kSsimWindow;
  constexpr double cov_norm = np / (np - 1.0);

  double total = 0.0;
  const int nx = w - kSsimWindow + 1;
  const int ny = h - kSsimWindow + 1;
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const double ux = sx.box(x, y, kSsimWindow) / np;
      const double uy = sy.box(x, y, kSsimWindow) / np;
      const double vx = cov_norm * (sxx.box(x, y, kSsimWindow) / np - ux * ux);
      const double vy = cov_norm * (syy.box(x, y, kSsimWindow) / np - uy * uy);
      const double vxy = cov_norm * (sxy.box(x, y, kSsimWindow) / np - ux * uy);
      total += ((2.0 * ux * uy + c1) * (2.0 * vxy + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
    }
  }
  return total / static_cast<double>(nx * ny);
}

double multiscale_ssim(const GlyphBitmap &a, const GlyphBitmap &b) {
  require_same_shape(a, b);
  constexpr int kMaxLevels = 5;
  GlyphBitmap x = a;
  GlyphBitmap y = b;
  double sum = ssim(x, y);
  int levels = 1;
  while (levels < kMaxLevels && x.width() / 2 >= kSsimWindow && x.height() / 2 >= kSsimWindow) {
    x = downsample(x);
    y = downsample(y);
    sum += ssim(x, y);
    ++levels;
  }
  return sum / levels;
}

}  // namespace vfa::metrics
