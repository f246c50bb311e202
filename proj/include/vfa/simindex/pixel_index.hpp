#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfa/glyph/renderer.hpp"

namespace vfa::simindex {

enum class IndexMode : std::uint8_t { Exact = 0, Accelerated = 1 };

std::string to_string(IndexMode mode);
IndexMode parse_index_mode(const std::string &text);

// Coarse quantizer for accelerated mode: spherical k-means over the centered,
// normalized vectors; queries score every member of the `nprobe` nearest lists
// exactly. nprobe == nlist reproduces exact search.
struct IvfParams {
  std::uint32_t nlist = 0;   // 0: round(sqrt(n))
  std::uint32_t nprobe = 0;  // 0: ceil(nlist / 2)
  std::uint32_t iterations = 12;
  std::uint64_t seed = 0x5646414944ULL;
};

struct SkippedChar {
  char32_t ch = 0;
  std::string reason;
};

struct PixelHit {
  char32_t ch = 0;
  double cosine = 0.0;
  double mse = 0.0;
};

// Flattened renders of a character repertoire. Immutable after build/load, so
// concurrent queries need no locking.
class PixelIndex {
 public:
  // Renders every character; unrenderable or blank ones go to skipped() and the
  // build continues. Throws Error(BadParams) if fewer than 2 characters remain.
  static PixelIndex build(std::span<const char32_t> repertoire, const glyph::Renderer &renderer,
                          IndexMode mode = IndexMode::Exact, IvfParams ivf = {});

  // Throws Error(Io), Error(Parse) for a bad magic/truncated file, and
  // Error(GeometryMismatch) when `expected_digest` differs from the stored one.
  static PixelIndex load(const std::string &path, const std::optional<std::string> &expected_digest = {});
  void save(const std::string &path) const;
  std::vector<std::uint8_t> serialize() const;

  const std::vector<char32_t> &repertoire() const noexcept { return chars_; }
  const std::vector<SkippedChar> &skipped() const noexcept { return skipped_; }
  const std::string &geometry_digest() const noexcept { return digest_; }
  const std::string &geometry_summary() const noexcept { return summary_; }
  IndexMode mode() const noexcept { return mode_; }
  const IvfParams &ivf() const noexcept { return ivf_; }
  int cell_width() const noexcept { return width_; }
  int cell_height() const noexcept { return height_; }
  size_t dimension() const noexcept { return static_cast<size_t>(width_) * height_; }
  bool contains(char32_t c) const;

  // Top-m repertoire entries by centered cosine to `query` (descending, ties by
  // ascending codepoint), excluding `exclude`. Exact mode scans everything;
  // accelerated mode scans the probed lists. Throws Error(ZeroVector) for a
  // blank query and Error(DimMismatch) for a wrong-sized one.
  std::vector<PixelHit> cosine_top(const glyph::GlyphBitmap &query, size_t m, char32_t exclude) const;

  // Cosine top-m, then re-ranked by ascending MSE (ties by
  // codepoint) and truncated to k. Throws Error(GeometryMismatch) when the
  // renderer digest differs and Error(BadParams) unless k <= m <= size-1.
  std::vector<PixelHit> query(char32_t c, const glyph::Renderer &renderer, size_t m, size_t k) const;
  std::vector<PixelHit> query(char32_t c, const glyph::GlyphBitmap &rendered, size_t m, size_t k) const;

 private:
  struct Centered {
    std::vector<double> values;
    double norm2 = 0.0;
  };
  static Centered center(std::span<const float> pixels);
  void prepare();
  void train_ivf();
  double cosine_to(const Centered &q, size_t i) const;

  std::string digest_;
  std::string summary_;
  int width_ = 0;
  int height_ = 0;
  IndexMode mode_ = IndexMode::Exact;
  IvfParams ivf_;
  std::vector<char32_t> chars_;
  std::vector<float> pixels_;  // chars_.size() x dimension()
  std::vector<SkippedChar> skipped_;
  // Accelerated mode.
  std::vector<float> centroids_;      // nlist x dimension(), unit length
  std::vector<std::uint32_t> assign_;  // list id per character

  // Derived on build/load.
  std::vector<Centered> centered_;
  std::vector<std::vector<std::uint32_t>> lists_;
};

}  // namespace vfa::simindex
