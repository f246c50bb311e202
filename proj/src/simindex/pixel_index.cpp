#include "vfa/simindex/pixel_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <limits>
#include <random>

#include "vfa/error.hpp"
#include "vfa/utf8.hpp"

namespace vfa::simindex {

namespace {

constexpr char kMagic[8] = {'V', 'F', 'A', 'I', 'D', 'X', '1', '\0'};

class Writer {
 public:
  void bytes(const void *p, size_t n) {
    const auto *b = static_cast<const std::uint8_t *>(p);
    out.insert(out.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  Reader(const std::vector<std::uint8_t> &data, const std::string &path) : data_(data), path_(path) {}
  const std::uint8_t *take(size_t n) {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::Parse, path_ + ": truncated index file");
    const std::uint8_t *p = data_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::uint8_t u8() { return *take(1); }
  std::uint32_t u32() {
    const auto *p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto *p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  const std::vector<std::uint8_t> &data_;
  const std::string &path_;
  size_t pos_ = 0;
};

std::array<std::uint8_t, 32> digest_bytes(const std::string &hex) {
  std::array<std::uint8_t, 32> out{};
  if (hex.size() != 64) throw Error(ErrorCode::BadParams, "geometry digest must be 64 hex characters");
  for (size_t i = 0; i < 32; ++i) out[i] = static_cast<std::uint8_t>(std::stoi(hex.substr(2 * i, 2), nullptr, 16));
  return out;
}

std::string digest_hex(const std::uint8_t *p) {
  static const char *digits = "0123456789abcdef";
  std::string s;
  for (size_t i = 0; i < 32; ++i) {
    s.push_back(digits[p[i] >> 4]);
    s.push_back(digits[p[i] & 15]);
  }
  return s;
}

double mse_span(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

bool by_cosine(const PixelHit &a, const PixelHit &b) {
  if (a.cosine != b.cosine) return a.cosine > b.cosine;
  return a.ch < b.ch;
}

bool by_mse(const PixelHit &a, const PixelHit &b) {
  if (a.mse != b.mse) return a.mse < b.mse;
  return a.ch < b.ch;
}

// Unit-length float copy of a centered vector, for the coarse quantizer only.
std::vector<float> unit(const std::vector<double> &centered, double norm2) {
  std::vector<float> out(centered.size());
  const double inv = 1.0 / std::sqrt(norm2);
  for (size_t i = 0; i < centered.size(); ++i) out[i] = static_cast<float>(centered[i] * inv);
  return out;
}

float dot(const float *a, const float *b, size_t n) {
  float s = 0.0f;
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::string to_string(IndexMode mode) { return mode == IndexMode::Exact ? "exact" : "accelerated"; }

IndexMode parse_index_mode(const std::string &text) {
  if (text == "exact") return IndexMode::Exact;
  if (text == "accelerated") return IndexMode::Accelerated;
  throw Error(ErrorCode::BadConfig, "index mode must be 'exact' or 'accelerated', got '" + text + "'");
}

PixelIndex::Centered PixelIndex::center(std::span<const float> pixels) {
  Centered c;
  double mean = 0.0;
  for (float v : pixels) mean += v;
  mean /= static_cast<double>(pixels.size());
  c.values.resize(pixels.size());
  for (size_t i = 0; i < pixels.size(); ++i) {
    const double d = pixels[i] - mean;
    c.values[i] = d;
    c.norm2 += d * d;
  }
  return c;
}

double PixelIndex::cosine_to(const Centered &q, size_t i) const {
  const Centered &c = centered_[i];
  double d = 0.0;
  for (size_t j = 0; j < q.values.size(); ++j) d += q.values[j] * c.values[j];
  return std::clamp(d / std::sqrt(q.norm2 * c.norm2), -1.0, 1.0);
}

bool PixelIndex::contains(char32_t c) const { return std::binary_search(chars_.begin(), chars_.end(), c); }

PixelIndex PixelIndex::build(std::span<const char32_t> repertoire, const glyph::Renderer &renderer, IndexMode mode,
                             IvfParams ivf) {
  PixelIndex idx;
  idx.digest_ = renderer.geometry_digest();
  idx.summary_ = renderer.geometry_summary();
  idx.width_ = renderer.config().cell_width;
  idx.height_ = renderer.config().cell_height;
  idx.mode_ = mode;
  idx.ivf_ = ivf;

  std::vector<char32_t> sorted(repertoire.begin(), repertoire.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (char32_t c : sorted) {
    if (!renderer.has_glyph(c)) {
      idx.skipped_.push_back({c, "no glyph in configured fonts"});
      continue;
    }
    const auto bmp = renderer.render_char(c);
    const Centered centered = center(bmp.pixels());
    if (!(centered.norm2 > 0.0)) {
      idx.skipped_.push_back({c, "blank glyph"});
      continue;
    }
    idx.chars_.push_back(c);
    idx.pixels_.insert(idx.pixels_.end(), bmp.pixels().begin(), bmp.pixels().end());
  }
  if (idx.chars_.size() < 2) {
    throw Error(ErrorCode::BadParams, "index needs at least 2 renderable characters, got " +
                                          std::to_string(idx.chars_.size()));
  }
  idx.prepare();
  if (mode == IndexMode::Accelerated) idx.train_ivf();
  return idx;
}

void PixelIndex::prepare() {
  const size_t dim = dimension();
  centered_.clear();
  centered_.reserve(chars_.size());
  for (size_t i = 0; i < chars_.size(); ++i) {
    centered_.push_back(center(std::span<const float>(pixels_).subspan(i * dim, dim)));
  }
  lists_.clear();
  if (mode_ == IndexMode::Accelerated) {
    lists_.assign(ivf_.nlist, {});
    for (size_t i = 0; i < assign_.size(); ++i) lists_[assign_[i]].push_back(static_cast<std::uint32_t>(i));
  }
}

void PixelIndex::train_ivf() {
  const size_t n = chars_.size();
  const size_t dim = dimension();
  if (ivf_.nlist == 0) ivf_.nlist = static_cast<std::uint32_t>(std::lround(std::sqrt(static_cast<double>(n))));
  ivf_.nlist = std::clamp<std::uint32_t>(ivf_.nlist, 1, static_cast<std::uint32_t>(n));
  if (ivf_.nprobe == 0) ivf_.nprobe = (ivf_.nlist + 1) / 2;
  ivf_.nprobe = std::min(ivf_.nprobe, ivf_.nlist);
  const size_t nlist = ivf_.nlist;

  std::vector<float> units(n * dim);
  for (size_t i = 0; i < n; ++i) {
    const auto u = unit(centered_[i].values, centered_[i].norm2);
    std::copy(u.begin(), u.end(), units.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }

  // Seeded Fisher-Yates with explicit modulo so the layout is identical across
  // standard libraries.
  std::mt19937_64 rng(ivf_.seed);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  for (size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
  centroids_.assign(nlist * dim, 0.0f);
  for (size_t l = 0; l < nlist; ++l) {
    std::copy_n(units.begin() + static_cast<std::ptrdiff_t>(order[l] * dim), dim,
                centroids_.begin() + static_cast<std::ptrdiff_t>(l * dim));
  }

  assign_.assign(n, 0);
  std::vector<float> best(n);
  auto assign_all = [&] {
    for (size_t i = 0; i < n; ++i) {
      float top = -std::numeric_limits<float>::infinity();
      std::uint32_t arg = 0;
      for (size_t l = 0; l < nlist; ++l) {
        const float s = dot(&units[i * dim], &centroids_[l * dim], dim);
        if (s > top) {
          top = s;
          arg = static_cast<std::uint32_t>(l);
        }
      }
      assign_[i] = arg;
      best[i] = top;
    }
  };

  for (std::uint32_t it = 0; it < ivf_.iterations; ++it) {
    assign_all();
    std::vector<double> sums(nlist * dim, 0.0);
    std::vector<size_t> counts(nlist, 0);
    for (size_t i = 0; i < n; ++i) {
      ++counts[assign_[i]];
      for (size_t j = 0; j < dim; ++j) sums[assign_[i] * dim + j] += units[i * dim + j];
    }
    std::vector<bool> taken(n, false);
    for (size_t l = 0; l < nlist; ++l) {
      if (counts[l] == 0) {
        // Re-seed an empty list with the worst-represented point.
        size_t worst = 0;
        float worst_score = std::numeric_limits<float>::infinity();
        for (size_t i = 0; i < n; ++i) {
          if (!taken[i] && best[i] < worst_score) {
            worst_score = best[i];
            worst = i;
          }
        }
        taken[worst] = true;
        std::copy_n(units.begin() + static_cast<std::ptrdiff_t>(worst * dim), dim,
                    centroids_.begin() + static_cast<std::ptrdiff_t>(l * dim));
        continue;
      }
      double norm = 0.0;
      for (size_t j = 0; j < dim; ++j) norm += sums[l * dim + j] * sums[l * dim + j];
      norm = std::sqrt(norm);
      for (size_t j = 0; j < dim; ++j) {
        centroids_[l * dim + j] = norm > 0.0 ? static_cast<float>(sums[l * dim + j] / norm) : 0.0f;
      }
    }
  }
  assign_all();
  lists_.assign(nlist, {});
  for (size_t i = 0; i < n; ++i) lists_[assign_[i]].push_back(static_cast<std::uint32_t>(i));
}

std::vector<PixelHit> PixelIndex::cosine_top(const glyph::GlyphBitmap &query, size_t m, char32_t exclude) const {
  if (query.width() != width_ || query.height() != height_) {
    throw Error(ErrorCode::DimMismatch, "query bitmap does not match the index cell size");
  }
  const Centered q = center(query.pixels());
  if (!(q.norm2 > 0.0)) throw Error(ErrorCode::ZeroVector, "blank query glyph");

  std::vector<PixelHit> hits;
  auto score = [&](size_t i) {
    if (chars_[i] == exclude) return;
    hits.push_back({chars_[i], cosine_to(q, i), 0.0});
  };
  if (mode_ == IndexMode::Exact) {
    hits.reserve(chars_.size());
    for (size_t i = 0; i < chars_.size(); ++i) score(i);
  } else {
    const size_t dim = dimension();
    const auto u = unit(q.values, q.norm2);
    std::vector<std::pair<float, std::uint32_t>> ranked(ivf_.nlist);
    for (std::uint32_t l = 0; l < ivf_.nlist; ++l) ranked[l] = {-dot(u.data(), &centroids_[l * dim], dim), l};
    std::sort(ranked.begin(), ranked.end());
    size_t probed = 0;
    for (const auto &[neg, l] : ranked) {
      // Keep probing past nprobe only while too few candidates were found.
      if (probed >= ivf_.nprobe && hits.size() >= m) break;
      for (std::uint32_t i : lists_[l]) score(i);
      ++probed;
    }
  }
  const size_t keep = std::min(m, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), by_cosine);
  hits.resize(keep);
  return hits;
}

std::vector<PixelHit> PixelIndex::query(char32_t c, const glyph::Renderer &renderer, size_t m, size_t k) const {
  if (renderer.geometry_digest() != digest_) {
    throw Error(ErrorCode::GeometryMismatch, "index was built for geometry " + digest_.substr(0, 16) +
                                                 ", renderer has " + renderer.geometry_digest().substr(0, 16));
  }
  return query(c, renderer.render_char(c), m, k);
}

std::vector<PixelHit> PixelIndex::query(char32_t c, const glyph::GlyphBitmap &rendered, size_t m, size_t k) const {
  if (k == 0 || k > m || m + 1 > chars_.size()) {
    throw Error(ErrorCode::BadParams, "need 1 <= k <= m <= " + std::to_string(chars_.size() - 1) + ", got m=" +
                                          std::to_string(m) + " k=" + std::to_string(k));
  }
  auto hits = cosine_top(rendered, m, c);
  const size_t dim = dimension();
  for (auto &h : hits) {
    const size_t i = static_cast<size_t>(
        std::lower_bound(chars_.begin(), chars_.end(), h.ch) - chars_.begin());
    h.mse = mse_span(rendered.pixels(), std::span<const float>(pixels_).subspan(i * dim, dim));
  }
  std::sort(hits.begin(), hits.end(), by_mse);
  if (hits.size() > k) hits.resize(k);
  return hits;
}

std::vector<std::uint8_t> PixelIndex::serialize() const {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  const auto digest = digest_bytes(digest_);
  w.bytes(digest.data(), digest.size());
  w.u32(static_cast<std::uint32_t>(chars_.size()));
  for (char32_t c : chars_) w.u32(static_cast<std::uint32_t>(c));
  w.u32(static_cast<std::uint32_t>(dimension()));
  for (float v : pixels_) w.f32(v);
  w.u8(static_cast<std::uint8_t>(mode_));
  if (mode_ == IndexMode::Accelerated) {
    w.u32(ivf_.nlist);
    w.u32(ivf_.nprobe);
    w.u32(ivf_.iterations);
    w.u64(ivf_.seed);
    for (float v : centroids_) w.f32(v);
    for (std::uint32_t a : assign_) w.u32(a);
  }
  nlohmann::json meta;
  meta["cell_width"] = width_;
  meta["cell_height"] = height_;
  meta["geometry"] = summary_;
  meta["mode"] = to_string(mode_);
  meta["similarity"] = "cosine on mean-centered vectors, top-m re-ranked by ascending MSE, ties by codepoint";
  meta["skipped"] = nlohmann::json::array();
  for (const auto &s : skipped_) {
    meta["skipped"].push_back({{"codepoint", utf8::codepoint_label(s.ch)}, {"reason", s.reason}});
  }
  const std::string text = meta.dump();
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.bytes(text.data(), text.size());
  return std::move(w.out);
}

void PixelIndex::save(const std::string &path) const {
  const auto bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write index " + path);
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing index " + path);
}

PixelIndex PixelIndex::load(const std::string &path, const std::optional<std::string> &expected_digest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open index " + path);
  const std::vector<std::uint8_t> data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  Reader r(data, path);
  if (std::memcmp(r.take(sizeof kMagic), kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorCode::Parse, path + ": not a VFAIDX1 index file");
  }
  PixelIndex idx;
  idx.digest_ = digest_hex(r.take(32));
  if (expected_digest && *expected_digest != idx.digest_) {
    throw Error(ErrorCode::GeometryMismatch, path + " was built for geometry " + idx.digest_.substr(0, 16) +
                                                 ", current configuration has " + expected_digest->substr(0, 16) +
                                                 "; rebuild it with build-index");
  }
  const std::uint32_t n = r.u32();
  idx.chars_.resize(n);
  for (auto &c : idx.chars_) c = static_cast<char32_t>(r.u32());
  if (!std::is_sorted(idx.chars_.begin(), idx.chars_.end())) {
    throw Error(ErrorCode::Parse, path + ": character table is not sorted");
  }
  const std::uint32_t dim = r.u32();
  idx.pixels_.resize(static_cast<size_t>(n) * dim);
  for (auto &v : idx.pixels_) v = r.f32();
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw Error(ErrorCode::Parse, path + ": unknown index mode");
  idx.mode_ = static_cast<IndexMode>(mode);
  if (idx.mode_ == IndexMode::Accelerated) {
    idx.ivf_.nlist = r.u32();
    idx.ivf_.nprobe = r.u32();
    idx.ivf_.iterations = r.u32();
    idx.ivf_.seed = r.u64();
    if (idx.ivf_.nlist == 0 || idx.ivf_.nlist > n) throw Error(ErrorCode::Parse, path + ": bad list count");
    idx.centroids_.resize(static_cast<size_t>(idx.ivf_.nlist) * dim);
    for (auto &v : idx.centroids_) v = r.f32();
    idx.assign_.resize(n);
    for (auto &a : idx.assign_) {
      a = r.u32();
      if (a >= idx.ivf_.nlist) throw Error(ErrorCode::Parse, path + ": bad list assignment");
    }
  }
  const std::uint32_t meta_len = r.u32();
  const auto *meta_bytes = r.take(meta_len);
  if (!r.done()) throw Error(ErrorCode::Parse, path + ": trailing bytes after metadata");
  try {
    const auto meta = nlohmann::json::parse(meta_bytes, meta_bytes + meta_len);
    idx.width_ = meta.at("cell_width").get<int>();
    idx.height_ = meta.at("cell_height").get<int>();
    idx.summary_ = meta.at("geometry").get<std::string>();
    for (const auto &s : meta.at("skipped")) {
      const std::string label = s.at("codepoint").get<std::string>();
      idx.skipped_.push_back({static_cast<char32_t>(std::stoul(label.substr(2), nullptr, 16)),
                              s.at("reason").get<std::string>()});
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::Parse, path + ": bad metadata: " + e.what());
  }
  if (static_cast<size_t>(idx.width_) * idx.height_ != dim) {
    throw Error(ErrorCode::Parse, path + ": dimension does not match cell size");
  }
  idx.prepare();
  return idx;
}

}  // namespace vfa::simindex
