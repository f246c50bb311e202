#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "vfa/error.hpp"
#include "vfa/metrics/image.hpp"
#include "vfa/paths.hpp"
#include "vfa/simindex/candidates.hpp"
#include "vfa/simindex/dictionary.hpp"
#include "vfa/simindex/pixel_index.hpp"
#include "vfa/simindex/repertoire.hpp"
#include "vfa/utf8.hpp"

using namespace vfa;
using namespace vfa::simindex;

namespace {

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "expected vfa::Error";
  return ErrorCode::BadConfig;
}

GlyphDictionary parse(const std::string &text) {
  std::istringstream in(text);
  return GlyphDictionary::parse(in);
}

const std::vector<char32_t> &gb2312() {
  static const auto chars = load_repertoire(data_path("repertoire/gb2312_hanzi.txt"));
  return chars;
}

std::vector<char32_t> sample(const std::vector<char32_t> &from, size_t n, std::uint64_t seed) {
  std::vector<char32_t> out = from;
  std::mt19937_64 rng(seed);
  std::shuffle(out.begin(), out.end(), rng);
  out.resize(std::min(n, out.size()));
  std::sort(out.begin(), out.end());
  return out;
}

std::string temp_file(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("vfa_simindex_" + name)).string();
}

}  // namespace

TEST(GlyphDictionary, ParsesRecordsAndComments) {
  const auto d = parse("# comment\n\n海\t氵,每\n");
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.radicals(U'海'), (std::vector<char32_t>{U'每', U'氵'}));
  EXPECT_TRUE(d.radicals(U'河').empty());
}

TEST(GlyphDictionary, EmptyInputGivesEmptyDictionary) {
  const auto d = parse("");
  EXPECT_EQ(d.size(), 0u);
  EXPECT_TRUE(d.radical_candidates(U'海').empty());
}

TEST(GlyphDictionary, DuplicateLinesUnion) {
  const auto d = parse("海\t氵\n海\t每\n");
  EXPECT_EQ(d.radicals(U'海').size(), 2u);
}

TEST(GlyphDictionary, MalformedLinesReportLineNumber) {
  try {
    parse("海\t氵\n河 水\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([] { parse("海\t\n"); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([] { parse("海河\t氵\n"); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([] { GlyphDictionary::load("/nonexistent/radicals.tsv"); }), ErrorCode::Io);
}

TEST(RadicalCandidates, DefinitionalExamples) {
  const auto d = parse("A\tr\nB\tr\nC\ts\nD\tq\n");
  EXPECT_EQ(d.radical_candidates(U'A'), (std::vector<char32_t>{U'B'}));
  EXPECT_TRUE(d.radical_candidates(U'D').empty());
  EXPECT_TRUE(d.radical_candidates(U'Z').empty());
  const auto set = radical_candidates(U'A', d);
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.candidates[0].source, Source::Rad);
  EXPECT_FALSE(set.candidates[0].cosine.has_value());
}

TEST(RadicalCandidates, BundledTableIsSymmetric) {
  const auto d = GlyphDictionary::load(data_path("radicals/gb2312_radicals.tsv"));
  EXPECT_GT(d.size(), 6000u);
  const auto rad = d.radical_candidates(U'未');
  EXPECT_TRUE(std::binary_search(rad.begin(), rad.end(), U'末'));
  std::mt19937_64 rng(3);
  for (char32_t a : sample(gb2312(), 200, 5)) {
    for (char32_t b : d.radical_candidates(a)) {
      const auto back = d.radical_candidates(b);
      ASSERT_TRUE(std::binary_search(back.begin(), back.end(), a));
    }
    const auto self = d.radical_candidates(a);
    ASSERT_FALSE(std::binary_search(self.begin(), self.end(), a));
  }
}

TEST(Repertoire, RangeAndFile) {
  const auto r = load_repertoire("U+4E00-U+4E09");
  EXPECT_EQ(r.size(), 10u);
  EXPECT_EQ(r.front(), U'一');
  EXPECT_EQ(gb2312().size(), 6763u);
  EXPECT_EQ(code_of([] { load_repertoire("/nonexistent/chars.txt"); }), ErrorCode::Io);
}

TEST(PixelIndex, TwoCharacterRepertoire) {
  const std::vector<char32_t> chars = {U'未', U'末'};
  const auto idx = PixelIndex::build(chars, test::shared_renderer());
  const auto hits = idx.query(U'未', test::shared_renderer(), 1, 1);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].ch, U'末');
}

TEST(PixelIndex, SkipsUnrenderableAndBlankCharacters) {
  const std::vector<char32_t> chars = {U'未', U'末', U' ', U'\U00020000'};
  const auto idx = PixelIndex::build(chars, test::shared_renderer());
  EXPECT_EQ(idx.repertoire().size(), 2u);
  ASSERT_EQ(idx.skipped().size(), 2u);
  EXPECT_EQ(code_of([&] {
              const std::vector<char32_t> one = {U'未', U' '};
              PixelIndex::build(one, test::shared_renderer());
            }),
            ErrorCode::BadParams);
}

TEST(PixelIndex, RebuildIsByteIdenticalAndRoundTrips) {
  const auto chars = sample(gb2312(), 300, 9);
  for (IndexMode mode : {IndexMode::Exact, IndexMode::Accelerated}) {
    const auto a = PixelIndex::build(chars, test::shared_renderer(), mode);
    const auto b = PixelIndex::build(chars, test::shared_renderer(), mode);
    EXPECT_EQ(a.serialize(), b.serialize());
    const std::string path = temp_file(to_string(mode) + ".idx");
    a.save(path);
    const auto loaded = PixelIndex::load(path, test::shared_renderer().geometry_digest());
    EXPECT_EQ(loaded.serialize(), a.serialize());
    EXPECT_EQ(loaded.mode(), mode);
    for (char32_t q : {U'未', U'海', U'国'}) {
      const auto x = a.query(q, test::shared_renderer(), 20, 5);
      const auto y = loaded.query(q, test::shared_renderer(), 20, 5);
      ASSERT_EQ(x.size(), y.size());
      for (size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].ch, y[i].ch);
    }
    std::filesystem::remove(path);
  }
}

TEST(PixelIndex, LoadValidatesMagicAndGeometry) {
  const std::vector<char32_t> chars = {U'未', U'末', U'海'};
  const auto idx = PixelIndex::build(chars, test::shared_renderer());
  const std::string path = temp_file("geom.idx");
  idx.save(path);
  const std::string other(64, '0');
  EXPECT_EQ(code_of([&] { PixelIndex::load(path, other); }), ErrorCode::GeometryMismatch);

  auto cfg = test::default_render_config();
  cfg.font_size = 16;
  glyph::Renderer smaller(cfg);
  EXPECT_EQ(code_of([&] { idx.query(U'未', smaller, 2, 1); }), ErrorCode::GeometryMismatch);

  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "NOTANIDX and some bytes";
  }
  EXPECT_EQ(code_of([&] { PixelIndex::load(path); }), ErrorCode::Parse);
  auto bytes = idx.serialize();
  bytes.resize(bytes.size() / 2);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  EXPECT_EQ(code_of([&] { PixelIndex::load(path); }), ErrorCode::Parse);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { PixelIndex::load(path); }), ErrorCode::Io);
}

TEST(PixelIndex, RejectsBadBreadths) {
  const std::vector<char32_t> chars = {U'未', U'末', U'海'};
  const auto idx = PixelIndex::build(chars, test::shared_renderer());
  const auto &r = test::shared_renderer();
  EXPECT_EQ(code_of([&] { idx.query(U'未', r, 3, 1); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([&] { idx.query(U'未', r, 1, 2); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([&] { idx.query(U'未', r, 2, 0); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([&] { idx.query(U' ', r, 2, 1); }), ErrorCode::ZeroVector);
}

TEST(PixelIndex, ExhaustiveQueryIsFullRepertoireInMseOrder) {
  const auto chars = sample(gb2312(), 120, 21);
  const auto idx = PixelIndex::build(chars, test::shared_renderer());
  const char32_t q = chars[7];
  const size_t n = idx.repertoire().size() - 1;
  const auto hits = idx.query(q, test::shared_renderer(), n, n);
  ASSERT_EQ(hits.size(), n);
  for (size_t i = 0; i < hits.size(); ++i) {
    EXPECT_NE(hits[i].ch, q);
    if (i) {
      EXPECT_TRUE(hits[i - 1].mse < hits[i].mse || (hits[i - 1].mse == hits[i].mse && hits[i - 1].ch < hits[i].ch));
    }
  }
}

TEST(PixelIndex, IdenticalRenderingVariantRanksFirst) {
  // Latin A and Cyrillic A share an outline in the bundled font.
  const auto &r = test::shared_renderer();
  ASSERT_EQ(metrics::mse(r.render_char(U'A'), r.render_char(U'А')), 0.0);
  const std::vector<char32_t> chars = {U'A', U'А', U'B', U'R', U'4', U'未'};
  const auto idx = PixelIndex::build(chars, r);
  const auto hits = idx.query(U'A', r, 5, 3);
  EXPECT_EQ(hits[0].ch, U'А');
  EXPECT_EQ(hits[0].mse, 0.0);
}

TEST(PixelIndex, SimilarPairFoundOverBundledRepertoire) {
  static const auto idx = PixelIndex::build(gb2312(), test::shared_renderer());
  const auto hits = idx.query(U'未', test::shared_renderer(), 50, 10);
  ASSERT_EQ(hits.size(), 10u);
  EXPECT_TRUE(std::any_of(hits.begin(), hits.end(), [](const PixelHit &h) { return h.ch == U'末'; }));
  // Cross-check with a brute-force MSE scan: 末 is among the globally closest glyphs.
  const auto &r = test::shared_renderer();
  const auto wei = r.render_char(U'未');
  const double target = metrics::mse(wei, r.render_char(U'末'));
  size_t closer = 0;
  for (char32_t c : idx.repertoire()) {
    if (c != U'未' && metrics::mse(wei, r.render_char(c)) < target) ++closer;
  }
  EXPECT_LT(closer, 10u);
}

TEST(PixelIndex, ExactModeMatchesBruteForceScan) {
  const auto &r = test::shared_renderer();
  const auto chars = sample(gb2312(), 400, 33);
  const auto idx = PixelIndex::build(chars, r);
  std::vector<glyph::GlyphBitmap> renders;
  for (char32_t c : chars) renders.push_back(r.render_char(c));
  for (size_t qi = 0; qi < chars.size(); qi += 37) {
    const char32_t q = chars[qi];
    std::vector<PixelHit> all;
    for (size_t i = 0; i < chars.size(); ++i) {
      if (i == qi) continue;
      all.push_back({chars[i], metrics::cosine(renders[qi], renders[i]), metrics::mse(renders[qi], renders[i])});
    }
    std::sort(all.begin(), all.end(), [](const PixelHit &a, const PixelHit &b) {
      return a.cosine != b.cosine ? a.cosine > b.cosine : a.ch < b.ch;
    });
    all.resize(30);
    std::sort(all.begin(), all.end(),
              [](const PixelHit &a, const PixelHit &b) { return a.mse != b.mse ? a.mse < b.mse : a.ch < b.ch; });
    all.resize(8);
    const auto hits = idx.query(q, r, 30, 8);
    ASSERT_EQ(hits.size(), all.size());
    for (size_t i = 0; i < hits.size(); ++i) {
      EXPECT_EQ(hits[i].ch, all[i].ch);
      EXPECT_EQ(hits[i].cosine, all[i].cosine);
      EXPECT_EQ(hits[i].mse, all[i].mse);
    }
  }
}

TEST(PixelIndex, AcceleratedModeExhaustiveProbeEqualsExact) {
  const auto &r = test::shared_renderer();
  const auto chars = sample(gb2312(), 500, 41);
  const auto exact = PixelIndex::build(chars, r);
  IvfParams ivf;
  ivf.nlist = 16;
  ivf.nprobe = 16;
  const auto accel = PixelIndex::build(chars, r, IndexMode::Accelerated, ivf);
  for (size_t qi = 0; qi < chars.size(); qi += 25) {
    const auto a = exact.cosine_top(r.render_char(chars[qi]), 50, chars[qi]);
    const auto b = accel.cosine_top(r.render_char(chars[qi]), 50, chars[qi]);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].ch, b[i].ch);
  }
}

TEST(PixelIndex, AcceleratedModeRecall) {
  const auto &r = test::shared_renderer();
  const auto chars = sample(gb2312(), 2000, 43);
  const auto exact = PixelIndex::build(chars, r);
  const auto accel = PixelIndex::build(chars, r, IndexMode::Accelerated);
  size_t found = 0, total = 0;
  for (size_t qi = 0; qi < chars.size(); qi += 20) {
    const auto a = exact.query(chars[qi], r, 50, 10);
    const auto b = accel.query(chars[qi], r, 50, 10);
    for (const auto &h : a) {
      ++total;
      found += std::any_of(b.begin(), b.end(), [&](const PixelHit &x) { return x.ch == h.ch; });
    }
  }
  EXPECT_GE(static_cast<double>(found) / static_cast<double>(total), 0.95);
}

TEST(MergeCandidates, UnionRules) {
  CandidateSet pix{U'未', {{U'末', Source::Pix, 0.9, 0.01}, {U'朱', Source::Pix, 0.8, 0.02}}};
  CandidateSet rad{U'未', {{U'末', Source::Rad, {}, {}}, {U'妹', Source::Rad, {}, {}}}};
  const auto merged = merge_candidates(rad, pix);
  ASSERT_EQ(merged.size(), 3u);
  EXPECT_EQ(merged.candidates[0].ch, U'末');
  EXPECT_EQ(merged.candidates[0].source, Source::Both);
  EXPECT_EQ(merged.candidates[0].mse, 0.01);
  EXPECT_EQ(merged.candidates[2].ch, U'妹');
  EXPECT_EQ(merged.candidates[2].source, Source::Rad);
  EXPECT_LE(merged.size(), rad.size() + pix.size());

  const CandidateSet none{U'未', {}};
  const auto only_pix = merge_candidates(none, pix);
  ASSERT_EQ(only_pix.size(), pix.size());
  for (size_t i = 0; i < pix.size(); ++i) EXPECT_EQ(only_pix.candidates[i].source, Source::Pix);
  const auto only_rad = merge_candidates(rad, none);
  ASSERT_EQ(only_rad.size(), rad.size());
  for (const auto &c : only_rad.candidates) EXPECT_FALSE(c.mse.has_value());

  const CandidateSet other{U'海', {}};
  EXPECT_EQ(code_of([&] { merge_candidates(other, pix); }), ErrorCode::OriginMismatch);
}
