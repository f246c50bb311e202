#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>

#include "test_support.hpp"
#include "vfa/error.hpp"
#include "vfa/eval/tokenize.hpp"
#include "vfa/glyph/cache.hpp"
#include "vfa/metrics/bleu.hpp"
#include "vfa/metrics/image.hpp"
#include "vfa/metrics/perceptual.hpp"
#include "vfa/utf8.hpp"

using namespace vfa;
using glyph::GlyphBitmap;
using json = nlohmann::json;

namespace {

json load_fixture(const std::string &name) {
  std::ifstream in(test::fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return json::parse(in);
}

GlyphBitmap from_levels(int w, int h, const std::vector<int> &levels) {
  std::vector<float> px(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) px[i] = static_cast<float>(levels[i]) / 255.0f;
  return GlyphBitmap(w, h, std::move(px));
}

GlyphBitmap constant(int w, int h, float v) { return GlyphBitmap(w, h, std::vector<float>(size_t(w) * h, v)); }

GlyphBitmap inverted(const GlyphBitmap &a) {
  std::vector<float> px(a.pixels().begin(), a.pixels().end());
  for (auto &v : px) v = 1.0f - v;
  return GlyphBitmap(a.width(), a.height(), std::move(px));
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

TEST(Mse, DefinitionalValues) {
  EXPECT_EQ(metrics::mse(constant(24, 24, 0.0f), constant(24, 24, 1.0f)), 1.0);
  const auto a = test::shared_renderer().render_char(U'海');
  EXPECT_EQ(metrics::mse(a, a), 0.0);
  EXPECT_EQ(code_of([&] { metrics::mse(a, constant(24, 12, 1.0f)); }), ErrorCode::DimMismatch);
}

TEST(Cosine, DefinitionalValues) {
  const auto a = test::shared_renderer().render_char(U'未');
  EXPECT_NEAR(metrics::cosine(a, a), 1.0, 1e-12);
  EXPECT_NEAR(metrics::cosine(a, inverted(a)), -1.0, 1e-12);
  EXPECT_EQ(code_of([&] { metrics::cosine(a, test::shared_renderer().render_char(U' ')); }),
            ErrorCode::ZeroVector);
  EXPECT_EQ(code_of([&] { metrics::cosine(a, constant(12, 24, 1.0f)); }), ErrorCode::DimMismatch);
}

TEST(Ssim, MatchesReferenceImplementation) {
  const json fx = load_fixture("ssim_pairs.json");
  ASSERT_EQ(fx["pairs"].size(), 20u);
  for (const auto &p : fx["pairs"]) {
    const int w = p["width"], h = p["height"];
    const auto a = from_levels(w, h, p["a"].get<std::vector<int>>());
    const auto b = from_levels(w, h, p["b"].get<std::vector<int>>());
    EXPECT_NEAR(metrics::ssim(a, b), p["ssim"].get<double>(), 1e-6) << w << "x" << h;
  }
}

TEST(Ssim, ErrorsAndIdentity) {
  const auto a = test::shared_renderer().render_sentence(std::string_view("机器翻译"));
  EXPECT_DOUBLE_EQ(metrics::ssim(a, a), 1.0);
  EXPECT_DOUBLE_EQ(metrics::multiscale_ssim(a, a), 1.0);
  EXPECT_EQ(code_of([] { metrics::ssim(constant(6, 24, 1.0f), constant(6, 24, 1.0f)); }), ErrorCode::TooSmall);
  EXPECT_EQ(code_of([&] { metrics::ssim(a, constant(24, 24, 1.0f)); }), ErrorCode::DimMismatch);
}

TEST(ImageMetricProperties, RandomBitmaps) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<float> shift(-0.3f, 0.3f);
  for (int i = 0; i < 1000; ++i) {
    const auto a = test::random_bitmap(rng, 24, 24);
    const auto b = test::random_bitmap(rng, 24, 24);
    const double m = metrics::mse(a, b);
    ASSERT_GE(m, 0.0);
    ASSERT_EQ(m, metrics::mse(b, a));
    ASSERT_EQ(metrics::mse(a, a), 0.0);

    const double c = metrics::cosine(a, b);
    ASSERT_GE(c, -1.0);
    ASSERT_LE(c, 1.0);
    ASSERT_NEAR(c, metrics::cosine(b, a), 1e-12);
    ASSERT_NEAR(metrics::cosine(a, a), 1.0, 1e-12);

    const double s = metrics::ssim(a, b);
    ASSERT_GE(s, -1.0);
    ASSERT_LE(s, 1.0);
    ASSERT_NEAR(s, metrics::ssim(b, a), 1e-12);
    ASSERT_NEAR(metrics::ssim(a, a), 1.0, 1e-12);

    // Uniform shift of one operand (kept inside [0,1]) leaves the centered cosine unchanged.
    if (i % 10 == 0) {
      std::vector<float> px(a.pixels().begin(), a.pixels().end());
      for (auto &v : px) v = v * 0.5f + 0.25f;
      const float d = shift(rng) * 0.8f;
      std::vector<float> shifted(px);
      for (auto &v : shifted) v += d;
      const GlyphBitmap scaled(24, 24, px), moved(24, 24, shifted);
      ASSERT_NEAR(metrics::cosine(scaled, b), metrics::cosine(moved, b), 1e-5);
    }
  }
}

TEST(Bleu, MatchesReferenceImplementation) {
  const json fx = load_fixture("bleu_pairs.json");
  ASSERT_EQ(fx["cases"].size(), 50u);
  for (const auto &c : fx["cases"]) {
    const auto hyp = c["hypothesis"].get<metrics::Tokens>();
    const auto refs = c["references"].get<std::vector<metrics::Tokens>>();
    EXPECT_NEAR(metrics::sentence_bleu(hyp, refs).value, c["bleu"].get<double>(), 1e-9) << c["note"];
  }
}

TEST(Bleu, FixedPairAndEdgeCases) {
  const metrics::Tokens ref = {"the", "cat", "sat", "on", "the", "mat"};
  const auto short_hyp = metrics::sentence_bleu({"the", "cat", "sat"}, {ref});
  EXPECT_NEAR(short_hyp.value, 0.20687381245863395, 1e-9);
  EXPECT_EQ(metrics::sentence_bleu(ref, {ref}).value, 1.0);
  EXPECT_EQ(metrics::sentence_bleu({}, {ref}).value, 0.0);
  EXPECT_EQ(short_hyp.smoothing, "add-epsilon-0.1");
  EXPECT_EQ(code_of([&] { metrics::sentence_bleu(ref, {}); }), ErrorCode::EmptyReference);
}

TEST(Bleu, ShuffledHypothesisNeverScoresHigher) {
  const std::vector<std::string> sentences = {
      "the weather is very good today and we will go to the park .",
      "machine translation systems are vulnerable to small changes in the input .",
      "he bought three apples and two oranges at the market yesterday .",
      "our company released a new product last week .",
      "the river flows quietly through the old town .",
  };
  std::mt19937_64 rng(11);
  for (const auto &s : sentences) {
    const auto tokens = eval::tokenize_en(s);
    for (int k = 0; k < 20; ++k) {
      auto shuffled = tokens;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const double v = metrics::sentence_bleu(shuffled, {tokens}).value;
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, metrics::sentence_bleu(tokens, {tokens}).value);
    }
  }
}

TEST(Bleu, CorpusPoolsCountsAndChecksLengths) {
  const metrics::Tokens ref = {"the", "cat", "sat", "on", "the", "mat"};
  EXPECT_DOUBLE_EQ(metrics::corpus_bleu({ref, ref}, {{ref}, {ref}}), 1.0);
  EXPECT_EQ(code_of([&] { metrics::corpus_bleu({ref}, {}); }), ErrorCode::LengthMismatch);
}

TEST(TokenizeEn, StatedExamples) {
  EXPECT_EQ(eval::tokenize_en("Hello, world."), (std::vector<std::string>{"Hello", ",", "world", "."}));
  EXPECT_TRUE(eval::tokenize_en("").empty());
  EXPECT_EQ(eval::tokenize_en("I can't go."), (std::vector<std::string>{"I", "ca", "n't", "go", "."}));
}

TEST(TokenizeEn, GoldenFile) {
  const json fx = load_fixture("tokenizer_golden.json");
  ASSERT_EQ(fx["cases"].size(), 50u);
  for (const auto &c : fx["cases"]) {
    const std::string text = c["text"];
    EXPECT_EQ(eval::tokenize_en(text), c["tokens"].get<std::vector<std::string>>()) << text;
  }
}

class SentencePerceptual : public ::testing::Test {
 protected:
  glyph::GlyphCache cache{test::shared_renderer()};
  metrics::SurrogatePerceptual metric;
  std::u32string x = U"我们未来再见面吧";
};

TEST_F(SentencePerceptual, IdenticalTextIsMaximal) {
  const auto s = metrics::sentence_perceptual(cache, metric, x, x, {}, 0.01);
  EXPECT_DOUBLE_EQ(s.global, 1.0);
  EXPECT_DOUBLE_EQ(s.local_sum, static_cast<double>(x.size()));
  EXPECT_DOUBLE_EQ(s.combined, s.global + 0.01 * s.local_sum);
  EXPECT_EQ(s.metric, metric.identity());
}

TEST_F(SentencePerceptual, ZeroEpsilonLeavesGlobalTermOnly) {
  auto xd = x;
  xd[2] = U'末';
  const std::vector<metrics::Replacement> rep = {{2, U'未', U'末'}};
  const auto s = metrics::sentence_perceptual(cache, metric, x, xd, rep, 0.0);
  EXPECT_EQ(s.combined, s.global);
  EXPECT_LT(s.global, 1.0);
}

TEST_F(SentencePerceptual, ExactlyLinearInEpsilon) {
  auto xd = x;
  xd[2] = U'末';
  xd[5] = U'现';
  const std::vector<metrics::Replacement> rep = {{2, U'未', U'末'}, {5, U'见', U'现'}};
  const auto a = metrics::sentence_perceptual(cache, metric, x, xd, rep, 0.05);
  const auto b = metrics::sentence_perceptual(cache, metric, x, xd, rep, 0.2);
  EXPECT_NEAR(b.combined - a.combined, (0.2 - 0.05) * a.local_sum, 1e-12);
  EXPECT_EQ(a.local_sum, b.local_sum);
  EXPECT_EQ(a.combined, a.global + a.epsilon * a.local_sum);
}

TEST_F(SentencePerceptual, UnperturbedDominatesAnyPerturbation) {
  const auto base = metrics::sentence_perceptual(cache, metric, x, x, {}, 0.01);
  for (char32_t c : std::u32string(U"末木本朱术海天夫一")) {
    auto xd = x;
    xd[2] = c;
    const std::vector<metrics::Replacement> rep = {{2, U'未', c}};
    EXPECT_GE(base.combined, metrics::sentence_perceptual(cache, metric, x, xd, rep, 0.01).combined);
  }
}

TEST_F(SentencePerceptual, CombinedFallsAsGlyphMseGrows) {
  // Sweep candidates for one position; the score must trend down with glyph MSE.
  const std::u32string pool = U"末木本朱术夫天未米来东求禾耒味妹寐昧沫抹海河湖江山川日月人大小中国家学生";
  std::vector<std::pair<double, double>> points;
  for (char32_t c : pool) {
    if (c == U'未') continue;
    auto xd = x;
    xd[2] = c;
    const std::vector<metrics::Replacement> rep = {{2, U'未', c}};
    const double m = metrics::mse(*cache.cell(c), *cache.cell(U'未'));
    points.emplace_back(m, metrics::sentence_perceptual(cache, metric, x, xd, rep, 0.01).combined);
  }
  int concordant = 0, discordant = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      const double s = (points[i].first - points[j].first) * (points[i].second - points[j].second);
      if (s > 0) ++concordant;
      if (s < 0) ++discordant;
    }
  }
  const double tau = double(concordant - discordant) / double(concordant + discordant);
  EXPECT_LT(tau, -0.5) << "Kendall tau between glyph MSE and combined score";
}

TEST_F(SentencePerceptual, RejectsInvalidInput) {
  EXPECT_EQ(code_of([&] { metrics::sentence_perceptual(cache, metric, x, U"我们", {}, 0.01); }),
            ErrorCode::LengthMismatch);
  const std::vector<metrics::Replacement> wrong = {{2, U'未', U'末'}};
  EXPECT_EQ(code_of([&] { metrics::sentence_perceptual(cache, metric, x, x, wrong, 0.01); }), ErrorCode::BadParams);
  EXPECT_NO_THROW(
      metrics::sentence_perceptual(cache, metric, x, U"我们", {}, 0.01, metrics::LengthPolicy::PadToWider));
}
