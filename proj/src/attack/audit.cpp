#include "vfa/attack/audit.hpp"

#include <cmath>
#include <set>

#include "vfa/error.hpp"
#include "vfa/eval/tokenize.hpp"
#include "vfa/metrics/bleu.hpp"
#include "vfa/models/mock.hpp"
#include "vfa/utf8.hpp"

namespace vfa::attack {

using nlohmann::json;

namespace {

constexpr double kTolerance = 1e-9;

bool close(double a, double b) { return std::fabs(a - b) <= kTolerance * std::max(1.0, std::fabs(b)); }

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

Auditor::Auditor() = default;
Auditor::~Auditor() = default;

const glyph::GlyphCache *Auditor::glyphs_for(const json &render, std::vector<std::string> &problems) {
  const auto key = render.dump();
  auto it = renderers_.find(key);
  if (it == renderers_.end()) {
    RenderSetup setup;
    try {
      setup.renderer = std::make_unique<glyph::Renderer>(render_config_from_json(render));
      if (render.contains("geometry_digest") &&
          render.at("geometry_digest").get<std::string>() != setup.renderer->geometry_digest()) {
        setup.renderer.reset();
        problems.push_back("recorded geometry digest does not match the fonts on disk");
      } else {
        setup.cache = std::make_unique<glyph::GlyphCache>(*setup.renderer);
      }
    } catch (const Error &e) {
      setup.renderer.reset();
      problems.push_back(std::string("cannot rebuild renderer: ") + e.what());
    }
    it = renderers_.emplace(key, std::move(setup)).first;
  } else if (!it->second.cache) {
    problems.push_back("renderer for the recorded settings is unavailable");
  }
  return it->second.cache.get();
}

AuditFinding Auditor::audit(const AttackResult &r) {
  AuditFinding f;
  f.id = r.id;
  auto &problems = f.problems;
  auto fail = [&](const std::string &what) { problems.push_back(what); };

  json attack_cfg;
  try {
    attack_cfg = r.config.at("attack");
    const double alpha = attack_cfg.at("alpha").get<double>();
    const double beta = attack_cfg.at("beta").get<double>();
    const double theta = attack_cfg.at("theta").get<double>();
    const double epsilon = attack_cfg.at("epsilon").get<double>();
    const double rate = attack_cfg.at("rate").get<double>();
    const auto &ids = r.config.at("identities");

    // Quality clause: BLEU of the recorded victim outputs against y.
    if (r.quality.threshold != alpha) fail("quality threshold differs from configured alpha");
    const std::vector<metrics::Tokens> refs{eval::tokenize_en(r.y)};
    const double clean = metrics::sentence_bleu(eval::tokenize_en(r.victim_clean), refs).value;
    const double adv = metrics::sentence_bleu(eval::tokenize_en(r.victim_adv), refs).value;
    f.quality_recomputed = true;
    if (!close(clean, r.bleu_clean)) fail("clean BLEU " + fmt(r.bleu_clean) + " recomputes to " + fmt(clean));
    if (!close(adv, r.bleu_adv)) fail("adversarial BLEU " + fmt(r.bleu_adv) + " recomputes to " + fmt(adv));
    std::optional<double> decrease;
    if (clean > 0.0) decrease = (clean - adv) / clean;
    if (decrease.has_value() != r.relative_decrease.has_value()) {
      fail("relative decrease presence disagrees with the clean BLEU");
    } else if (decrease && !close(*decrease, *r.relative_decrease)) {
      fail("relative decrease " + fmt(*r.relative_decrease) + " recomputes to " + fmt(*decrease));
    }
    if (r.zero_baseline != !decrease.has_value()) fail("zero_baseline flag is wrong");
    const bool quality_ok = decrease && *decrease > alpha;
    if (r.quality.satisfied != quality_ok) fail("quality clause flag is wrong");
    if (r.success != (quality_ok && !r.incomplete)) fail("success flag is wrong");

    // Semantic clause.
    if (r.semantic.threshold != beta) fail("semantic threshold differs from configured beta");
    if (!r.semantic.value || *r.semantic.value != r.sim_xhat) fail("semantic value differs from sim_xhat");
    if (ids.at("similarity").get<std::string>() == models::MockSentenceSimilarity().identity()) {
      const models::MockSentenceSimilarity sim;
      f.semantic_recomputed = true;
      if (!r.incomplete) {
        if (!close(sim.similarity(r.xhat, r.x), r.sim_xhat)) fail("sim_xhat does not recompute");
        if (!close(sim.similarity(r.x_delta, r.x), r.sim_x_delta)) fail("sim_x_delta does not recompute");
      }
    }
    const bool semantic_ok = r.xhat == r.x || r.sim_xhat > beta;
    if (r.semantic.satisfied != semantic_ok) fail("semantic clause flag is wrong");

    // Plan: substitution only, one per word, rate bound.
    if (r.plan.base != r.xhat) fail("plan base differs from xhat");
    const auto base = utf8::decode(r.xhat);
    auto text = base;
    std::set<size_t> words, positions;
    for (const auto &p : r.plan.items) {
      if (!words.insert(p.word_index).second) fail("two replacements in word " + std::to_string(p.word_index));
      if (!positions.insert(p.position).second) fail("position replaced twice");
      if (p.position >= text.size() || base[p.position] != p.original) {
        fail("replacement at " + std::to_string(p.position) + " does not match xhat");
        continue;
      }
      if (p.original == p.replacement) fail("replacement leaves the character unchanged");
      text[p.position] = p.replacement;
    }
    for (const auto &w : r.plan.words) {
      for (const auto &p : r.plan.items) {
        if (p.word_index == w.index && (p.position < w.begin || p.position >= w.begin + w.length ||
                                        p.position - w.begin != p.char_in_word)) {
          fail("replacement outside its recorded word");
        }
      }
    }
    if (r.plan.total_chars != base.size()) fail("plan total_chars differs from xhat length");
    if (!r.plan.items.empty() &&
        !(static_cast<double>(r.plan.items.size()) / static_cast<double>(base.size()) < rate)) {
      fail("replacement rate " + std::to_string(r.plan.items.size()) + "/" + std::to_string(base.size()) +
           " is not below " + fmt(rate));
    }
    const auto delta = utf8::decode(r.x_delta);
    if (delta != text) fail("x_delta is not xhat with the plan applied");
    if (delta.size() == base.size()) {
      std::set<size_t> diff;
      for (size_t i = 0; i < delta.size(); ++i) {
        if (delta[i] != base[i]) diff.insert(i);
      }
      if (diff != positions) fail("changed positions differ from the plan");
    } else {
      fail("x_delta and xhat differ in length");
    }

    // Visual clause.
    if (r.visual.threshold != theta) fail("visual threshold differs from configured theta");
    if (!r.visual.value || *r.visual.value != r.perceptual.combined) fail("visual value differs from the score");
    if (r.perceptual.epsilon != epsilon) fail("recorded epsilon differs from configuration");
    const bool visual_ok = r.perceptual.combined > theta;
    if (r.visual.satisfied != visual_ok) fail("visual clause flag is wrong");
    if (ids.at("perceptual").get<std::string>() == metrics::SurrogatePerceptual().identity() && !r.incomplete) {
      if (const auto *glyphs = glyphs_for(r.config.at("render"), problems)) {
        const metrics::SurrogatePerceptual metric;
        std::vector<metrics::Replacement> reps;
        for (const auto &p : r.plan.items) reps.push_back({p.position, p.original, p.replacement});
        const auto s = metrics::sentence_perceptual(*glyphs, metric, utf8::decode(r.x), delta, reps, epsilon,
                                                    metrics::LengthPolicy::PadToWider);
        f.visual_recomputed = true;
        if (!close(s.global, r.perceptual.global)) fail("global perceptual score does not recompute");
        if (!close(s.local_sum, r.perceptual.local_sum)) fail("local perceptual sum does not recompute");
        if (!close(s.combined, r.perceptual.combined)) {
          fail("combined score " + fmt(r.perceptual.combined) + " recomputes to " + fmt(s.combined));
        }
      }
    }

    // An emitted adversarial text must satisfy both similarity clauses.
    if (r.x_delta != r.x) {
      if (!semantic_ok) fail("emitted x_delta violates the semantic clause");
      if (!visual_ok) fail("emitted x_delta violates the visual clause");
    }
  } catch (const json::exception &e) {
    fail(std::string("result lacks configuration: ") + e.what());
  } catch (const Error &e) {
    fail(std::string("cannot verify: ") + e.what());
  }
  return f;
}

AuditSummary Auditor::audit_all(const std::vector<AttackResult> &results) {
  AuditSummary s;
  for (const auto &r : results) {
    auto f = audit(r);
    ++s.results;
    if (f.problems.empty()) ++s.verified;
    s.findings.push_back(std::move(f));
  }
  return s;
}

json AuditSummary::to_json() const {
  json rows = json::array();
  for (const auto &f : findings) {
    rows.push_back({{"id", f.id},
                    {"verified", f.problems.empty()},
                    {"problems", f.problems},
                    {"recomputed",
                     {{"quality", f.quality_recomputed},
                      {"semantic", f.semantic_recomputed},
                      {"visual", f.visual_recomputed}}}});
  }
  return {{"results", results}, {"verified", verified}, {"findings", rows}};
}

}  // namespace vfa::attack
