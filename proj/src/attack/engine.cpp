#include "vfa/attack/engine.hpp"

#include <algorithm>

#include "vfa/error.hpp"
#include "vfa/eval/tokenize.hpp"
#include "vfa/metrics/bleu.hpp"
#include "vfa/utf8.hpp"

namespace vfa::attack {

namespace {

struct Trial {
  size_t char_in_word = 0;
  const RankedCandidate *candidate = nullptr;
};

bool converts_to_incomplete(ErrorCode code) {
  return is_backend_error(code) || code == ErrorCode::NoGlyph || code == ErrorCode::TooLong ||
         code == ErrorCode::Empty || code == ErrorCode::Parse;
}

}  // namespace

std::string apply_plan(const std::string &base, const std::vector<PlannedReplacement> &items) {
  auto text = utf8::decode(base);
  for (const auto &p : items) {
    if (p.position >= text.size() || text[p.position] != p.original) {
      throw Error(ErrorCode::BadParams, "replacement at " + std::to_string(p.position) + " does not match '" + base +
                                            "'");
    }
    text[p.position] = p.replacement;
  }
  return utf8::encode(text);
}

AttackEngine::AttackEngine(AttackConfig config, Backends backends, const glyph::GlyphCache &glyphs,
                           const metrics::PerceptualMetric &metric, const CandidateProvider &candidates,
                           nlohmann::json resources, std::string manifest_id)
    : config_(std::move(config)),
      backends_(backends),
      glyphs_(glyphs),
      metric_(metric),
      candidates_(candidates),
      resources_(std::move(resources)),
      manifest_id_(std::move(manifest_id)) {
  config_.validate();
  if (!backends_.victim || !backends_.aux || !backends_.mlm || !backends_.similarity || !backends_.segmenter) {
    throw Error(ErrorCode::BadConfig, "attack engine needs victim, auxiliary, masked LM, similarity and segmenter");
  }
}

nlohmann::json AttackEngine::snapshot() const {
  auto render = render_config_json(glyphs_.renderer().config());
  render["geometry_digest"] = glyphs_.renderer().geometry_digest();
  return {{"attack", config_.to_json()},
          {"render", render},
          {"identities",
           {{"victim", backends_.victim->identity()},
            {"aux", backends_.aux->identity()},
            {"mlm", backends_.mlm->identity()},
            {"similarity", backends_.similarity->identity()},
            {"segmenter", backends_.segmenter->identity()},
            {"perceptual", metric_.identity()}}},
          {"resources", resources_}};
}

bool AttackEngine::renderable(std::u32string_view text) const {
  const auto &r = glyphs_.renderer();
  if (text.empty() || text.size() > r.config().max_chars) return false;
  return std::all_of(text.begin(), text.end(), [&](char32_t c) { return r.has_glyph(c); });
}

metrics::PerceptualScore AttackEngine::score(const std::string &x, const std::string &text,
                                             const std::vector<PlannedReplacement> &items) const {
  const auto reps = to_replacements(items);
  return metrics::sentence_perceptual(glyphs_, metric_, utf8::decode(x), utf8::decode(text), reps, config_.epsilon,
                                      metrics::LengthPolicy::PadToWider);
}

ExpansionResult AttackEngine::expand_solution_space(const std::string &x, const std::string &y) const {
  ExpansionResult out;
  const auto &sim = *backends_.similarity;
  out.kept.push_back({x, models::sentence_similarity(sim, x, x)});
  const auto back = models::reverse_translations(*backends_.aux, x, y, config_.fanout, config_.source_lang,
                                                 config_.target_lang);
  std::vector<Expansion> others;
  for (const auto &b : back) {
    if (b == x) continue;
    if (!renderable(utf8::decode(b))) {
      out.dropped.push_back({b, 0.0, "unrenderable", std::nullopt, std::nullopt, std::nullopt, false});
      continue;
    }
    const double s = models::sentence_similarity(sim, b, x);
    if (s > config_.beta) {
      others.push_back({b, s});
    } else {
      out.dropped.push_back({b, s, "filtered_beta", std::nullopt, std::nullopt, std::nullopt, false});
    }
  }
  std::stable_sort(others.begin(), others.end(),
                   [](const Expansion &a, const Expansion &b) { return a.similarity > b.similarity; });
  out.kept.insert(out.kept.end(), others.begin(), others.end());
  return out;
}

ReplacementPlan AttackEngine::plan_replacements(const std::string &x, const std::string &xhat) const {
  ReplacementPlan plan;
  plan.base = xhat;
  const auto text = utf8::decode(xhat);
  plan.total_chars = text.size();
  plan.max_replacements = max_replacements(text.size(), config_.rate);
  if (text.empty()) return plan;

  const auto words = backends_.segmenter->segment(text);
  std::vector<std::string> word_strings;
  for (const auto &w : models::word_texts(text, words)) word_strings.push_back(utf8::encode(w));
  const auto importance = models::mlm_importance(*backends_.mlm, word_strings);

  std::vector<size_t> order(words.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  const bool ascending = config_.order == ImportanceOrder::Ascending;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return ascending ? importance[a] < importance[b] : importance[a] > importance[b];
  });

  for (size_t wi : order) {
    const auto &w = words[wi];
    WordAttempt attempt{wi, word_strings[wi], w.begin, w.length, importance[wi], 0, ""};
    if (plan.items.size() >= plan.max_replacements) {
      attempt.status = "budget";
      plan.words.push_back(std::move(attempt));
      continue;
    }

    std::vector<std::shared_ptr<const RankedCandidates>> held;
    std::vector<Trial> trials;
    for (size_t ci = 0; ci < w.length; ++ci) {
      held.push_back(candidates_.candidates(text[w.begin + ci]));
      for (const auto &cand : held.back()->items) trials.push_back({ci, &cand});
    }
    if (trials.empty()) {
      attempt.status = "no_candidates";
      plan.words.push_back(std::move(attempt));
      continue;
    }
    std::sort(trials.begin(), trials.end(), [](const Trial &a, const Trial &b) {
      if (a.candidate->local != b.candidate->local) return a.candidate->local > b.candidate->local;
      if (a.char_in_word != b.char_in_word) return a.char_in_word < b.char_in_word;
      return a.candidate->ch < b.candidate->ch;
    });
    if (trials.size() > config_.max_trials_per_word) trials.resize(config_.max_trials_per_word);

    attempt.status = "gate";
    for (const auto &t : trials) {
      ++attempt.trials;
      const size_t pos = w.begin + t.char_in_word;
      PlannedReplacement p{wi,          t.char_in_word,         pos,
                           text[pos],   t.candidate->ch,        t.candidate->source,
                           t.candidate->local, t.candidate->cosine, t.candidate->mse,
                           attempt.trials};
      auto tentative = plan.items;
      tentative.push_back(p);
      if (score(x, apply_plan(xhat, tentative), tentative).combined > config_.theta) {
        plan.items = std::move(tentative);
        attempt.status = "replaced";
        break;
      }
    }
    plan.words.push_back(std::move(attempt));
  }
  return plan;
}

GateResult AttackEngine::apply_perceptual_gate(const std::string &x, const ReplacementPlan &plan) const {
  GateResult out;
  out.accepted = plan;
  out.accepted.items.clear();
  for (const auto &p : plan.items) {
    auto tentative = out.accepted.items;
    tentative.push_back(p);
    if (score(x, apply_plan(plan.base, tentative), tentative).combined > config_.theta) {
      out.accepted.items = std::move(tentative);
    } else {
      out.reverted.push_back(p);
    }
  }
  out.score = score(x, apply_plan(plan.base, out.accepted.items), out.accepted.items);
  return out;
}

AttackResult AttackEngine::run(const std::string &id, const std::string &x, const std::string &y,
                               bool debug_candidates) const {
  AttackResult r;
  r.id = id;
  r.x = x;
  r.y = y;
  r.xhat = x;
  r.x_delta = x;
  r.config = snapshot();
  r.manifest_id = manifest_id_;
  r.perceptual.epsilon = config_.epsilon;
  r.perceptual.metric = metric_.identity();
  std::vector<CandidateLogEntry> log;

  try {
    const auto chars = utf8::decode(x);
    r.plan.base = x;
    r.plan.total_chars = chars.size();
    r.plan.max_replacements = max_replacements(chars.size(), config_.rate);
    r.perceptual = score(x, x, {});

    double best = models::sentence_similarity(*backends_.similarity, x, x);
    r.sim_xhat = best;
    r.sim_x_delta = best;
    log.push_back({x, best, "initial", x, best, r.perceptual.combined, r.perceptual.combined > config_.theta});

    auto expansion = expand_solution_space(x, y);
    for (auto &d : expansion.dropped) log.push_back(std::move(d));

    for (const auto &e : expansion.kept) {
      const auto plan = plan_replacements(x, e.text);
      auto gate = apply_perceptual_gate(x, plan);
      const auto text = apply_plan(e.text, gate.accepted.items);
      const double s = models::sentence_similarity(*backends_.similarity, text, x);
      const bool satisfies = gate.score.combined > config_.theta;
      log.push_back({e.text, e.similarity, "planned", text, s, gate.score.combined, satisfies});
      if (satisfies && s < best) {
        best = s;
        r.xhat = e.text;
        r.sim_xhat = e.similarity;
        r.x_delta = text;
        r.sim_x_delta = s;
        r.plan = std::move(gate.accepted);
        r.reverted = std::move(gate.reverted);
        r.perceptual = gate.score;
      }
    }

    const auto &victim = *backends_.victim;
    r.victim_clean = models::translate(victim, x, config_.source_lang, config_.target_lang);
    r.victim_adv = r.x_delta == x ? r.victim_clean
                                   : models::translate(victim, r.x_delta, config_.source_lang, config_.target_lang);
    const std::vector<metrics::Tokens> refs{eval::tokenize_en(y)};
    r.bleu_clean = metrics::sentence_bleu(eval::tokenize_en(r.victim_clean), refs).value;
    r.bleu_adv = metrics::sentence_bleu(eval::tokenize_en(r.victim_adv), refs).value;
    if (r.bleu_clean > 0.0) {
      r.relative_decrease = (r.bleu_clean - r.bleu_adv) / r.bleu_clean;
    } else {
      r.zero_baseline = true;
    }
  } catch (const Error &e) {
    if (!converts_to_incomplete(e.code())) throw;
    r.incomplete = true;
    r.error = e.what();
  }
  if (debug_candidates) r.candidates = std::move(log);
  finish(r);
  return r;
}

void AttackEngine::finish(AttackResult &r) const {
  r.quality = {r.relative_decrease, config_.alpha, r.relative_decrease && *r.relative_decrease > config_.alpha};
  r.semantic = {r.sim_xhat, config_.beta, r.xhat == r.x || r.sim_xhat > config_.beta};
  r.visual = {r.perceptual.combined, config_.theta, r.perceptual.combined > config_.theta};
  r.success = !r.incomplete && r.quality.satisfied;
}

}  // namespace vfa::attack
