#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "vfa/attack/candidate_provider.hpp"
#include "vfa/attack/config.hpp"
#include "vfa/attack/result.hpp"
#include "vfa/glyph/cache.hpp"
#include "vfa/metrics/perceptual.hpp"
#include "vfa/models/backends.hpp"
#include "vfa/models/segmenter.hpp"

namespace vfa::attack {

struct Backends {
  const models::Translator *victim = nullptr;
  const models::Translator *aux = nullptr;
  const models::MaskedLM *mlm = nullptr;
  const models::SentenceSimilarity *similarity = nullptr;
  const models::Segmenter *segmenter = nullptr;
};

struct Expansion {
  std::string text;
  double similarity = 0.0;  // M_sim(text, x)
};

struct ExpansionResult {
  std::vector<Expansion> kept;      // x first, then descending similarity
  std::vector<CandidateLogEntry> dropped;  // β-filtered or unrenderable back-translations
};

struct GateResult {
  ReplacementPlan accepted;
  std::vector<PlannedReplacement> reverted;
  metrics::PerceptualScore score;  // of the accepted text against x
};

// The full attack over one sentence pair. Everything referenced must outlive the
// engine and stay unchanged; run() may be called from many threads at once.
class AttackEngine {
 public:
  AttackEngine(AttackConfig config, Backends backends, const glyph::GlyphCache &glyphs,
               const metrics::PerceptualMetric &metric, const CandidateProvider &candidates,
               nlohmann::json resources = nlohmann::json::object(), std::string manifest_id = "");

  const AttackConfig &config() const noexcept { return config_; }

  ExpansionResult expand_solution_space(const std::string &x, const std::string &y) const;

  // Greedy per-word substitution on `xhat` under the rate bound and the
  // running perceptual check against `x`.
  ReplacementPlan plan_replacements(const std::string &x, const std::string &xhat) const;

  // Replays `plan` in order, reverting each replacement whose inclusion leaves
  // the combined score against `x` at or below theta.
  GateResult apply_perceptual_gate(const std::string &x, const ReplacementPlan &plan) const;

  // Combined perceptual score of `text` (with the given substitutions) against x.
  metrics::PerceptualScore score(const std::string &x, const std::string &text,
                                 const std::vector<PlannedReplacement> &items) const;

  // Backend failures and unrenderable input produce an incomplete result.
  AttackResult run(const std::string &id, const std::string &x, const std::string &y,
                   bool debug_candidates = false) const;

  // Configuration block recorded in every result.
  nlohmann::json snapshot() const;

 private:
  bool renderable(std::u32string_view text) const;
  void finish(AttackResult &r) const;

  AttackConfig config_;
  Backends backends_;
  const glyph::GlyphCache &glyphs_;
  const metrics::PerceptualMetric &metric_;
  const CandidateProvider &candidates_;
  nlohmann::json resources_;
  std::string manifest_id_;
};

// Applies the plan's substitutions to its base text.
std::string apply_plan(const std::string &base, const std::vector<PlannedReplacement> &items);

}  // namespace vfa::attack
