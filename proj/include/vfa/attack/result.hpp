#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "vfa/glyph/renderer.hpp"
#include "vfa/metrics/perceptual.hpp"
#include "vfa/simindex/candidates.hpp"

namespace vfa::attack {

struct PlannedReplacement {
  size_t word_index = 0;    // index into the segmentation of the base text
  size_t char_in_word = 0;
  size_t position = 0;      // character offset in the base text
  char32_t original = 0;
  char32_t replacement = 0;
  simindex::Source source = simindex::Source::Rad;
  double local = 0.0;  // perceptual similarity of the two cells
  std::optional<double> cosine;
  std::optional<double> mse;
  size_t trial = 0;  // 1-based rank of the accepted (position, candidate) pair within its word
};

// What happened to each word, in attack order.
struct WordAttempt {
  size_t index = 0;
  std::string text;
  size_t begin = 0;
  size_t length = 0;
  double importance = 0.0;  // masked-LM probability
  size_t trials = 0;
  // "replaced", "no_candidates", "gate" (every trial failed the check),
  // "budget" (rate bound reached before this word)
  std::string status;
};

struct ReplacementPlan {
  std::string base;
  size_t total_chars = 0;
  size_t max_replacements = 0;
  std::vector<PlannedReplacement> items;
  std::vector<WordAttempt> words;
};

struct CandidateLogEntry {
  std::string xhat;
  double sim_xhat = 0.0;
  // "initial", "filtered_beta", "unrenderable", "planned"
  std::string status;
  std::optional<std::string> x_delta;
  std::optional<double> sim;
  std::optional<double> combined;
  bool satisfies = false;
};

struct Constraint {
  std::optional<double> value;
  double threshold = 0.0;
  bool satisfied = false;
};

struct AttackResult {
  std::string id;
  std::string x;
  std::string y;
  std::string xhat;
  double sim_xhat = 0.0;
  std::string x_delta;
  double sim_x_delta = 0.0;
  ReplacementPlan plan;
  std::vector<PlannedReplacement> reverted;
  metrics::PerceptualScore perceptual;
  std::string victim_clean;
  std::string victim_adv;
  double bleu_clean = 0.0;
  double bleu_adv = 0.0;
  std::optional<double> relative_decrease;  // absent when bleu_clean == 0
  bool zero_baseline = false;
  bool success = false;
  Constraint quality;   // relative BLEU decrease > alpha
  Constraint semantic;  // M_sim(x_hat, x) > beta, or x_hat is x itself
  Constraint visual;    // combined perceptual score > theta
  bool incomplete = false;
  std::string error;
  nlohmann::json config;
  std::string manifest_id;
  std::optional<std::vector<CandidateLogEntry>> candidates;

  nlohmann::json to_json() const;
  // Throws Error(Parse) on missing or mistyped fields.
  static AttackResult from_json(const nlohmann::json &j);
};

nlohmann::json render_config_json(const glyph::RenderConfig &config);
glyph::RenderConfig render_config_from_json(const nlohmann::json &j);

std::vector<metrics::Replacement> to_replacements(const std::vector<PlannedReplacement> &items);

}  // namespace vfa::attack
