#pragma once

#include <json.hpp>
#include <string>

namespace vfa::attack {

enum class ImportanceOrder { Ascending, Descending };

std::string to_string(ImportanceOrder order);
ImportanceOrder parse_importance_order(const std::string &text);  // "asc" | "desc"

struct AttackConfig {
  double alpha = 0.5;     // success: relative BLEU decrease > alpha
  double beta = 0.5;      // keep back-translations with M_sim(x_hat, x) > beta
  double theta = 0.95;    // perceptual floor: combined score > theta
  double epsilon = 0.01;  // weight of the local perceptual terms
  double rate = 0.2;      // replacements / characters < rate
  size_t m = 50;          // cosine top-m
  size_t k = 10;          // MSE re-rank top-k
  size_t fanout = 4;      // back-translations requested
  ImportanceOrder order = ImportanceOrder::Ascending;
  // (position, candidate) pairs tried per word before giving up on it.
  size_t max_trials_per_word = 32;
  std::string source_lang = "zh";
  std::string target_lang = "en";

  // Throws Error(BadConfig) naming the offending field.
  void validate() const;

  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static AttackConfig from_json(const nlohmann::json &j);
};

// Largest replacement count allowed for `chars` characters: count / chars < rate.
size_t max_replacements(size_t chars, double rate);

}  // namespace vfa::attack
