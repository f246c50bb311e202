#pragma once

#include <iosfwd>
#include <map>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "vfa/attack/result.hpp"
#include "vfa/glyph/renderer.hpp"

namespace vfa::eval {

struct EvalRow {
  std::string id;
  double bleu_clean = 0.0;
  double bleu_adv = 0.0;
  std::optional<double> relative_decrease;  // absent for a zero baseline
  bool success = false;
  bool zero_baseline = false;
  bool incomplete = false;
  double ssim = 0.0;  // x vs x_delta sentence renders

  bool operator==(const EvalRow &) const = default;
};

struct EvalAggregates {
  size_t rows = 0;
  size_t successes = 0;
  size_t zero_baseline = 0;  // excluded from the ASR denominator
  size_t incomplete = 0;     // excluded from the ASR denominator
  size_t asr_denominator = 0;
  double asr = 0.0;
  double mean_bleu_clean = 0.0;
  double mean_bleu_adv = 0.0;
  double mean_relative_decrease = 0.0;  // over rows that have one
  double mean_ssim = 0.0;
  double corpus_bleu_clean = 0.0;
  double corpus_bleu_adv = 0.0;

  bool operator==(const EvalAggregates &) const = default;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  EvalAggregates aggregates;
  double alpha = 0.5;
  std::string config_digest;
  // metric name -> identity string (bleu, tokenizer, ssim, render settings)
  std::map<std::string, std::string> identities;
  std::vector<std::string> manifests;  // distinct manifest ids of the results
  std::string manifest_id;             // run that produced this report

  bool operator==(const EvalReport &) const = default;

  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json &j);

  // "# key=value" header lines, then one row per result. Values in the
  // header are JSON literals.
  void write_csv(std::ostream &out) const;
  static EvalReport read_csv(std::istream &in);
};

// Incremental single-pass evaluation; add() results in corpus order.
class Evaluator {
 public:
  // `renderer` draws the SSIM renders; `alpha` is the success threshold.
  Evaluator(const glyph::Renderer &renderer, double alpha = 0.5);

  void add(const attack::AttackResult &result);
  EvalReport finish() const;

 private:
  const glyph::Renderer &renderer_;
  double alpha_;
  EvalReport report_;
  std::vector<std::vector<std::string>> hyp_clean_;
  std::vector<std::vector<std::string>> hyp_adv_;
  std::vector<std::vector<std::vector<std::string>>> refs_;
};

EvalReport evaluate(const std::vector<attack::AttackResult> &results, const glyph::Renderer &renderer,
                    double alpha = 0.5);

// SSIM of two sentence renders; the narrower one is padded with background.
double sentence_ssim(const glyph::Renderer &renderer, const std::string &a, const std::string &b);

// One AttackResult per non-empty line. Throws Error(Io) / Error(Parse) naming the line.
std::vector<attack::AttackResult> read_results(const std::string &path);

}  // namespace vfa::eval
