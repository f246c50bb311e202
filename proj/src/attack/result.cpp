#include "vfa/attack/result.hpp"

#include "vfa/error.hpp"
#include "vfa/utf8.hpp"

namespace vfa::attack {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

char32_t single_char(const std::string &text) {
  const auto decoded = utf8::decode(text);
  if (decoded.size() != 1) throw Error(ErrorCode::Parse, "expected one character, got '" + text + "'");
  return decoded[0];
}

simindex::Source parse_source(const std::string &s) {
  if (s == "rad") return simindex::Source::Rad;
  if (s == "pix") return simindex::Source::Pix;
  if (s == "both") return simindex::Source::Both;
  throw Error(ErrorCode::Parse, "unknown candidate source '" + s + "'");
}

json replacement_json(const PlannedReplacement &p) {
  return {{"word_index", p.word_index},
          {"char_in_word", p.char_in_word},
          {"position", p.position},
          {"original", utf8::encode(p.original)},
          {"replacement", utf8::encode(p.replacement)},
          {"source", simindex::to_string(p.source)},
          {"local", p.local},
          {"cosine", optional_number(p.cosine)},
          {"mse", optional_number(p.mse)},
          {"trial", p.trial}};
}

PlannedReplacement replacement_from(const json &j) {
  PlannedReplacement p;
  p.word_index = j.at("word_index").get<size_t>();
  p.char_in_word = j.at("char_in_word").get<size_t>();
  p.position = j.at("position").get<size_t>();
  p.original = single_char(j.at("original").get<std::string>());
  p.replacement = single_char(j.at("replacement").get<std::string>());
  p.source = parse_source(j.at("source").get<std::string>());
  p.local = j.at("local").get<double>();
  p.cosine = read_optional(j, "cosine");
  p.mse = read_optional(j, "mse");
  p.trial = j.at("trial").get<size_t>();
  return p;
}

json constraint_json(const Constraint &c) {
  return {{"value", optional_number(c.value)}, {"threshold", c.threshold}, {"satisfied", c.satisfied}};
}

Constraint constraint_from(const json &j) {
  return {read_optional(j, "value"), j.at("threshold").get<double>(), j.at("satisfied").get<bool>()};
}

}  // namespace

json AttackResult::to_json() const {
  json items = json::array();
  for (const auto &p : plan.items) items.push_back(replacement_json(p));
  json words = json::array();
  for (const auto &w : plan.words) {
    words.push_back({{"index", w.index},
                     {"text", w.text},
                     {"begin", w.begin},
                     {"length", w.length},
                     {"importance", w.importance},
                     {"trials", w.trials},
                     {"status", w.status}});
  }
  json rev = json::array();
  for (const auto &p : reverted) rev.push_back(replacement_json(p));

  json j = {{"id", id},
            {"x", x},
            {"y", y},
            {"xhat", xhat},
            {"sim_xhat", sim_xhat},
            {"x_delta", x_delta},
            {"sim_x_delta", sim_x_delta},
            {"plan",
             {{"base", plan.base},
              {"total_chars", plan.total_chars},
              {"max_replacements", plan.max_replacements},
              {"replacements", items},
              {"words", words}}},
            {"reverted", rev},
            {"perceptual",
             {{"global", perceptual.global},
              {"local_sum", perceptual.local_sum},
              {"epsilon", perceptual.epsilon},
              {"combined", perceptual.combined},
              {"metric", perceptual.metric}}},
            {"victim", {{"clean", victim_clean}, {"adversarial", victim_adv}}},
            {"bleu",
             {{"clean", bleu_clean},
              {"adversarial", bleu_adv},
              {"relative_decrease", optional_number(relative_decrease)},
              {"zero_baseline", zero_baseline}}},
            {"success", success},
            {"constraints",
             {{"quality", constraint_json(quality)},
              {"semantic", constraint_json(semantic)},
              {"visual", constraint_json(visual)}}},
            {"incomplete", incomplete},
            {"error", error},
            {"config", config},
            {"manifest_id", manifest_id}};
  if (candidates) {
    json log = json::array();
    for (const auto &c : *candidates) {
      log.push_back({{"xhat", c.xhat},
                     {"sim_xhat", c.sim_xhat},
                     {"status", c.status},
                     {"x_delta", c.x_delta ? json(*c.x_delta) : json(nullptr)},
                     {"sim", optional_number(c.sim)},
                     {"combined", optional_number(c.combined)},
                     {"satisfies", c.satisfies}});
    }
    j["candidates"] = std::move(log);
  }
  return j;
}

AttackResult AttackResult::from_json(const json &j) {
  try {
    AttackResult r;
    r.id = j.at("id").get<std::string>();
    r.x = j.at("x").get<std::string>();
    r.y = j.at("y").get<std::string>();
    r.xhat = j.at("xhat").get<std::string>();
    r.sim_xhat = j.at("sim_xhat").get<double>();
    r.x_delta = j.at("x_delta").get<std::string>();
    r.sim_x_delta = j.at("sim_x_delta").get<double>();
    const auto &plan = j.at("plan");
    r.plan.base = plan.at("base").get<std::string>();
    r.plan.total_chars = plan.at("total_chars").get<size_t>();
    r.plan.max_replacements = plan.at("max_replacements").get<size_t>();
    for (const auto &p : plan.at("replacements")) r.plan.items.push_back(replacement_from(p));
    for (const auto &w : plan.at("words")) {
      r.plan.words.push_back({w.at("index").get<size_t>(), w.at("text").get<std::string>(),
                              w.at("begin").get<size_t>(), w.at("length").get<size_t>(),
                              w.at("importance").get<double>(), w.at("trials").get<size_t>(),
                              w.at("status").get<std::string>()});
    }
    for (const auto &p : j.at("reverted")) r.reverted.push_back(replacement_from(p));
    const auto &per = j.at("perceptual");
    r.perceptual = {per.at("global").get<double>(), per.at("local_sum").get<double>(),
                    per.at("epsilon").get<double>(), per.at("combined").get<double>(),
                    per.at("metric").get<std::string>()};
    r.victim_clean = j.at("victim").at("clean").get<std::string>();
    r.victim_adv = j.at("victim").at("adversarial").get<std::string>();
    const auto &bleu = j.at("bleu");
    r.bleu_clean = bleu.at("clean").get<double>();
    r.bleu_adv = bleu.at("adversarial").get<double>();
    r.relative_decrease = read_optional(bleu, "relative_decrease");
    r.zero_baseline = bleu.at("zero_baseline").get<bool>();
    r.success = j.at("success").get<bool>();
    const auto &cons = j.at("constraints");
    r.quality = constraint_from(cons.at("quality"));
    r.semantic = constraint_from(cons.at("semantic"));
    r.visual = constraint_from(cons.at("visual"));
    r.incomplete = j.at("incomplete").get<bool>();
    r.error = j.at("error").get<std::string>();
    r.config = j.at("config");
    r.manifest_id = j.at("manifest_id").get<std::string>();
    if (j.contains("candidates")) {
      std::vector<CandidateLogEntry> log;
      for (const auto &c : j.at("candidates")) {
        CandidateLogEntry e;
        e.xhat = c.at("xhat").get<std::string>();
        e.sim_xhat = c.at("sim_xhat").get<double>();
        e.status = c.at("status").get<std::string>();
        if (!c.at("x_delta").is_null()) e.x_delta = c.at("x_delta").get<std::string>();
        e.sim = read_optional(c, "sim");
        e.combined = read_optional(c, "combined");
        e.satisfies = c.at("satisfies").get<bool>();
        log.push_back(std::move(e));
      }
      r.candidates = std::move(log);
    }
    return r;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::Parse, std::string("malformed attack result: ") + e.what());
  }
}

json render_config_json(const glyph::RenderConfig &c) {
  return {{"fonts", c.fonts},
          {"font_size", c.font_size},
          {"cell_width", c.cell_width},
          {"cell_height", c.cell_height},
          {"background", c.background},
          {"foreground", c.foreground},
          {"antialias", c.antialias},
          {"max_chars", c.max_chars}};
}

glyph::RenderConfig render_config_from_json(const json &j) {
  try {
    glyph::RenderConfig c;
    c.fonts = j.at("fonts").get<std::vector<std::string>>();
    c.font_size = j.at("font_size").get<double>();
    c.cell_width = j.at("cell_width").get<int>();
    c.cell_height = j.at("cell_height").get<int>();
    c.background = j.at("background").get<float>();
    c.foreground = j.at("foreground").get<float>();
    c.antialias = j.at("antialias").get<bool>();
    c.max_chars = j.at("max_chars").get<size_t>();
    return c;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::Parse, std::string("malformed render config: ") + e.what());
  }
}

std::vector<metrics::Replacement> to_replacements(const std::vector<PlannedReplacement> &items) {
  std::vector<metrics::Replacement> out;
  out.reserve(items.size());
  for (const auto &p : items) out.push_back({p.position, p.original, p.replacement});
  return out;
}

}  // namespace vfa::attack
