#include "vfa/attack/config.hpp"

#include <cmath>

#include "vfa/error.hpp"

namespace vfa::attack {

std::string to_string(ImportanceOrder order) { return order == ImportanceOrder::Ascending ? "asc" : "desc"; }

ImportanceOrder parse_importance_order(const std::string &text) {
  if (text == "asc") return ImportanceOrder::Ascending;
  if (text == "desc") return ImportanceOrder::Descending;
  throw Error(ErrorCode::BadConfig, "importance order must be 'asc' or 'desc', got '" + text + "'");
}

void AttackConfig::validate() const {
  auto require = [](bool ok, const std::string &what) {
    if (!ok) throw Error(ErrorCode::BadConfig, what);
  };
  require(std::isfinite(alpha), "alpha must be finite");
  require(std::isfinite(beta), "beta must be finite");
  require(std::isfinite(theta), "theta must be finite");
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0,1]");
  require(rate >= 0.0 && rate <= 1.0, "rate must lie in [0,1]");
  require(k >= 1, "k must be at least 1");
  require(k <= m, "k must not exceed m");
  require(max_trials_per_word >= 1, "max_trials_per_word must be at least 1");
  require(!source_lang.empty() && !target_lang.empty(), "language codes must be set");
}

nlohmann::json AttackConfig::to_json() const {
  return {{"alpha", alpha},
          {"beta", beta},
          {"theta", theta},
          {"epsilon", epsilon},
          {"rate", rate},
          {"m", m},
          {"k", k},
          {"fanout", fanout},
          {"importance_order", to_string(order)},
          {"max_trials_per_word", max_trials_per_word},
          {"source_lang", source_lang},
          {"target_lang", target_lang}};
}

AttackConfig AttackConfig::from_json(const nlohmann::json &j) {
  AttackConfig c;
  for (const auto &[key, value] : j.items()) {
    try {
      if (key == "alpha") c.alpha = value.get<double>();
      else if (key == "beta") c.beta = value.get<double>();
      else if (key == "theta") c.theta = value.get<double>();
      else if (key == "epsilon") c.epsilon = value.get<double>();
      else if (key == "rate") c.rate = value.get<double>();
      else if (key == "m") c.m = value.get<size_t>();
      else if (key == "k") c.k = value.get<size_t>();
      else if (key == "fanout") c.fanout = value.get<size_t>();
      else if (key == "importance_order") c.order = parse_importance_order(value.get<std::string>());
      else if (key == "max_trials_per_word") c.max_trials_per_word = value.get<size_t>();
      else if (key == "source_lang") c.source_lang = value.get<std::string>();
      else if (key == "target_lang") c.target_lang = value.get<std::string>();
      else throw Error(ErrorCode::BadConfig, "unknown attack setting '" + key + "'");
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::BadConfig, "attack setting '" + key + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

size_t max_replacements(size_t chars, double rate) {
  if (chars == 0) return 0;
  size_t count = 0;
  while (count < chars && static_cast<double>(count + 1) / static_cast<double>(chars) < rate) ++count;
  return count;
}

}  // namespace vfa::attack
