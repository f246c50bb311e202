#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "vfa/attack/config.hpp"
#include "vfa/glyph/renderer.hpp"
#include "vfa/models/http.hpp"

namespace vfa::cli {

enum class Origin { Default, File, Flag };
std::string to_string(Origin origin);

struct BackendSettings {
  std::string victim;
  std::string aux;
  std::string mlm;
  std::string similarity;
  std::string perceptual;  // empty: built-in surrogate metric
  int timeout_ms = 10000;
  unsigned retries = 2;
  int backoff_ms = 100;
  std::string auth_token;
  size_t max_in_flight = 8;

  models::BackendEndpoint endpoint(const std::string &url) const;
};

// Every knob of a run as dotted keys ("attack.theta", "render.fonts", ...),
// each remembering whether it came from the defaults, the config file or a
// flag. Later layers win: flag > file > default.
class Settings {
 public:
  Settings();

  // TOML with sections [attack], [render], [resources], [mock], [backends],
  // [run]. Relative paths resolve against the file's directory. Unknown
  // sections or keys and mistyped values throw Error(BadConfig).
  void load_file(const std::string &path);
  // Flag values; paths are taken relative to the working directory.
  void set(const std::string &key, nlohmann::json value, Origin origin = Origin::Flag);

  const nlohmann::json &get(const std::string &key) const;
  Origin origin(const std::string &key) const;
  bool has(const std::string &key) const { return entries_.count(key) != 0; }

  attack::AttackConfig attack() const;
  glyph::RenderConfig render() const;
  BackendSettings backends() const;
  std::string path(const std::string &key) const { return get(key).get<std::string>(); }
  bool mock() const { return get("run.mock").get<bool>(); }
  size_t workers() const { return get("run.workers").get<size_t>(); }
  bool debug_candidates() const { return get("run.debug_candidates").get<bool>(); }

  const std::string &config_path() const noexcept { return config_path_; }
  // sha256 of the config file bytes; empty without a file.
  const std::string &config_digest() const noexcept { return config_digest_; }

  // key -> {"value", "origin"}, sorted by key.
  nlohmann::json explain() const;
  // key -> value; the effective configuration.
  nlohmann::json effective() const;

 private:
  enum class Kind { Number, Count, Integer, Bool, String, Path, PathList };
  struct Entry {
    Kind kind;
    nlohmann::json value;
    Origin origin = Origin::Default;
  };
  void define(const std::string &key, Kind kind, nlohmann::json value);
  nlohmann::json coerce(const std::string &key, const Entry &entry, nlohmann::json value,
                        const std::string &base_dir) const;

  std::map<std::string, Entry> entries_;
  std::string config_path_;
  std::string config_digest_;
};

}  // namespace vfa::cli
