#include "vfa/cli/settings.hpp"

#include <cmath>
#include <filesystem>
#include <toml.hpp>

#include "vfa/attack/result.hpp"
#include "vfa/digest.hpp"
#include "vfa/error.hpp"
#include "vfa/paths.hpp"

namespace vfa::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Origin origin) {
  switch (origin) {
    case Origin::Default:
      return "default";
    case Origin::File:
      return "file";
    case Origin::Flag:
      return "flag";
  }
  return "?";
}

models::BackendEndpoint BackendSettings::endpoint(const std::string &url) const {
  models::BackendEndpoint e;
  e.base_url = url;
  e.timeout_ms = timeout_ms;
  e.retry.count = retries;
  e.retry.backoff = std::chrono::milliseconds(backoff_ms);
  e.auth_token = auth_token;
  e.max_in_flight = max_in_flight;
  e.validate();
  return e;
}

Settings::Settings() {
  const auto attack_defaults = attack::AttackConfig{}.to_json();
  for (const auto &[key, value] : attack_defaults.items()) {
    Kind kind = Kind::Number;
    if (value.is_string()) kind = Kind::String;
    else if (value.is_number_unsigned()) kind = Kind::Count;
    define("attack." + key, kind, value);
  }
  glyph::RenderConfig r;
  r.fonts = {default_font_path()};
  define("render.fonts", Kind::PathList, r.fonts);
  define("render.font_size", Kind::Number, r.font_size);
  define("render.cell_width", Kind::Integer, r.cell_width);
  define("render.cell_height", Kind::Integer, r.cell_height);
  define("render.background", Kind::Number, r.background);
  define("render.foreground", Kind::Number, r.foreground);
  define("render.antialias", Kind::Bool, r.antialias);
  define("render.max_chars", Kind::Count, r.max_chars);

  define("resources.radicals", Kind::Path, data_path("radicals/gb2312_radicals.tsv"));
  define("resources.repertoire", Kind::Path, data_path("repertoire/gb2312_hanzi.txt"));
  define("resources.segmenter", Kind::Path, data_path("segmenter/words.txt"));
  define("resources.index", Kind::Path, "");

  define("mock.lexicon", Kind::Path, data_path("mock/lexicon.tsv"));
  define("mock.sensitivity", Kind::Path, data_path("mock/sensitivity.tsv"));

  const BackendSettings b;
  for (const char *name : {"victim", "aux", "mlm", "similarity", "perceptual"}) {
    define(std::string("backends.") + name, Kind::String, "");
  }
  define("backends.timeout_ms", Kind::Integer, b.timeout_ms);
  define("backends.retries", Kind::Count, b.retries);
  define("backends.backoff_ms", Kind::Integer, b.backoff_ms);
  define("backends.auth_token", Kind::String, b.auth_token);
  define("backends.max_in_flight", Kind::Count, b.max_in_flight);

  define("run.mock", Kind::Bool, false);
  define("run.workers", Kind::Count, 0);
  define("run.debug_candidates", Kind::Bool, false);
}

void Settings::define(const std::string &key, Kind kind, json value) {
  entries_[key] = Entry{kind, std::move(value), Origin::Default};
}

json Settings::coerce(const std::string &key, const Entry &entry, json v, const std::string &base_dir) const {
  auto bad = [&](const std::string &why) { return Error(ErrorCode::BadConfig, "setting '" + key + "': " + why); };
  auto resolve = [&](const std::string &p) {
    if (p.empty() || base_dir.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base_dir) / p).lexically_normal().string();
  };
  switch (entry.kind) {
    case Kind::Number:
      if (!v.is_number()) throw bad("expected a number");
      if (!std::isfinite(v.get<double>())) throw bad("must be finite");
      return v.get<double>();
    case Kind::Count:
      if (!v.is_number_integer() || v.get<long long>() < 0) throw bad("expected a non-negative integer");
      return v.get<size_t>();
    case Kind::Integer:
      if (!v.is_number_integer()) throw bad("expected an integer");
      return v.get<int>();
    case Kind::Bool:
      if (!v.is_boolean()) throw bad("expected true or false");
      return v;
    case Kind::String:
      if (!v.is_string()) throw bad("expected a string");
      return v;
    case Kind::Path:
      if (!v.is_string()) throw bad("expected a path");
      return resolve(v.get<std::string>());
    case Kind::PathList: {
      if (v.is_string()) v = json::array({v});
      if (!v.is_array() || v.empty()) throw bad("expected a non-empty list of paths");
      json out = json::array();
      for (const auto &p : v) {
        if (!p.is_string()) throw bad("expected a list of paths");
        out.push_back(resolve(p.get<std::string>()));
      }
      return out;
    }
  }
  return v;
}

namespace {

json node_to_json(const toml::node &node, const std::string &key) {
  if (auto v = node.as_integer()) return v->get();
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_boolean()) return v->get();
  if (auto v = node.as_string()) return v->get();
  if (auto arr = node.as_array()) {
    json out = json::array();
    for (const auto &item : *arr) out.push_back(node_to_json(item, key));
    return out;
  }
  throw Error(ErrorCode::BadConfig, "setting '" + key + "': unsupported value type");
}

}  // namespace

void Settings::load_file(const std::string &path) {
  toml::table table;
  try {
    table = toml::parse_file(path);
  } catch (const toml::parse_error &e) {
    std::ostringstream where;
    where << e.source().begin;
    throw Error(ErrorCode::BadConfig, path + ": " + std::string(e.description()) + " at " + where.str());
  } catch (const std::exception &e) {
    throw Error(ErrorCode::Io, "cannot read config " + path + ": " + e.what());
  }
  const auto base_dir = fs::absolute(path).parent_path().string();
  for (const auto &[section, node] : table) {
    const auto *sub = node.as_table();
    if (!sub) throw Error(ErrorCode::BadConfig, path + ": top-level key '" + std::string(section.str()) +
                                                    "' must be inside a section");
    for (const auto &[name, value] : *sub) {
      const auto key = std::string(section.str()) + "." + std::string(name.str());
      auto it = entries_.find(key);
      if (it == entries_.end()) throw Error(ErrorCode::BadConfig, path + ": unknown setting '" + key + "'");
      it->second.value = coerce(key, it->second, node_to_json(value, key), base_dir);
      it->second.origin = Origin::File;
    }
  }
  config_path_ = path;
  config_digest_ = file_digest_hex(path);
}

void Settings::set(const std::string &key, json value, Origin origin) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCode::BadConfig, "unknown setting '" + key + "'");
  it->second.value = coerce(key, it->second, std::move(value), "");
  it->second.origin = origin;
}

const json &Settings::get(const std::string &key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCode::BadConfig, "unknown setting '" + key + "'");
  return it->second.value;
}

Origin Settings::origin(const std::string &key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCode::BadConfig, "unknown setting '" + key + "'");
  return it->second.origin;
}

attack::AttackConfig Settings::attack() const {
  json j = json::object();
  for (const auto &[key, e] : entries_) {
    if (key.rfind("attack.", 0) == 0) j[key.substr(7)] = e.value;
  }
  return attack::AttackConfig::from_json(j);
}

glyph::RenderConfig Settings::render() const {
  json j = json::object();
  for (const auto &[key, e] : entries_) {
    if (key.rfind("render.", 0) == 0) j[key.substr(7)] = e.value;
  }
  return attack::render_config_from_json(j);
}

BackendSettings Settings::backends() const {
  BackendSettings b;
  b.victim = path("backends.victim");
  b.aux = path("backends.aux");
  b.mlm = path("backends.mlm");
  b.similarity = path("backends.similarity");
  b.perceptual = path("backends.perceptual");
  b.timeout_ms = get("backends.timeout_ms").get<int>();
  b.retries = get("backends.retries").get<unsigned>();
  b.backoff_ms = get("backends.backoff_ms").get<int>();
  b.auth_token = path("backends.auth_token");
  b.max_in_flight = get("backends.max_in_flight").get<size_t>();
  return b;
}

json Settings::explain() const {
  json out = json::object();
  for (const auto &[key, e] : entries_) {
    json value = e.value;
    if (key == "backends.auth_token" && !value.get<std::string>().empty()) value = "<redacted>";
    out[key] = {{"value", value}, {"origin", to_string(e.origin)}};
  }
  return out;
}

json Settings::effective() const {
  json out = json::object();
  for (const auto &[key, e] : entries_) {
    out[key] = key == "backends.auth_token" && !e.value.get<std::string>().empty() ? json("<redacted>") : e.value;
  }
  return out;
}

}  // namespace vfa::cli
