#include "vfa/models/http.hpp"

#include <httplib.h>

#include <regex>
#include <thread>

#include "vfa/error.hpp"
#include "vfa/glyph/png.hpp"

namespace vfa::models {

using nlohmann::json;

namespace {

const std::regex &url_pattern() {
  static const std::regex re(R"(^http://([^/:]+)(:[0-9]{1,5})?(/.*)?$)");
  return re;
}

[[noreturn]] void malformed(const std::string &what) { throw Error(ErrorCode::MalformedResponse, what); }

template <typename T>
T field(const json &body, const char *name, const std::string &where) {
  auto it = body.find(name);
  if (it == body.end()) malformed(where + ": response lacks \"" + name + "\"");
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    malformed(where + ": \"" + name + "\" has the wrong type");
  }
}

}  // namespace

void BackendEndpoint::validate() const {
  if (!std::regex_match(base_url, url_pattern())) {
    throw Error(ErrorCode::BadConfig, "backend URL must look like http://host[:port][/prefix], got '" + base_url + "'");
  }
  if (timeout_ms <= 0) throw Error(ErrorCode::BadConfig, "backend timeout must be positive");
  if (max_in_flight == 0) throw Error(ErrorCode::BadConfig, "max_in_flight must be at least 1");
}

HttpClient::HttpClient(BackendEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
  std::smatch m;
  std::regex_match(endpoint_.base_url, m, url_pattern());
  scheme_host_port_ = "http://" + m[1].str() + m[2].str();
  prefix_ = m[3].str();
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  slots_ = std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(endpoint_.max_in_flight));
}

HttpClient::~HttpClient() = default;

json HttpClient::post(const std::string &path, const json &body) const {
  const std::string where = endpoint_.base_url + path;
  const std::string payload = body.dump();
  const auto timeout = std::chrono::milliseconds(endpoint_.timeout_ms);

  slots_->acquire();
  struct Release {
    std::counting_semaphore<> *s;
    ~Release() { s->release(); }
  } release{slots_.get()};

  std::string last_failure;
  bool last_timed_out = false;
  auto backoff = endpoint_.retry.backoff;
  for (unsigned attempt = 0; attempt <= endpoint_.retry.count; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    ++attempts_;
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!endpoint_.auth_token.empty()) headers.emplace("Authorization", "Bearer " + endpoint_.auth_token);

    const auto started = std::chrono::steady_clock::now();
    auto result = client.Post(prefix_ + path, headers, payload, "application/json");
    if (!result) {
      const auto elapsed = std::chrono::steady_clock::now() - started;
      const auto err = result.error();
      last_timed_out = err == httplib::Error::ConnectionTimeout ||
                       ((err == httplib::Error::Read || err == httplib::Error::Write) && elapsed >= timeout);
      last_failure = httplib::to_string(err);
      continue;
    }
    if (result->status >= 400) {
      std::string message = result->body;
      try {
        const auto err = json::parse(result->body);
        if (err.is_object() && err.contains("error") && err["error"].is_string()) message = err["error"];
      } catch (const json::exception &) {
      }
      throw Error(ErrorCode::BackendUnavailable,
                  where + " answered HTTP " + std::to_string(result->status) + ": " + message);
    }
    try {
      auto parsed = json::parse(result->body);
      if (!parsed.is_object()) malformed(where + ": response is not a JSON object");
      return parsed;
    } catch (const json::exception &e) {
      malformed(where + ": response is not JSON: " + e.what());
    }
  }
  if (last_timed_out) {
    throw Error(ErrorCode::Timeout, where + " timed out after " + std::to_string(endpoint_.timeout_ms) + " ms (" +
                                        std::to_string(endpoint_.retry.count + 1) + " attempts)");
  }
  throw Error(ErrorCode::BackendUnavailable, where + " unreachable after " +
                                                 std::to_string(endpoint_.retry.count + 1) +
                                                 " attempts: " + last_failure);
}

std::vector<std::string> HttpTranslator::translate_n(const std::string &text, const std::string &src,
                                                     const std::string &tgt, size_t n) const {
  if (n == 0) return {};
  json body = {{"text", text}, {"src", src}, {"tgt", tgt}};
  if (n > 1) body["n"] = n;
  const auto reply = client_.post("/v1/translate", body);
  const std::string where = identity();
  if (reply.contains("translations")) {
    auto all = field<std::vector<std::string>>(reply, "translations", where);
    if (all.empty()) malformed(where + ": empty \"translations\"");
    if (all.size() > n) all.resize(n);
    return all;
  }
  return {field<std::string>(reply, "translation", where)};
}

std::vector<double> HttpMaskedLM::token_probabilities(const std::vector<std::string> &tokens) const {
  const auto reply = client_.post("/v1/mlm_scores", {{"tokens", tokens}});
  return field<std::vector<double>>(reply, "scores", identity());
}

double HttpSentenceSimilarity::similarity(const std::string &a, const std::string &b) const {
  const auto reply = client_.post("/v1/sent_sim", {{"a", a}, {"b", b}});
  return field<double>(reply, "score", identity());
}

double HttpPerceptual::similarity(const glyph::GlyphBitmap &a, const glyph::GlyphBitmap &b) const {
  const json body = {{"a_png_b64", glyph::base64_encode(glyph::encode_png(a))},
                     {"b_png_b64", glyph::base64_encode(glyph::encode_png(b))}};
  const auto reply = client_.post("/v1/perceptual", body);
  return field<double>(reply, "similarity", identity());
}

}  // namespace vfa::models
