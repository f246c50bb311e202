#pragma once

#include <atomic>
#include <chrono>
#include <json.hpp>
#include <memory>
#include <semaphore>
#include <string>

#include "vfa/metrics/perceptual.hpp"
#include "vfa/models/backends.hpp"

namespace vfa::models {

struct RetryPolicy {
  unsigned count = 2;                       // extra attempts after the first
  std::chrono::milliseconds backoff{100};  // doubled after every failed attempt
};

struct BackendEndpoint {
  std::string base_url;  // http://host[:port][/prefix]
  int timeout_ms = 10000;
  RetryPolicy retry;
  std::string auth_token;    // sent as "Authorization: Bearer <token>" when set
  size_t max_in_flight = 8;  // concurrent requests per endpoint

  // Throws Error(BadConfig).
  void validate() const;
};

// JSON-over-HTTP POST client. Retries only transport failures (connect, read,
// write, timeout); HTTP error statuses are reported at once. Every request
// holds one slot of the endpoint's in-flight semaphore.
class HttpClient {
 public:
  explicit HttpClient(BackendEndpoint endpoint);
  ~HttpClient();

  // Throws Error(BackendUnavailable) after exhausting retries or on an HTTP
  // error status, Error(Timeout) when the final attempt timed out, and
  // Error(MalformedResponse) when the body is not a JSON object.
  nlohmann::json post(const std::string &path, const nlohmann::json &body) const;

  const BackendEndpoint &endpoint() const noexcept { return endpoint_; }
  // Total attempts made so far, including retries.
  size_t attempts() const noexcept { return attempts_.load(); }

 private:
  BackendEndpoint endpoint_;
  std::string scheme_host_port_;
  std::string prefix_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
  mutable std::atomic<size_t> attempts_{0};
};

class HttpTranslator final : public Translator {
 public:
  explicit HttpTranslator(BackendEndpoint endpoint) : client_(std::move(endpoint)) {}
  // Requests with n > 1 add "n" to the payload; a "translations" array in the
  // response is used when present, otherwise the single "translation".
  std::vector<std::string> translate_n(const std::string &text, const std::string &src, const std::string &tgt,
                                       size_t n) const override;
  std::string identity() const override { return "http:" + client_.endpoint().base_url + "/v1/translate"; }
  const HttpClient &client() const noexcept { return client_; }

 private:
  HttpClient client_;
};

class HttpMaskedLM final : public MaskedLM {
 public:
  explicit HttpMaskedLM(BackendEndpoint endpoint) : client_(std::move(endpoint)) {}
  std::vector<double> token_probabilities(const std::vector<std::string> &tokens) const override;
  std::string identity() const override { return "http:" + client_.endpoint().base_url + "/v1/mlm_scores"; }

 private:
  HttpClient client_;
};

class HttpSentenceSimilarity final : public SentenceSimilarity {
 public:
  explicit HttpSentenceSimilarity(BackendEndpoint endpoint) : client_(std::move(endpoint)) {}
  double similarity(const std::string &a, const std::string &b) const override;
  std::string identity() const override { return "http:" + client_.endpoint().base_url + "/v1/sent_sim"; }

 private:
  HttpClient client_;
};

// Remote perceptual metric (e.g. LPIPS mapped to a similarity). Bitmaps travel
// as 8-bit grayscale PNG, so inputs are quantized to 1/255 steps.
class HttpPerceptual final : public metrics::PerceptualMetric {
 public:
  explicit HttpPerceptual(BackendEndpoint endpoint) : client_(std::move(endpoint)) {}
  double similarity(const glyph::GlyphBitmap &a, const glyph::GlyphBitmap &b) const override;
  std::string identity() const override { return "http:" + client_.endpoint().base_url + "/v1/perceptual"; }

 private:
  HttpClient client_;
};

}  // namespace vfa::models
