#include "vfa/attack/runner.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "vfa/error.hpp"
#include "vfa/utf8.hpp"

namespace vfa::attack {

std::vector<SentencePair> parse_corpus(std::istream &in, const std::string &source) {
  std::vector<SentencePair> out;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto where = source + ":" + std::to_string(number) + ": ";
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorCode::Parse, where + "expected <source>\\t<reference>");
    }
    SentencePair p{std::to_string(number), line.substr(0, tab), line.substr(tab + 1)};
    if (p.source.empty() || p.reference.empty()) throw Error(ErrorCode::Parse, where + "empty field");
    try {
      utf8::decode(p.source);
      utf8::decode(p.reference);
    } catch (const Error &e) {
      throw Error(ErrorCode::Parse, where + e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SentencePair> read_corpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open corpus " + path);
  return parse_corpus(in, path);
}

void run_corpus(const AttackEngine &engine, const std::vector<SentencePair> &pairs, size_t workers,
                bool debug_candidates, const std::function<void(const AttackResult &)> &sink) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<size_t>(pairs.size(), 1));

  std::vector<std::optional<AttackResult>> done(pairs.size());
  std::atomic<size_t> next{0};
  std::mutex mutex;
  size_t emitted = 0;
  std::exception_ptr failure;

  auto work = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      try {
        auto r = engine.run(pairs[i].id, pairs[i].source, pairs[i].reference, debug_candidates);
        std::lock_guard lock(mutex);
        if (failure) return;
        done[i] = std::move(r);
        while (emitted < done.size() && done[emitted]) {
          sink(*done[emitted]);
          done[emitted].reset();
          ++emitted;
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        next.store(pairs.size());
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto &t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<AttackResult> run_corpus(const AttackEngine &engine, const std::vector<SentencePair> &pairs,
                                     size_t workers, bool debug_candidates) {
  std::vector<AttackResult> out;
  out.reserve(pairs.size());
  run_corpus(engine, pairs, workers, debug_candidates, [&](const AttackResult &r) { out.push_back(r); });
  return out;
}

}  // namespace vfa::attack
