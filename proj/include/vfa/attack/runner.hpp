#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vfa/attack/engine.hpp"

namespace vfa::attack {

struct SentencePair {
  std::string id;
  std::string source;
  std::string reference;
};

// `<source>\t<reference>` per line, UTF-8. Blank lines are skipped; ids are
// 1-based line numbers. Throws Error(Io) / Error(Parse) naming the line.
std::vector<SentencePair> read_corpus(const std::string &path);
std::vector<SentencePair> parse_corpus(std::istream &in, const std::string &source = "<stream>");

// Attacks every pair on `workers` threads (0: hardware concurrency). `sink`
// receives results strictly in input order, from one thread at a time.
void run_corpus(const AttackEngine &engine, const std::vector<SentencePair> &pairs, size_t workers,
                bool debug_candidates, const std::function<void(const AttackResult &)> &sink);

std::vector<AttackResult> run_corpus(const AttackEngine &engine, const std::vector<SentencePair> &pairs,
                                     size_t workers, bool debug_candidates = false);

}  // namespace vfa::attack
