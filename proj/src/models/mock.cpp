#include "vfa/models/mock.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "vfa/error.hpp"
#include "vfa/eval/tokenize.hpp"
#include "vfa/utf8.hpp"

namespace vfa::models {

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> words_of(const std::string &en) {
  std::vector<std::string> out;
  std::istringstream in(en);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string lower(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_ideograph(char32_t c) { return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF); }

bool attaches_left(const std::string &token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
    return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
  });
}

template <typename F>
void read_tsv(const std::string &path, F &&on_record) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      on_record(split(line, '\t'));
    } catch (const Error &e) {
      throw Error(ErrorCode::Parse, path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const std::logic_error &e) {
      throw Error(ErrorCode::Parse, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

MockCorpusModel::MockCorpusModel(std::vector<LexiconEntry> lexicon, std::map<char32_t, std::string> sensitivity)
    : lexicon_(std::move(lexicon)), sensitivity_(std::move(sensitivity)) {
  for (size_t i = 0; i < lexicon_.size(); ++i) {
    const auto &e = lexicon_[i];
    if (e.zh.empty() || e.en.empty()) throw Error(ErrorCode::Parse, "lexicon entries need zh and en text");
    if (!by_zh_.emplace(e.zh, i).second) {
      throw Error(ErrorCode::Parse, "duplicate lexicon word " + utf8::encode(e.zh));
    }
    max_zh_ = std::max(max_zh_, e.zh.size());
    if (e.zh.size() >= 2) by_length_[e.zh.size()].push_back(i);
    std::vector<std::string> key;
    for (const auto &w : words_of(e.en)) key.push_back(lower(w));
    max_en_ = std::max(max_en_, key.size());
    by_en_.emplace(std::move(key), i);  // first entry wins
  }
  for (auto &[len, ids] : by_length_) {
    std::sort(ids.begin(), ids.end(), [&](size_t a, size_t b) { return lexicon_[a].zh < lexicon_[b].zh; });
  }
}

MockCorpusModel MockCorpusModel::load(const std::string &lexicon_path, const std::string &sensitivity_path) {
  std::vector<LexiconEntry> lexicon;
  read_tsv(lexicon_path, [&](const std::vector<std::string> &f) {
    if (f.size() < 3 || f.size() > 4) throw Error(ErrorCode::Parse, "expected zh\\ten\\tfrequency[\\talternatives]");
    LexiconEntry e;
    e.zh = utf8::decode(f[0]);
    e.en = f[1];
    e.frequency = std::stod(f[2]);
    if (f.size() == 4 && !f[3].empty()) {
      for (const auto &alt : split(f[3], ',')) e.alternatives.push_back(utf8::decode(alt));
    }
    lexicon.push_back(std::move(e));
  });
  std::map<char32_t, std::string> sensitivity;
  read_tsv(sensitivity_path, [&](const std::vector<std::string> &f) {
    if (f.size() != 2) throw Error(ErrorCode::Parse, "expected char\\tperturbation");
    const auto c = utf8::decode(f[0]);
    if (c.size() != 1) throw Error(ErrorCode::Parse, "sensitivity key must be one character");
    sensitivity[c[0]] = f[1];
  });
  return MockCorpusModel(std::move(lexicon), std::move(sensitivity));
}

std::vector<std::string> MockCorpusModel::translate_n(const std::string &text, const std::string &src,
                                                      const std::string &tgt, size_t n) const {
  if (n == 0) return {};
  if (src == "zh" && tgt == "en") return {translate_zh_en(utf8::decode(text))};
  if (src == "en" && tgt == "zh") return translate_en_zh(text, n);
  throw Error(ErrorCode::BadParams, "mock translator supports zh->en and en->zh, not " + src + "->" + tgt);
}

std::string MockCorpusModel::translate_zh_en(std::u32string_view text) const {
  std::vector<std::string> tokens;
  auto emit = [&](const std::string &en) {
    for (auto &w : words_of(en)) tokens.push_back(std::move(w));
  };
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == U' ' || text[i] == U'\t' || text[i] == 0x3000) {
      ++i;
      continue;
    }
    const size_t room = text.size() - i;
    size_t used = 0;
    for (size_t len = std::min(max_zh_, room); len >= 2 && !used; --len) {
      auto it = by_zh_.find(std::u32string(text.substr(i, len)));
      if (it != by_zh_.end()) {
        emit(lexicon_[it->second].en);
        used = len;
      }
    }
    for (size_t len = std::min(max_zh_, room); len >= 2 && !used; --len) {
      auto group = by_length_.find(len);
      if (group == by_length_.end()) continue;
      for (size_t id : group->second) {
        const auto &zh = lexicon_[id].zh;
        size_t mismatches = 0, where = 0;
        for (size_t j = 0; j < len && mismatches < 2; ++j) {
          if (zh[j] != text[i + j]) {
            ++mismatches;
            where = j;
          }
        }
        if (mismatches != 1 || !is_ideograph(text[i + where])) continue;
        auto sensitive = sensitivity_.find(zh[where]);
        emit(sensitive != sensitivity_.end() ? sensitive->second : lexicon_[id].en);
        used = len;
        break;
      }
    }
    if (!used) {
      auto it = by_zh_.find(std::u32string(1, text[i]));
      if (it != by_zh_.end()) {
        emit(lexicon_[it->second].en);
      } else {
        tokens.push_back(utf8::encode(text[i]));
      }
      used = 1;
    }
    i += used;
  }
  std::string out;
  for (const auto &t : tokens) {
    if (!out.empty() && !attaches_left(t)) out += ' ';
    out += t;
  }
  return out;
}

std::vector<std::string> MockCorpusModel::translate_en_zh(const std::string &text, size_t n) const {
  std::vector<std::string> tokens;
  for (const auto &t : eval::tokenize_en(text)) tokens.push_back(lower(t));

  // Each piece is a lexicon id, or npos for a copied token.
  struct Piece {
    size_t id;
    std::string raw;
  };
  std::vector<Piece> pieces;
  size_t i = 0;
  while (i < tokens.size()) {
    size_t used = 0;
    for (size_t len = std::min(max_en_, tokens.size() - i); len >= 1 && !used; --len) {
      std::vector<std::string> key(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                   tokens.begin() + static_cast<std::ptrdiff_t>(i + len));
      auto it = by_en_.find(key);
      if (it != by_en_.end()) {
        pieces.push_back({it->second, {}});
        used = len;
      }
    }
    if (!used) {
      pieces.push_back({std::string::npos, tokens[i]});
      used = 1;
    }
    i += used;
  }

  auto render = [&](size_t swap_piece, size_t alt) {
    std::string out;
    for (size_t p = 0; p < pieces.size(); ++p) {
      if (pieces[p].id == std::string::npos) {
        out += pieces[p].raw;
        continue;
      }
      const auto &e = lexicon_[pieces[p].id];
      out += utf8::encode(p == swap_piece ? e.alternatives[alt] : e.zh);
    }
    return out;
  };

  std::vector<std::string> out = {render(std::string::npos, 0)};
  for (size_t p = 0; p < pieces.size() && out.size() < n; ++p) {
    if (pieces[p].id == std::string::npos) continue;
    const auto &alts = lexicon_[pieces[p].id].alternatives;
    for (size_t a = 0; a < alts.size() && out.size() < n; ++a) {
      auto v = render(p, a);
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    }
  }
  return out;
}

MockMaskedLM::MockMaskedLM(const std::vector<LexiconEntry> &lexicon) {
  double total = 0.0;
  for (const auto &e : lexicon) total += e.frequency;
  if (total <= 0.0) return;
  for (const auto &e : lexicon) probability_[utf8::encode(e.zh)] += e.frequency / total;
}

std::vector<double> MockMaskedLM::token_probabilities(const std::vector<std::string> &tokens) const {
  std::vector<double> out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) {
    auto it = probability_.find(t);
    out.push_back(it == probability_.end() ? 0.0 : it->second);
  }
  return out;
}

double MockSentenceSimilarity::similarity(const std::string &a, const std::string &b) const {
  static constexpr std::uint64_t kBegin = 0x110000, kEnd = 0x110001;
  auto bigrams = [](const std::string &s) {
    std::vector<std::uint64_t> seq = {kBegin};
    for (char32_t c : utf8::decode(s)) seq.push_back(c);
    seq.push_back(kEnd);
    std::set<std::uint64_t> out;
    for (size_t i = 0; i + 1 < seq.size(); ++i) out.insert(seq[i] << 21 | seq[i + 1]);
    return out;
  };
  const auto sa = bigrams(a), sb = bigrams(b);
  size_t common = 0;
  for (auto g : sa) common += sb.count(g);
  const size_t uni = sa.size() + sb.size() - common;
  return uni == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(uni);
}

}  // namespace vfa::models
