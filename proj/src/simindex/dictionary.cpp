#include "vfa/simindex/dictionary.hpp"

#include <algorithm>
#include <fstream>

#include "vfa/error.hpp"
#include "vfa/utf8.hpp"

namespace vfa::simindex {

namespace {

void insert_sorted(std::vector<char32_t> &v, char32_t c) {
  auto it = std::lower_bound(v.begin(), v.end(), c);
  if (it == v.end() || *it != c) v.insert(it, c);
}

std::u32string trim(std::u32string s) {
  auto space = [](char32_t c) { return c == U' ' || c == U'\t' || c == U'\r' || c == 0xFEFF; };
  while (!s.empty() && space(s.back())) s.pop_back();
  size_t start = 0;
  while (start < s.size() && space(s[start])) ++start;
  return s.substr(start);
}

}  // namespace

GlyphDictionary GlyphDictionary::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open glyph dictionary " + path);
  return parse(in, path);
}

GlyphDictionary GlyphDictionary::parse(std::istream &in, const std::string &source) {
  GlyphDictionary dict;
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string &why) {
    throw Error(ErrorCode::Parse, source + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::u32string text;
    try {
      text = trim(utf8::decode(line));
    } catch (const Error &) {
      fail("invalid UTF-8");
    }
    if (text.empty() || text[0] == U'#') continue;
    const size_t tab = text.find(U'\t');
    if (tab == std::u32string::npos) fail("expected <char>\\t<radical>[,<radical>...]");
    const std::u32string head = trim(text.substr(0, tab));
    if (head.size() != 1) fail("first field must be a single character");
    std::vector<char32_t> radicals;
    std::u32string field;
    const std::u32string rest = text.substr(tab + 1) + U",";
    for (char32_t c : rest) {
      if (c != U',') {
        field.push_back(c);
        continue;
      }
      field = trim(field);
      if (field.size() != 1) fail("each radical must be a single character");
      radicals.push_back(field[0]);
      field.clear();
    }
    dict.add(head[0], radicals);
  }
  return dict;
}

void GlyphDictionary::add(char32_t c, const std::vector<char32_t> &radicals) {
  if (radicals.empty()) throw Error(ErrorCode::Parse, "entry for " + utf8::codepoint_label(c) + " has no radicals");
  auto &set = radicals_[c];
  for (char32_t r : radicals) {
    insert_sorted(set, r);
    insert_sorted(members_[r], c);
  }
}

const std::vector<char32_t> &GlyphDictionary::radicals(char32_t c) const {
  static const std::vector<char32_t> none;
  auto it = radicals_.find(c);
  return it == radicals_.end() ? none : it->second;
}

std::vector<char32_t> GlyphDictionary::radical_candidates(char32_t c) const {
  std::vector<char32_t> out;
  for (char32_t r : radicals(c)) {
    const auto &members = members_.at(r);
    out.insert(out.end(), members.begin(), members.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), c), out.end());
  return out;
}

}  // namespace vfa::simindex
