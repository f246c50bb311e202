#include "vfa/simindex/repertoire.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "vfa/error.hpp"
#include "vfa/utf8.hpp"

namespace vfa::simindex {

std::vector<char32_t> load_repertoire(const std::string &source) {
  std::vector<char32_t> out;
  static const std::regex range(R"(^(?:U\+)?([0-9A-Fa-f]{1,6})\s*(?:-|\.\.)\s*(?:U\+)?([0-9A-Fa-f]{1,6})$)");
  std::smatch m;
  if (std::regex_match(source, m, range)) {
    const auto lo = std::stoul(m[1].str(), nullptr, 16);
    const auto hi = std::stoul(m[2].str(), nullptr, 16);
    if (lo > hi || hi > 0x10FFFF) throw Error(ErrorCode::Parse, "bad codepoint range " + source);
    for (auto c = lo; c <= hi; ++c) {
      if (c >= 0xD800 && c <= 0xDFFF) continue;
      out.push_back(static_cast<char32_t>(c));
    }
    return out;
  }

  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::Io, "cannot open repertoire file " + source);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    std::u32string text;
    try {
      text = utf8::decode(line);
    } catch (const Error &) {
      throw Error(ErrorCode::Parse, source + ":" + std::to_string(line_no) + ": invalid UTF-8");
    }
    for (char32_t c : text) {
      if (c == U' ' || c == U'\t' || c == U'\r' || c == 0xFEFF || c == 0x3000) continue;
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace vfa::simindex
