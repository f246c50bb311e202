#pragma once

#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

namespace vfa::simindex {

// Character -> radical (component) sets, with an inverted index so that
// radical_candidates() does not scan the whole table.
class GlyphDictionary {
 public:
  GlyphDictionary() = default;

  // UTF-8 TSV, one `<char>\t<radical>[,<radical>...]` record per line, `#`
  // comments and blank lines ignored. Repeated characters union their sets.
  // Throws Error(Io) when unreadable and Error(Parse) naming the line number.
  static GlyphDictionary load(const std::string &path);
  static GlyphDictionary parse(std::istream &in, const std::string &source = "<stream>");

  void add(char32_t c, const std::vector<char32_t> &radicals);

  // Sorted radicals of `c`; empty when `c` is absent.
  const std::vector<char32_t> &radicals(char32_t c) const;

  // Characters sharing at least one radical with `c`, excluding `c`, in
  // ascending codepoint order.
  std::vector<char32_t> radical_candidates(char32_t c) const;

  bool contains(char32_t c) const { return radicals_.count(c) != 0; }
  size_t size() const noexcept { return radicals_.size(); }

 private:
  std::unordered_map<char32_t, std::vector<char32_t>> radicals_;
  std::unordered_map<char32_t, std::vector<char32_t>> members_;
};

}  // namespace vfa::simindex
