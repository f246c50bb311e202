#include "vfa/eval/tokenize.hpp"

#include <boost/regex.hpp>

#include <locale>

#include "vfa/utf8.hpp"

static_assert(sizeof(wchar_t) == sizeof(char32_t), "tokenizer assumes 32-bit wchar_t");

namespace vfa::eval {

namespace {

struct Rule {
  boost::wregex pattern;
  std::wstring format;
};

std::locale unicode_locale() {
  try {
    return std::locale("C.UTF-8");
  } catch (const std::runtime_error &) {
    return std::locale::classic();
  }
}

// Python's "$" (no MULTILINE) also matches before a single trailing newline.
constexpr const wchar_t *kEnd = LR"((?=\n?\z))";

boost::wregex compile(const std::wstring &pattern) {
  boost::wregex re;
  re.imbue(unicode_locale());
  re.assign(pattern, boost::regex::perl);
  return re;
}

Rule rule(const std::wstring &pattern, const std::wstring &format) { return {compile(pattern), format}; }

struct Rules {
  std::vector<Rule> starting_quotes;
  std::vector<Rule> punctuation;
  Rule parens;
  Rule double_dashes;
  std::vector<Rule> ending_quotes;
  std::vector<Rule> contractions;

  Rules()
      : parens(rule(LR"([\]\[\(\)\{\}\<\>])", L" $& ")), double_dashes(rule(L"--", L" -- ")) {
    const std::wstring end = kEnd;
    starting_quotes = {
        rule(L"([«“‘„]|[`]+)", L" $1 "),
        rule(LR"(^")", L"``"),
        rule(L"(``)", L" $1 "),
        rule(LR"(([ \(\[{<])("|'{2}))", L"$1 `` "),
        rule(LR"((?i)(?<!\w)(')(?!(?:re|ve|ll|m|t|s|d|n)\b)(?=\w))", L"$1 "),
    };
    punctuation = {
        rule(LR"(([^\.])(\.)([\]\)}>"'»”’ ]*)\s*)" + end, L"$1 $2 $3 "),
        rule(LR"(([:,])([^\d]))", L" $1 $2"),
        rule(LR"(([:,]))" + end, L" $1 "),
        rule(LR"(\.{2,})", L" $& "),
        rule(LR"([;@#$%&])", L" $& "),
        rule(LR"([\x{2012}-\x{2015}])", L" $& "),
        rule(LR"(([^\.])(\.)([\]\)}>"']*)\s*)" + end, L"$1 $2$3 "),
        rule(LR"([?!])", L" $& "),
        rule(LR"(([^'])' )", L"$1 ' "),
        rule(LR"([*])", L" $& "),
    };
    ending_quotes = {
        rule(L"([»”’])", L" $1 "),
        rule(L"''", L" '' "),
        rule(LR"(")", L" '' "),
        rule(LR"(\s+)", L" "),
        rule(LR"(([^' ])('[sS]|'[mM]|'[dD]|') )", L"$1 $2 "),
        rule(LR"(([^' ])('ll|'LL|'re|'RE|'ve|'VE|n't|N'T) )", L"$1 $2 "),
    };
    for (const wchar_t *p : {LR"((?i)\b(can)(?#X)(not)\b)", LR"((?i)\b(d)(?#X)('ye)\b)",
                             LR"((?i)\b(gim)(?#X)(me)\b)", LR"((?i)\b(gon)(?#X)(na)\b)",
                             LR"((?i)\b(got)(?#X)(ta)\b)", LR"((?i)\b(lem)(?#X)(me)\b)",
                             LR"((?i)\b(more)(?#X)('n)\b)", LR"((?i)\b(wan)(?#X)(na)(?=\s))",
                             LR"((?i) ('t)(?#X)(is)\b)", LR"((?i) ('t)(?#X)(was)\b)"}) {
      contractions.push_back(rule(p, L" $1 $2 "));
    }
  }
};

const Rules &rules() {
  static const Rules instance;
  return instance;
}

void apply(std::wstring &text, const Rule &r) {
  text = boost::regex_replace(text, r.pattern, r.format, boost::format_perl);
}

// Whitespace as understood by Python's str.split().
bool is_space(wchar_t c) {
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x1C: case 0x1D: case 0x1E: case 0x1F:
    case 0x20: case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029: case 0x202F: case 0x205F:
    case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

}  // namespace

std::vector<std::string> tokenize_en(std::string_view text) {
  const std::u32string decoded = utf8::decode(text);
  std::wstring s(decoded.begin(), decoded.end());
  const Rules &r = rules();
  for (const auto &rule : r.starting_quotes) apply(s, rule);
  for (const auto &rule : r.punctuation) apply(s, rule);
  apply(s, r.parens);
  apply(s, r.double_dashes);
  s = L" " + s + L" ";
  for (const auto &rule : r.ending_quotes) apply(s, rule);
  for (const auto &rule : r.contractions) apply(s, rule);

  std::vector<std::string> tokens;
  std::u32string current;
  for (wchar_t c : s) {
    if (is_space(c)) {
      if (!current.empty()) tokens.push_back(utf8::encode(current));
      current.clear();
    } else {
      current.push_back(static_cast<char32_t>(c));
    }
  }
  if (!current.empty()) tokens.push_back(utf8::encode(current));
  return tokens;
}

}  // namespace vfa::eval
