#include "vfa/eval/report.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "vfa/digest.hpp"
#include "vfa/error.hpp"
#include "vfa/eval/tokenize.hpp"
#include "vfa/metrics/bleu.hpp"
#include "vfa/metrics/image.hpp"
#include "vfa/utf8.hpp"

namespace vfa::eval {

using nlohmann::json;

namespace {

const char *const kColumns = "id,bleu_clean,bleu_adv,relative_decrease,success,zero_baseline,incomplete,ssim";

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) throw Error(ErrorCode::Parse, "unterminated quote in CSV row");
  return out;
}

double parse_double(const std::string &s) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error(ErrorCode::Parse, "bad number '" + s + "' in CSV");
  return v;
}

bool parse_bool(const std::string &s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw Error(ErrorCode::Parse, "bad flag '" + s + "' in CSV");
}

json aggregates_json(const EvalAggregates &a) {
  return {{"rows", a.rows},
          {"successes", a.successes},
          {"zero_baseline", a.zero_baseline},
          {"incomplete", a.incomplete},
          {"asr_denominator", a.asr_denominator},
          {"asr", a.asr},
          {"mean_bleu_clean", a.mean_bleu_clean},
          {"mean_bleu_adv", a.mean_bleu_adv},
          {"mean_relative_decrease", a.mean_relative_decrease},
          {"mean_ssim", a.mean_ssim},
          {"corpus_bleu_clean", a.corpus_bleu_clean},
          {"corpus_bleu_adv", a.corpus_bleu_adv}};
}

EvalAggregates aggregates_from(const json &j) {
  EvalAggregates a;
  a.rows = j.at("rows").get<size_t>();
  a.successes = j.at("successes").get<size_t>();
  a.zero_baseline = j.at("zero_baseline").get<size_t>();
  a.incomplete = j.at("incomplete").get<size_t>();
  a.asr_denominator = j.at("asr_denominator").get<size_t>();
  a.asr = j.at("asr").get<double>();
  a.mean_bleu_clean = j.at("mean_bleu_clean").get<double>();
  a.mean_bleu_adv = j.at("mean_bleu_adv").get<double>();
  a.mean_relative_decrease = j.at("mean_relative_decrease").get<double>();
  a.mean_ssim = j.at("mean_ssim").get<double>();
  a.corpus_bleu_clean = j.at("corpus_bleu_clean").get<double>();
  a.corpus_bleu_adv = j.at("corpus_bleu_adv").get<double>();
  return a;
}

}  // namespace

double sentence_ssim(const glyph::Renderer &renderer, const std::string &a, const std::string &b) {
  auto ra = renderer.render_sentence(std::string_view(a));
  auto rb = renderer.render_sentence(std::string_view(b));
  const int width = std::max(ra.width(), rb.width());
  const float bg = renderer.config().background;
  if (ra.width() < width) ra = ra.padded_to_width(width, bg);
  if (rb.width() < width) rb = rb.padded_to_width(width, bg);
  return metrics::ssim(ra, rb);
}

Evaluator::Evaluator(const glyph::Renderer &renderer, double alpha) : renderer_(renderer), alpha_(alpha) {
  report_.alpha = alpha;
  const auto render = attack::render_config_json(renderer.config());
  report_.config_digest = to_hex(sha256(
      json{{"alpha", alpha}, {"render", render}, {"geometry", renderer.geometry_digest()}}.dump()));
  report_.identities = {
      {"bleu", "sentence BLEU-4, uniform weights, zero counts smoothed to 0.1/total (method1)"},
      {"tokenizer", "treebank word tokenizer (NLTK word_tokenize rules)"},
      {"ssim", "mean SSIM, 7x7 uniform window, L=1, narrower render padded with background"},
      {"render", renderer.geometry_summary()},
      {"render_digest", renderer.geometry_digest()},
  };
}

void Evaluator::add(const attack::AttackResult &r) {
  EvalRow row;
  row.id = r.id;
  row.incomplete = r.incomplete;
  const std::vector<metrics::Tokens> refs{tokenize_en(r.y)};
  const auto clean = tokenize_en(r.victim_clean);
  const auto adv = tokenize_en(r.victim_adv);
  row.bleu_clean = metrics::sentence_bleu(clean, refs).value;
  row.bleu_adv = metrics::sentence_bleu(adv, refs).value;
  if (row.bleu_clean > 0.0) {
    row.relative_decrease = (row.bleu_clean - row.bleu_adv) / row.bleu_clean;
  } else {
    row.zero_baseline = true;
  }
  row.success = !row.incomplete && row.relative_decrease && *row.relative_decrease > alpha_;
  row.ssim = r.x_delta == r.x ? 1.0 : sentence_ssim(renderer_, r.x, r.x_delta);
  if (!row.incomplete) {
    hyp_clean_.push_back(clean);
    hyp_adv_.push_back(adv);
    refs_.push_back(refs);
  }
  if (std::find(report_.manifests.begin(), report_.manifests.end(), r.manifest_id) == report_.manifests.end()) {
    report_.manifests.push_back(r.manifest_id);
  }
  report_.rows.push_back(std::move(row));
}

EvalReport Evaluator::finish() const {
  EvalReport out = report_;
  auto &a = out.aggregates;
  a = {};
  a.rows = out.rows.size();
  size_t complete = 0, with_decrease = 0;
  for (const auto &row : out.rows) {
    a.mean_ssim += row.ssim;
    if (row.incomplete) {
      ++a.incomplete;
      continue;
    }
    ++complete;
    a.mean_bleu_clean += row.bleu_clean;
    a.mean_bleu_adv += row.bleu_adv;
    if (row.zero_baseline) {
      ++a.zero_baseline;
      continue;
    }
    ++with_decrease;
    a.mean_relative_decrease += *row.relative_decrease;
    ++a.asr_denominator;
    if (row.success) ++a.successes;
  }
  if (a.rows) a.mean_ssim /= static_cast<double>(a.rows);
  if (complete) {
    a.mean_bleu_clean /= static_cast<double>(complete);
    a.mean_bleu_adv /= static_cast<double>(complete);
    a.corpus_bleu_clean = metrics::corpus_bleu(hyp_clean_, refs_);
    a.corpus_bleu_adv = metrics::corpus_bleu(hyp_adv_, refs_);
  }
  if (with_decrease) a.mean_relative_decrease /= static_cast<double>(with_decrease);
  if (a.asr_denominator) a.asr = static_cast<double>(a.successes) / static_cast<double>(a.asr_denominator);
  return out;
}

EvalReport evaluate(const std::vector<attack::AttackResult> &results, const glyph::Renderer &renderer,
                    double alpha) {
  Evaluator e(renderer, alpha);
  for (const auto &r : results) e.add(r);
  return e.finish();
}

json EvalReport::to_json() const {
  json rows_json = json::array();
  for (const auto &r : rows) {
    rows_json.push_back({{"id", r.id},
                         {"bleu_clean", r.bleu_clean},
                         {"bleu_adv", r.bleu_adv},
                         {"relative_decrease", r.relative_decrease ? json(*r.relative_decrease) : json(nullptr)},
                         {"success", r.success},
                         {"zero_baseline", r.zero_baseline},
                         {"incomplete", r.incomplete},
                         {"ssim", r.ssim}});
  }
  return {{"alpha", alpha},
          {"config_digest", config_digest},
          {"identities", identities},
          {"manifests", manifests},
          {"manifest_id", manifest_id},
          {"aggregates", aggregates_json(aggregates)},
          {"rows", rows_json}};
}

EvalReport EvalReport::from_json(const json &j) {
  try {
    EvalReport r;
    r.alpha = j.at("alpha").get<double>();
    r.config_digest = j.at("config_digest").get<std::string>();
    r.identities = j.at("identities").get<std::map<std::string, std::string>>();
    r.manifests = j.at("manifests").get<std::vector<std::string>>();
    r.manifest_id = j.at("manifest_id").get<std::string>();
    r.aggregates = aggregates_from(j.at("aggregates"));
    for (const auto &row : j.at("rows")) {
      EvalRow e;
      e.id = row.at("id").get<std::string>();
      e.bleu_clean = row.at("bleu_clean").get<double>();
      e.bleu_adv = row.at("bleu_adv").get<double>();
      if (!row.at("relative_decrease").is_null()) e.relative_decrease = row.at("relative_decrease").get<double>();
      e.success = row.at("success").get<bool>();
      e.zero_baseline = row.at("zero_baseline").get<bool>();
      e.incomplete = row.at("incomplete").get<bool>();
      e.ssim = row.at("ssim").get<double>();
      r.rows.push_back(std::move(e));
    }
    return r;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::Parse, std::string("malformed report: ") + e.what());
  }
}

void EvalReport::write_csv(std::ostream &out) const {
  out << "# alpha=" << json(alpha).dump() << '\n';
  out << "# config_digest=" << json(config_digest).dump() << '\n';
  for (const auto &[k, v] : identities) out << "# identity." << k << '=' << json(v).dump() << '\n';
  out << "# manifests=" << json(manifests).dump() << '\n';
  out << "# manifest_id=" << json(manifest_id).dump() << '\n';
  const auto agg = aggregates_json(aggregates);
  for (const auto &[k, v] : agg.items()) out << "# aggregate." << k << '=' << v.dump() << '\n';
  out << kColumns << '\n';
  for (const auto &r : rows) {
    out << csv_field(r.id) << ',' << number(r.bleu_clean) << ',' << number(r.bleu_adv) << ','
        << (r.relative_decrease ? number(*r.relative_decrease) : "") << ',' << r.success << ','
        << r.zero_baseline << ',' << r.incomplete << ',' << number(r.ssim) << '\n';
  }
}

EvalReport EvalReport::read_csv(std::istream &in) {
  EvalReport r;
  json aggregates = json::object();
  std::string line;
  bool header = false;
  size_t number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    const auto where = "report CSV line " + std::to_string(number_of_line) + ": ";
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::Parse, where + "header without '='");
      const auto key = line.substr(2, eq - 2);
      json value;
      try {
        value = json::parse(line.substr(eq + 1));
      } catch (const json::exception &e) {
        throw Error(ErrorCode::Parse, where + e.what());
      }
      if (key == "alpha") r.alpha = value.get<double>();
      else if (key == "config_digest") r.config_digest = value.get<std::string>();
      else if (key == "manifests") r.manifests = value.get<std::vector<std::string>>();
      else if (key == "manifest_id") r.manifest_id = value.get<std::string>();
      else if (key.rfind("identity.", 0) == 0) r.identities[key.substr(9)] = value.get<std::string>();
      else if (key.rfind("aggregate.", 0) == 0) aggregates[key.substr(10)] = value;
      else throw Error(ErrorCode::Parse, where + "unknown header '" + key + "'");
      continue;
    }
    if (!header) {
      if (line != kColumns) throw Error(ErrorCode::Parse, where + "unexpected column header");
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw Error(ErrorCode::Parse, where + "expected 8 fields");
    EvalRow row;
    row.id = f[0];
    row.bleu_clean = parse_double(f[1]);
    row.bleu_adv = parse_double(f[2]);
    if (!f[3].empty()) row.relative_decrease = parse_double(f[3]);
    row.success = parse_bool(f[4]);
    row.zero_baseline = parse_bool(f[5]);
    row.incomplete = parse_bool(f[6]);
    row.ssim = parse_double(f[7]);
    r.rows.push_back(std::move(row));
  }
  if (!header) throw Error(ErrorCode::Parse, "report CSV has no column header");
  try {
    r.aggregates = aggregates_from(aggregates);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::Parse, std::string("report CSV aggregates: ") + e.what());
  }
  return r;
}

std::vector<attack::AttackResult> read_results(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open results " + path);
  std::vector<attack::AttackResult> out;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(attack::AttackResult::from_json(json::parse(line)));
    } catch (const json::exception &e) {
      throw Error(ErrorCode::Parse, path + ":" + std::to_string(number) + ": " + e.what());
    } catch (const Error &e) {
      throw Error(ErrorCode::Parse, path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace vfa::eval
