#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "vfa/attack/audit.hpp"
#include "vfa/attack/runner.hpp"
#include "vfa/cli/pipeline.hpp"
#include "vfa/cli/settings.hpp"
#include "vfa/digest.hpp"
#include "vfa/error.hpp"
#include "vfa/eval/report.hpp"
#include "vfa/glyph/png.hpp"
#include "vfa/paths.hpp"
#include "vfa/simindex/candidates.hpp"
#include "vfa/simindex/repertoire.hpp"
#include "vfa/utf8.hpp"

using namespace vfa;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  bool explain = false;
  std::vector<std::string> fonts;
  std::optional<std::string> index;
  std::optional<std::string> repertoire;
};

struct AttackFlags {
  std::optional<double> alpha, beta, theta, epsilon, rate;
  std::optional<size_t> m, k, fanout;
  std::optional<std::string> order;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string manifest_path(const std::string &out) { return out + ".manifest.json"; }

void write_manifest(const std::string &out, json body, const std::string &id, const std::vector<std::string> &args,
                    const std::vector<std::string> &outputs) {
  body["manifest_id"] = id;
  body["tool"] = std::string("vfa ") + VFA_VERSION;
  body["argv"] = args;
  body["created_at"] = utc_now();
  body["outputs"] = outputs;
  std::ofstream f(manifest_path(out));
  if (!f) throw Error(ErrorCode::Io, "cannot write " + manifest_path(out));
  f << body.dump(2) << '\n';
}

void add_common(CLI::App *sub, Common &c, bool with_index) {
  sub->add_option("--config", c.config, "TOML configuration file");
  sub->add_flag("--explain-config", c.explain, "Print every setting with its origin (flag > file > default) and exit");
  sub->add_option("--font", c.fonts, "Font file (repeatable; first match wins)");
  sub->add_option("--repertoire", c.repertoire, "Character repertoire: file or range like U+4E00-U+9FFF");
  if (with_index) sub->add_option("--index", c.index, "Pixel index file written by build-index");
}

void add_attack_flags(CLI::App *sub, AttackFlags &a) {
  sub->add_option("--alpha", a.alpha, "Success threshold on the relative BLEU decrease");
  sub->add_option("--beta", a.beta, "Sentence-similarity floor for back-translations");
  sub->add_option("--theta", a.theta, "Perceptual floor");
  sub->add_option("--epsilon", a.epsilon, "Weight of the local perceptual terms");
  sub->add_option("--rate", a.rate, "Replacement rate bound (strict)");
  sub->add_option("--m", a.m, "Cosine search breadth");
  sub->add_option("--k", a.k, "MSE re-rank breadth");
  sub->add_option("--fanout", a.fanout, "Back-translations requested");
  sub->add_option("--importance-order", a.order, "Word attack order: asc or desc")
      ->check(CLI::IsMember({"asc", "desc"}));
}

cli::Settings make_settings(const Common &c, const AttackFlags *a = nullptr) {
  cli::Settings s;
  if (!c.config.empty()) s.load_file(c.config);
  if (!c.fonts.empty()) s.set("render.fonts", c.fonts);
  if (c.index) s.set("resources.index", *c.index);
  if (c.repertoire) s.set("resources.repertoire", *c.repertoire);
  if (a) {
    if (a->alpha) s.set("attack.alpha", *a->alpha);
    if (a->beta) s.set("attack.beta", *a->beta);
    if (a->theta) s.set("attack.theta", *a->theta);
    if (a->epsilon) s.set("attack.epsilon", *a->epsilon);
    if (a->rate) s.set("attack.rate", *a->rate);
    if (a->m) s.set("attack.m", *a->m);
    if (a->k) s.set("attack.k", *a->k);
    if (a->fanout) s.set("attack.fanout", *a->fanout);
    if (a->order) s.set("attack.importance_order", *a->order);
  }
  return s;
}

void explain(const cli::Settings &s) {
  const auto table = s.explain();
  for (const auto &[key, entry] : table.items()) {
    std::cout << std::left << std::setw(28) << key << ' ' << std::setw(8) << entry["origin"].get<std::string>() << ' '
              << entry["value"].dump() << '\n';
  }
}

char32_t single_char(const std::string &text) {
  const auto u = utf8::decode(text);
  if (u.size() != 1) throw Error(ErrorCode::BadParams, "--char needs exactly one character");
  return u[0];
}

int cmd_build_index(const cli::Settings &s, const std::string &out, const std::string &mode, uint32_t nlist,
                    uint32_t nprobe, std::optional<uint64_t> seed, const std::vector<std::string> &args) {
  glyph::Renderer renderer(s.render());
  const auto source = s.path("resources.repertoire");
  const auto chars = simindex::load_repertoire(source);
  simindex::IvfParams ivf;
  ivf.nlist = nlist;
  ivf.nprobe = nprobe;
  if (seed) ivf.seed = *seed;
  const auto index = simindex::PixelIndex::build(chars, renderer, simindex::parse_index_mode(mode), ivf);
  index.save(out);
  json body = {{"command", "build-index"},
               {"config_sha256", s.config_digest()},
               {"settings", s.effective()},
               {"geometry_digest", renderer.geometry_digest()},
               {"resources", {{"repertoire", {{"path", source}, {"sha256", file_digest_hex(source)}}}}},
               {"index_sha256", file_digest_hex(out)}};
  write_manifest(out, body, to_hex(sha256(body.dump())), args, {out});
  std::cerr << "indexed " << index.repertoire().size() << " characters (" << index.skipped().size()
            << " skipped), mode " << to_string(index.mode()) << " -> " << out << '\n';
  return 0;
}

int cmd_query(const cli::Settings &s, const std::string &ch, bool as_json) {
  glyph::Renderer renderer(s.render());
  const char32_t c = single_char(ch);
  std::optional<simindex::PixelIndex> index;
  const auto index_path = s.path("resources.index");
  if (!index_path.empty()) {
    index = simindex::PixelIndex::load(index_path, renderer.geometry_digest());
  } else {
    const auto chars = simindex::load_repertoire(s.path("resources.repertoire"));
    index = simindex::PixelIndex::build(chars, renderer, simindex::IndexMode::Exact);
  }
  const auto cfg = s.attack();
  const size_t m = std::min(cfg.m, index->repertoire().size() - 1);
  const size_t k = std::min(cfg.k, m);
  auto pix = simindex::pixel_candidates(c, *index, renderer, m, k);
  simindex::CandidateSet rad{c, {}};
  const auto radicals = s.path("resources.radicals");
  if (!radicals.empty()) rad = simindex::radical_candidates(c, simindex::GlyphDictionary::load(radicals));
  const auto merged = simindex::merge_candidates(rad, pix);
  if (as_json) {
    json out = json::array();
    for (const auto &cand : merged.candidates) {
      out.push_back({{"char", utf8::encode(cand.ch)},
                     {"codepoint", utf8::codepoint_label(cand.ch)},
                     {"source", simindex::to_string(cand.source)},
                     {"cosine", cand.cosine ? json(*cand.cosine) : json(nullptr)},
                     {"mse", cand.mse ? json(*cand.mse) : json(nullptr)}});
    }
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  std::cout << "# " << utf8::encode(c) << ' ' << utf8::codepoint_label(c) << " m=" << m << " k=" << k << '\n';
  std::cout << "char\tcodepoint\tsource\tcosine\tmse\n";
  for (const auto &cand : merged.candidates) {
    std::cout << utf8::encode(cand.ch) << '\t' << utf8::codepoint_label(cand.ch) << '\t'
              << simindex::to_string(cand.source) << '\t';
    if (cand.cosine) std::cout << std::setprecision(6) << *cand.cosine;
    std::cout << '\t';
    if (cand.mse) std::cout << std::setprecision(6) << *cand.mse;
    std::cout << '\n';
  }
  return 0;
}

int cmd_render(const cli::Settings &s, const std::string &text, const std::string &out) {
  glyph::Renderer renderer(s.render());
  glyph::write_png(renderer.render_sentence(std::string_view(text)), out);
  return 0;
}

int cmd_attack(const cli::Settings &s, const std::string &input, const std::string &out,
               const std::vector<std::string> &args) {
  const auto pairs = attack::read_corpus(input);
  cli::Pipeline pipeline(s, {false, "attack"});
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + out);
  size_t done = 0, successes = 0, incomplete = 0;
  attack::run_corpus(pipeline.engine(), pairs, s.workers(), s.debug_candidates(), [&](const attack::AttackResult &r) {
    f << r.to_json().dump() << '\n';
    ++done;
    successes += r.success;
    incomplete += r.incomplete;
  });
  f.close();
  if (!f) throw Error(ErrorCode::Io, "failed writing " + out);
  auto body = pipeline.manifest();
  body["input"] = {{"path", input}, {"sha256", file_digest_hex(input)}};
  write_manifest(out, body, pipeline.manifest_id(), args, {out});
  std::cerr << "attacked " << done << " sentences: " << successes << " successful, " << incomplete
            << " incomplete -> " << out << '\n';
  return 0;
}

int cmd_evaluate(const cli::Settings &s, const std::string &results_path, const std::string &csv,
                 const std::string &json_out, const std::vector<std::string> &args) {
  glyph::Renderer renderer(s.render());
  const auto results = eval::read_results(results_path);
  const double alpha = s.attack().alpha;
  auto report = eval::evaluate(results, renderer, alpha);
  json body = {{"command", "evaluate"},
               {"config_sha256", s.config_digest()},
               {"settings", s.effective()},
               {"geometry_digest", renderer.geometry_digest()},
               {"results", {{"path", results_path}, {"sha256", file_digest_hex(results_path)}}}};
  report.manifest_id = to_hex(sha256(body.dump()));
  std::vector<std::string> outputs;
  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + csv);
    report.write_csv(f);
    outputs.push_back(csv);
  }
  if (!json_out.empty()) {
    std::ofstream f(json_out);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + json_out);
    f << report.to_json().dump(2) << '\n';
    outputs.push_back(json_out);
  }
  for (const auto &o : outputs) write_manifest(o, body, report.manifest_id, args, outputs);
  const auto &a = report.aggregates;
  std::cout << "rows " << a.rows << "  ASR " << a.asr << " (" << a.successes << "/" << a.asr_denominator
            << ", zero baseline " << a.zero_baseline << ", incomplete " << a.incomplete << ")\n"
            << "mean BLEU clean " << a.mean_bleu_clean << "  adversarial " << a.mean_bleu_adv
            << "  mean relative decrease " << a.mean_relative_decrease << "\n"
            << "corpus BLEU clean " << a.corpus_bleu_clean << "  adversarial " << a.corpus_bleu_adv << "\n"
            << "mean SSIM " << a.mean_ssim << '\n';
  return 0;
}

int cmd_selfcheck(const cli::Settings &s, const std::string &input) {
  cli::Pipeline pipeline(s, {true, "selfcheck"});
  const auto pairs = attack::read_corpus(input);
  const auto first = attack::run_corpus(pipeline.engine(), pairs, s.workers(), true);
  const auto second = attack::run_corpus(pipeline.engine(), pairs, 1, true);
  const auto cfg = pipeline.engine().config();

  bool ok = true;
  auto line = [&](const std::string &name, bool pass, const std::string &detail) {
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  };

  size_t rate_bad = 0, word_bad = 0, selection_bad = 0;
  for (const auto &r : first) {
    std::set<size_t> words;
    for (const auto &p : r.plan.items) word_bad += !words.insert(p.word_index).second;
    if (!r.plan.items.empty() &&
        !(static_cast<double>(r.plan.items.size()) / static_cast<double>(r.plan.total_chars) < cfg.rate)) {
      ++rate_bad;
    }
    double best = r.sim_x_delta;
    for (const auto &c : *r.candidates) {
      if (c.sim && c.satisfies && *c.sim < best) ++selection_bad;
    }
  }
  bool same = first.size() == second.size();
  for (size_t i = 0; same && i < first.size(); ++i) same = first[i].to_json().dump() == second[i].to_json().dump();
  attack::Auditor auditor;
  const auto audit = auditor.audit_all(first);
  const auto report = eval::evaluate(first, pipeline.renderer(), cfg.alpha);

  line("rate bound", rate_bad == 0, std::to_string(rate_bad) + " plans at or above r");
  line("one replacement per word", word_bad == 0, std::to_string(word_bad) + " violations");
  line("selection rule", selection_bad == 0, std::to_string(selection_bad) + " logged candidates beat x_delta");
  line("audit", audit.all_verified(),
       std::to_string(audit.verified) + "/" + std::to_string(audit.results) + " results re-verified");
  line("determinism", same, same ? "two runs byte-identical" : "runs differ");
  std::cout << "INFO ASR " << report.aggregates.asr << " over " << report.aggregates.asr_denominator
            << " sentences, mean SSIM " << report.aggregates.mean_ssim << '\n';
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Visually similar character substitution attacks on machine translation"};
  app.set_version_flag("--version", std::string("vfa ") + VFA_VERSION);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  const std::vector<std::string> args(argv, argv + argc);

  Common common;
  AttackFlags flags;

  auto *build = app.add_subcommand("build-index", "Render a repertoire and write a pixel index");
  std::string build_out, mode = "exact";
  uint32_t nlist = 0, nprobe = 0;
  std::optional<uint64_t> seed;
  add_common(build, common, false);
  build->add_option("--out", build_out, "Index file to write")->required();
  build->add_option("--mode", mode, "exact or accelerated")->check(CLI::IsMember({"exact", "accelerated"}));
  build->add_option("--nlist", nlist, "Accelerated mode: number of lists (0: sqrt(n))");
  build->add_option("--nprobe", nprobe, "Accelerated mode: lists probed per query (0: half)");
  build->add_option("--seed", seed, "Accelerated mode: clustering seed");

  auto *query = app.add_subcommand("query-similar", "Print the candidate set of one character");
  std::string query_char;
  bool query_json = false;
  add_common(query, common, true);
  add_attack_flags(query, flags);
  query->add_option("--char", query_char, "Character to look up")->required();
  query->add_flag("--json", query_json, "Emit JSON");

  auto *render = app.add_subcommand("render", "Render text to an 8-bit grayscale PNG");
  std::string render_text, render_out;
  add_common(render, common, false);
  render->add_option("--text", render_text, "Text to render")->required();
  render->add_option("--out", render_out, "PNG file to write")->required();

  auto *attack_cmd = app.add_subcommand("attack", "Attack every sentence of a TSV corpus");
  std::string input, attack_out;
  bool mock = false, debug = false;
  std::optional<size_t> workers;
  add_common(attack_cmd, common, true);
  add_attack_flags(attack_cmd, flags);
  attack_cmd->add_option("--input", input, "Corpus: <source>\\t<reference> per line")->required();
  attack_cmd->add_option("--out", attack_out, "Results JSONL to write")->required();
  attack_cmd->add_flag("--mock", mock, "Use the bundled mock models instead of HTTP backends");
  attack_cmd->add_flag("--debug-candidates", debug, "Log every x_hat considered in each result");
  attack_cmd->add_option("--workers", workers, "Parallel sentences (0: logical CPUs)");

  auto *evaluate = app.add_subcommand("evaluate", "Score attack results: BLEU, ASR, SSIM");
  std::string results_path, csv_out, json_out;
  std::optional<double> eval_alpha;
  add_common(evaluate, common, false);
  evaluate->add_option("--results", results_path, "Results JSONL from attack")->required();
  evaluate->add_option("--out", csv_out, "Per-sentence CSV report");
  evaluate->add_option("--json", json_out, "JSON report");
  evaluate->add_option("--alpha", eval_alpha, "Success threshold on the relative BLEU decrease");

  auto *selfcheck = app.add_subcommand("selfcheck", "Run the end-to-end pipeline and print invariant status");
  std::string selfcheck_input = data_path("mock/corpus.tsv");
  bool selfcheck_mock = false;
  add_common(selfcheck, common, true);
  add_attack_flags(selfcheck, flags);
  selfcheck->add_flag("--mock", selfcheck_mock, "Use the bundled mock models and corpus");
  selfcheck->add_option("--input", selfcheck_input, "Corpus to attack");
  selfcheck->add_option("--workers", workers, "Parallel sentences (0: logical CPUs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  try {
    const bool attack_like = attack_cmd->parsed() || query->parsed() || selfcheck->parsed();
    auto settings = make_settings(common, attack_like ? &flags : nullptr);
    if (mock || selfcheck_mock) settings.set("run.mock", true);
    if (debug) settings.set("run.debug_candidates", true);
    if (workers) settings.set("run.workers", *workers);
    if (eval_alpha) settings.set("attack.alpha", *eval_alpha);
    if (common.explain) {
      explain(settings);
      return 0;
    }
    settings.attack();  // validate early

    if (build->parsed()) return cmd_build_index(settings, build_out, mode, nlist, nprobe, seed, args);
    if (query->parsed()) return cmd_query(settings, query_char, query_json);
    if (render->parsed()) return cmd_render(settings, render_text, render_out);
    if (attack_cmd->parsed()) return cmd_attack(settings, input, attack_out, args);
    if (evaluate->parsed()) {
      if (csv_out.empty() && json_out.empty()) {
        std::cerr << "evaluate: give --out and/or --json\n";
        return 1;
      }
      return cmd_evaluate(settings, results_path, csv_out, json_out, args);
    }
    if (selfcheck->parsed()) return cmd_selfcheck(settings, selfcheck_input);
  } catch (const Error &e) {
    std::cerr << "vfa: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "vfa: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
