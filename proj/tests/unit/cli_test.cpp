#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "vfa/glyph/png.hpp"
#include "vfa/paths.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr
};

Run run(const std::string &binary, const std::string &args) {
  const std::string cmd = binary + " " + args + " 2>&1";
  Run r;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Run run_vfa(const std::string &args) { return run(VFA_CLI, args); }

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "vfa_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::string kConfig = "--config " + vfa::data_path("mock/vfa.toml");

}  // namespace

TEST(Cli, HelpListsSubcommands) {
  const auto r = run_vfa("--help");
  EXPECT_EQ(r.code, 0);
  for (const char *sub : {"build-index", "query-similar", "render", "attack", "evaluate", "selfcheck"}) {
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
  }
}

TEST(Cli, UnknownFlagIsAUsageError) {
  const auto r = run_vfa("render --text hi --out x.png --no-such-flag");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("Usage"), std::string::npos);
  EXPECT_EQ(run_vfa("").code, 1);
}

TEST(Cli, AttackWithoutIndexNamesBuildIndex) {
  const auto out = scratch() / "noindex.jsonl";
  const auto r = run_vfa("attack " + kConfig + " --input " + vfa::data_path("mock/corpus.tsv") + " --out " + out.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("build-index"), std::string::npos) << r.out;

  const auto missing = run_vfa("attack " + kConfig + " --index /nonexistent.vfaidx --input " +
                           vfa::data_path("mock/corpus.tsv") + " --out " + out.string());
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.out.find("build-index"), std::string::npos) << missing.out;
}

TEST(Cli, SelfcheckMockPasses) {
  const auto r = run_vfa("selfcheck --mock");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(Cli, RenderWritesGrayscalePng) {
  const auto out = scratch() / "render.png";
  fs::remove(out);
  const auto r = run_vfa("render --text 未来 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string bytes = slurp(out);
  std::vector<std::uint8_t> data(bytes.begin(), bytes.end());
  const auto image = vfa::glyph::decode_png(data);
  EXPECT_EQ(image.width(), 48);
  EXPECT_EQ(image.height(), 24);
}

TEST(Cli, ExplainConfigShowsOrigins) {
  const auto r = run_vfa("attack " + kConfig + " --theta 0.9 --input x --out y --explain-config");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("attack.theta                 flag"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("attack.rate                  file"), std::string::npos);
  EXPECT_NE(r.out.find("attack.max_trials_per_word   default"), std::string::npos);
}

TEST(Cli, BuildQueryAttackEvaluateAudit) {
  const auto dir = scratch();
  const auto index = dir / "gb.vfaidx";
  auto r = run_vfa("build-index " + kConfig + " --out " + index.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(index.string() + ".manifest.json"));

  r = run_vfa("query-similar " + kConfig + " --index " + index.string() + " --char 未 --m 50 --k 10");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("末"), std::string::npos);

  const auto results = dir / "results.jsonl";
  const std::string attack = "attack " + kConfig + " --index " + index.string() + " --input " +
                             vfa::data_path("mock/corpus.tsv") + " --debug-candidates --out ";
  ASSERT_EQ(run_vfa(attack + results.string()).code, 0);
  const auto again = dir / "again.jsonl";
  ASSERT_EQ(run_vfa(attack + again.string() + " --workers 3").code, 0);
  EXPECT_EQ(slurp(results), slurp(again));

  const auto manifest = nlohmann::json::parse(slurp(results.string() + ".manifest.json"));
  const auto first = nlohmann::json::parse(slurp(results).substr(0, slurp(results).find('\n')));
  EXPECT_EQ(first["manifest_id"], manifest["manifest_id"]);
  EXPECT_TRUE(manifest.contains("created_at"));

  const auto csv = dir / "report.csv";
  const auto json = dir / "report.json";
  r = run_vfa("evaluate --results " + results.string() + " --out " + csv.string() + " --json " + json.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("ASR"), std::string::npos);
  const auto report = nlohmann::json::parse(slurp(json));
  EXPECT_EQ(report["rows"].size(), 50u);
  EXPECT_EQ(report["manifests"][0], manifest["manifest_id"]);

  r = run(VFA_AUDIT, "--results " + results.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("50/50 results verified"), std::string::npos);

  // A tampered file fails the audit.
  auto text = slurp(results);
  const auto pos = text.find("\"success\":true");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 14, "\"success\":false");
  const auto tampered = dir / "tampered.jsonl";
  std::ofstream(tampered) << text;
  EXPECT_EQ(run(VFA_AUDIT, "--results " + tampered.string() + " --quiet").code, 3);
}
