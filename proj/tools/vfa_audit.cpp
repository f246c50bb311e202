#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "vfa/attack/audit.hpp"
#include "vfa/error.hpp"
#include "vfa/eval/report.hpp"

// Exit codes: 0 every result verified, 1 usage error, 2 runtime error,
// 3 at least one result failed verification.
int main(int argc, char **argv) {
  CLI::App app{"Re-verify the recorded constraint clauses of attack results"};
  app.set_version_flag("--version", std::string("vfa-audit ") + VFA_VERSION);
  app.failure_message(CLI::FailureMessage::help);
  std::string results, json_out;
  bool quiet = false;
  app.add_option("--results", results, "Results JSONL written by `vfa attack`")->required();
  app.add_option("--json", json_out, "Write per-result findings as JSON");
  app.add_flag("--quiet", quiet, "Only print the summary line");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  try {
    vfa::attack::Auditor auditor;
    const auto summary = auditor.audit_all(vfa::eval::read_results(results));
    if (!quiet) {
      for (const auto &f : summary.findings) {
        for (const auto &p : f.problems) std::cout << f.id << ": " << p << '\n';
      }
    }
    if (!json_out.empty()) {
      std::ofstream out(json_out);
      if (!out) throw vfa::Error(vfa::ErrorCode::Io, "cannot write " + json_out);
      out << summary.to_json().dump(2) << '\n';
    }
    std::cout << summary.verified << "/" << summary.results << " results verified\n";
    return summary.all_verified() ? 0 : 3;
  } catch (const std::exception &e) {
    std::cerr << "vfa-audit: " << e.what() << '\n';
    return 2;
  }
}
