#pragma once

#include <json.hpp>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vfa/attack/result.hpp"
#include "vfa/glyph/cache.hpp"

namespace vfa::attack {

struct AuditFinding {
  std::string id;
  std::vector<std::string> problems;  // empty: verified
  // Which clauses were recomputed rather than only checked for consistency.
  bool quality_recomputed = false;
  bool semantic_recomputed = false;
  bool visual_recomputed = false;
};

struct AuditSummary {
  size_t results = 0;
  size_t verified = 0;
  std::vector<AuditFinding> findings;

  bool all_verified() const noexcept { return verified == results; }
  nlohmann::json to_json() const;
};

// Re-derives each result's constraint clauses from the result alone: BLEU from
// the recorded outputs and reference, the mock similarity from the texts, the
// surrogate perceptual score by re-rendering with the recorded render
// settings, and the plan rules (one substitution per word, rate bound,
// substitution-only diff). Scores from remote backends cannot be recomputed
// offline and are checked for consistency with their thresholds only.
class Auditor {
 public:
  Auditor();
  ~Auditor();

  AuditFinding audit(const AttackResult &result);
  AuditSummary audit_all(const std::vector<AttackResult> &results);

 private:
  struct RenderSetup {
    std::unique_ptr<glyph::Renderer> renderer;
    std::unique_ptr<glyph::GlyphCache> cache;
  };
  const glyph::GlyphCache *glyphs_for(const nlohmann::json &render, std::vector<std::string> &problems);

  std::map<std::string, RenderSetup> renderers_;
};

}  // namespace vfa::attack
