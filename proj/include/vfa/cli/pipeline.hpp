#pragma once

#include <json.hpp>
#include <memory>
#include <optional>
#include <string>

#include "vfa/attack/candidate_provider.hpp"
#include "vfa/attack/engine.hpp"
#include "vfa/cli/settings.hpp"
#include "vfa/glyph/cache.hpp"
#include "vfa/metrics/perceptual.hpp"
#include "vfa/models/backends.hpp"
#include "vfa/models/segmenter.hpp"
#include "vfa/simindex/dictionary.hpp"
#include "vfa/simindex/pixel_index.hpp"

namespace vfa::cli {

struct PipelineOptions {
  // Without resources.index, build an exact in-memory index over
  // resources.repertoire instead of failing.
  bool build_missing_index = false;
  // Recorded in the manifest, e.g. "attack".
  std::string command = "attack";
};

// Everything one attack run needs, assembled from settings. Immutable once
// constructed.
class Pipeline {
 public:
  explicit Pipeline(const Settings &settings, PipelineOptions options = {});
  ~Pipeline();

  const glyph::Renderer &renderer() const noexcept { return *renderer_; }
  const glyph::GlyphCache &glyphs() const noexcept { return *glyphs_; }
  const metrics::PerceptualMetric &metric() const noexcept { return *metric_; }
  const simindex::GlyphDictionary &dictionary() const noexcept { return dictionary_; }
  const simindex::PixelIndex &index() const noexcept { return *index_; }
  const attack::CandidateProvider &candidates() const noexcept { return *provider_; }
  const attack::AttackEngine &engine() const noexcept { return *engine_; }
  const models::Translator &victim() const noexcept { return *victim_; }
  const models::SentenceSimilarity &similarity() const noexcept { return *similarity_; }

  // Digests and identities of every artifact the run reads.
  const nlohmann::json &resources() const noexcept { return resources_; }
  // Deterministic id over command, effective settings and resources.
  const std::string &manifest_id() const noexcept { return manifest_id_; }
  // Manifest body without timestamps.
  nlohmann::json manifest() const;

 private:
  nlohmann::json settings_;
  std::string config_digest_;
  std::string command_;
  std::unique_ptr<glyph::Renderer> renderer_;
  std::unique_ptr<glyph::GlyphCache> glyphs_;
  std::unique_ptr<metrics::PerceptualMetric> metric_;
  simindex::GlyphDictionary dictionary_;
  std::optional<simindex::PixelIndex> index_;
  std::unique_ptr<models::Translator> victim_;
  std::unique_ptr<models::Translator> aux_;
  std::unique_ptr<models::MaskedLM> mlm_;
  std::unique_ptr<models::SentenceSimilarity> similarity_;
  std::unique_ptr<models::Segmenter> segmenter_;
  std::unique_ptr<attack::CandidateProvider> provider_;
  std::unique_ptr<attack::AttackEngine> engine_;
  nlohmann::json resources_;
  std::string manifest_id_;
};

}  // namespace vfa::cli
