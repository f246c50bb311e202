#include "vfa/cli/pipeline.hpp"

#include <filesystem>

#include "vfa/digest.hpp"
#include "vfa/error.hpp"
#include "vfa/models/http.hpp"
#include "vfa/models/mock.hpp"
#include "vfa/simindex/repertoire.hpp"

namespace vfa::cli {

using nlohmann::json;

namespace {

json file_entry(const std::string &path) { return {{"path", path}, {"sha256", file_digest_hex(path)}}; }

}  // namespace

Pipeline::Pipeline(const Settings &settings, PipelineOptions options)
    : settings_(settings.effective()), config_digest_(settings.config_digest()), command_(options.command) {
  settings_.erase("run.workers");  // parallelism never changes results
  const auto attack_config = settings.attack();
  renderer_ = std::make_unique<glyph::Renderer>(settings.render());
  glyphs_ = std::make_unique<glyph::GlyphCache>(*renderer_);
  resources_ = json::object();

  const auto radicals = settings.path("resources.radicals");
  if (!radicals.empty()) {
    dictionary_ = simindex::GlyphDictionary::load(radicals);
    resources_["radicals"] = file_entry(radicals);
  }

  const auto index_path = settings.path("resources.index");
  if (!index_path.empty()) {
    if (!std::filesystem::exists(index_path)) {
      throw Error(ErrorCode::Io, "pixel index " + index_path + " does not exist; create it with `vfa build-index`");
    }
    index_ = simindex::PixelIndex::load(index_path, renderer_->geometry_digest());
    resources_["index"] = file_entry(index_path);
  } else if (options.build_missing_index) {
    const auto source = settings.path("resources.repertoire");
    const auto chars = simindex::load_repertoire(source);
    index_ = simindex::PixelIndex::build(chars, *renderer_, simindex::IndexMode::Exact);
    resources_["index"] = {{"built_from", file_entry(source)}, {"mode", "exact"}};
  } else {
    throw Error(ErrorCode::Io,
                "no pixel index configured; create one with `vfa build-index --out <file>` and pass --index <file>");
  }
  resources_["index"]["characters"] = index_->repertoire().size();

  const auto backends = settings.backends();
  if (backends.perceptual.empty()) {
    metric_ = std::make_unique<metrics::SurrogatePerceptual>();
  } else {
    metric_ = std::make_unique<models::HttpPerceptual>(backends.endpoint(backends.perceptual));
  }

  if (settings.mock()) {
    const auto lexicon = settings.path("mock.lexicon");
    const auto sensitivity = settings.path("mock.sensitivity");
    auto model = models::MockCorpusModel::load(lexicon, sensitivity);
    std::vector<std::u32string> words;
    for (const auto &e : model.lexicon()) words.push_back(e.zh);
    segmenter_ = std::make_unique<models::LongestMatchSegmenter>(words, "mock-lexicon");
    mlm_ = std::make_unique<models::MockMaskedLM>(model.lexicon());
    aux_ = std::make_unique<models::MockCorpusModel>(model);
    victim_ = std::make_unique<models::MockCorpusModel>(std::move(model));
    similarity_ = std::make_unique<models::MockSentenceSimilarity>();
    resources_["mock"] = {{"lexicon", file_entry(lexicon)}, {"sensitivity", file_entry(sensitivity)}};
  } else {
    auto need = [](const std::string &url, const char *role) {
      if (url.empty()) {
        throw Error(ErrorCode::BadConfig, std::string("backends.") + role + " is not set; configure it or use --mock");
      }
      return url;
    };
    victim_ = std::make_unique<models::HttpTranslator>(backends.endpoint(need(backends.victim, "victim")));
    aux_ = std::make_unique<models::HttpTranslator>(backends.endpoint(need(backends.aux, "aux")));
    mlm_ = std::make_unique<models::HttpMaskedLM>(backends.endpoint(need(backends.mlm, "mlm")));
    similarity_ =
        std::make_unique<models::HttpSentenceSimilarity>(backends.endpoint(need(backends.similarity, "similarity")));
    const auto words = settings.path("resources.segmenter");
    segmenter_ = std::make_unique<models::LongestMatchSegmenter>(models::LongestMatchSegmenter::load(words));
    resources_["segmenter"] = file_entry(words);
  }

  provider_ = std::make_unique<attack::CandidateProvider>(radicals.empty() ? nullptr : &dictionary_, &*index_,
                                                          *glyphs_, *metric_, attack_config.m, attack_config.k);
  manifest_id_ = to_hex(sha256(manifest().dump()));
  attack::Backends b{victim_.get(), aux_.get(), mlm_.get(), similarity_.get(), segmenter_.get()};
  engine_ = std::make_unique<attack::AttackEngine>(attack_config, b, *glyphs_, *metric_, *provider_, resources_,
                                                   manifest_id_);
}

Pipeline::~Pipeline() = default;

json Pipeline::manifest() const {
  return {{"command", command_},
          {"config_sha256", config_digest_},
          {"settings", settings_},
          {"geometry_digest", renderer_->geometry_digest()},
          {"resources", resources_}};
}

}  // namespace vfa::cli
