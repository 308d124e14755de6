#include "hcrf/pipeline.hpp"

#include <algorithm>
#include <cstring>

#include <spdlog/spdlog.h>

#include "hcrf/errors.hpp"
#include "hcrf/resources.hpp"

namespace hcrf {
namespace {

constexpr FeatureBlock kAllBlocks[] = {FeatureBlock::kBong, FeatureBlock::kEmbedding, FeatureBlock::kLexicon,
                                       FeatureBlock::kPattern, FeatureBlock::kParalinguistic};

void append(std::vector<double>& dst, const std::vector<double>& src) { dst.insert(dst.end(), src.begin(), src.end()); }

std::uint64_t hash_doubles(const std::vector<double>& v, std::uint64_t h) {
  for (double d : v) {
    char bytes[sizeof(double)];
    std::memcpy(bytes, &d, sizeof d);
    h = fnv1a(std::string_view(bytes, sizeof bytes), h);
  }
  return h;
}

std::size_t feature_width(const FeatureConfig& cfg, const FeatureResources& res, const NGramVocabulary* vocab) {
  std::size_t dim = 0;
  for (auto b : cfg.blocks) {
    switch (b) {
      case FeatureBlock::kBong:
        if (!vocab) throw ConfigError("BoNG block enabled but no vocabulary fitted");
        dim += vocab->size();
        break;
      case FeatureBlock::kEmbedding:
        if (!res.embeddings) throw ConfigError("embedding block enabled but no embedding table loaded");
        dim += res.embeddings->dim() + 1;
        break;
      case FeatureBlock::kLexicon: dim += LexiconChannels::names().size(); break;
      case FeatureBlock::kPattern: dim += 6 + cfg.counted_tags.size(); break;
      case FeatureBlock::kParalinguistic: dim += MarkerMap::categories().size(); break;
    }
  }
  return dim;
}

}  // namespace

std::string_view block_name(FeatureBlock b) {
  switch (b) {
    case FeatureBlock::kBong: return "bong";
    case FeatureBlock::kEmbedding: return "embedding";
    case FeatureBlock::kLexicon: return "lexicon";
    case FeatureBlock::kPattern: return "pattern";
    case FeatureBlock::kParalinguistic: return "paralinguistic";
  }
  return "unknown";
}

std::vector<FeatureBlock> parse_blocks(std::string_view list) {
  std::vector<bool> on(std::size(kAllBlocks), false);
  for (const auto& raw : split(list, ',')) {
    const std::string name(trim(raw));
    if (name.empty()) continue;
    if (name == "all") {
      std::fill(on.begin(), on.end(), true);
      continue;
    }
    if (name == "ours") {
      std::fill(on.begin() + 1, on.end(), true);
      continue;
    }
    bool found = false;
    for (std::size_t i = 0; i < std::size(kAllBlocks); ++i) {
      if (block_name(kAllBlocks[i]) == name) {
        on[i] = true;
        found = true;
      }
    }
    if (!found) throw ConfigError("unknown feature block '" + name + "'");
  }
  std::vector<FeatureBlock> out;
  for (std::size_t i = 0; i < on.size(); ++i) {
    if (on[i]) out.push_back(kAllBlocks[i]);
  }
  if (out.empty()) throw ConfigError("no feature blocks enabled");
  return out;
}

std::string format_blocks(const std::vector<FeatureBlock>& blocks) {
  std::string s;
  for (auto b : blocks) s += (s.empty() ? "" : ",") + std::string(block_name(b));
  return s;
}

bool FeatureConfig::has(FeatureBlock b) const { return std::find(blocks.begin(), blocks.end(), b) != blocks.end(); }

FeatureSchema::FeatureSchema(std::vector<SchemaBlock> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.offset != dim_ || b.width != b.features.size()) {
      throw ConfigError("feature schema block '" + b.name + "' is inconsistent");
    }
    dim_ += b.width;
  }
}

const SchemaBlock* FeatureSchema::find(std::string_view name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

std::string FeatureSchema::feature_name(std::size_t column) const {
  for (const auto& b : blocks_) {
    if (column >= b.offset && column < b.offset + b.width) return b.name + ":" + b.features[column - b.offset];
  }
  throw InvalidInput("feature column out of range");
}

FeatureSchema FeatureSchema::with_context_window(std::size_t w) const {
  if (w == 0) return *this;
  std::vector<SchemaBlock> out;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < 2 * w + 1; ++k) {
    const long long rel = static_cast<long long>(k) - static_cast<long long>(w);
    for (const auto& b : blocks_) {
      SchemaBlock copy = b;
      if (rel != 0) copy.name += "@" + std::string(rel > 0 ? "+" : "") + std::to_string(rel);
      copy.offset = offset;
      offset += copy.width;
      out.push_back(std::move(copy));
    }
  }
  return FeatureSchema(std::move(out));
}

FeatureResources::FeatureResources() : stopwords(resources::default_stopwords()) {}

UnitText prepare_unit(const Ipu& unit, const FeatureResources& res) {
  UnitText out;
  for (std::size_t i = 0; i < unit.tokens.size(); ++i) {
    auto words = tokenize(unit.tokens[i]);
    const bool tagged = words.size() == 1 && i < unit.pos.size() && !unit.pos[i].empty();
    for (auto& w : words) {
      std::string norm = res.normalizer(w);
      if (norm.empty()) continue;
      out.tags.push_back(tagged ? unit.pos[i] : res.tagger.tag_word(norm));
      out.words.push_back(std::move(norm));
    }
  }
  return out;
}

FeatureSchema build_schema(const FeatureConfig& cfg, const FeatureResources& res, const NGramVocabulary* vocab) {
  std::vector<SchemaBlock> blocks;
  std::size_t offset = 0;
  auto add = [&](FeatureBlock b, std::vector<std::string> names) {
    const std::size_t width = names.size();
    blocks.push_back({std::string(block_name(b)), offset, width, std::move(names)});
    offset += width;
  };
  for (auto b : cfg.blocks) {
    switch (b) {
      case FeatureBlock::kBong:
        if (!vocab) throw ConfigError("BoNG block enabled but no vocabulary fitted");
        add(b, vocab->terms());
        break;
      case FeatureBlock::kEmbedding: {
        if (!res.embeddings) throw ConfigError("embedding block enabled but no embedding table loaded");
        std::vector<std::string> names;
        for (std::size_t i = 0; i < res.embeddings->dim(); ++i) names.push_back("e" + std::to_string(i));
        names.push_back("coverage");
        add(b, std::move(names));
        break;
      }
      case FeatureBlock::kLexicon:
        add(b, LexiconChannels::names());
        break;
      case FeatureBlock::kPattern:
        add(b, pattern_feature_names(cfg.counted_tags));
        break;
      case FeatureBlock::kParalinguistic:
        add(b, MarkerMap::categories());
        break;
    }
  }
  return FeatureSchema(std::move(blocks));
}

ObservationSequence build_sequence(const std::string& doc_id, const std::vector<Ipu>& units,
                                   const FeatureResources& res, const FeatureConfig& cfg,
                                   const NGramVocabulary* vocab) {
  if (units.empty()) throw InvalidInput("document '" + doc_id + "' has no units");
  const std::size_t dim = feature_width(cfg, res, vocab);
  std::vector<double> values;
  values.reserve(units.size() * dim);
  for (const auto& u : units) {
    const UnitText text = prepare_unit(u, res);
    const std::size_t before = values.size();
    for (auto b : cfg.blocks) {
      switch (b) {
        case FeatureBlock::kBong: append(values, vectorize_bong(text.words, *vocab)); break;
        case FeatureBlock::kEmbedding: append(values, embed_unit(text.words, *res.embeddings, res.stopwords)); break;
        case FeatureBlock::kLexicon: append(values, lexicon_features(text.words, res.lexicons, res.modifiers)); break;
        case FeatureBlock::kPattern:
          append(values, pattern_features(text.words, text.tags, res.modifiers, cfg.counted_tags));
          break;
        case FeatureBlock::kParalinguistic: append(values, paralinguistic_features(u.para_events, res.markers)); break;
      }
    }
    if (values.size() - before != dim) throw ConfigError("feature width disagrees with schema");
  }
  return ObservationSequence(doc_id, dim, std::move(values));
}

FeaturePipeline::FeaturePipeline(FeatureConfig cfg, std::shared_ptr<const FeatureResources> res)
    : cfg_(std::move(cfg)), res_(std::move(res)) {
  if (!res_) throw ConfigError("feature pipeline needs resources");
  if (cfg_.blocks.empty()) throw ConfigError("no feature blocks enabled");
  if (!cfg_.whole_document && cfg_.threshold_ms <= 0) throw ConfigError("pause threshold must be positive");
  if (cfg_.has(FeatureBlock::kEmbedding) && !res_->embeddings) {
    throw ConfigError("embedding block enabled but no embedding table loaded");
  }
  if (cfg_.has(FeatureBlock::kLexicon) && res_->lexicons.empty()) {
    spdlog::warn("lexicon block enabled without lexicons; its channels will be zero");
  }
}

std::vector<Ipu> FeaturePipeline::units(const Transcript& doc) const {
  if (cfg_.whole_document) return {whole_document_unit(doc)};
  return segment_into_ipus(doc, cfg_.threshold_ms);
}

ObservationSequence FeaturePipeline::raw_sequence(const Transcript& doc) const {
  if (cfg_.has(FeatureBlock::kBong) && !vocab_) throw ConfigError("pipeline used before fitting");
  return build_sequence(doc.doc_id, units(doc), *res_, cfg_, vocab_ ? &*vocab_ : nullptr);
}

void FeaturePipeline::fit(const Corpus& train) {
  if (train.empty()) throw InvalidInput("cannot fit the feature pipeline on an empty corpus");
  vocab_.reset();
  if (cfg_.has(FeatureBlock::kBong)) {
    std::vector<std::vector<std::string>> docs;
    for (const auto& doc : train) docs.push_back(prepare_unit(whole_document_unit(doc), *res_).words);
    vocab_ = fit_bong(docs, cfg_.bong);
  }
  schema_ = build_schema(cfg_, *res_, vocab_ ? &*vocab_ : nullptr);

  std::vector<bool> enabled(schema_.dim(), cfg_.standardize);
  if (const auto* b = schema_.find("bong")) {
    std::fill(enabled.begin() + static_cast<long>(b->offset), enabled.begin() + static_cast<long>(b->offset + b->width),
              false);
  }
  std::vector<double> rows;
  for (const auto& doc : train) {
    const auto seq = raw_sequence(doc);
    rows.insert(rows.end(), seq.values().begin(), seq.values().end());
  }
  standardizer_ = Standardizer::fit(rows, schema_.dim(), enabled);
  fitted_ = true;
}

void FeaturePipeline::restore(std::optional<NGramVocabulary> vocab, Standardizer standardizer) {
  vocab_ = std::move(vocab);
  schema_ = build_schema(cfg_, *res_, vocab_ ? &*vocab_ : nullptr);
  if (standardizer.dim() != schema_.dim()) throw ConfigError("restored standardizer does not match the schema");
  standardizer_ = std::move(standardizer);
  fitted_ = true;
}

ObservationSequence FeaturePipeline::transform(const Transcript& doc) const {
  if (!fitted_) throw ConfigError("pipeline used before fitting");
  const auto raw = raw_sequence(doc);
  return ObservationSequence(raw.doc_id(), raw.dim(), standardizer_.apply(raw.values()));
}

std::uint64_t FeaturePipeline::fitted_checksum() const {
  std::uint64_t h = fnv1a("hcrf-fitted-state");
  if (vocab_) {
    for (std::size_t i = 0; i < vocab_->size(); ++i) {
      h = fnv1a(vocab_->terms()[i], h);
      h = fnv1a(std::to_string(vocab_->doc_freq()[i]), h);
    }
    h = hash_doubles(vocab_->idf(), h);
  }
  h = hash_doubles(standardizer_.mean(), h);
  h = hash_doubles(standardizer_.stddev(), h);
  return h;
}

}  // namespace hcrf
