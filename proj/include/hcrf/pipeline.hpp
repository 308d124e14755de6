#pragma once
// Transcript -> per-unit feature vectors.
//
// Enabled blocks are concatenated in a fixed order regardless of how they
// were requested:
//
//   bong | embedding | lexicon | pattern | paralinguistic
//
// The vocabulary (BoNG) and the standardizer are fitted on training
// documents only. Standardization covers every dense block; BoNG columns
// keep their TF-IDF values.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "hcrf/bong.hpp"
#include "hcrf/corpus.hpp"
#include "hcrf/embedding.hpp"
#include "hcrf/lexicon.hpp"
#include "hcrf/model.hpp"
#include "hcrf/paralinguistic.hpp"
#include "hcrf/patterns.hpp"
#include "hcrf/segment.hpp"
#include "hcrf/standardizer.hpp"
#include "hcrf/text.hpp"

namespace hcrf {

enum class FeatureBlock { kBong, kEmbedding, kLexicon, kPattern, kParalinguistic };

std::string_view block_name(FeatureBlock b);

/// Comma-separated block names; also accepts "all" and "ours" (every block
/// except bong). Returns blocks in canonical order without duplicates.
std::vector<FeatureBlock> parse_blocks(std::string_view list);
std::string format_blocks(const std::vector<FeatureBlock>& blocks);

struct FeatureConfig {
  std::int64_t threshold_ms = 300;
  bool whole_document = false;  // one unit per document instead of IPUs
  std::vector<FeatureBlock> blocks{FeatureBlock::kEmbedding, FeatureBlock::kLexicon, FeatureBlock::kPattern,
                                   FeatureBlock::kParalinguistic};
  bool standardize = true;
  BongOptions bong;
  std::vector<std::string> counted_tags = default_counted_tags();

  bool has(FeatureBlock b) const;
};

struct SchemaBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t width = 0;
  std::vector<std::string> features;
  bool operator==(const SchemaBlock&) const = default;
};

class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<SchemaBlock> blocks);

  const std::vector<SchemaBlock>& blocks() const { return blocks_; }
  std::size_t dim() const { return dim_; }
  const SchemaBlock* find(std::string_view name) const;
  /// "<block>:<feature>" for a column index.
  std::string feature_name(std::size_t column) const;

  /// Schema after concatenating 2w+1 neighbours: copies are named
  /// "<block>@<offset>" except the centre copy, which keeps its name.
  FeatureSchema with_context_window(std::size_t w) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<SchemaBlock> blocks_;
  std::size_t dim_ = 0;
};

struct FeatureResources {
  std::optional<EmbeddingTable> embeddings;
  std::vector<Lexicon> lexicons;
  Modifiers modifiers = Modifiers::defaults();
  std::unordered_set<std::string> stopwords;
  MarkerMap markers;
  PosTagger tagger;
  Normalizer normalizer = identity_normalizer();

  FeatureResources();
};

/// Words and POS tags of one unit after tokenization and normalization.
/// Transcript tags are used for tokens that stay a single word; everything
/// else is tagged by the resource tagger.
struct UnitText {
  std::vector<std::string> words;
  std::vector<std::string> tags;
};

UnitText prepare_unit(const Ipu& unit, const FeatureResources& res);

/// Schema for a configuration; vocab is required iff BoNG is enabled.
FeatureSchema build_schema(const FeatureConfig& cfg, const FeatureResources& res, const NGramVocabulary* vocab);

/// Raw (unstandardized) block-concatenated features of a list of units.
/// Throws ConfigError when a block's resources are missing and InvalidInput
/// on an empty unit list.
ObservationSequence build_sequence(const std::string& doc_id, const std::vector<Ipu>& units,
                                   const FeatureResources& res, const FeatureConfig& cfg,
                                   const NGramVocabulary* vocab);

class FeaturePipeline {
 public:
  FeaturePipeline(FeatureConfig cfg, std::shared_ptr<const FeatureResources> res);

  /// Fits the vocabulary and standardizer on training documents.
  void fit(const Corpus& train);
  /// Restores previously fitted state (model archives).
  void restore(std::optional<NGramVocabulary> vocab, Standardizer standardizer);

  bool fitted() const { return fitted_; }
  const FeatureConfig& config() const { return cfg_; }
  const FeatureResources& resources() const { return *res_; }
  const FeatureSchema& schema() const { return schema_; }
  const std::optional<NGramVocabulary>& vocabulary() const { return vocab_; }
  const Standardizer& standardizer() const { return standardizer_; }

  std::vector<Ipu> units(const Transcript& doc) const;
  ObservationSequence raw_sequence(const Transcript& doc) const;
  /// Standardized sequence; requires fit() or restore().
  ObservationSequence transform(const Transcript& doc) const;

  /// Fingerprint of the fitted state (vocabulary, IDF, standardizer).
  std::uint64_t fitted_checksum() const;

 private:
  FeatureConfig cfg_;
  std::shared_ptr<const FeatureResources> res_;
  std::optional<NGramVocabulary> vocab_;
  Standardizer standardizer_;
  FeatureSchema schema_;
  bool fitted_ = false;
};

}  // namespace hcrf
