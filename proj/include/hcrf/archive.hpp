#pragma once
// Model archives: one JSON document holding everything needed to re-predict
// bitwise-identically, given the same resource files. Doubles are written
// in shortest round-trip form, so save -> load -> save reproduces the bytes.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcrf/classifier.hpp"
#include "hcrf/resource_set.hpp"

namespace hcrf {

inline constexpr int kArchiveFormatVersion = 1;

struct ModelArchive {
  Classifier classifier;
  ResourcePaths resource_paths;
  std::vector<ResourceFingerprint> fingerprints;
  std::vector<std::string> vocabulary_words;  // sorted training words, for introspection
};

nlohmann::ordered_json feature_config_json(const FeatureConfig& cfg);
FeatureConfig feature_config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json model_config_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json schema_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const nlohmann::ordered_json& j);

/// Sorted distinct normalized words of a corpus.
std::vector<std::string> corpus_words(const Corpus& docs, const FeatureResources& res);

std::string serialize_archive(const ModelArchive& archive);
/// Reloads resources from the recorded paths. Throws ConfigError when a
/// resource's content differs from training time and ParseError on a
/// malformed archive.
ModelArchive parse_archive(std::string_view text);

void save_archive(const ModelArchive& archive, const std::string& path);
ModelArchive load_archive(const std::string& path);

}  // namespace hcrf
