#pragma once
// Loading feature resources from files, with content fingerprints so a model
// archive can detect that a resource changed since training.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcrf/embedding.hpp"
#include "hcrf/pipeline.hpp"

namespace hcrf {

/// Empty paths select the built-in resource (or none, for embeddings).
struct ResourcePaths {
  std::string embeddings;
  std::vector<std::string> lexicons;
  std::string stopwords;
  std::string markers;
  std::string modifiers;
  std::string pos_lexicon;
  CaseMode embedding_case = CaseMode::kLowerFallback;
};

struct ResourceFingerprint {
  std::string kind;
  std::string path;  // "<builtin>" for compiled-in defaults
  std::uint64_t checksum = 0;
  bool operator==(const ResourceFingerprint&) const = default;
};

struct LoadedResources {
  std::shared_ptr<FeatureResources> resources;
  std::vector<ResourceFingerprint> fingerprints;
};

/// Throws ParseError naming the file on unreadable or malformed input.
LoadedResources load_resources(const ResourcePaths& paths);

nlohmann::ordered_json resource_paths_json(const ResourcePaths& paths);
ResourcePaths resource_paths_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json fingerprints_json(const std::vector<ResourceFingerprint>& f);
std::vector<ResourceFingerprint> fingerprints_from_json(const nlohmann::ordered_json& j);

std::string hex64(std::uint64_t v);

}  // namespace hcrf
