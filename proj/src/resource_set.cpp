#include "hcrf/resource_set.hpp"

#include <cstdio>

#include "hcrf/errors.hpp"
#include "hcrf/lexicon.hpp"
#include "hcrf/paralinguistic.hpp"
#include "hcrf/patterns.hpp"
#include "hcrf/resources.hpp"
#include "hcrf/text.hpp"

namespace hcrf {
namespace {

constexpr const char* kBuiltin = "<builtin>";

// Text of a resource file, or the built-in default when path is empty.
std::string source(const std::string& path, std::string_view builtin, const std::string& kind,
                   std::vector<ResourceFingerprint>& prints) {
  std::string text = path.empty() ? std::string(builtin) : read_file(path);
  prints.push_back({kind, path.empty() ? kBuiltin : path, fnv1a(text)});
  return text;
}

std::uint64_t parse_hex(const std::string& s) {
  std::uint64_t v = 0;
  if (std::sscanf(s.c_str(), "%llx", reinterpret_cast<unsigned long long*>(&v)) != 1) {
    throw ParseError("invalid checksum '" + s + "'");
  }
  return v;
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

LoadedResources load_resources(const ResourcePaths& paths) {
  LoadedResources out;
  auto res = std::make_shared<FeatureResources>();
  auto& prints = out.fingerprints;

  const auto stop = source(paths.stopwords, resources::stopwords_en(), "stopwords", prints);
  res->stopwords = resources::parse_stopwords(stop);
  const auto markers = source(paths.markers, resources::paralinguistic_markers(), "markers", prints);
  res->markers = MarkerMap::parse(markers, paths.markers.empty() ? kBuiltin : paths.markers);
  const auto mods = source(paths.modifiers, resources::modifiers_en(), "modifiers", prints);
  res->modifiers = Modifiers::parse(mods, paths.modifiers.empty() ? kBuiltin : paths.modifiers);
  const auto pos = source(paths.pos_lexicon, resources::pos_lexicon_en(), "pos_lexicon", prints);
  res->tagger = PosTagger::parse(pos, paths.pos_lexicon.empty() ? kBuiltin : paths.pos_lexicon);

  if (!paths.embeddings.empty()) {
    const auto text = read_file(paths.embeddings);
    prints.push_back({"embeddings", paths.embeddings, fnv1a(text)});
    res->embeddings = EmbeddingTable::parse(text, paths.embeddings, paths.embedding_case);
  }
  for (const auto& p : paths.lexicons) {
    const auto text = read_file(p);
    prints.push_back({"lexicon", p, fnv1a(text)});
    res->lexicons.push_back(Lexicon::parse(text, p, p));
  }
  out.resources = std::move(res);
  return out;
}

nlohmann::ordered_json resource_paths_json(const ResourcePaths& p) {
  return {{"embeddings", p.embeddings},
          {"embedding_case", p.embedding_case == CaseMode::kExact ? "exact" : "lower-fallback"},
          {"lexicons", p.lexicons},
          {"stopwords", p.stopwords},
          {"markers", p.markers},
          {"modifiers", p.modifiers},
          {"pos_lexicon", p.pos_lexicon}};
}

ResourcePaths resource_paths_from_json(const nlohmann::ordered_json& j) {
  ResourcePaths p;
  p.embeddings = j.at("embeddings").get<std::string>();
  p.embedding_case = j.at("embedding_case").get<std::string>() == "exact" ? CaseMode::kExact
                                                                          : CaseMode::kLowerFallback;
  p.lexicons = j.at("lexicons").get<std::vector<std::string>>();
  p.stopwords = j.at("stopwords").get<std::string>();
  p.markers = j.at("markers").get<std::string>();
  p.modifiers = j.at("modifiers").get<std::string>();
  p.pos_lexicon = j.at("pos_lexicon").get<std::string>();
  return p;
}

nlohmann::ordered_json fingerprints_json(const std::vector<ResourceFingerprint>& f) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : f) arr.push_back({{"kind", r.kind}, {"path", r.path}, {"fnv1a", hex64(r.checksum)}});
  return arr;
}

std::vector<ResourceFingerprint> fingerprints_from_json(const nlohmann::ordered_json& j) {
  std::vector<ResourceFingerprint> out;
  for (const auto& r : j) {
    out.push_back({r.at("kind").get<std::string>(), r.at("path").get<std::string>(),
                   parse_hex(r.at("fnv1a").get<std::string>())});
  }
  return out;
}

}  // namespace hcrf
