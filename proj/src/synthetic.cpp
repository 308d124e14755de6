#include "hcrf/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "hcrf/errors.hpp"
#include "hcrf/lexicon.hpp"
#include "hcrf/resources.hpp"
#include "hcrf/rng.hpp"

namespace hcrf {
namespace {

constexpr const char* kMarkers[] = {"*chuckling*", "*falling intonation*", "*rising intonation*",
                                    "*word elongation*"};

double binomial_pmf(std::size_t n, std::size_t k, double p) {
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c * std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
}

const std::string& pick(const std::vector<std::string>& words, Rng& rng) {
  return words[uniform_index(rng, words.size())];
}

double symmetric(Rng& rng, double scale) { return (2.0 * uniform01(rng) - 1.0) * scale; }

}  // namespace

SyntheticSpec SyntheticSpec::defaults() {
  SyntheticSpec s;
  s.positive_words = {"great", "excellent", "wonderful", "amazing", "brilliant", "superb", "fantastic", "delightful"};
  s.negative_words = {"awful", "terrible", "boring", "horrible", "dreadful", "mediocre", "painful", "disappointing"};
  s.neutral_words = {"camera", "scene",  "actor",  "plot",    "story",   "music",  "ending",  "character",
                     "director", "dialogue", "script", "screen", "sequel", "trailer", "budget", "studio"};
  return s;
}

void SyntheticSpec::validate() const {
  if (positive_words.empty() || negative_words.empty()) throw ConfigError("synthetic spec has no polarity tokens");
  if (neutral_words.empty()) throw ConfigError("synthetic spec has no neutral tokens");
  std::set<std::string> seen;
  for (const auto* list : {&positive_words, &negative_words, &neutral_words}) {
    for (const auto& w : *list) {
      if (w.empty() || !seen.insert(w).second) throw ConfigError("synthetic word lists overlap or contain '" + w + "'");
    }
  }
  if (num_docs == 0) throw ConfigError("synthetic spec needs at least one document");
  if (min_segments < 1 || max_segments < min_segments) throw ConfigError("invalid segment count range");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw ConfigError("tail_fraction must be in (0, 1]");
  if (!(opposite_prob >= 0.0 && opposite_prob <= 1.0)) throw ConfigError("opposite_prob must be in [0, 1]");
  if (!(positive_prior > 0.0 && positive_prior < 1.0)) throw ConfigError("positive_prior must be in (0, 1)");
  if (tokens_per_segment < 1) throw ConfigError("tokens_per_segment must be >= 1");
  if (!(marker_prob >= 0.0 && marker_prob <= 1.0)) throw ConfigError("marker_prob must be in [0, 1]");
  if (embedding_dim < 3) throw ConfigError("embedding_dim must be >= 3");
  if (!(embedding_noise >= 0.0)) throw ConfigError("embedding_noise must be >= 0");
}

std::size_t SyntheticSpec::tail_length(std::size_t L) const {
  const double t = std::ceil(tail_fraction * static_cast<double>(L) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(t), 1, L);
}

nlohmann::json SyntheticSpec::to_json() const {
  return {{"num_docs", num_docs},
          {"min_segments", min_segments},
          {"max_segments", max_segments},
          {"tail_fraction", tail_fraction},
          {"opposite_prob", opposite_prob},
          {"positive_prior", positive_prior},
          {"tokens_per_segment", tokens_per_segment},
          {"marker_prob", marker_prob},
          {"embedding_dim", embedding_dim},
          {"embedding_noise", embedding_noise},
          {"positive_words", positive_words},
          {"negative_words", negative_words},
          {"neutral_words", neutral_words}};
}

SyntheticSpec SyntheticSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("synthetic spec must be a JSON object");
  static const std::set<std::string> kKeys{"num_docs",       "min_segments",       "max_segments", "tail_fraction",
                                           "opposite_prob",  "positive_prior",     "tokens_per_segment",
                                           "marker_prob",    "embedding_dim",      "embedding_noise",
                                           "positive_words", "negative_words",     "neutral_words"};
  for (const auto& [k, _] : j.items()) {
    if (!kKeys.contains(k)) throw ConfigError("unknown synthetic spec key '" + k + "'");
  }
  SyntheticSpec s = defaults();
  try {
    s.num_docs = j.value("num_docs", s.num_docs);
    s.min_segments = j.value("min_segments", s.min_segments);
    s.max_segments = j.value("max_segments", s.max_segments);
    s.tail_fraction = j.value("tail_fraction", s.tail_fraction);
    s.opposite_prob = j.value("opposite_prob", s.opposite_prob);
    s.positive_prior = j.value("positive_prior", s.positive_prior);
    s.tokens_per_segment = j.value("tokens_per_segment", s.tokens_per_segment);
    s.marker_prob = j.value("marker_prob", s.marker_prob);
    s.embedding_dim = j.value("embedding_dim", s.embedding_dim);
    s.embedding_noise = j.value("embedding_noise", s.embedding_noise);
    s.positive_words = j.value("positive_words", s.positive_words);
    s.negative_words = j.value("negative_words", s.negative_words);
    s.neutral_words = j.value("neutral_words", s.neutral_words);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid synthetic spec: ") + e.what());
  }
  s.validate();
  return s;
}

double order_insensitive_bayes_accuracy(const SyntheticSpec& spec) {
  spec.validate();
  // (L, #positive, #negative) -> joint mass of (positive, negative) label.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::pair<double, double>> mass;
  const double p_len = 1.0 / static_cast<double>(spec.max_segments - spec.min_segments + 1);
  for (std::size_t L = spec.min_segments; L <= spec.max_segments; ++L) {
    const std::size_t T = spec.tail_length(L);
    const std::size_t E = L - T;
    for (std::size_t k = 0; k <= E; ++k) {
      const double p = p_len * binomial_pmf(E, k, spec.opposite_prob);
      mass[{L, T, k}].first += spec.positive_prior * p;
      mass[{L, k, T}].second += (1.0 - spec.positive_prior) * p;
    }
  }
  double acc = 0.0;
  for (const auto& [_, m] : mass) acc += std::max(m.first, m.second);
  return acc;
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  SyntheticCorpus out;
  out.bayes_accuracy = order_insensitive_bayes_accuracy(spec);

  char id[32];
  for (std::size_t d = 0; d < spec.num_docs; ++d) {
    const bool positive = uniform01(rng) < spec.positive_prior;
    const auto L = static_cast<std::size_t>(uniform_int(rng, static_cast<std::int64_t>(spec.min_segments),
                                                        static_cast<std::int64_t>(spec.max_segments)));
    const std::size_t T = spec.tail_length(L);
    const SegmentKind own = positive ? SegmentKind::kPositive : SegmentKind::kNegative;
    const SegmentKind opposite = positive ? SegmentKind::kNegative : SegmentKind::kPositive;

    std::vector<SegmentKind> kinds(L, own);
    for (std::size_t s = 0; s + T < L; ++s) {
      kinds[s] = uniform01(rng) < spec.opposite_prob ? opposite : SegmentKind::kNeutral;
    }

    Transcript doc;
    std::snprintf(id, sizeof id, "syn%05zu", d);
    doc.doc_id = id;
    doc.valences = {positive ? static_cast<double>(uniform_int(rng, 4, 5))
                             : static_cast<double>(uniform_int(rng, 1, 2))};
    std::int64_t now = 0;
    for (std::size_t s = 0; s < L; ++s) {
      if (s > 0) now += uniform_int(rng, 600, 1200);
      const std::size_t polar_at =
          kinds[s] == SegmentKind::kNeutral ? spec.tokens_per_segment : uniform_index(rng, spec.tokens_per_segment);
      const std::int64_t segment_start = now;
      for (std::size_t t = 0; t < spec.tokens_per_segment; ++t) {
        if (t > 0) now += uniform_int(rng, 20, 120);
        std::string word;
        if (t == polar_at) {
          word = pick(kinds[s] == SegmentKind::kPositive ? spec.positive_words : spec.negative_words, rng);
        } else {
          word = pick(spec.neutral_words, rng);
        }
        const std::int64_t end = now + uniform_int(rng, 150, 350);
        doc.tokens.push_back({word, now, end, ""});
        now = end;
      }
      if (uniform01(rng) < spec.marker_prob) {
        doc.markers.push_back({kMarkers[uniform_index(rng, std::size(kMarkers))], segment_start});
      }
    }
    out.corpus.push_back(std::move(doc));
    out.segments.push_back(std::move(kinds));
  }

  out.embeddings = EmbeddingTable(spec.embedding_dim);
  out.lexicon = Lexicon("synthetic", {"so"});
  auto noisy = [&](std::size_t axis, double magnitude) {
    std::vector<double> v(spec.embedding_dim);
    for (auto& x : v) x = symmetric(rng, spec.embedding_noise);
    v[axis] += magnitude;
    return v;
  };
  for (const auto& w : spec.positive_words) {
    out.embeddings.add(w, noisy(0, 1.0));
    out.lexicon.add(w, {3.0});
  }
  for (const auto& w : spec.negative_words) {
    out.embeddings.add(w, noisy(1, 1.0));
    out.lexicon.add(w, {-3.0});
  }
  for (const auto& w : spec.neutral_words) {
    std::vector<double> v(spec.embedding_dim);
    for (std::size_t k = 0; k < spec.embedding_dim; ++k) v[k] = symmetric(rng, k < 2 ? spec.embedding_noise : 0.5);
    out.embeddings.add(w, std::move(v));
  }
  return out;
}

}  // namespace hcrf
