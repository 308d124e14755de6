#include "hcrf/introspection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hcrf/errors.hpp"

namespace hcrf {
namespace {

struct EmbeddingSlice {
  std::size_t offset = 0;  // in theta's observation vector
  std::size_t dim = 0;     // embedding dimension, coverage flag excluded
  std::size_t base = 0;    // offset in the standardizer
};

EmbeddingSlice locate(const HcrfParameters& theta, const EmbeddingProbe& probe) {
  if (!probe.schema || !probe.table) throw ConfigError("embedding probe needs a schema and a table");
  if (probe.schema->dim() != theta.dim()) throw InvalidInput("feature schema does not match the model dimension");
  const auto* block = probe.schema->find("embedding");
  if (!block) throw ConfigError("model has no embedding block");
  EmbeddingSlice s{block->offset, block->width - 1, block->offset};
  if (s.dim != probe.table->dim()) throw ConfigError("embedding table dimension does not match the model");
  if (probe.standardizer) {
    const std::size_t d = probe.standardizer->dim();
    if (d == 0 || theta.dim() % d != 0) throw ConfigError("standardizer does not match the model dimension");
    s.base = s.offset % d;
  }
  return s;
}

double score(std::span<const double> w, std::span<const double> e, const EmbeddingSlice& s,
             const Standardizer* standardizer) {
  double total = 0.0;
  for (std::size_t k = 0; k < s.dim; ++k) {
    double z = e[k];
    if (standardizer) {
      const double sd = standardizer->stddev()[s.base + k];
      z = (z - standardizer->mean()[s.base + k]) / (sd > 0.0 ? sd : 1.0);
    }
    total += w[s.offset + k] * z;
  }
  return total;
}

}  // namespace

std::vector<std::vector<RankedFeature>> top_features_per_state(const HcrfParameters& theta,
                                                               const FeatureSchema& schema, std::size_t k) {
  if (schema.dim() != theta.dim()) throw InvalidInput("feature schema does not match the model dimension");
  std::vector<std::vector<RankedFeature>> out(theta.num_states());
  for (std::size_t h = 0; h < theta.num_states(); ++h) {
    const auto w = theta.obs(h);
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < w.size(); ++c) {
      if (w[c] > 0.0) cols.push_back(c);
    }
    std::stable_sort(cols.begin(), cols.end(), [&](auto a, auto b) { return w[a] > w[b]; });
    cols.resize(std::min(k, cols.size()));
    for (auto c : cols) out[h].push_back({c, schema.feature_name(c), w[c]});
  }
  return out;
}

std::vector<ScoredWord> activation_words(const HcrfParameters& theta, std::size_t state, const EmbeddingProbe& probe,
                                         const std::vector<std::string>& vocabulary, std::size_t k) {
  if (state >= theta.num_states()) throw InvalidInput("hidden state out of range");
  const auto slice = locate(theta, probe);
  std::vector<ScoredWord> scored;
  for (const auto& word : vocabulary) {
    const auto e = probe.table->lookup(word);
    if (!e) continue;
    scored.push_back({word, score(theta.obs(state), *e, slice, probe.standardizer)});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredWord& a, const ScoredWord& b) {
    return a.score != b.score ? a.score > b.score : a.word < b.word;
  });
  scored.erase(std::unique(scored.begin(), scored.end(), [](auto& a, auto& b) { return a.word == b.word; }),
               scored.end());
  scored.resize(std::min(k, scored.size()));
  return scored;
}

std::optional<std::vector<double>> word_state_profile(const std::string& word, const HcrfParameters& theta,
                                                      const EmbeddingProbe& probe) {
  const auto slice = locate(theta, probe);
  const auto e = probe.table->lookup(word);
  if (!e) return std::nullopt;
  std::vector<double> out;
  for (std::size_t h = 0; h < theta.num_states(); ++h) out.push_back(score(theta.obs(h), *e, slice, probe.standardizer));
  return out;
}

std::size_t StateCharacter::aligned_count() const {
  return static_cast<std::size_t>(std::count_if(aligned.begin(), aligned.end(), [](auto& a) { return a.has_value(); }));
}

StateCharacter state_character(const HcrfParameters& theta, std::optional<double> tau) {
  if (theta.num_labels() != 2) throw InvalidInput("state character needs exactly two labels");
  const std::size_t H = theta.num_states();
  StateCharacter sc;
  if (tau) {
    sc.tau = *tau;
  } else {
    double mean = 0.0, var = 0.0;
    for (Label y = 0; y < 2; ++y) {
      for (std::size_t h = 0; h < H; ++h) mean += theta.label_state(y, h);
    }
    mean /= static_cast<double>(2 * H);
    for (Label y = 0; y < 2; ++y) {
      for (std::size_t h = 0; h < H; ++h) var += std::pow(theta.label_state(y, h) - mean, 2);
    }
    sc.tau = std::sqrt(var / static_cast<double>(2 * H));
  }
  for (std::size_t h = 0; h < H; ++h) {
    const double m = theta.label_state(1, h) - theta.label_state(0, h);
    sc.margin.push_back(m);
    if (m > sc.tau) {
      sc.aligned.emplace_back(Label{1});
    } else if (-m > sc.tau) {
      sc.aligned.emplace_back(Label{0});
    } else {
      sc.aligned.emplace_back(std::nullopt);
    }
  }
  return sc;
}

nlohmann::ordered_json state_report_json(const HcrfParameters& theta, const LabelSet& labels,
                                         const FeatureSchema& schema, const EmbeddingProbe* probe,
                                         const std::vector<std::string>& vocabulary, const StateReportOptions& opts) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["labels"] = labels.names();
  j["hidden_states"] = theta.num_states();
  const bool binary = theta.num_labels() == 2;
  std::optional<StateCharacter> sc;
  if (binary) {
    sc = state_character(theta, opts.tau);
    j["tau"] = sc->tau;
  }
  const auto top = top_features_per_state(theta, schema, opts.top_k);
  const bool with_words = probe && schema.find("embedding");
  auto& states = j["states"] = nlohmann::ordered_json::array();
  for (std::size_t h = 0; h < theta.num_states(); ++h) {
    nlohmann::ordered_json s;
    s["state"] = h;
    std::vector<double> compat;
    for (Label y = 0; y < theta.num_labels(); ++y) compat.push_back(theta.label_state(y, h));
    s["label_compatibility"] = compat;
    if (sc) s["character"] = sc->aligned[h] ? labels.name(*sc->aligned[h]) : "neutral";
    auto& feats = s["top_features"] = nlohmann::ordered_json::array();
    for (const auto& f : top[h]) feats.push_back({{"feature", f.name}, {"weight", f.weight}});
    if (with_words) {
      auto& words = s["activation_words"] = nlohmann::ordered_json::array();
      for (const auto& w : activation_words(theta, h, *probe, vocabulary, opts.top_words)) {
        words.push_back({{"word", w.word}, {"score", w.score}});
      }
    }
    states.push_back(std::move(s));
  }
  auto& trans = j["transitions"] = nlohmann::ordered_json::array();
  for (Label y = 0; y < theta.num_labels(); ++y) {
    std::vector<std::vector<double>> m(theta.num_states(), std::vector<double>(theta.num_states()));
    for (std::size_t a = 0; a < theta.num_states(); ++a) {
      for (std::size_t b = 0; b < theta.num_states(); ++b) m[a][b] = theta.transition(y, a, b);
    }
    trans.push_back({{"label", labels.name(y)}, {"weights", m}});
  }
  if (with_words && !opts.profile_words.empty()) {
    auto& prof = j["word_profiles"] = nlohmann::ordered_json::array();
    for (const auto& w : opts.profile_words) {
      const auto p = word_state_profile(w, theta, *probe);
      if (p) {
        prof.push_back({{"word", w}, {"found", true}, {"scores", *p}});
      } else {
        prof.push_back({{"word", w}, {"found", false}});
      }
    }
  }
  return j;
}

std::string format_state_report(const nlohmann::ordered_json& r) {
  std::string out = "# hcrf-state-report 1\n";
  char line[512];
  const auto labels = r["labels"].get<std::vector<std::string>>();
  std::snprintf(line, sizeof line, "hidden states: %zu", r["hidden_states"].get<std::size_t>());
  out += line;
  if (r.contains("tau")) {
    std::snprintf(line, sizeof line, "   alignment margin tau: %.4f", r["tau"].get<double>());
    out += line;
  }
  out += "\n";
  for (const auto& s : r["states"]) {
    std::snprintf(line, sizeof line, "\nstate %zu", s["state"].get<std::size_t>());
    out += line;
    if (s.contains("character")) out += " [" + s["character"].get<std::string>() + "]";
    out += "\n  label compatibility:";
    const auto compat = s["label_compatibility"].get<std::vector<double>>();
    for (std::size_t y = 0; y < compat.size(); ++y) {
      std::snprintf(line, sizeof line, "  %s %+.4f", labels[y].c_str(), compat[y]);
      out += line;
    }
    out += "\n  top features:\n";
    for (const auto& f : s["top_features"]) {
      std::snprintf(line, sizeof line, "    %+9.4f  %s\n", f["weight"].get<double>(),
                    f["feature"].get<std::string>().c_str());
      out += line;
    }
    if (s.contains("activation_words")) {
      out += "  activation words:";
      for (const auto& w : s["activation_words"]) {
        std::snprintf(line, sizeof line, " %s(%.3f)", w["word"].get<std::string>().c_str(), w["score"].get<double>());
        out += line;
      }
      out += "\n";
    }
  }
  for (const auto& t : r["transitions"]) {
    out += "\ntransitions given " + t["label"].get<std::string>() + " [from x to]:\n";
    for (const auto& row : t["weights"]) {
      out += "   ";
      for (const auto& v : row) {
        std::snprintf(line, sizeof line, " %+9.4f", v.get<double>());
        out += line;
      }
      out += "\n";
    }
  }
  if (r.contains("word_profiles")) {
    out += "\nword profiles (score per state):\n";
    for (const auto& p : r["word_profiles"]) {
      std::snprintf(line, sizeof line, "  %-16s", p["word"].get<std::string>().c_str());
      out += line;
      if (!p["found"].get<bool>()) {
        out += " not in embedding table\n";
        continue;
      }
      for (const auto& v : p["scores"]) {
        std::snprintf(line, sizeof line, " %+8.3f", v.get<double>());
        out += line;
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace hcrf
