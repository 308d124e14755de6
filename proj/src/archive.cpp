#include "hcrf/archive.hpp"

#include <fstream>
#include <set>

#include "hcrf/errors.hpp"
#include "hcrf/segment.hpp"
#include "hcrf/text.hpp"

namespace hcrf {

using ojson = nlohmann::ordered_json;

ojson feature_config_json(const FeatureConfig& c) {
  return {{"threshold_ms", c.threshold_ms},
          {"unit", c.whole_document ? "document" : "ipu"},
          {"blocks", format_blocks(c.blocks)},
          {"standardize", c.standardize},
          {"bong", {{"max_order", c.bong.max_order}, {"max_features", c.bong.max_features}, {"min_df", c.bong.min_df}}},
          {"counted_tags", c.counted_tags}};
}

FeatureConfig feature_config_from_json(const ojson& j) {
  FeatureConfig c;
  c.threshold_ms = j.at("threshold_ms").get<std::int64_t>();
  c.whole_document = j.at("unit").get<std::string>() == "document";
  c.blocks = parse_blocks(j.at("blocks").get<std::string>());
  c.standardize = j.at("standardize").get<bool>();
  c.bong.max_order = j.at("bong").at("max_order").get<std::size_t>();
  c.bong.max_features = j.at("bong").at("max_features").get<std::size_t>();
  c.bong.min_df = j.at("bong").at("min_df").get<std::size_t>();
  c.counted_tags = j.at("counted_tags").get<std::vector<std::string>>();
  return c;
}

ojson model_config_json(const ModelConfig& c) {
  const auto& h = c.hcrf;
  return {{"kind", model_kind_name(c.kind)},
          {"hcrf",
           {{"hidden_states", h.num_hidden_states},
            {"context_window", h.context_window},
            {"l2", h.l2_lambda},
            {"max_iterations", h.max_iterations},
            {"grad_tolerance", h.grad_tolerance},
            {"seed", h.seed},
            {"init_scale", h.init_scale},
            {"restarts", h.restarts}}},
          {"logreg",
           {{"C", c.logreg.C},
            {"grad_tolerance", c.logreg.grad_tolerance},
            {"max_iterations", c.logreg.max_iterations},
            {"seed", c.logreg.seed}}},
          {"grids",
           {{"l2", c.l2_grid},
            {"hidden_states", c.hidden_state_grid},
            {"context_window", c.context_window_grid},
            {"C", c.c_grid},
            {"inner_folds", c.inner_folds}}}};
}

ModelConfig model_config_from_json(const ojson& j) {
  ModelConfig c;
  c.kind = parse_model_kind(j.at("kind").get<std::string>());
  const auto& h = j.at("hcrf");
  c.hcrf.num_hidden_states = h.at("hidden_states").get<std::size_t>();
  c.hcrf.context_window = h.at("context_window").get<std::size_t>();
  c.hcrf.l2_lambda = h.at("l2").get<double>();
  c.hcrf.max_iterations = h.at("max_iterations").get<int>();
  c.hcrf.grad_tolerance = h.at("grad_tolerance").get<double>();
  c.hcrf.seed = h.at("seed").get<std::uint64_t>();
  c.hcrf.init_scale = h.at("init_scale").get<double>();
  c.hcrf.restarts = h.at("restarts").get<int>();
  const auto& l = j.at("logreg");
  c.logreg.C = l.at("C").get<double>();
  c.logreg.grad_tolerance = l.at("grad_tolerance").get<double>();
  c.logreg.max_iterations = l.at("max_iterations").get<int>();
  c.logreg.seed = l.at("seed").get<std::uint64_t>();
  const auto& g = j.at("grids");
  c.l2_grid = g.at("l2").get<std::vector<double>>();
  c.hidden_state_grid = g.at("hidden_states").get<std::vector<std::size_t>>();
  c.context_window_grid = g.at("context_window").get<std::vector<std::size_t>>();
  c.c_grid = g.at("C").get<std::vector<double>>();
  c.inner_folds = g.at("inner_folds").get<std::size_t>();
  return c;
}

ojson schema_json(const FeatureSchema& schema) {
  ojson blocks = ojson::array();
  for (const auto& b : schema.blocks()) {
    blocks.push_back({{"name", b.name}, {"offset", b.offset}, {"width", b.width}, {"features", b.features}});
  }
  return {{"format_version", 1}, {"dim", schema.dim()}, {"blocks", blocks}};
}

FeatureSchema schema_from_json(const ojson& j) {
  std::vector<SchemaBlock> blocks;
  for (const auto& b : j.at("blocks")) {
    blocks.push_back({b.at("name").get<std::string>(), b.at("offset").get<std::size_t>(),
                      b.at("width").get<std::size_t>(), b.at("features").get<std::vector<std::string>>()});
  }
  FeatureSchema s(std::move(blocks));
  if (s.dim() != j.at("dim").get<std::size_t>()) throw ParseError("schema dimension disagrees with its blocks");
  return s;
}

std::vector<std::string> corpus_words(const Corpus& docs, const FeatureResources& res) {
  std::set<std::string> words;
  for (const auto& d : docs) {
    for (auto& w : prepare_unit(whole_document_unit(d), res).words) words.insert(std::move(w));
  }
  return {words.begin(), words.end()};
}

std::string serialize_archive(const ModelArchive& a) {
  const auto& c = a.classifier;
  ojson j;
  j["format"] = "hcrf-model";
  j["format_version"] = kArchiveFormatVersion;
  j["kind"] = model_kind_name(c.kind);
  j["labels"] = c.labels.names();
  j["model_config"] = model_config_json(c.config);
  j["priors"] = c.priors;
  j["resources"] = resource_paths_json(a.resource_paths);
  j["resource_fingerprints"] = fingerprints_json(a.fingerprints);
  if (c.pipeline) {
    const auto& p = *c.pipeline;
    ojson fitted;
    fitted["feature_config"] = feature_config_json(p.config());
    fitted["schema"] = schema_json(p.schema());
    if (p.vocabulary()) {
      const auto& v = *p.vocabulary();
      fitted["vocabulary"] = {{"num_docs", v.num_docs()},
                              {"max_order", v.max_order()},
                              {"terms", v.terms()},
                              {"doc_freq", v.doc_freq()}};
    }
    fitted["standardizer"] = {{"mean", p.standardizer().mean()}, {"stddev", p.standardizer().stddev()}};
    fitted["checksum"] = hex64(p.fitted_checksum());
    j["features"] = std::move(fitted);
  }
  if (c.hcrf) {
    const auto& t = *c.hcrf;
    j["hcrf"] = {{"num_labels", t.num_labels()},
                 {"num_states", t.num_states()},
                 {"dim", t.dim()},
                 {"values", std::vector<double>(t.values().begin(), t.values().end())}};
  }
  if (c.logreg) j["logreg"] = {{"weights", c.logreg->weights}, {"intercept", c.logreg->intercept}, {"C", c.logreg->C}};
  if (c.trace) {
    j["training"] = {{"status", status_name(c.trace->status)},
                     {"iterations", c.trace->iterations.empty() ? 0 : c.trace->iterations.back().iteration},
                     {"objective", c.trace->iterations.empty() ? 0.0 : c.trace->iterations.back().objective},
                     {"seed", c.trace->seed}};
  }
  j["vocabulary_words"] = a.vocabulary_words;
  return j.dump(1) + "\n";
}

ModelArchive parse_archive(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model archive is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "hcrf-model") throw ParseError("not an hcrf model archive");
    if (j.at("format_version").get<int>() != kArchiveFormatVersion) {
      throw ParseError("unsupported model archive version " + j.at("format_version").dump());
    }
    ModelArchive a;
    auto& c = a.classifier;
    c.kind = parse_model_kind(j.at("kind").get<std::string>());
    c.labels = LabelSet(j.at("labels").get<std::vector<std::string>>());
    c.config = model_config_from_json(j.at("model_config"));
    c.priors = j.at("priors").get<std::vector<double>>();
    a.resource_paths = resource_paths_from_json(j.at("resources"));
    a.fingerprints = fingerprints_from_json(j.at("resource_fingerprints"));
    a.vocabulary_words = j.at("vocabulary_words").get<std::vector<std::string>>();

    if (j.contains("features")) {
      const auto& f = j.at("features");
      auto loaded = load_resources(a.resource_paths);
      for (std::size_t i = 0; i < a.fingerprints.size(); ++i) {
        if (i >= loaded.fingerprints.size() || !(loaded.fingerprints[i] == a.fingerprints[i])) {
          throw ConfigError("resource '" + a.fingerprints[i].path + "' (" + a.fingerprints[i].kind +
                            ") differs from the one used for training");
        }
      }
      c.pipeline = std::make_shared<FeaturePipeline>(feature_config_from_json(f.at("feature_config")),
                                                     loaded.resources);
      std::optional<NGramVocabulary> vocab;
      if (f.contains("vocabulary")) {
        const auto& v = f.at("vocabulary");
        vocab = NGramVocabulary(v.at("terms").get<std::vector<std::string>>(),
                                v.at("doc_freq").get<std::vector<std::size_t>>(), v.at("num_docs").get<std::size_t>(),
                                v.at("max_order").get<std::size_t>());
      }
      c.pipeline->restore(std::move(vocab), Standardizer(f.at("standardizer").at("mean").get<std::vector<double>>(),
                                                         f.at("standardizer").at("stddev").get<std::vector<double>>()));
      if (!(c.pipeline->schema() == schema_from_json(f.at("schema")))) {
        throw ConfigError("feature schema rebuilt from the archive does not match the stored schema");
      }
      if (hex64(c.pipeline->fitted_checksum()) != f.at("checksum").get<std::string>()) {
        throw ParseError("fitted feature state checksum mismatch");
      }
    }
    if (j.contains("hcrf")) {
      const auto& h = j.at("hcrf");
      HcrfParameters t(h.at("num_labels").get<std::size_t>(), h.at("num_states").get<std::size_t>(),
                       h.at("dim").get<std::size_t>());
      const auto values = h.at("values").get<std::vector<double>>();
      if (values.size() != t.size()) throw ParseError("HCRF parameter count does not match its shape");
      std::copy(values.begin(), values.end(), t.values().begin());
      c.hcrf = std::move(t);
    }
    if (j.contains("logreg")) {
      const auto& l = j.at("logreg");
      c.logreg = LogRegModel{l.at("weights").get<std::vector<double>>(), l.at("intercept").get<double>(),
                             l.at("C").get<double>()};
    }
    if (c.kind == ModelKind::kHcrf && (!c.hcrf || !c.pipeline)) throw ParseError("HCRF archive lacks parameters");
    if (c.kind == ModelKind::kLogReg && (!c.logreg || !c.pipeline)) throw ParseError("logreg archive lacks weights");
    if (j.contains("training")) {
      const auto& t = j.at("training");
      TrainingTrace trace;
      trace.seed = t.at("seed").get<std::uint64_t>();
      const std::string st = t.at("status").get<std::string>();
      for (auto s : {OptimizerStatus::kConverged, OptimizerStatus::kMaxIterations, OptimizerStatus::kLineSearchFailed,
                     OptimizerStatus::kStalled}) {
        if (status_name(s) == st) trace.status = s;
      }
      trace.iterations.push_back({t.at("iterations").get<int>(), t.at("objective").get<double>(), 0.0, 0.0});
      c.trace = std::move(trace);
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model archive: ") + e.what());
  }
}

void save_archive(const ModelArchive& archive, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write model archive " + path);
  out << serialize_archive(archive);
  if (!out) throw ParseError("failed writing model archive " + path);
}

ModelArchive load_archive(const std::string& path) { return parse_archive(read_file(path)); }

}  // namespace hcrf
