#include "hcrf/commands.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "hcrf/archive.hpp"
#include "hcrf/errors.hpp"
#include "hcrf/evaluation.hpp"
#include "hcrf/segment.hpp"

namespace hcrf {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string shortest(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
  if (!out) throw ParseError("failed writing " + path.string());
}

fs::path prepare_out(const RunConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("an output directory (--out) is required");
  fs::create_directories(cfg.out);
  write_text(fs::path(cfg.out) / "run_config.json", run_config_json(cfg).dump(2) + "\n");
  return cfg.out;
}

Corpus require_corpus(const RunConfig& cfg) {
  if (cfg.corpus.empty()) throw ConfigError("a corpus (--corpus) is required");
  if (!fs::exists(cfg.corpus)) throw ParseError("corpus path does not exist: " + cfg.corpus);
  return load_corpus(cfg.corpus);
}

Corpus polar_documents(const Corpus& all) {
  Corpus docs = filter_neutral(all);
  if (docs.size() != all.size()) {
    spdlog::info("dropped {} neutral or unannotated documents", all.size() - docs.size());
  }
  if (docs.empty()) throw InvalidInput("the corpus has no documents with a polarity");
  return docs;
}

// Single value or array, as a vector.
template <typename T>
std::vector<T> grid_of(const ojson& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

template <typename T>
ojson grid_json(const std::vector<T>& grid, const T& single) {
  if (grid.empty()) return single;
  if (grid.size() == 1) return grid.front();
  return grid;
}

template <typename T>
void set_grid(const ojson& v, std::vector<T>& grid, T& single) {
  grid = grid_of<T>(v);
  if (grid.empty()) throw ConfigError("empty hyperparameter grid");
  single = grid.front();
  if (grid.size() == 1) grid.clear();
}

}  // namespace

ojson run_config_json(const RunConfig& c) {
  const auto& f = c.features;
  const auto& m = c.model;
  ojson j;
  j["format_version"] = 1;
  j["corpus"] = c.corpus;
  j["out"] = c.out;
  j["archive"] = c.archive;
  j["threshold_ms"] = f.threshold_ms;
  j["unit"] = f.whole_document ? "document" : "ipu";
  j["features"] = format_blocks(f.blocks);
  j["standardize"] = f.standardize;
  j["bong"] = {{"max_order", f.bong.max_order}, {"max_features", f.bong.max_features}, {"min_df", f.bong.min_df}};
  j["model"] = model_kind_name(m.kind);
  j["compare"] = c.compare ? std::string(model_kind_name(*c.compare)) : std::string();
  j["hidden_states"] = grid_json(m.hidden_state_grid, m.hcrf.num_hidden_states);
  j["context_window"] = grid_json(m.context_window_grid, m.hcrf.context_window);
  j["l2"] = grid_json(m.l2_grid, m.hcrf.l2_lambda);
  j["C"] = grid_json(m.c_grid, m.logreg.C);
  j["inner_folds"] = m.inner_folds;
  j["max_iterations"] = m.hcrf.max_iterations;
  j["restarts"] = m.hcrf.restarts;
  j["folds"] = c.folds;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["resources"] = resource_paths_json(c.resources);
  ojson insp = {{"top_k", c.inspect.top_k}, {"top_words", c.inspect.top_words}, {"words", c.inspect.profile_words}};
  insp["tau"] = c.inspect.tau ? ojson(*c.inspect.tau) : ojson(nullptr);
  j["inspect"] = std::move(insp);
  j["synthetic"] = ojson::parse(c.synthetic.to_json().dump());
  return j;
}

void apply_run_config(const ojson& j, RunConfig& c) {
  if (!j.is_object()) throw ConfigError("run configuration must be a JSON object");
  static const std::set<std::string> kKeys{
      "format_version", "corpus",  "out",         "archive", "threshold_ms",   "unit",           "features",
      "standardize",    "bong",    "model",       "compare", "hidden_states",  "context_window", "l2",
      "C",              "inner_folds", "max_iterations", "restarts", "folds", "seed", "threads",
      "resources",      "inspect", "synthetic"};
  for (const auto& [k, _] : j.items()) {
    if (!kKeys.contains(k)) throw ConfigError("unknown configuration key '" + k + "'");
  }
  auto& f = c.features;
  auto& m = c.model;
  try {
    if (j.contains("format_version") && j["format_version"].get<int>() != 1) {
      throw ConfigError("unsupported configuration format_version " + j["format_version"].dump());
    }
    if (j.contains("corpus")) c.corpus = j["corpus"].get<std::string>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("archive")) c.archive = j["archive"].get<std::string>();
    if (j.contains("threshold_ms")) f.threshold_ms = j["threshold_ms"].get<std::int64_t>();
    if (j.contains("unit")) {
      const auto u = j["unit"].get<std::string>();
      if (u != "ipu" && u != "document") throw ConfigError("unit must be 'ipu' or 'document', got '" + u + "'");
      f.whole_document = u == "document";
    }
    if (j.contains("features")) f.blocks = parse_blocks(j["features"].get<std::string>());
    if (j.contains("standardize")) f.standardize = j["standardize"].get<bool>();
    if (j.contains("bong")) {
      const auto& b = j["bong"];
      f.bong.max_order = b.value("max_order", f.bong.max_order);
      f.bong.max_features = b.value("max_features", f.bong.max_features);
      f.bong.min_df = b.value("min_df", f.bong.min_df);
    }
    if (j.contains("model")) m.kind = parse_model_kind(j["model"].get<std::string>());
    if (j.contains("compare")) {
      const auto s = j["compare"].get<std::string>();
      c.compare = s.empty() ? std::nullopt : std::optional(parse_model_kind(s));
    }
    if (j.contains("hidden_states")) set_grid(j["hidden_states"], m.hidden_state_grid, m.hcrf.num_hidden_states);
    if (j.contains("context_window")) set_grid(j["context_window"], m.context_window_grid, m.hcrf.context_window);
    if (j.contains("l2")) set_grid(j["l2"], m.l2_grid, m.hcrf.l2_lambda);
    if (j.contains("C")) set_grid(j["C"], m.c_grid, m.logreg.C);
    if (j.contains("inner_folds")) m.inner_folds = j["inner_folds"].get<std::size_t>();
    if (j.contains("max_iterations")) m.hcrf.max_iterations = j["max_iterations"].get<int>();
    if (j.contains("restarts")) m.hcrf.restarts = j["restarts"].get<int>();
    if (j.contains("folds")) c.folds = j["folds"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("resources")) {
      // Overlay: keys absent from the object keep their current values.
      ojson merged = resource_paths_json(c.resources);
      for (const auto& [k, v] : j["resources"].items()) {
        if (!merged.contains(k)) throw ConfigError("unknown resources key '" + k + "'");
        merged[k] = v;
      }
      c.resources = resource_paths_from_json(merged);
    }
    if (j.contains("inspect")) {
      const auto& i = j["inspect"];
      c.inspect.top_k = i.value("top_k", c.inspect.top_k);
      c.inspect.top_words = i.value("top_words", c.inspect.top_words);
      c.inspect.profile_words = i.value("words", c.inspect.profile_words);
      if (i.contains("tau")) {
        c.inspect.tau = i["tau"].is_null() ? std::nullopt : std::optional(i["tau"].get<double>());
      }
    }
    if (j.contains("synthetic")) c.synthetic = SyntheticSpec::from_json(nlohmann::json::parse(j["synthetic"].dump()));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid configuration value: ") + e.what());
  }
}

void apply_run_config_file(const std::string& path, RunConfig& cfg) {
  const auto text = read_file(path);
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": not valid JSON: " + e.what());
  }
  try {
    apply_run_config(j, cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string format_predictions(const std::vector<Prediction>& predictions, const LabelSet& labels) {
  std::ostringstream out;
  out << "# hcrf-predictions 1\n";
  out << "doc_id\tpredicted";
  for (const auto& n : labels.names()) out << "\tp_" << n;
  out << '\n';
  for (const auto& p : predictions) {
    out << p.doc_id << '\t' << labels.name(p.label);
    for (double v : p.posterior) out << '\t' << shortest(v);
    out << '\n';
  }
  return out.str();
}

std::size_t cmd_segment(const RunConfig& cfg) {
  Corpus corpus = require_corpus(cfg);
  prepare_out(cfg);
  std::size_t total = 0;
  for (auto& doc : corpus) {
    const auto units = segment_into_ipus(doc, cfg.features.threshold_ms);
    // Units preserve token order, so indices can be assigned by walking them.
    std::size_t t = 0;
    for (std::size_t u = 0; u < units.size(); ++u) {
      for (std::size_t i = 0; i < units[u].tokens.size(); ++i) doc.tokens[t++].ipu = static_cast<int>(u);
    }
    total += units.size();
  }
  save_corpus(corpus, cfg.out);
  spdlog::info("segmented {} documents into {} IPUs at {} ms", corpus.size(), total, cfg.features.threshold_ms);
  return total;
}

void cmd_train(const RunConfig& cfg) {
  const Corpus docs = polar_documents(require_corpus(cfg));
  const auto out = prepare_out(cfg);
  auto loaded = load_resources(cfg.resources);
  ModelConfig model = cfg.model;
  model.hcrf.seed = cfg.seed;
  model.logreg.seed = cfg.seed;
  model.hcrf.num_threads = cfg.threads;

  ModelArchive archive;
  archive.classifier = fit_classifier(docs, cfg.features, loaded.resources, model);
  archive.resource_paths = cfg.resources;
  archive.fingerprints = loaded.fingerprints;
  archive.vocabulary_words = corpus_words(docs, *loaded.resources);
  save_archive(archive, (out / "model.json").string());

  const auto& c = archive.classifier;
  if (c.pipeline) write_text(out / "schema.json", schema_json(c.pipeline->schema()).dump(1) + "\n");
  if (c.trace) {
    std::ostringstream t;
    t << "# hcrf-trace 1\niteration\tobjective\tgrad_norm\tstep\n";
    for (const auto& r : c.trace->iterations) {
      t << r.iteration << '\t' << shortest(r.objective) << '\t' << shortest(r.grad_norm) << '\t' << shortest(r.step)
        << '\n';
    }
    write_text(out / "trace.tsv", t.str());
  }
  const auto preds = c.predict(docs);
  write_text(out / "train_predictions.tsv", format_predictions(preds, c.labels));
  std::vector<Label> pred, gold = corpus_labels(docs);
  for (const auto& p : preds) pred.push_back(p.label);
  const auto m = compute_metrics(pred, gold, c.labels.names());
  spdlog::info("trained {} ({}) on {} documents; training accuracy {:.4f}", model_kind_name(c.kind),
               describe(c.config), docs.size(), m.accuracy);
}

void cmd_predict(const RunConfig& cfg) {
  if (cfg.archive.empty()) throw ConfigError("a model archive (--model) is required");
  const Corpus docs = require_corpus(cfg);
  const auto out = prepare_out(cfg);
  const auto archive = load_archive(cfg.archive);
  const auto& c = archive.classifier;
  const auto preds = c.predict(docs);
  write_text(out / "predictions.tsv", format_predictions(preds, c.labels));

  std::vector<Label> pred, gold;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (auto y = docs[i].polarity()) {
      gold.push_back(*y);
      pred.push_back(preds[i].label);
    }
  }
  if (!gold.empty()) {
    const auto m = compute_metrics(pred, gold, c.labels.names());
    write_text(out / "metrics.txt", format_metrics(m));
    write_text(out / "metrics.json", metrics_json(m).dump(2) + "\n");
    spdlog::info("predicted {} documents; accuracy on {} labelled ones {:.4f}", docs.size(), gold.size(), m.accuracy);
  } else {
    spdlog::info("predicted {} documents", docs.size());
  }
}

CvReport cmd_evaluate(const RunConfig& cfg) {
  const Corpus docs = polar_documents(require_corpus(cfg));
  const auto out = prepare_out(cfg);
  auto loaded = load_resources(cfg.resources);
  ModelConfig model = cfg.model;
  model.hcrf.seed = cfg.seed;
  model.logreg.seed = cfg.seed;
  const auto report = cross_validate(docs, cfg.features, loaded.resources, model, cfg.folds, cfg.seed, cfg.threads);

  std::string text = format_cv_report(report);
  ojson json = cv_report_json(report);
  if (cfg.compare) {
    ModelConfig other = model;
    other.kind = *cfg.compare;
    const auto base = cross_validate(docs, cfg.features, loaded.resources, other, cfg.folds, cfg.seed, cfg.threads);
    std::vector<double> a, b;
    for (const auto& f : report.folds) a.push_back(f.metrics.accuracy);
    for (const auto& f : base.folds) b.push_back(f.metrics.accuracy);
    const auto sig = fold_significance(a, b);
    std::ostringstream s;
    s << "\n# comparison with " << model_kind_name(other.kind) << " (" << describe(other) << ")\n"
      << format_metrics(base.pooled) << "accuracy difference (mean over folds): " << shortest(sig.mean_difference)
      << "\npaired t: " << shortest(sig.t) << "  df: " << sig.df << "  p: " << shortest(sig.p)
      << (sig.degenerate ? "  (zero variance)" : "") << '\n';
    text += s.str();
    json["comparison"] = {{"model", describe(other)},
                          {"report", cv_report_json(base)},
                          {"accuracy_difference", sig.mean_difference},
                          {"t", sig.t},
                          {"df", sig.df},
                          {"p", sig.p},
                          {"degenerate", sig.degenerate}};
  }
  write_text(out / "report.txt", text);
  write_text(out / "report.json", json.dump(2) + "\n");
  write_text(out / "predictions.tsv", format_predictions(report.predictions, LabelSet::binary_polarity()));
  spdlog::info("{}-fold CV accuracy {:.4f}, weighted F1 {:.4f}", cfg.folds, report.pooled.accuracy,
               report.pooled.weighted_f1);
  return report;
}

void cmd_inspect(const RunConfig& cfg) {
  if (cfg.archive.empty()) throw ConfigError("a model archive (--model) is required");
  const auto out = prepare_out(cfg);
  const auto archive = load_archive(cfg.archive);
  const auto& c = archive.classifier;
  if (!c.hcrf) throw ConfigError("inspect needs an HCRF model; archive holds " + std::string(model_kind_name(c.kind)));
  const auto& p = *c.pipeline;
  const FeatureSchema schema = p.schema().with_context_window(c.config.hcrf.context_window);
  std::optional<EmbeddingProbe> probe;
  if (p.resources().embeddings && p.config().has(FeatureBlock::kEmbedding)) {
    probe = EmbeddingProbe{&schema, &*p.resources().embeddings, &p.standardizer()};
  }
  const auto report = state_report_json(*c.hcrf, c.labels, schema, probe ? &*probe : nullptr,
                                        archive.vocabulary_words, cfg.inspect);
  write_text(out / "state_report.json", report.dump(2) + "\n");
  write_text(out / "state_report.txt", format_state_report(report));
  spdlog::info("wrote state report for {} hidden states", c.hcrf->num_states());
}

double cmd_generate(const RunConfig& cfg) {
  const auto out = prepare_out(cfg);
  const auto syn = generate_synthetic(cfg.synthetic, cfg.seed);
  save_corpus(syn.corpus, (out / "corpus").string());
  write_text(out / "embeddings.txt", syn.embeddings.serialize());
  write_text(out / "lexicon.tsv", syn.lexicon.serialize());
  write_text(out / "spec.json", cfg.synthetic.to_json().dump(2) + "\n");
  ojson bayes = {{"order_insensitive_bayes_accuracy", syn.bayes_accuracy}, {"seed", cfg.seed}};
  write_text(out / "bayes.json", bayes.dump(2) + "\n");
  spdlog::info("generated {} documents; order-insensitive Bayes accuracy {:.4f}", syn.corpus.size(),
               syn.bayes_accuracy);
  return syn.bayes_accuracy;
}

}  // namespace hcrf
