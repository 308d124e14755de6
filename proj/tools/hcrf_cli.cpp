// hcrf: segment, train, predict, evaluate, inspect and generate.
//
// Flags override values from --config. Exit codes: 0 success, 1 unexpected
// failure, 2 configuration or usage error, 3 malformed or missing input,
// 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "hcrf/commands.hpp"
#include "hcrf/errors.hpp"
#include "hcrf/text.hpp"

namespace {

using ojson = nlohmann::ordered_json;

struct Flags {
  std::string config;
  std::optional<std::string> corpus, out, model, features, unit, compare, hidden_states, context_window, l2, c;
  std::optional<std::int64_t> threshold_ms;
  std::optional<std::size_t> folds, inner_folds, docs, top_k, top_words;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<int> max_iterations;
  std::optional<double> tau;
  std::optional<std::string> embeddings, embedding_case, stopwords, markers, modifiers, pos_lexicon, words;
  std::vector<std::string> lexicons;
  bool verbose = false;
};

// "0.1,0.5" -> [0.1, 0.5]; integers stay integers.
ojson number_list(const std::string& text, bool integral) {
  ojson arr = ojson::array();
  for (const auto& part : hcrf::split(text, ',')) {
    const auto s = std::string(hcrf::trim(part));
    std::size_t used = 0;
    try {
      if (integral) {
        const long long v = std::stoll(s, &used);
        if (v < 0) throw hcrf::ConfigError("negative value '" + s + "'");
        arr.push_back(static_cast<std::size_t>(v));
      } else {
        arr.push_back(std::stod(s, &used));
      }
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw hcrf::ConfigError("invalid number '" + s + "' in list '" + text + "'");
  }
  return arr;
}

std::string absolute(const std::string& p) { return p.empty() ? p : std::filesystem::absolute(p).string(); }

// Flags as a configuration overlay.
ojson overlay(const Flags& f, bool archive_model) {
  ojson j = ojson::object();
  if (f.corpus) j["corpus"] = *f.corpus;
  if (f.out) j["out"] = *f.out;
  if (f.model) j[archive_model ? "archive" : "model"] = *f.model;
  if (f.features) j["features"] = *f.features;
  if (f.unit) j["unit"] = *f.unit;
  if (f.compare) j["compare"] = *f.compare;
  if (f.threshold_ms) j["threshold_ms"] = *f.threshold_ms;
  if (f.hidden_states) j["hidden_states"] = number_list(*f.hidden_states, true);
  if (f.context_window) j["context_window"] = number_list(*f.context_window, true);
  if (f.l2) j["l2"] = number_list(*f.l2, false);
  if (f.c) j["C"] = number_list(*f.c, false);
  if (f.folds) j["folds"] = *f.folds;
  if (f.inner_folds) j["inner_folds"] = *f.inner_folds;
  if (f.seed) j["seed"] = *f.seed;
  if (f.threads) j["threads"] = *f.threads;
  if (f.max_iterations) j["max_iterations"] = *f.max_iterations;
  ojson res = ojson::object();
  if (f.embeddings) res["embeddings"] = *f.embeddings;
  if (f.embedding_case) res["embedding_case"] = *f.embedding_case;
  if (!f.lexicons.empty()) res["lexicons"] = f.lexicons;
  if (f.stopwords) res["stopwords"] = *f.stopwords;
  if (f.markers) res["markers"] = *f.markers;
  if (f.modifiers) res["modifiers"] = *f.modifiers;
  if (f.pos_lexicon) res["pos_lexicon"] = *f.pos_lexicon;
  if (!res.empty()) j["resources"] = res;
  ojson insp = ojson::object();
  if (f.top_k) insp["top_k"] = *f.top_k;
  if (f.top_words) insp["top_words"] = *f.top_words;
  if (f.tau) insp["tau"] = *f.tau;
  if (f.words) {
    std::vector<std::string> w;
    for (const auto& s : hcrf::split(*f.words, ',')) {
      if (!hcrf::trim(s).empty()) w.emplace_back(hcrf::trim(s));
    }
    insp["words"] = w;
  }
  if (!insp.empty()) j["inspect"] = insp;
  if (f.docs) j["synthetic"] = {{"num_docs", *f.docs}};
  return j;
}

hcrf::RunConfig resolve(const Flags& f, bool archive_model) {
  hcrf::RunConfig cfg;
  if (!f.config.empty()) hcrf::apply_run_config_file(f.config, cfg);
  auto j = overlay(f, archive_model);
  if (j.contains("synthetic")) {
    auto spec = cfg.synthetic.to_json();
    spec["num_docs"] = j["synthetic"]["num_docs"];
    j["synthetic"] = ojson::parse(spec.dump());
  }
  hcrf::apply_run_config(j, cfg);
  // Paths are resolved so the recorded configuration does not depend on the
  // working directory.
  auto& r = cfg.resources;
  for (auto* p : {&r.embeddings, &r.stopwords, &r.markers, &r.modifiers, &r.pos_lexicon}) *p = absolute(*p);
  for (auto& p : r.lexicons) p = absolute(p);
  cfg.corpus = absolute(cfg.corpus);
  cfg.archive = absolute(cfg.archive);
  return cfg;
}

void setup_logging(const hcrf::RunConfig& cfg, bool verbose) {
  std::vector<spdlog::sink_ptr> sinks{std::make_shared<spdlog::sinks::stderr_color_sink_mt>()};
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    auto file = std::make_shared<spdlog::sinks::basic_file_sink_mt>((std::filesystem::path(cfg.out) / "run.log").string(),
                                                                     true);
    file->set_pattern("[%l] %v");
    sinks.push_back(file);
  }
  auto logger = std::make_shared<spdlog::logger>("hcrf", sinks.begin(), sinks.end());
  logger->set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_default_logger(logger);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hidden conditional random fields for spoken-review opinion classification"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON run configuration; flags override its values")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "Run directory for outputs and the resolved configuration");
    sub->add_option("--seed", f.seed, "Random seed");
    sub->add_flag("-v,--verbose", f.verbose, "Debug logging");
  };
  auto features = [&f](CLI::App* sub) {
    sub->add_option("--corpus", f.corpus, "Corpus directory or manifest");
    sub->add_option("--threshold-ms", f.threshold_ms, "Pause threshold in ms (150, 300, 500 or custom)");
    sub->add_option("--unit", f.unit, "Sequence unit: ipu or document");
    sub->add_option("--features", f.features,
                    "Feature blocks: all, ours, or a comma list of bong,embedding,lexicon,pattern,paralinguistic");
    sub->add_option("--embeddings", f.embeddings, "Word embedding file (text format)");
    sub->add_option("--embedding-case", f.embedding_case, "exact or lower-fallback");
    sub->add_option("--lexicon", f.lexicons, "Subjectivity lexicon file (repeatable)");
    sub->add_option("--stopwords", f.stopwords, "Stop-word list replacing the built-in one");
    sub->add_option("--markers", f.markers, "Paralinguistic marker map replacing the built-in one");
    sub->add_option("--modifiers", f.modifiers, "Negators and intensifiers replacing the built-in ones");
    sub->add_option("--pos-lexicon", f.pos_lexicon, "POS lexicon replacing the built-in one");
    sub->add_option("--threads", f.threads, "Worker threads");
  };
  auto model = [&f](CLI::App* sub) {
    sub->add_option("--model", f.model, "Model kind: hcrf, logreg or majority");
    sub->add_option("--hidden-states", f.hidden_states, "Hidden states, or a comma list searched by inner CV");
    sub->add_option("--context-window", f.context_window, "Context window w, or a comma list");
    sub->add_option("--l2", f.l2, "L2 strength lambda, or a comma list");
    sub->add_option("--C", f.c, "Logistic regression inverse regularization, or a comma list");
    sub->add_option("--inner-folds", f.inner_folds, "Folds of the inner hyperparameter search");
    sub->add_option("--max-iterations", f.max_iterations, "L-BFGS iteration cap for the HCRF");
  };

  auto* seg = app.add_subcommand("segment", "Materialize IPU indices in a corpus");
  common(seg);
  seg->add_option("--corpus", f.corpus, "Input corpus");
  seg->add_option("--threshold-ms", f.threshold_ms, "Pause threshold in ms");

  auto* train = app.add_subcommand("train", "Train a model and write its archive");
  common(train);
  features(train);
  model(train);

  auto* predict = app.add_subcommand("predict", "Predict labels with a trained archive");
  common(predict);
  predict->add_option("--corpus", f.corpus, "Corpus to label");
  predict->add_option("--model", f.model, "Model archive (model.json)");

  auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold cross-validation");
  common(evaluate);
  features(evaluate);
  model(evaluate);
  evaluate->add_option("--folds", f.folds, "Number of folds");
  evaluate->add_option("--compare", f.compare, "Also evaluate this model kind and test the fold differences");

  auto* inspect = app.add_subcommand("inspect", "Report what the hidden states encode");
  common(inspect);
  inspect->add_option("--model", f.model, "Model archive (model.json)");
  inspect->add_option("--top-k", f.top_k, "Features listed per state");
  inspect->add_option("--top-words", f.top_words, "Activation words listed per state");
  inspect->add_option("--tau", f.tau, "Alignment margin; defaults to the spread of the label-state weights");
  inspect->add_option("--words", f.words, "Comma list of words to profile across states");

  auto* generate = app.add_subcommand("generate", "Write a synthetic opinion-dynamics corpus");
  common(generate);
  generate->add_option("--docs", f.docs, "Number of documents");

  CLI11_PARSE(app, argc, argv);

  try {
    const bool archive_model = predict->parsed() || inspect->parsed();
    const auto cfg = resolve(f, archive_model);
    setup_logging(cfg, f.verbose);
    if (seg->parsed()) {
      hcrf::cmd_segment(cfg);
    } else if (train->parsed()) {
      hcrf::cmd_train(cfg);
    } else if (predict->parsed()) {
      hcrf::cmd_predict(cfg);
    } else if (evaluate->parsed()) {
      const auto report = hcrf::cmd_evaluate(cfg);
      std::cout << hcrf::format_metrics(report.pooled);
    } else if (inspect->parsed()) {
      hcrf::cmd_inspect(cfg);
    } else if (generate->parsed()) {
      std::printf("order-insensitive Bayes accuracy: %.6f\n", hcrf::cmd_generate(cfg));
    }
  } catch (const hcrf::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hcrf::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hcrf::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const hcrf::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
