#include "hcrf/classifier.hpp"

#include <spdlog/spdlog.h>

#include "hcrf/errors.hpp"
#include "hcrf/evaluation.hpp"

namespace hcrf {

std::string_view model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::kHcrf: return "hcrf";
    case ModelKind::kLogReg: return "logreg";
    case ModelKind::kMajority: return "majority";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "hcrf") return ModelKind::kHcrf;
  if (name == "logreg") return ModelKind::kLogReg;
  if (name == "majority") return ModelKind::kMajority;
  throw ConfigError("unknown model kind '" + std::string(name) + "' (expected hcrf, logreg or majority)");
}

std::vector<ModelConfig> ModelConfig::candidates() const {
  std::vector<ModelConfig> out;
  ModelConfig base = *this;
  base.l2_grid.clear();
  base.hidden_state_grid.clear();
  base.context_window_grid.clear();
  base.c_grid.clear();
  if (kind == ModelKind::kMajority) return {base};
  if (kind == ModelKind::kLogReg) {
    if (c_grid.empty()) return {base};
    for (double c : c_grid) {
      ModelConfig m = base;
      m.logreg.C = c;
      out.push_back(m);
    }
    return out;
  }
  const std::vector<std::size_t> hs = hidden_state_grid.empty() ? std::vector{hcrf.num_hidden_states}
                                                                 : hidden_state_grid;
  const std::vector<std::size_t> ws = context_window_grid.empty() ? std::vector{hcrf.context_window}
                                                                   : context_window_grid;
  const std::vector<double> ls = l2_grid.empty() ? std::vector{hcrf.l2_lambda} : l2_grid;
  for (auto h : hs) {
    for (auto w : ws) {
      for (auto l : ls) {
        ModelConfig m = base;
        m.hcrf.num_hidden_states = h;
        m.hcrf.context_window = w;
        m.hcrf.l2_lambda = l;
        out.push_back(m);
      }
    }
  }
  return out;
}

std::vector<Label> require_polarities(const Corpus& docs) {
  std::vector<Label> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    const auto p = d.polarity();
    if (!p) throw InvalidInput("document '" + d.doc_id + "' has no polarity (neutral or unannotated)");
    out.push_back(*p);
  }
  return out;
}

ObservationSequence hcrf_input(const FeaturePipeline& pipeline, const Transcript& doc, std::size_t window) {
  return apply_context_window(pipeline.transform(doc), window);
}

Classifier fit_single(const Corpus& train, const FeatureConfig& features,
                      std::shared_ptr<const FeatureResources> resources, const ModelConfig& config) {
  const auto labels = require_polarities(train);
  if (train.empty()) throw InvalidInput("cannot train on an empty corpus");
  Classifier c;
  c.kind = config.kind;
  c.config = config;
  c.priors.assign(c.labels.size(), 0.0);
  for (Label y : labels) c.priors[y] += 1.0 / static_cast<double>(labels.size());
  if (config.kind == ModelKind::kMajority) return c;

  c.pipeline = std::make_shared<FeaturePipeline>(features, std::move(resources));
  c.pipeline->fit(train);

  if (config.kind == ModelKind::kLogReg) {
    std::vector<double> rows;
    std::size_t dim = 0;
    for (const auto& doc : train) {
      const auto v = aggregate_document_vector(c.pipeline->transform(doc));
      dim = v.size();
      rows.insert(rows.end(), v.begin(), v.end());
    }
    const auto fit = train_logreg(rows, dim, labels, config.logreg);
    if (fit.status != OptimizerStatus::kConverged) {
      spdlog::debug("logistic regression stopped with status {} (gradient norm {:.3g})", status_name(fit.status),
                    fit.grad_norm);
    }
    c.logreg = fit.model;
    return c;
  }

  Dataset data;
  data.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    data.push_back({hcrf_input(*c.pipeline, train[i], config.hcrf.context_window), labels[i]});
  }
  auto result = hcrf::train(data, c.labels.size(), config.hcrf);
  c.hcrf = std::move(result.params);
  c.trace = std::move(result.trace);
  return c;
}

Classifier fit_classifier(const Corpus& train, const FeatureConfig& features,
                          std::shared_ptr<const FeatureResources> resources, const ModelConfig& config) {
  const auto cands = config.candidates();
  if (cands.size() == 1) return fit_single(train, features, resources, cands.front());

  const auto labels = require_polarities(train);
  const auto plan = stratified_k_fold(labels, config.inner_folds, config.hcrf.seed + 7919);
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t ci = 0; ci < cands.size(); ++ci) {
    std::vector<Label> pred(labels.size()), gold(labels.size());
    for (std::size_t f = 0; f < plan.k; ++f) {
      const auto [tr, te] = plan.split(f);
      Corpus inner_train, inner_test;
      for (auto i : tr) inner_train.push_back(train[i]);
      for (auto i : te) inner_test.push_back(train[i]);
      const auto model = fit_single(inner_train, features, resources, cands[ci]);
      for (auto i : te) {
        pred[i] = model.predict(train[i]).label;
        gold[i] = labels[i];
      }
    }
    const double score = compute_metrics(pred, gold, LabelSet::binary_polarity().names()).weighted_f1;
    spdlog::debug("inner candidate {} weighted F1 {:.4f}", ci, score);
    if (score > best_score) {
      best_score = score;
      best = ci;
    }
  }
  return fit_single(train, features, std::move(resources), cands[best]);
}

Prediction Classifier::predict(const Transcript& doc) const {
  Prediction p;
  p.doc_id = doc.doc_id;
  switch (kind) {
    case ModelKind::kMajority:
      p.posterior = priors;
      break;
    case ModelKind::kLogReg: {
      const auto r = predict_logreg(*logreg, aggregate_document_vector(pipeline->transform(doc)));
      p.posterior = {1.0 - r.probability, r.probability};
      p.label = r.label;
      return p;
    }
    case ModelKind::kHcrf:
      p.posterior = posterior(hcrf_input(*pipeline, doc, config.hcrf.context_window), *hcrf);
      break;
  }
  p.label = argmax_label(p.posterior);
  return p;
}

std::vector<Prediction> Classifier::predict(const Corpus& docs) const {
  std::vector<Prediction> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(predict(d));
  return out;
}

}  // namespace hcrf
