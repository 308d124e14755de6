#include "hcrf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <spdlog/spdlog.h>

#include "hcrf/errors.hpp"
#include "hcrf/rng.hpp"

namespace hcrf {

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> FoldPlan::split(std::size_t fold) const {
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == fold ? out.second : out.first).push_back(i);
  return out;
}

FoldPlan stratified_k_fold(const std::vector<Label>& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidInput("cross-validation needs k >= 2");
  Label max_label = 0;
  for (Label y : labels) max_label = std::max(max_label, y);
  std::vector<std::vector<std::size_t>> by_class(labels.empty() ? 0 : max_label + 1);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.fold_of.assign(labels.size(), 0);
  Rng rng(seed);
  std::size_t next = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    if (members.empty()) continue;
    if (members.size() < k) {
      throw InvalidInput("class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                         " documents, fewer than k = " + std::to_string(k));
    }
    shuffle(members, rng);
    for (auto i : members) {
      plan.fold_of[i] = next;
      next = (next + 1) % k;
    }
  }
  return plan;
}

int MetricsReport::percent(double fraction) { return static_cast<int>(std::lround(100.0 * fraction)); }

MetricsReport compute_metrics(const std::vector<Label>& predicted, const std::vector<Label>& gold,
                              const std::vector<std::string>& label_names) {
  if (predicted.size() != gold.size()) throw InvalidInput("predictions and gold labels differ in length");
  if (gold.empty()) throw InvalidInput("no predictions to evaluate");
  const std::size_t n_labels = label_names.size();
  MetricsReport m;
  m.labels = label_names;
  m.total = gold.size();
  m.confusion.assign(n_labels, std::vector<std::size_t>(n_labels, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= n_labels || predicted[i] >= n_labels) throw InvalidInput("label outside the label set");
    ++m.confusion[gold[i]][predicted[i]];
  }
  std::size_t correct = 0;
  for (std::size_t c = 0; c < n_labels; ++c) {
    std::size_t tp = m.confusion[c][c], pred_c = 0, gold_c = 0;
    for (std::size_t o = 0; o < n_labels; ++o) {
      pred_c += m.confusion[o][c];
      gold_c += m.confusion[c][o];
    }
    ClassMetrics cm;
    cm.support = gold_c;
    cm.precision = pred_c ? static_cast<double>(tp) / static_cast<double>(pred_c) : 0.0;
    cm.recall = gold_c ? static_cast<double>(tp) / static_cast<double>(gold_c) : 0.0;
    cm.f1 = cm.precision + cm.recall > 0 ? 2 * cm.precision * cm.recall / (cm.precision + cm.recall) : 0.0;
    m.per_class.push_back(cm);
    m.weighted_f1 += static_cast<double>(gold_c) / static_cast<double>(m.total) * cm.f1;
    correct += tp;
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(m.total);
  return m;
}

std::string describe(const ModelConfig& cfg) {
  char buf[160];
  switch (cfg.kind) {
    case ModelKind::kMajority: return "majority";
    case ModelKind::kLogReg: std::snprintf(buf, sizeof buf, "logreg C=%g", cfg.logreg.C); return buf;
    case ModelKind::kHcrf:
      std::snprintf(buf, sizeof buf, "hcrf hidden_states=%zu context_window=%zu l2=%g", cfg.hcrf.num_hidden_states,
                    cfg.hcrf.context_window, cfg.hcrf.l2_lambda);
      return buf;
  }
  return "";
}

CvReport cross_validate(const Corpus& docs, const FeatureConfig& features,
                        std::shared_ptr<const FeatureResources> resources, const ModelConfig& model, std::size_t k,
                        std::uint64_t seed, unsigned num_threads) {
  const auto labels = require_polarities(docs);
  const auto plan = stratified_k_fold(labels, k, seed);

  CvReport report;
  report.k = k;
  report.seed = seed;
  report.gold = labels;
  report.predictions.resize(docs.size());
  report.folds.resize(k);

  auto run_fold = [&](std::size_t f) {
    const auto [tr, te] = plan.split(f);
    Corpus train;
    for (auto i : tr) train.push_back(docs[i]);
    ModelConfig mc = model;
    mc.hcrf.num_threads = 1;
    const auto clf = fit_classifier(train, features, resources, mc);
    std::vector<Label> pred, gold;
    for (auto i : te) {
      report.predictions[i] = clf.predict(docs[i]);
      pred.push_back(report.predictions[i].label);
      gold.push_back(labels[i]);
    }
    auto& fr = report.folds[f];
    fr.fold = f;
    fr.metrics = compute_metrics(pred, gold, LabelSet::binary_polarity().names());
    fr.fitted_checksum = clf.pipeline ? clf.pipeline->fitted_checksum() : 0;
    fr.selected = describe(clf.config);
    spdlog::info("fold {}/{}: accuracy {:.4f} ({})", f + 1, k, fr.metrics.accuracy, fr.selected);
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(num_threads, k));
  if (workers == 1) {
    for (std::size_t f = 0; f < k; ++f) run_fold(f);
  } else {
    std::vector<std::exception_ptr> errors(k);
    for (std::size_t start = 0; start < k; start += workers) {
      std::vector<std::thread> pool;
      for (std::size_t f = start; f < std::min(k, start + workers); ++f) {
        pool.emplace_back([&, f] {
          try {
            run_fold(f);
          } catch (...) {
            errors[f] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<Label> pred;
  for (const auto& p : report.predictions) pred.push_back(p.label);
  report.pooled = compute_metrics(pred, labels, LabelSet::binary_polarity().names());
  return report;
}

SignificanceResult fold_significance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidInput("score lists differ in length");
  if (a.size() < 2) throw InvalidInput("a paired t-test needs at least two folds");
  const auto n = static_cast<double>(a.size());
  SignificanceResult r;
  r.df = a.size() - 1;
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
  r.mean_difference = mean;
  const double sd = std::sqrt(ss / (n - 1.0));
  // Differences equal up to rounding of the scores count as constant.
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  if (sd <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
    r.degenerate = true;
    r.p = 1.0;
    return r;
  }
  r.t = mean / (sd / std::sqrt(n));
  const boost::math::students_t dist(static_cast<double>(r.df));
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

nlohmann::ordered_json metrics_json(const MetricsReport& m) {
  nlohmann::ordered_json j;
  j["total"] = m.total;
  j["accuracy"] = m.accuracy;
  j["weighted_f1"] = m.weighted_f1;
  j["rounded"] = {{"accuracy", MetricsReport::percent(m.accuracy)},
                  {"weighted_f1", MetricsReport::percent(m.weighted_f1)}};
  auto& classes = j["classes"] = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < m.labels.size(); ++c) {
    const auto& cm = m.per_class[c];
    classes.push_back({{"label", m.labels[c]},
                       {"support", cm.support},
                       {"precision", cm.precision},
                       {"recall", cm.recall},
                       {"f1", cm.f1},
                       {"f1_rounded", MetricsReport::percent(cm.f1)}});
  }
  j["confusion"] = m.confusion;
  return j;
}

nlohmann::ordered_json cv_report_json(const CvReport& r) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["folds_k"] = r.k;
  j["seed"] = r.seed;
  j["pooled"] = metrics_json(r.pooled);
  auto& folds = j["folds"] = nlohmann::ordered_json::array();
  for (const auto& f : r.folds) {
    char sum[24];
    std::snprintf(sum, sizeof sum, "%016llx", static_cast<unsigned long long>(f.fitted_checksum));
    folds.push_back({{"fold", f.fold}, {"selected", f.selected}, {"fitted_checksum", sum},
                     {"metrics", metrics_json(f.metrics)}});
  }
  auto& preds = j["predictions"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.predictions.size(); ++i) {
    const auto& p = r.predictions[i];
    preds.push_back({{"doc_id", p.doc_id}, {"gold", r.gold[i]}, {"predicted", p.label}, {"posterior", p.posterior}});
  }
  return j;
}

std::string format_metrics(const MetricsReport& m) {
  std::string out;
  char line[256];
  for (std::size_t c = 0; c < m.labels.size(); ++c) {
    const auto& cm = m.per_class[c];
    std::snprintf(line, sizeof line, "  %-10s support %5zu  P %.4f  R %.4f  F1 %.4f  (F1 %d)\n", m.labels[c].c_str(),
                  cm.support, cm.precision, cm.recall, cm.f1, MetricsReport::percent(cm.f1));
    out += line;
  }
  std::snprintf(line, sizeof line, "  weighted F1 %.4f (%d)   accuracy %.4f (%d)   n = %zu\n", m.weighted_f1,
                MetricsReport::percent(m.weighted_f1), m.accuracy, MetricsReport::percent(m.accuracy), m.total);
  out += line;
  out += "  confusion [gold x predicted]:\n";
  for (std::size_t g = 0; g < m.confusion.size(); ++g) {
    std::snprintf(line, sizeof line, "    %-10s", m.labels[g].c_str());
    out += line;
    for (auto v : m.confusion[g]) {
      std::snprintf(line, sizeof line, " %6zu", v);
      out += line;
    }
    out += "\n";
  }
  return out;
}

std::string format_cv_report(const CvReport& r) {
  std::string out = "# hcrf-metrics 1\n";
  char line[256];
  std::snprintf(line, sizeof line, "%zu-fold stratified cross-validation, seed %llu\n\npooled:\n", r.k,
                static_cast<unsigned long long>(r.seed));
  out += line;
  out += format_metrics(r.pooled);
  for (const auto& f : r.folds) {
    std::snprintf(line, sizeof line, "\nfold %zu (%s), fitted state %016llx:\n", f.fold, f.selected.c_str(),
                  static_cast<unsigned long long>(f.fitted_checksum));
    out += line;
    out += format_metrics(f.metrics);
  }
  return out;
}

}  // namespace hcrf
