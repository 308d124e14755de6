#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hcrf/errors.hpp"
#include "hcrf/logreg.hpp"

using namespace hcrf;

namespace {

struct Data {
  std::vector<double> rows;
  std::vector<Label> labels;
  std::size_t dim = 0;
};

// Overlapping Gaussian classes, so the optimum is finite.
Data gaussian_data(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Data d;
  d.dim = dim;
  for (std::size_t i = 0; i < n; ++i) {
    const Label y = i % 3 == 0 ? 0 : 1;
    d.labels.push_back(y);
    for (std::size_t k = 0; k < dim; ++k) d.rows.push_back(g(rng) + (y == 1 && k == 0 ? 0.8 : 0.0));
  }
  return d;
}

// Direct transcription of the objective, for comparison.
double naive_objective(const Data& d, const std::vector<double>& w, double b, double C) {
  double f = 0.0;
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    double z = b;
    for (std::size_t k = 0; k < d.dim; ++k) z += w[k] * d.rows[i * d.dim + k];
    const double p = 1.0 / (1.0 + std::exp(-z));
    f -= d.labels[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  double ww = 0.0;
  for (double v : w) ww += v * v;
  return f + ww / (2.0 * C);
}

double l2norm(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST(LogReg, SeparableTwoPointsAreFitted) {
  const std::vector<double> rows{-1.0, 1.0};
  const std::vector<Label> labels{0, 1};
  const auto fit = train_logreg(rows, 1, labels, {});
  EXPECT_EQ(predict_logreg(fit.model, std::vector<double>{-1.0}).label, 0u);
  EXPECT_EQ(predict_logreg(fit.model, std::vector<double>{1.0}).label, 1u);
}

TEST(LogReg, TinyCShrinksWeightsToMajorityIntercept) {
  const std::vector<double> rows{-2.0, 1.0, 0.5, 3.0};
  const std::vector<Label> labels{0, 1, 1, 1};
  LogRegOptions o;
  o.C = 1e-9;
  const auto fit = train_logreg(rows, 1, labels, o);
  EXPECT_LT(std::abs(fit.model.weights[0]), 1e-6);
  // Unregularized intercept at the log-odds of the prior, 3:1.
  EXPECT_NEAR(fit.model.intercept, std::log(3.0), 1e-6);
  for (double x : rows) EXPECT_EQ(predict_logreg(fit.model, std::vector<double>{x}).label, 1u);
}

TEST(LogReg, GradientVanishesAtReturnedOptimum) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = gaussian_data(rng, 40 + 7 * trial, 1 + trial % 5);
    LogRegOptions o;
    o.C = trial % 2 ? 0.5 : 10.0;
    const auto fit = train_logreg(d.rows, d.dim, d.labels, o);
    std::vector<double> grad(d.dim + 1);
    logreg_objective(d.rows, d.dim, d.labels, fit.model.weights, fit.model.intercept, o.C, grad);
    EXPECT_LE(l2norm(grad), 1e-6) << "trial " << trial;
  }
}

TEST(LogReg, ObjectiveAndGradientMatchIndependentOracles) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = gaussian_data(rng, 15, 3);
    std::vector<double> w{g(rng), g(rng), g(rng)};
    const double b = g(rng), C = 0.3 + trial;
    std::vector<double> grad(4);
    const double f = logreg_objective(d.rows, d.dim, d.labels, w, b, C, grad);
    EXPECT_NEAR(f, naive_objective(d, w, b, C), 1e-10 * std::max(1.0, std::abs(f)));
    const double h = 1e-6;
    for (std::size_t k = 0; k <= 3; ++k) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (k < 3) {
        wp[k] += h;
        wm[k] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double fd = (naive_objective(d, wp, bp, C) - naive_objective(d, wm, bm, C)) / (2 * h);
      EXPECT_NEAR(grad[k], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(LogReg, RestartsAgreeByConvexity) {
  std::mt19937_64 rng(3);
  const auto d = gaussian_data(rng, 80, 4);
  LogRegOptions o;
  o.init_scale = 1.0;
  o.seed = 1;
  const double ref = train_logreg(d.rows, d.dim, d.labels, o).objective;
  for (std::uint64_t s = 2; s <= 6; ++s) {
    o.seed = s;
    EXPECT_NEAR(train_logreg(d.rows, d.dim, d.labels, o).objective, ref, 1e-6);
  }
}

TEST(LogReg, WeightNormIsMonotoneInC) {
  std::mt19937_64 rng(8);
  const auto d = gaussian_data(rng, 60, 3);
  double prev = 0.0;
  for (double C : {0.01, 0.1, 0.5, 1.0, 10.0, 100.0}) {
    LogRegOptions o;
    o.C = C;
    const double n = l2norm(train_logreg(d.rows, d.dim, d.labels, o).model.weights);
    EXPECT_GE(n, prev - 1e-9) << "C = " << C;
    prev = n;
  }
}

TEST(LogReg, RejectsBadInput) {
  const std::vector<double> rows{1.0, 2.0};
  EXPECT_THROW(train_logreg(rows, 1, {1, 1}, {}), InvalidInput);
  EXPECT_THROW(train_logreg({}, 1, {}, {}), InvalidInput);
  LogRegOptions o;
  o.C = 0.0;
  EXPECT_THROW(train_logreg(rows, 1, {0, 1}, o), ConfigError);
  const LogRegModel m{{1.0, 2.0}, 0.0, 1.0};
  EXPECT_THROW(predict_logreg(m, std::vector<double>{1.0}), InvalidInput);
}

TEST(LogRegPredict, ZeroModelGivesHalfAndLabelZero) {
  const LogRegModel m{{0.0, 0.0}, 0.0, 1.0};
  const auto p = predict_logreg(m, std::vector<double>{3.0, -1.0});
  EXPECT_EQ(p.probability, 0.5);
  EXPECT_EQ(p.label, 0u);
}

TEST(LogRegPredict, LogThreeGivesThreeQuarters) {
  const LogRegModel m{{1.0}, std::log(3.0) - 2.0, 1.0};
  EXPECT_NEAR(predict_logreg(m, std::vector<double>{2.0}).probability, 0.75, 1e-15);
}

TEST(LogRegPredict, BatchEqualsOneByOne) {
  std::mt19937_64 rng(2);
  const auto d = gaussian_data(rng, 30, 4);
  const auto m = train_logreg(d.rows, d.dim, d.labels, {}).model;
  const auto batch = predict_logreg_batch(m, d.rows);
  ASSERT_EQ(batch.size(), 30u);
  for (std::size_t i = 0; i < 30; ++i) {
    const auto one = predict_logreg(m, std::span<const double>(d.rows).subspan(i * 4, 4));
    EXPECT_EQ(batch[i].label, one.label);
    EXPECT_EQ(batch[i].probability, one.probability);
  }
}

TEST(Aggregate, SingleRowIsIdentity) {
  const auto seq = ObservationSequence::from_rows("d", {{1.5, -2.0, 0.25}});
  EXPECT_EQ(aggregate_document_vector(seq), (std::vector<double>{1.5, -2.0, 0.25}));
}

TEST(Aggregate, MeanOfTwoRows) {
  const auto seq = ObservationSequence::from_rows("d", {{0.0, 2.0}, {2.0, 0.0}});
  EXPECT_EQ(aggregate_document_vector(seq), (std::vector<double>{1.0, 1.0}));
}

TEST(Aggregate, MatchesDirectMean) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t L = 1 + trial % 9, D = 1 + trial % 6;
    std::vector<std::vector<double>> rows(L, std::vector<double>(D));
    for (auto& r : rows)
      for (auto& v : r) v = g(rng);
    const auto got = aggregate_document_vector(ObservationSequence::from_rows("d", rows));
    for (std::size_t k = 0; k < D; ++k) {
      double s = 0.0;
      for (const auto& r : rows) s += r[k];
      EXPECT_NEAR(got[k], s / static_cast<double>(L), 1e-12);
    }
  }
}
