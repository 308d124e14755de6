#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hcrf/errors.hpp"
#include "hcrf/introspection.hpp"

using namespace hcrf;

namespace {

constexpr std::size_t kE = 3;

// lexicon (2 columns) followed by a 3-d embedding block with coverage flag.
FeatureSchema test_schema() {
  return FeatureSchema({{"lexicon", 0, 2, {"so_pos", "so_neg"}}, {"embedding", 2, kE + 1, {"e0", "e1", "e2", "coverage"}}});
}

EmbeddingTable test_table() {
  EmbeddingTable t(kE);
  t.add("alpha", {1.0, 0.0, 0.5});
  t.add("beta", {0.0, 2.0, -1.0});
  t.add("gamma", {3.0, -1.0, 0.0});
  t.add("delta", {-2.0, 0.5, 2.0});
  t.add("zero", {0.0, 0.0, 0.0});
  return t;
}

const std::vector<std::string> kVocab{"alpha", "beta", "delta", "gamma", "oov", "zero"};

HcrfParameters theta_with(std::size_t H, std::size_t D) { return HcrfParameters(2, H, D); }

}  // namespace

TEST(TopFeatures, SinglePositiveEntryRanksFirst) {
  auto theta = theta_with(2, 6);
  theta.obs(0)[3] = 0.7;
  theta.obs(0)[1] = -2.0;
  const auto top = top_features_per_state(theta, test_schema(), 30);
  ASSERT_EQ(top[0].size(), 1u);
  EXPECT_EQ(top[0][0].column, 3u);
  EXPECT_EQ(top[0][0].name, "embedding:e1");
  EXPECT_TRUE(top[1].empty());
}

TEST(TopFeatures, MatchesIndependentSortAndRespectsK) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto schema = test_schema();
  for (int trial = 0; trial < 100; ++trial) {
    auto theta = theta_with(3, 6);
    for (auto& v : theta.values()) v = g(rng);
    const std::size_t k = 1 + trial % 6;
    const auto top = top_features_per_state(theta, schema, k);
    for (std::size_t h = 0; h < 3; ++h) {
      std::vector<std::pair<double, std::size_t>> ref;
      for (std::size_t c = 0; c < 6; ++c) {
        if (theta.obs(h)[c] > 0) ref.push_back({-theta.obs(h)[c], c});
      }
      std::sort(ref.begin(), ref.end());
      ref.resize(std::min(k, ref.size()));
      ASSERT_EQ(top[h].size(), ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i) {
        EXPECT_EQ(top[h][i].column, ref[i].second);
        EXPECT_EQ(top[h][i].name, schema.feature_name(ref[i].second));
      }
    }
  }
}

TEST(TopFeatures, SchemaMismatchIsRejected) {
  EXPECT_THROW(top_features_per_state(theta_with(2, 5), test_schema(), 3), InvalidInput);
}

TEST(TopFeatures, InvariantUnderUnrelatedBlocks) {
  auto theta = theta_with(2, 6);
  theta.obs(1)[0] = 1.0;
  theta.obs(1)[4] = 2.0;
  const auto before = top_features_per_state(theta, test_schema(), 5);
  theta.label_state(0, 1) = 9.0;
  theta.transition(1, 0, 1) = -4.0;
  const auto after = top_features_per_state(theta, test_schema(), 5);
  ASSERT_EQ(before[1].size(), after[1].size());
  for (std::size_t i = 0; i < before[1].size(); ++i) EXPECT_EQ(before[1][i].column, after[1][i].column);
}

TEST(ActivationWords, UnitVectorRanksByCoordinate) {
  const auto schema = test_schema();
  const auto table = test_table();
  const EmbeddingProbe probe{&schema, &table, nullptr};
  auto theta = theta_with(2, 6);
  theta.obs(1)[2] = 1.0;  // e0
  const auto words = activation_words(theta, 1, probe, kVocab, 10);
  std::vector<std::string> got;
  for (const auto& w : words) got.push_back(w.word);
  EXPECT_EQ(got, (std::vector<std::string>{"gamma", "alpha", "beta", "zero", "delta"}));
  EXPECT_EQ(words[0].score, 3.0);
}

TEST(ActivationWords, ZeroBlockTiesAreLexicographic) {
  const auto schema = test_schema();
  const auto table = test_table();
  const EmbeddingProbe probe{&schema, &table, nullptr};
  const auto words = activation_words(theta_with(2, 6), 0, probe, kVocab, 3);
  ASSERT_EQ(words.size(), 3u);
  EXPECT_EQ(words[0].word, "alpha");
  EXPECT_EQ(words[1].word, "beta");
  EXPECT_EQ(words[2].word, "delta");
  for (const auto& w : words) EXPECT_EQ(w.score, 0.0);
}

TEST(ActivationWords, MatchesBruteForceDotProducts) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto schema = test_schema();
  EmbeddingTable table(kE);
  std::vector<std::string> vocab;
  for (int i = 0; i < 40; ++i) {
    const std::string w = "w" + std::to_string(100 + i);
    table.add(w, {g(rng), g(rng), g(rng)});
    vocab.push_back(w);
  }
  const EmbeddingProbe probe{&schema, &table, nullptr};
  for (int trial = 0; trial < 30; ++trial) {
    auto theta = theta_with(2, 6);
    for (auto& v : theta.values()) v = g(rng);
    const std::size_t h = trial % 2;
    std::vector<std::pair<double, std::string>> ref;
    for (const auto& w : vocab) {
      const auto e = *table.lookup(w);
      double s = 0.0;
      for (std::size_t k = 0; k < kE; ++k) s += e[k] * theta.obs(h)[2 + k];
      ref.push_back({-s, w});
    }
    std::sort(ref.begin(), ref.end());
    const auto got = activation_words(theta, h, probe, vocab, 7);
    ASSERT_EQ(got.size(), 7u);
    for (std::size_t i = 0; i < 7; ++i) {
      EXPECT_EQ(got[i].word, ref[i].second);
      EXPECT_NEAR(got[i].score, -ref[i].first, 1e-12);
    }
  }
}

TEST(ActivationWords, StandardizerScalesEmbeddings) {
  const auto schema = test_schema();
  const auto table = test_table();
  // Standardizer over the 6 columns; the embedding block starts at column 2.
  const Standardizer st({0, 0, 1.0, 0.0, 0.0, 0}, {1, 1, 2.0, 1.0, 1.0, 1});
  const EmbeddingProbe probe{&schema, &table, &st};
  auto theta = theta_with(1, 6);
  theta.obs(0)[2] = 1.0;
  const auto p = word_state_profile("gamma", theta, probe);
  ASSERT_TRUE(p);
  EXPECT_DOUBLE_EQ((*p)[0], (3.0 - 1.0) / 2.0);
}

TEST(ActivationWords, MissingEmbeddingBlockIsConfigError) {
  const FeatureSchema schema({{"lexicon", 0, 2, {"so_pos", "so_neg"}}});
  const auto table = test_table();
  const EmbeddingProbe probe{&schema, &table, nullptr};
  EXPECT_THROW(activation_words(theta_with(2, 2), 0, probe, kVocab, 3), ConfigError);
}

TEST(WordProfile, ZeroEmbeddingGivesZeroProfile) {
  const auto schema = test_schema();
  const auto table = test_table();
  const EmbeddingProbe probe{&schema, &table, nullptr};
  auto theta = theta_with(3, 6);
  for (auto& v : theta.values()) v = 1.5;
  const auto p = word_state_profile("zero", theta, probe);
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(WordProfile, OovIsNotFound) {
  const auto schema = test_schema();
  const auto table = test_table();
  const EmbeddingProbe probe{&schema, &table, nullptr};
  EXPECT_FALSE(word_state_profile("oov", theta_with(2, 6), probe));
}

TEST(WordProfile, AgreesWithActivationScoresAndDirectRecomputation) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto schema = test_schema();
  const auto table = test_table();
  const EmbeddingProbe probe{&schema, &table, nullptr};
  for (int trial = 0; trial < 20; ++trial) {
    auto theta = theta_with(3, 6);
    for (auto& v : theta.values()) v = g(rng);
    const auto p = *word_state_profile("delta", theta, probe);
    const auto e = *table.lookup("delta");
    for (std::size_t h = 0; h < 3; ++h) {
      double s = 0.0;
      for (std::size_t k = 0; k < kE; ++k) s += e[k] * theta.obs(h)[2 + k];
      EXPECT_NEAR(p[h], s, 1e-12);
      for (const auto& w : activation_words(theta, h, probe, kVocab, 10)) {
        if (w.word == "delta") EXPECT_EQ(w.score, p[h]);
      }
    }
  }
}

TEST(StateCharacter, OpposedStatesAreAligned) {
  auto theta = theta_with(3, 1);
  theta.label_state(0, 0) = 5;
  theta.label_state(1, 0) = -5;
  theta.label_state(0, 1) = -5;
  theta.label_state(1, 1) = 5;
  const auto sc = state_character(theta);
  EXPECT_EQ(sc.aligned[0], std::optional<Label>(0));
  EXPECT_EQ(sc.aligned[1], std::optional<Label>(1));
  EXPECT_EQ(sc.aligned[2], std::nullopt);
  EXPECT_EQ(sc.aligned_count(), 2u);
}

TEST(StateCharacter, ZeroWeightsAreNeutral) {
  const auto sc = state_character(theta_with(4, 1));
  EXPECT_EQ(sc.aligned_count(), 0u);
}

TEST(StateCharacter, RaisingTauNeverAddsAlignedStates) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto theta = theta_with(2 + trial % 5, 1);
    for (auto& v : theta.values()) v = g(rng);
    std::size_t prev = theta.num_states() + 1;
    for (double tau = 0.0; tau <= 8.0; tau += 0.25) {
      const auto n = state_character(theta, tau).aligned_count();
      EXPECT_LE(n, prev);
      prev = n;
    }
  }
}

TEST(StateCharacter, NeedsTwoLabels) { EXPECT_THROW(state_character(HcrfParameters(3, 2, 1)), InvalidInput); }

TEST(StateReport, DeterministicAndComplete) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto schema = test_schema();
  const auto table = test_table();
  const EmbeddingProbe probe{&schema, &table, nullptr};
  auto theta = theta_with(3, 6);
  for (auto& v : theta.values()) v = g(rng);
  StateReportOptions opts;
  opts.top_k = 2;
  opts.top_words = 2;
  opts.profile_words = {"alpha", "oov"};
  const auto a = state_report_json(theta, LabelSet::binary_polarity(), schema, &probe, kVocab, opts);
  const auto b = state_report_json(theta, LabelSet::binary_polarity(), schema, &probe, kVocab, opts);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(format_state_report(a), format_state_report(b));
  ASSERT_EQ(a["transitions"].size(), 2u);
  for (const auto& s : a["states"]) {
    EXPECT_LE(s["top_features"].size(), 2u);
    EXPECT_LE(s["activation_words"].size(), 2u);
  }
  const auto text = format_state_report(a);
  EXPECT_NE(text.find("transitions given Positive"), std::string::npos);
  EXPECT_NE(text.find("oov"), std::string::npos);
}
