#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <regex>

#include "hcrf/bong.hpp"
#include "hcrf/embedding.hpp"
#include "hcrf/errors.hpp"
#include "hcrf/lexicon.hpp"
#include "hcrf/paralinguistic.hpp"
#include "hcrf/patterns.hpp"
#include "hcrf/pipeline.hpp"
#include "hcrf/porter.hpp"
#include "hcrf/resources.hpp"
#include "hcrf/standardizer.hpp"
#include "hcrf/text.hpp"

namespace hcrf {
namespace {

using Strings = std::vector<std::string>;

TEST(Tokenize, SplitsPunctuationAndClitics) {
  EXPECT_EQ(tokenize("Great movie!"), (Strings{"Great", "movie"}));
  EXPECT_EQ(tokenize("I don't know, really."), (Strings{"I", "do", "n't", "know", "really"}));
  EXPECT_EQ(tokenize("it's"), (Strings{"it", "'s"}));
  EXPECT_TRUE(tokenize("  ... ").empty());
}

TEST(Porter, ReferenceVectors) {
  const std::map<std::string, std::string> cases{
      {"caresses", "caress"}, {"ponies", "poni"},      {"ties", "ti"},         {"cats", "cat"},
      {"feed", "feed"},       {"agreed", "agre"},      {"plastered", "plaster"}, {"motoring", "motor"},
      {"sing", "sing"},       {"hopping", "hop"},      {"filing", "file"},     {"happy", "happi"},
      {"relational", "relat"}, {"conditional", "condit"}, {"generalizations", "gener"},
      {"movie", "movi"},      {"electrical", "electr"}, {"adjustable", "adjust"}, {"controll", "control"},
      {"is", "is"},           {"great", "great"},
  };
  for (const auto& [word, stem] : cases) EXPECT_EQ(porter_stem(word), stem) << word;
}

TEST(Bong, GreatMovieTerms) {
  const auto terms = ngram_terms(stem_tokens({"great", "movie"}), 3);
  EXPECT_EQ(terms, (Strings{"great", "movi", "great_movi"}));
}

TEST(Bong, ThreeDocumentTfIdfByHand) {
  const std::vector<Strings> docs{{"good", "movie"}, {"bad", "movie"}, {"good", "good"}};
  BongOptions opts;
  opts.max_order = 1;
  const auto vocab = fit_bong(docs, opts);
  ASSERT_EQ(vocab.terms(), (Strings{"bad", "good", "movi"}));
  const double l15 = std::log(1.5), l3 = std::log(3.0);
  const std::vector<std::vector<double>> expected{
      {0.0, l15 / 2, l15 / 2}, {l3 / 2, 0.0, l15 / 2}, {0.0, 2 * l15 / 2, 0.0}};
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto v = vectorize_bong(docs[d], vocab);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(v[i], expected[d][i], 1e-15);
  }
}

TEST(Bong, UbiquitousTermHasZeroWeightAndOovIgnored) {
  const std::vector<Strings> docs{{"the", "plot"}, {"the", "cast"}};
  const auto vocab = fit_bong(docs, BongOptions{});
  const auto v = vectorize_bong({"the", "zebra"}, vocab);
  EXPECT_EQ(vocab.idf()[vocab.find("the")], 0.0);
  for (double x : v) EXPECT_EQ(x, 0.0);
}

TEST(Bong, EmptyVocabularyIsConfigError) {
  EXPECT_THROW(fit_bong({{}, {}}, BongOptions{}), ConfigError);
}

TEST(Bong, FeatureCapKeepsMostFrequent) {
  BongOptions opts;
  opts.max_order = 1;
  opts.max_features = 1;
  const auto vocab = fit_bong({{"a", "b"}, {"b"}}, opts);
  EXPECT_EQ(vocab.terms(), Strings{"b"});
}

TEST(Embedding, MeanOfCoveredTokens) {
  EmbeddingTable t(2);
  t.add("up", {1, 0});
  t.add("right", {0, 1});
  const auto v = embed_unit({"up", "right"}, t, {});
  EXPECT_EQ(v, (std::vector<double>{0.5, 0.5, 1.0}));
}

TEST(Embedding, NoCoverageGivesZerosAndFlag) {
  EmbeddingTable t(2);
  t.add("up", {1, 0});
  EXPECT_EQ(embed_unit({"zzz", "qqq"}, t, {}), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(embed_unit({"up"}, t, {"up"}), (std::vector<double>{0, 0, 0}));
}

TEST(Embedding, MixedCoverageMatchesDirectSummation) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const std::size_t dim = 5;
  EmbeddingTable t(dim);
  std::map<std::string, std::vector<double>> ref;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = g(rng);
    const std::string w = "w" + std::to_string(i);
    t.add(w, v);
    ref[w] = v;
  }
  Strings tokens;
  for (int i = 0; i < 40; ++i) tokens.push_back((i % 3 == 0 ? "oov" : "w") + std::to_string(i % 25));
  std::vector<double> sum(dim, 0.0);
  int n = 0;
  for (const auto& tok : tokens) {
    auto it = ref.find(tok);
    if (it == ref.end()) continue;
    for (std::size_t k = 0; k < dim; ++k) sum[k] += it->second[k];
    ++n;
  }
  const auto v = embed_unit(tokens, t, {});
  ASSERT_GT(n, 0);
  for (std::size_t k = 0; k < dim; ++k) EXPECT_NEAR(v[k], sum[k] / n, 1e-12);
  EXPECT_EQ(v[dim], 1.0);
}

TEST(Embedding, ParseHeaderAndErrors) {
  const auto t = EmbeddingTable::parse("2 3\nGood 1 2 3\nbad -1 -2 -3\n", "mem");
  EXPECT_EQ(t.dim(), 3u);
  ASSERT_TRUE(t.lookup("Good"));
  EXPECT_EQ((*t.lookup("Good"))[1], 2.0);
  ASSERT_TRUE(t.lookup("BAD"));
  EXPECT_FALSE(t.lookup("good"));
  EXPECT_THROW(EmbeddingTable::parse("a 1 2\nb 1\n", "mem"), ParseError);
  EXPECT_THROW(EmbeddingTable::parse("a 1 x\n", "mem"), ParseError);
  const auto again = EmbeddingTable::parse(t.serialize(), "mem");
  EXPECT_EQ(again.words(), t.words());
}

Lexicon swn_lexicon() {
  return Lexicon::parse("word\tswn_pos\tswn_neg\tswn_neu\nnice\t0.5\t0\t0.5\n", "swn", "mem");
}

Lexicon so_lexicon() { return Lexicon::parse("word\tso\ngood\t3\nawful\t-4\nokay\t0\n", "socal", "mem"); }

TEST(Lexicon, NoHitsAllZero) {
  const auto v = lexicon_features({"xyz"}, {swn_lexicon(), so_lexicon()}, Modifiers::defaults());
  for (double x : v) EXPECT_EQ(x, 0.0);
}

TEST(Lexicon, SingleSwnWord) {
  Lexicon lex = Lexicon::parse("word\tswn_pos\tswn_neg\tswn_neu\nfine\t0.5\t0\t0.5\n", "swn", "mem");
  const auto v = lexicon_features({"fine"}, {lex}, Modifiers::defaults());
  EXPECT_EQ(v[0], 0.5);
  EXPECT_EQ(v[1], 0.0);
}

TEST(Lexicon, NegationShiftsTowardOppositePolarity) {
  const auto& names = LexiconChannels::names();
  const auto pos = std::find(names.begin(), names.end(), "so_pos") - names.begin();
  const auto neg = std::find(names.begin(), names.end(), "so_neg") - names.begin();
  const auto v = lexicon_features({"not", "good"}, {so_lexicon()}, Modifiers::defaults());
  EXPECT_EQ(v[pos], 0.0);
  EXPECT_EQ(v[neg], 1.0);
  const auto w = lexicon_features({"not", "awful"}, {so_lexicon()}, Modifiers::defaults());
  EXPECT_EQ(w[pos], 0.0);
  EXPECT_EQ(w[neg], 0.0);
}

TEST(Lexicon, IntensifiersMultiply) {
  Modifiers m;
  m.intensifiers = {{"very", 1.5}, {"slightly", 0.5}};
  const auto v = lexicon_features({"very", "good"}, {so_lexicon()}, m);
  EXPECT_DOUBLE_EQ(v[6], 4.5);
  const auto w = lexicon_features({"slightly", "awful"}, {so_lexicon()}, m);
  EXPECT_DOUBLE_EQ(w[7], 2.0);
  const auto z = lexicon_features({"okay"}, {so_lexicon()}, m);
  EXPECT_EQ(z[8], 1.0);
}

TEST(Lexicon, RejectsBadTriplesAndMissingHeader) {
  EXPECT_THROW(Lexicon::parse("word\tswn_pos\tswn_neg\tswn_neu\nx\t0.5\t0.5\t0.5\n", "s", "mem"), ParseError);
  EXPECT_THROW(Lexicon::parse("", "s", "mem"), ParseError);
  EXPECT_THROW(Lexicon::parse("word\tso\nx\tabc\n", "s", "mem"), ParseError);
  const auto csv = Lexicon::parse("word,valence,arousal,dominance\nhappy,8,6,7\n", "anew", "mem");
  const auto v = lexicon_features({"Happy"}, {csv}, Modifiers{});
  EXPECT_EQ(v[3], 8.0);
  EXPECT_EQ(v[4], 6.0);
  EXPECT_EQ(v[5], 7.0);
}

std::size_t col(const Strings& names, const std::string& n) {
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin());
}

TEST(Patterns, AdjNounAndModifiers) {
  const auto tags = default_counted_tags();
  const auto names = pattern_feature_names(tags);
  const auto v = pattern_features({"great", "movie"}, {"ADJ", "NOUN"}, Modifiers::defaults(), tags);
  EXPECT_EQ(v[col(names, "adj_noun")], 1.0);
  Modifiers m;
  m.negators = {"not"};
  m.intensifiers = {{"really", 1.2}};
  const auto w = pattern_features({"not", "really", "good"}, {"ADV", "ADV", "ADJ"}, m, tags);
  EXPECT_EQ(w[col(names, "negation")], 1.0);
  EXPECT_EQ(w[col(names, "amplifier")], 1.0);
  EXPECT_THROW(pattern_features({"a"}, {}, m, tags), InvalidInput);
}

TEST(Patterns, TwentyTokenRecount) {
  const Strings tokens{"Honestly", "I", "um", "really", "liked", "this", "great", "movie", "but", "the",
                       "ending", "was", "slightly", "boring", "and", "not", "very", "Funny", "uh", "wow"};
  const Strings tags{"ADV",  "PRON", "INTJ", "ADV", "VERB", "DET",  "ADJ", "NOUN", "CONJ", "DET",
                     "NOUN", "VERB", "ADV",  "ADJ", "CONJ", "ADV", "ADV", "ADJ",  "INTJ", "INTJ"};
  const auto mods = Modifiers::defaults();
  const auto counted = default_counted_tags();
  const auto v = pattern_features(tokens, tags, mods, counted);
  const auto names = pattern_feature_names(counted);

  // Independent recount over the joined "word/TAG" string.
  std::string joined;
  for (std::size_t i = 0; i < tokens.size(); ++i) joined += tokens[i] + "/" + tags[i] + " ";
  auto count = [&](const std::string& re) {
    const std::regex r(re);
    return static_cast<double>(std::distance(std::sregex_iterator(joined.begin(), joined.end(), r), {}));
  };
  EXPECT_EQ(v[col(names, "adj_noun")], count(R"(\S+/ADJ (?=\S+/NOUN))"));
  EXPECT_EQ(v[col(names, "negation")], count(R"((^| )not/)"));
  EXPECT_EQ(v[col(names, "amplifier")], count(R"((^| )(really|very)/)"));
  EXPECT_EQ(v[col(names, "downtoner")], count(R"((^| )slightly/)"));
  EXPECT_EQ(v[col(names, "disfluency")], count(R"((^| )(um|uh)/)"));
  EXPECT_EQ(v[col(names, "capitalized")], count(R"((^| )[A-Z])"));
  for (const auto& t : counted) EXPECT_EQ(v[col(names, "pos_" + t)], count("/" + t + " ")) << t;
}

TEST(Patterns, TaggerParseRejectsDuplicates) {
  EXPECT_THROW(PosTagger::parse("word\ttag\nx\tNOUN\nx\tVERB\n", "mem"), ParseError);
  EXPECT_THROW(PosTagger::parse("word\ttag\nx\tFOO\n", "mem"), ParseError);
  const PosTagger t;
  EXPECT_EQ(t.tag_word("great"), "ADJ");
}

TEST(Paralinguistic, Counts) {
  const MarkerMap m;
  const auto& cats = MarkerMap::categories();
  EXPECT_EQ(paralinguistic_features({}, m), std::vector<double>(cats.size(), 0.0));
  const auto v = paralinguistic_features({"*chuckling*"}, m);
  EXPECT_EQ(v[col(cats, "laughter")], 1.0);
  const Strings mixed{"*falling intonation*", "*laughing*", "*zzz*", "*word elongation*", "*chuckle*"};
  const auto w = paralinguistic_features(mixed, m);
  std::map<std::string, double> recount;
  for (const auto& mk : mixed) recount[m.category(mk)] += 1;
  for (std::size_t c = 0; c < cats.size(); ++c) EXPECT_EQ(w[c], recount[cats[c]]) << cats[c];
  EXPECT_EQ(recount["other"], 1.0);
}

TEST(Standardizer, Examples) {
  const auto s = Standardizer::fit(std::vector<double>{0, 5, 2, 5}, 2);
  EXPECT_EQ(s.apply(std::vector<double>{0, 5, 2, 5}), (std::vector<double>{-1, 0, 1, 0}));
}

TEST(Standardizer, RandomMatrixStatistics) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(3.0, 7.0);
  const std::size_t n = 257, d = 6;
  std::vector<double> rows(n * d);
  for (auto& x : rows) x = g(rng);
  for (std::size_t r = 0; r < n; ++r) rows[r * d + 5] = 4.25;
  const auto z = Standardizer::fit(rows, d).apply(rows);
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0;
    for (std::size_t r = 0; r < n; ++r) mean += z[r * d + c];
    mean /= n;
    double var = 0;
    for (std::size_t r = 0; r < n; ++r) var += (z[r * d + c] - mean) * (z[r * d + c] - mean);
    var /= n;
    EXPECT_LE(std::abs(mean), 1e-12);
    if (c < 5) EXPECT_NEAR(std::sqrt(var), 1.0, 1e-9);
    else EXPECT_EQ(var, 0.0);
  }
}

TEST(Standardizer, DisabledColumnsPassThrough) {
  const auto s = Standardizer::fit(std::vector<double>{1, 0, 3, 2}, 2, {false, true});
  EXPECT_EQ(s.apply(std::vector<double>{1, 0, 3, 2}), (std::vector<double>{1, -1, 3, 1}));
}

Transcript make_doc(const std::string& id, const Strings& words, std::int64_t gap_every, double valence) {
  Transcript t;
  t.doc_id = id;
  std::int64_t now = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (gap_every > 0 && i > 0 && i % static_cast<std::size_t>(gap_every) == 0) now += 600;
    t.tokens.push_back({words[i], now, now + 100, ""});
    now += 150;
  }
  t.markers.push_back({"*chuckling*", 0});
  t.valences = {valence};
  return t;
}

std::shared_ptr<FeatureResources> small_resources() {
  auto res = std::make_shared<FeatureResources>();
  EmbeddingTable t(3);
  t.add("great", {1, 0, 0});
  t.add("awful", {0, 1, 0});
  t.add("plot", {0, 0, 1});
  res->embeddings = t;
  res->lexicons = {so_lexicon()};
  return res;
}

TEST(Pipeline, ParseBlocksCanonicalOrder) {
  EXPECT_EQ(format_blocks(parse_blocks("lexicon,bong,lexicon")), "bong,lexicon");
  EXPECT_EQ(format_blocks(parse_blocks("ours")), "embedding,lexicon,pattern,paralinguistic");
  EXPECT_EQ(parse_blocks("all").size(), 5u);
  EXPECT_THROW(parse_blocks("bogus"), ConfigError);
}

TEST(Pipeline, EmbeddingOnlyDimension) {
  FeatureConfig cfg;
  cfg.blocks = {FeatureBlock::kEmbedding};
  FeaturePipeline p(cfg, small_resources());
  p.fit({make_doc("a", {"great", "plot"}, 0, 5)});
  EXPECT_EQ(p.schema().dim(), 4u);
}

TEST(Pipeline, SchemaSlicesRecomposeExtractorOutputs) {
  FeatureConfig cfg;
  cfg.blocks = parse_blocks("all");
  cfg.standardize = false;
  auto res = small_resources();
  FeaturePipeline p(cfg, res);
  const Corpus train{make_doc("a", {"great", "plot", "not", "good", "Really", "great"}, 2, 5),
                     make_doc("b", {"awful", "plot", "um", "awful"}, 2, 1)};
  p.fit(train);
  std::size_t total = 0;
  for (const auto& b : p.schema().blocks()) total += b.width;
  EXPECT_EQ(total, p.schema().dim());

  const auto& doc = train[0];
  const auto seq = p.transform(doc);
  const auto units = p.units(doc);
  ASSERT_EQ(seq.length(), units.size());
  for (std::size_t j = 0; j < units.size(); ++j) {
    const auto text = prepare_unit(units[j], *res);
    const auto row = seq.row(j);
    auto slice = [&](const char* name) {
      const auto* b = p.schema().find(name);
      return std::vector<double>(row.begin() + static_cast<long>(b->offset),
                                 row.begin() + static_cast<long>(b->offset + b->width));
    };
    EXPECT_EQ(slice("bong"), vectorize_bong(text.words, *p.vocabulary()));
    EXPECT_EQ(slice("embedding"), embed_unit(text.words, *res->embeddings, res->stopwords));
    EXPECT_EQ(slice("lexicon"), lexicon_features(text.words, res->lexicons, res->modifiers));
    EXPECT_EQ(slice("pattern"), pattern_features(text.words, text.tags, res->modifiers, cfg.counted_tags));
    EXPECT_EQ(slice("paralinguistic"), paralinguistic_features(units[j].para_events, res->markers));
  }
}

TEST(Pipeline, StandardizesDenseBlocksOnly) {
  FeatureConfig cfg;
  cfg.blocks = parse_blocks("bong,embedding");
  FeaturePipeline p(cfg, small_resources());
  const Corpus train{make_doc("a", {"great", "plot", "awful", "plot"}, 2, 5),
                     make_doc("b", {"awful", "awful", "great"}, 1, 1)};
  p.fit(train);
  const auto* bong = p.schema().find("bong");
  for (std::size_t c = bong->offset; c < bong->offset + bong->width; ++c) {
    EXPECT_EQ(p.standardizer().mean()[c], 0.0);
    EXPECT_EQ(p.standardizer().stddev()[c], 1.0);
  }
  const auto* emb = p.schema().find("embedding");
  EXPECT_NE(p.standardizer().mean()[emb->offset], 0.0);
}

TEST(Pipeline, FittedStateDependsOnlyOnTrainingDocuments) {
  FeatureConfig cfg;
  cfg.blocks = parse_blocks("all");
  const Corpus train{make_doc("a", {"great", "plot"}, 1, 5), make_doc("b", {"awful", "plot", "um"}, 2, 1)};
  const Transcript test = make_doc("c", {"zebra", "great", "awful"}, 1, 5);
  FeaturePipeline p1(cfg, small_resources()), p2(cfg, small_resources());
  p1.fit(train);
  p2.fit(train);
  (void)p2.transform(test);
  EXPECT_EQ(p1.fitted_checksum(), p2.fitted_checksum());
  FeaturePipeline p3(cfg, small_resources());
  Corpus with_test = train;
  with_test.push_back(test);
  p3.fit(with_test);
  EXPECT_NE(p1.fitted_checksum(), p3.fitted_checksum());
  EXPECT_EQ(p1.vocabulary()->find("zebra"), NGramVocabulary::npos);
}

TEST(Pipeline, ExtractorsArePure) {
  FeatureConfig cfg;
  cfg.blocks = parse_blocks("all");
  FeaturePipeline p(cfg, small_resources());
  const Corpus train{make_doc("a", {"great", "plot", "not", "good"}, 2, 5)};
  p.fit(train);
  const auto a = p.transform(train[0]), b = p.transform(train[0]);
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end()));
}

TEST(Pipeline, MissingResourcesAreConfigErrors) {
  FeatureConfig cfg;
  cfg.blocks = {FeatureBlock::kEmbedding};
  EXPECT_THROW(FeaturePipeline(cfg, std::make_shared<FeatureResources>()), ConfigError);
  FeatureConfig pc;
  pc.blocks = {FeatureBlock::kPattern};
  FeaturePipeline p(pc, std::make_shared<FeatureResources>());
  EXPECT_THROW(p.transform(make_doc("a", {"x"}, 0, 5)), ConfigError);
}

TEST(Pipeline, ContextWindowSchema) {
  FeatureSchema s({{"lexicon", 0, 2, {"a", "b"}}});
  const auto w = s.with_context_window(1);
  EXPECT_EQ(w.dim(), 6u);
  EXPECT_EQ(w.blocks()[0].name, "lexicon@-1");
  EXPECT_EQ(w.blocks()[1].name, "lexicon");
  EXPECT_EQ(w.blocks()[2].name, "lexicon@+1");
  EXPECT_EQ(w.feature_name(5), "lexicon@+1:b");
}

}  // namespace
}  // namespace hcrf
