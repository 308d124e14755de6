#include <gtest/gtest.h>

#include "hcrf/archive.hpp"
#include "hcrf/errors.hpp"
#include "hcrf/synthetic.hpp"
#include "test_support.hpp"

using namespace hcrf;
using hcrf::testing::TempDir;

namespace {

struct Fixture {
  TempDir dir;
  SyntheticCorpus syn;
  ResourcePaths paths;

  Fixture() {
    auto spec = SyntheticSpec::defaults();
    spec.num_docs = 60;
    syn = generate_synthetic(spec, 21);
    dir.write("emb.txt", syn.embeddings.serialize());
    dir.write("lex.tsv", syn.lexicon.serialize());
    paths.embeddings = (dir.path() / "emb.txt").string();
    paths.lexicons = {(dir.path() / "lex.tsv").string()};
  }

  ModelArchive train(ModelKind kind, const std::string& blocks, std::size_t window = 0) {
    auto loaded = load_resources(paths);
    FeatureConfig f;
    f.blocks = parse_blocks(blocks);
    ModelConfig m;
    m.kind = kind;
    m.hcrf.context_window = window;
    m.hcrf.max_iterations = 60;
    ModelArchive a;
    a.classifier = fit_classifier(syn.corpus, f, loaded.resources, m);
    a.resource_paths = paths;
    a.fingerprints = loaded.fingerprints;
    a.vocabulary_words = corpus_words(syn.corpus, *loaded.resources);
    return a;
  }
};

void expect_bitwise_same_predictions(const Classifier& a, const Classifier& b, const Corpus& docs) {
  const auto pa = a.predict(docs), pb = b.predict(docs);
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i].label, pb[i].label);
    EXPECT_EQ(pa[i].posterior, pb[i].posterior) << pa[i].doc_id;  // exact double equality
  }
}

}  // namespace

TEST(Archive, HcrfRoundTripIsByteAndPredictionExact) {
  Fixture fx;
  const auto a = fx.train(ModelKind::kHcrf, "ours", 1);
  const auto text = serialize_archive(a);
  const auto back = parse_archive(text);
  EXPECT_EQ(serialize_archive(back), text);
  expect_bitwise_same_predictions(a.classifier, back.classifier, fx.syn.corpus);
}

TEST(Archive, LogRegWithBongRoundTrip) {
  Fixture fx;
  const auto a = fx.train(ModelKind::kLogReg, "bong,lexicon");
  const auto text = serialize_archive(a);
  const auto back = parse_archive(text);
  EXPECT_EQ(serialize_archive(back), text);
  expect_bitwise_same_predictions(a.classifier, back.classifier, fx.syn.corpus);
}

TEST(Archive, MajorityRoundTrip) {
  Fixture fx;
  const auto a = fx.train(ModelKind::kMajority, "ours");
  const auto text = serialize_archive(a);
  const auto back = parse_archive(text);
  EXPECT_EQ(serialize_archive(back), text);
  expect_bitwise_same_predictions(a.classifier, back.classifier, fx.syn.corpus);
}

TEST(Archive, FileRoundTrip) {
  Fixture fx;
  const auto a = fx.train(ModelKind::kLogReg, "ours");
  const auto path = (fx.dir.path() / "model.json").string();
  save_archive(a, path);
  EXPECT_EQ(serialize_archive(load_archive(path)), serialize_archive(a));
}

TEST(Archive, ChangedResourceIsDetected) {
  Fixture fx;
  const auto text = serialize_archive(fx.train(ModelKind::kLogReg, "ours"));
  fx.dir.write("lex.tsv", "# hcrf-lexicon 1\nword\tso\ngreat\t2\n");
  try {
    parse_archive(text);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lex.tsv"), std::string::npos) << e.what();
  }
}

TEST(Archive, MalformedArchivesAreParseErrors) {
  EXPECT_THROW(parse_archive("not json"), ParseError);
  EXPECT_THROW(parse_archive("{}"), ParseError);
  EXPECT_THROW(parse_archive(R"({"format": "hcrf-model", "format_version": 99})"), ParseError);
  Fixture fx;
  auto j = nlohmann::ordered_json::parse(serialize_archive(fx.train(ModelKind::kLogReg, "ours")));
  j["logreg"]["weights"].push_back(1.0);
  j.erase("features");
  EXPECT_THROW(parse_archive(j.dump()), ParseError);
}

TEST(Archive, TamperedParametersAreRejected) {
  Fixture fx;
  auto j = nlohmann::ordered_json::parse(serialize_archive(fx.train(ModelKind::kHcrf, "ours")));
  j["hcrf"]["values"].erase(0);
  EXPECT_THROW(parse_archive(j.dump()), ParseError);
}

TEST(Archive, ConfigJsonRoundTrips) {
  FeatureConfig f;
  f.threshold_ms = 150;
  f.whole_document = true;
  f.blocks = parse_blocks("bong,pattern");
  f.bong.max_features = 500;
  EXPECT_EQ(feature_config_json(feature_config_from_json(feature_config_json(f))), feature_config_json(f));
  ModelConfig m;
  m.kind = ModelKind::kLogReg;
  m.l2_grid = {0.01, 0.1};
  m.hidden_state_grid = {2, 3, 4, 5};
  m.c_grid = {0.1, 0.5, 1, 10, 100};
  m.hcrf.seed = 42;
  EXPECT_EQ(model_config_json(model_config_from_json(model_config_json(m))), model_config_json(m));
}
