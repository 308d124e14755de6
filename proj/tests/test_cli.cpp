#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hcrf/corpus.hpp"
#include "hcrf/segment.hpp"
#include "hcrf/text.hpp"
#include "test_support.hpp"

using namespace hcrf;
using hcrf::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string err;
};

Result run(const std::string& args, const TempDir& dir) {
  const auto err = dir.path() / "stderr.txt";
  const std::string cmd = std::string(HCRF_CLI) + " " + args + " >/dev/null 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = read_file(err.string());
  return r;
}

std::string at(const TempDir& d, const std::string& rel) { return (d.path() / rel).string(); }

// Tree of regular files below root, relative path -> content, run logs excluded.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() == "run.log") continue;
    out[fs::relative(e.path(), root).string()] = read_file(e.path().string());
  }
  return out;
}

}  // namespace

TEST(Cli, GenerateTwiceGivesIdenticalFiles) {
  TempDir d;
  ASSERT_EQ(run("generate --docs 40 --seed 3 --out " + at(d, "a"), d).code, 0);
  ASSERT_EQ(run("generate --docs 40 --seed 3 --out " + at(d, "b"), d).code, 0);
  auto a = snapshot(d.path() / "a"), b = snapshot(d.path() / "b");
  a.erase("run_config.json");
  b.erase("run_config.json");
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.contains("corpus/manifest.tsv"));
  EXPECT_TRUE(a.contains("bayes.json"));
}

TEST(Cli, SegmentMatchesLibraryAndIsIdempotent) {
  TempDir d;
  ASSERT_EQ(run("generate --docs 30 --seed 1 --out " + at(d, "g"), d).code, 0);
  ASSERT_EQ(run("segment --threshold-ms 300 --corpus " + at(d, "g/corpus") + " --out " + at(d, "s1"), d).code, 0);
  ASSERT_EQ(run("segment --threshold-ms 300 --corpus " + at(d, "s1") + " --out " + at(d, "s2"), d).code, 0);
  const auto original = load_corpus(at(d, "g/corpus"));
  const auto segmented = load_corpus(at(d, "s1"));
  ASSERT_EQ(original.size(), segmented.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    const auto units = segment_into_ipus(original[i], 300);
    ASSERT_FALSE(segmented[i].tokens.empty());
    EXPECT_EQ(static_cast<std::size_t>(segmented[i].tokens.back().ipu) + 1, units.size());
  }
  auto s1 = snapshot(d.path() / "s1"), s2 = snapshot(d.path() / "s2");
  s1.erase("run_config.json");
  s2.erase("run_config.json");
  EXPECT_EQ(s1, s2);
}

TEST(Cli, MissingInputNamesThePath) {
  TempDir d;
  const auto r = run("segment --corpus " + at(d, "no_such_corpus") + " --out " + at(d, "o"), d);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("no_such_corpus"), std::string::npos) << r.err;
}

TEST(Cli, ConfigurationErrorsExitNonzero) {
  TempDir d;
  d.write("bad.json", R"({"hiden_states": 3})");
  const auto r = run("train --config " + at(d, "bad.json") + " --out " + at(d, "o"), d);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("hiden_states"), std::string::npos) << r.err;
  EXPECT_EQ(run("train --l2 0.1,x --out " + at(d, "o"), d).code, 2);
  EXPECT_NE(run("frobnicate", d).code, 0);
}

TEST(Cli, TrainThenPredictReproducesTrainingPredictions) {
  TempDir d;
  ASSERT_EQ(run("generate --docs 60 --seed 2 --out " + at(d, "g"), d).code, 0);
  const std::string res = " --embeddings " + at(d, "g/embeddings.txt") + " --lexicon " + at(d, "g/lexicon.tsv");
  ASSERT_EQ(run("train --corpus " + at(d, "g/corpus") + res + " --hidden-states 3 --l2 0.1 --out " + at(d, "t"), d).code,
            0);
  ASSERT_EQ(run("predict --model " + at(d, "t/model.json") + " --corpus " + at(d, "g/corpus") + " --out " + at(d, "p"), d)
                .code,
            0);
  EXPECT_EQ(read_file(at(d, "t/train_predictions.tsv")), read_file(at(d, "p/predictions.tsv")));
  ASSERT_EQ(run("inspect --model " + at(d, "t/model.json") + " --out " + at(d, "i"), d).code, 0);
  const auto report = nlohmann::json::parse(read_file(at(d, "i/state_report.json")));
  EXPECT_EQ(report["states"].size(), 3u);
}

TEST(Cli, EvaluateMajorityOn205And116AndReproducibility) {
  TempDir d;
  Corpus docs;
  for (int i = 0; i < 321; ++i) {
    Transcript t;
    t.doc_id = "r" + std::to_string(1000 + i);
    t.tokens.push_back({"fine", 0, 100, "", -1});
    t.valences = {i < 205 ? 4.0 : 2.0};
    docs.push_back(t);
  }
  save_corpus(docs, at(d, "c"));
  const std::string args = "evaluate --model majority --folds 10 --seed 5 --corpus " + at(d, "c");
  ASSERT_EQ(run(args + " --out " + at(d, "e1"), d).code, 0);
  ASSERT_EQ(run(args + " --out " + at(d, "e2"), d).code, 0);
  const auto j = nlohmann::json::parse(read_file(at(d, "e1/report.json")));
  EXPECT_EQ(j["pooled"]["rounded"]["weighted_f1"], 50);
  EXPECT_EQ(read_file(at(d, "e1/report.txt")), read_file(at(d, "e2/report.txt")));
  EXPECT_EQ(read_file(at(d, "e1/report.json")), read_file(at(d, "e2/report.json")));
  // The recorded configuration replays to the same report.
  ASSERT_EQ(run("evaluate --config " + at(d, "e1/run_config.json") + " --out " + at(d, "e3"), d).code, 0);
  EXPECT_EQ(read_file(at(d, "e1/report.txt")), read_file(at(d, "e3/report.txt")));
}
