#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "lexlda/error.hpp"
#include "lexlda/corpus.hpp"
#include "lexlda/lda.hpp"

namespace lexlda::tools {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lexlda_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Small synthetic collection ingested with every term kept.
  std::string make_corpus(const std::vector<std::string>& synth_extra = {}) {
    std::vector<std::string> args = {"synth", "--out", path("c.jsonl"), "--topics", "3", "--vocab",
                                     "30", "--docs", "40", "--doc-len", "25", "--seed", "5"};
    args.insert(args.end(), synth_extra.begin(), synth_extra.end());
    EXPECT_EQ(run(args).code, kExitOk);
    EXPECT_EQ(run({"ingest", "--in", path("c.jsonl"), "--out", path("c.corpus.json"), "--min-df",
                   "1", "--max-df-ratio", "1"})
                  .code,
              kExitOk);
    return path("c.corpus.json");
  }

  fs::path dir_;
};

TEST_F(CliTest, IngestReportsSummary) {
  std::ofstream(path("in.jsonl")) << R"({"id":"a","date":"2013-01-02","text":"Odpady komunalne"})"
                                  << "\n"
                                  << R"({"id":"b","date":"2013-02-02","text":"odpady roboty"})"
                                  << "\n";
  const auto r = run({"ingest", "--in", path("in.jsonl"), "--out", path("out.json"), "--min-df",
                      "1", "--max-df-ratio", "1"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "D=2 V=3 tokens=4\n");
  const Corpus c = load_corpus(path("out.json"));
  EXPECT_EQ(c.num_docs(), 2u);

  const auto stricter = run({"ingest", "--in", path("in.jsonl"), "--out", path("out2.json"),
                             "--min-df", "2", "--max-df-ratio", "1"});
  EXPECT_EQ(stricter.out, "D=2 V=1 tokens=2\n");
}

TEST_F(CliTest, ExitCodes) {
  const auto missing = run({"ingest", "--in", path("nope.jsonl"), "--out", path("x.json")});
  EXPECT_EQ(missing.code, kExitInputError);
  EXPECT_NE(missing.err.find("nope.jsonl"), std::string::npos);
  EXPECT_EQ(run({"ingest", "--in", "a", "--out", "b", "--bogus"}).code, kExitUsageError);
  EXPECT_EQ(run({"ingest", "--in", "a"}).code, kExitUsageError);
  EXPECT_EQ(run({}).code, kExitUsageError);
  EXPECT_EQ(run({"train", "--corpus", "a", "--out", "b", "--topics", "0"}).code, kExitUsageError);
}

TEST_F(CliTest, HelpListsDefaults) {
  for (const std::string sub :
       {"ingest", "keyphrases", "train", "topics", "trends", "match", "bench", "synth"}) {
    const auto r = run({sub, "--help"});
    EXPECT_EQ(r.code, kExitOk) << sub;
    EXPECT_NE(r.out.find("--config"), std::string::npos) << sub;
  }
  const auto train = run({"train", "--help"});
  EXPECT_NE(train.out.find("20"), std::string::npos);
  EXPECT_NE(train.out.find("0.01"), std::string::npos);
  EXPECT_NE(train.out.find("1000"), std::string::npos);
  const auto ingest = run({"ingest", "--help"});
  EXPECT_NE(ingest.out.find("0.5"), std::string::npos);
  const auto kp = run({"keyphrases", "--help"});
  EXPECT_NE(kp.out.find("10000"), std::string::npos);
}

TEST_F(CliTest, TrainIsByteIdenticalAcrossRuns) {
  const auto corpus = make_corpus();
  const std::vector<std::string> base = {"train", "--corpus", corpus, "--iterations", "30",
                                         "--burn-in", "0", "--log-every", "10"};
  auto a = base;
  a.insert(a.end(), {"--out", path("m1.json")});
  auto b = base;
  b.insert(b.end(), {"--out", path("m2.json")});
  const auto ra = run(a);
  const auto rb = run(b);
  ASSERT_EQ(ra.code, kExitOk) << ra.err;
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(slurp(path("m1.json")), slurp(path("m2.json")));
  EXPECT_NE(ra.out.find("sweep 0 log_likelihood"), std::string::npos);
  EXPECT_NE(ra.out.find("sweep 30 log_likelihood"), std::string::npos);

  const TopicModel m = load_model(path("m1.json"));
  EXPECT_EQ(m.num_topics(), 20u);
  EXPECT_EQ(m.hyper.alpha, 2.5);
  EXPECT_EQ(m.trained_sweeps, 30u);
}

TEST_F(CliTest, ConfigSuppliesDefaultsAndFlagsWin) {
  const auto corpus = make_corpus();
  std::ofstream(path("run.cfg")) << "# training settings\n"
                                    "topics = 4\n"
                                    "iterations=5\n"
                                    "burn_in=0\n"
                                    "log_every = 0\n"
                                    "[ingest]\n"
                                    "min_df = 9\n";
  auto r = run({"train", "--corpus", corpus, "--out", path("m.json"), "--config", path("run.cfg")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(load_model(path("m.json")).num_topics(), 4u);
  EXPECT_EQ(load_model(path("m.json")).trained_sweeps, 5u);

  r = run({"train", "--corpus", corpus, "--out", path("m.json"), "--config", path("run.cfg"),
           "--topics", "6"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(load_model(path("m.json")).num_topics(), 6u);

  EXPECT_EQ(run({"train", "--corpus", corpus, "--out", path("m.json"), "--config", path("none.cfg")})
                .code,
            kExitInputError);
}

TEST_F(CliTest, ConfigArgumentsParsing) {
  std::ofstream(path("a.cfg")) << "seed = \"42\"\n[synth]\ndocs=7\n[train]\ntopics=3\n";
  const auto extra = config_arguments(path("a.cfg"), "synth", {"synth", "--seed", "1"});
  EXPECT_EQ(extra, (std::vector<std::string>{"--docs=7"}));
  std::ofstream(path("b.cfg")) << "no equals sign\n";
  EXPECT_THROW(config_arguments(path("b.cfg"), "train", {}), Error);
}

TEST_F(CliTest, KeyphrasesTopicsTrendsMatchBench) {
  const auto corpus = make_corpus();
  auto r = run({"keyphrases", "--corpus", corpus, "--out", path("r.json"), "--phrases",
                path("p.csv"), "--min-pf", "1", "--top", "15"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("tokens: 1000 -> "), std::string::npos);
  EXPECT_EQ(slurp(path("p.csv")).rfind("surface,score,phrase_frequency,doc_frequency\n", 0), 0u);
  const Corpus reduced = load_corpus(path("r.json"));
  EXPECT_EQ(reduced.vocab().size(), 15u);
  EXPECT_EQ(reduced.representation(), "keyphrases");

  ASSERT_EQ(run({"train", "--corpus", corpus, "--out", path("m.json"), "--topics", "3",
                 "--iterations", "20", "--burn-in", "0", "--log-every", "0"})
                .code,
            kExitOk);

  r = run({"topics", "--model", path("m.json"), "--top", "3", "--out-dir", path("clouds")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("topic 0: ", 0), 0u);
  EXPECT_TRUE(fs::exists(path("clouds/topic_2.json")));
  EXPECT_EQ(nlohmann::json::parse(slurp(path("clouds/topic_0.json"))).size(), 3u);

  r = run({"trends", "--model", path("m.json"), "--corpus", corpus, "--granularity", "quarter"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("bucket,topic_id,mean_proportion,doc_count\n", 0), 0u);
  EXPECT_NE(r.out.find("-Q"), std::string::npos);
  EXPECT_EQ(run({"trends", "--model", path("m.json"), "--corpus", corpus, "--granularity", "week"})
                .code,
            kExitUsageError);

  r = run({"match", "--a", path("m.json"), "--b", path("m.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto matching = nlohmann::json::parse(r.out);
  EXPECT_EQ(matching["pairs"].size(), 3u);
  EXPECT_NEAR(matching["mean_cosine"].get<double>(), 1.0, 1e-12);

  r = run({"bench", "--words", corpus, "--reduced", path("r.json"), "--topics", "3",
           "--iterations", "5", "--burn-in", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto bench = nlohmann::json::parse(r.out);
  EXPECT_EQ(bench["runs"].size(), 2u);
  EXPECT_GT(bench["token_ratio"].get<double>(), 0.0);
  EXPECT_LT(bench["token_ratio"].get<double>(), 1.0);

  // A corpus from a different source is rejected.
  ASSERT_EQ(run({"synth", "--out", path("o.jsonl"), "--docs", "10", "--seed", "99"}).code, kExitOk);
  ASSERT_EQ(run({"ingest", "--in", path("o.jsonl"), "--out", path("o.json"), "--min-df", "1",
                 "--max-df-ratio", "1"})
                .code,
            kExitOk);
  r = run({"bench", "--words", path("o.json"), "--reduced", path("r.json"), "--iterations", "2", "--burn-in", "0"});
  EXPECT_EQ(r.code, kExitInputError);
}

TEST_F(CliTest, ChainsWriteSeparateModels) {
  const auto corpus = make_corpus();
  const auto r = run({"train", "--corpus", corpus, "--out", path("m.json"), "--topics", "3",
                      "--iterations", "5", "--burn-in", "0", "--log-every", "0", "--chains", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  ASSERT_TRUE(fs::exists(path("m.chain0.json")));
  ASSERT_TRUE(fs::exists(path("m.chain1.json")));
  const auto a = load_model(path("m.chain0.json"));
  const auto b = load_model(path("m.chain1.json"));
  EXPECT_NE(a.hyper.seed, b.hyper.seed);
  EXPECT_NE(a.phi, b.phi);
}

TEST_F(CliTest, SpikedSynthPeaksInsideWindow) {
  ASSERT_EQ(run({"synth", "--out", path("s.jsonl"), "--planted", path("planted.json"), "--docs",
                 "300", "--start", "2012-01", "--end", "2013-12", "--spike-topic", "1",
                 "--spike-start", "2013-03", "--spike-end", "2013-05", "--spike-boost", "2"})
                .code,
            kExitOk);
  ASSERT_EQ(run({"ingest", "--in", path("s.jsonl"), "--out", path("s.json"), "--min-df", "1",
                 "--max-df-ratio", "1"})
                .code,
            kExitOk);
  const auto r = run({"trends", "--model", path("planted.json"), "--corpus", path("s.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(r.out);
  std::string line, best_bucket;
  double best = -1.0;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string bucket, topic, value;
    std::getline(fields, bucket, ',');
    std::getline(fields, topic, ',');
    std::getline(fields, value, ',');
    if (topic == "1" && std::stod(value) > best) {
      best = std::stod(value);
      best_bucket = bucket;
    }
  }
  EXPECT_GE(best_bucket, "2013-03");
  EXPECT_LE(best_bucket, "2013-05");
  EXPECT_EQ(run({"synth", "--out", path("x.jsonl"), "--spike-topic", "1"}).code, kExitInputError);
}

}  // namespace
}  // namespace lexlda::tools
