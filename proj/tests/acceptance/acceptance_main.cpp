// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "cli.hpp"
#include "lexlda/analysis.hpp"
#include "lexlda/eval.hpp"
#include "lexlda/keyphrase.hpp"
#include "lexlda/lda.hpp"
#include "support/oracles.hpp"

namespace {

using namespace lexlda;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

// Every model trained below is collected for criterion 3.
std::vector<TopicModel> g_trained;

TopicModel train_and_keep(const Corpus& corpus, const Hyperparams& hyper,
                          const TrainOptions& opts = {}) {
  g_trained.push_back(train(corpus, hyper, opts));
  return g_trained.back();
}

// Criterion 5 corpus.
SyntheticSpec recovery_spec() {
  SyntheticSpec spec;
  spec.topics = 5;
  spec.vocab_size = 250;
  spec.num_docs = 400;
  spec.doc_len_min = spec.doc_len_max = 100;
  spec.separation = 0.9;
  spec.alpha_gen = 0.1;
  return spec;
}

// Training alpha matches the generating concentration; beta keeps its default.
Hyperparams recovery_hyper(std::uint64_t seed = kDefaultSeed) {
  Hyperparams h = Hyperparams::for_topics(5);
  h.alpha = 0.1;
  h.iterations = 500;
  h.seed = seed;
  return h;
}

const SyntheticCorpus& recovery_corpus() {
  static const SyntheticCorpus s = generate(recovery_spec());
  return s;
}

Outcome criterion_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(101);
  double worst = 0.0;
  std::size_t states = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t num_topics = 1 + gen() % 3;
    const std::size_t vocab = 1 + gen() % 5;
    const Corpus corpus = testing::random_corpus(gen, 3, 6, vocab);
    Hyperparams h = Hyperparams::for_topics(num_topics);
    h.alpha = std::uniform_real_distribution<double>(0.01, 5.0)(gen);
    h.beta = std::uniform_real_distribution<double>(0.001, 2.0)(gen);
    std::vector<std::vector<Topic>> z(corpus.num_docs());
    for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
      for (std::size_t i = 0; i < corpus.doc(d).tokens.size(); ++i) {
        z[d].push_back(static_cast<Topic>(gen() % num_topics));
      }
    }
    const SamplerState state = testing::state_from_assignments(corpus, num_topics, z);
    const testing::CountTables tables{state.doc_topic_counts, state.topic_term_counts,
                                      state.topic_totals};
    for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
      for (std::size_t i = 0; i < corpus.doc(d).tokens.size(); ++i) {
        const TermId w = corpus.doc(d).tokens[i];
        const auto got = conditional(state, h, d, w, z[d][i]);
        const auto want =
            testing::brute_conditional(tables, num_topics, vocab, h.alpha, h.beta, d, w, z[d][i]);
        for (std::size_t k = 0; k < num_topics; ++k) {
          worst = std::max(worst, std::abs(got[k] - want[k]));
        }
      }
    }
    ++states;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << states << " states, max abs error " << worst << ", " << elapsed << " s";
  return {states >= 100 && worst <= 1e-12 && elapsed < 1.0, detail.str()};
}

Outcome criterion_consistency() {
  std::mt19937_64 gen(202);
  std::vector<std::vector<TermId>> docs(10, std::vector<TermId>(50));
  for (auto& d : docs) {
    for (auto& w : d) w = static_cast<TermId>(gen() % 40);
  }
  const Corpus corpus = testing::corpus_from_ids(docs, 40);
  Hyperparams h = Hyperparams::for_topics(4);
  SamplerState state = init_state(corpus, h);
  std::size_t ok = testing::tables_match(state, corpus) ? 1 : 0;
  for (int sweep = 0; sweep < 50; ++sweep) {
    gibbs_sweep(state, corpus, h);
    if (testing::tables_match(state, corpus)) ++ok;
  }
  std::ostringstream detail;
  detail << corpus.total_tokens() << " tokens, " << ok << "/51 checkpoints consistent";
  return {corpus.total_tokens() == 500 && ok == 51, detail.str()};
}

Outcome criterion_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lexlda_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  save_corpus(recovery_corpus().corpus, dir / "corpus.json");
  std::ostringstream sink;
  std::vector<std::string> args = {"train",  "--corpus",     (dir / "corpus.json").string(),
                                   "--topics", "5",          "--iterations",
                                   "300",    "--log-every", "0"};
  auto first = args;
  first.insert(first.end(), {"--out", (dir / "a.json").string()});
  auto second = args;
  second.insert(second.end(), {"--out", (dir / "b.json").string()});
  const int ca = tools::run_cli(first, sink, sink);
  const int cb = tools::run_cli(second, sink, sink);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string a = slurp(dir / "a.json");
  const std::string b = slurp(dir / "b.json");
  if (ca == 0) g_trained.push_back(load_model(dir / "a.json"));
  fs::remove_all(dir);
  std::ostringstream detail;
  detail << "exit codes " << ca << "/" << cb << ", " << a.size() << " bytes, "
         << (a == b ? "identical" : "different");
  return {ca == 0 && cb == 0 && !a.empty() && a == b, detail.str()};
}

Outcome criterion_recovery() {
  const auto start = Clock::now();
  const auto& s = recovery_corpus();
  const TopicModel model = train_and_keep(s.corpus, recovery_hyper());
  const double elapsed = seconds_since(start);
  const auto matching = match_topics(model, s.planted_model());
  const auto report = recovery(model, s.phi, s.theta, matching);
  std::ostringstream detail;
  detail << "mean cosine " << report.mean_cosine << ", theta MAE " << report.theta_mae << ", "
         << elapsed << " s";
  return {report.mean_cosine >= 0.9 && report.theta_mae <= 0.1 && elapsed < 60.0, detail.str()};
}

Outcome criterion_trend() {
  SyntheticSpec spec = recovery_spec();
  spec.num_docs = 1200;
  spec.start = {2011, 1};
  spec.end = {2014, 12};
  spec.spike = Spike{0, {2013, 1}, {2013, 6}, 1.0};
  const auto s = generate(spec);
  const TopicModel model = train_and_keep(s.corpus, recovery_hyper());
  const auto matching = match_topics(model, s.planted_model());
  std::size_t trained_topic = model.num_topics();
  for (const auto& p : matching.pairs) {
    if (p.b == 0) trained_topic = p.a;
  }
  if (trained_topic == model.num_topics()) return {false, "planted topic 0 unmatched"};
  const auto series = trend(model, s.corpus, Granularity::month);
  const auto& buckets = series[trained_topic].buckets;
  const auto peak = std::max_element(buckets.begin(), buckets.end(), [](const auto& x, const auto& y) {
    return x.mean_proportion < y.mean_proportion;
  });
  double worst_sum = 0.0;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    double sum = 0.0;
    for (const auto& t : series) sum += t.buckets[b].mean_proportion;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  const bool inside = peak->label >= "2013-01" && peak->label <= "2013-06";
  std::ostringstream detail;
  detail << "trained topic " << trained_topic << " peaks at " << peak->label << " ("
         << peak->mean_proportion << "), max |bucket sum - 1| " << worst_sum;
  return {inside && worst_sum <= 1e-9, detail.str()};
}

Outcome criterion_speedup() {
  const Corpus& words = recovery_corpus().corpus;
  const auto kv = extract_keyphrases(words, {}, KeyphraseOptions{4, 3, 0, 1});
  // Largest keyphrase vocabulary whose reduced corpus keeps at most a third of the tokens.
  std::size_t lo = 1, hi = kv.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (reduce_corpus(words, kv, mid).total_tokens() * 3 <= words.total_tokens()) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const Corpus reduced = reduce_corpus(words, kv, lo);
  Hyperparams h = recovery_hyper();
  h.iterations = 300;
  const auto report = tools::run_bench(words, reduced, h);
  std::ostringstream detail;
  detail << "top " << lo << " phrases, token ratio " << report.token_ratio() << ", time ratio "
         << report.time_ratio() << " (" << report.reduced.seconds << " s vs " << report.words.seconds
         << " s; reference " << tools::kReferenceTimeRatio << ")";
  return {report.token_ratio() <= 1.0 / 3.0 && report.time_ratio() <= 0.6, detail.str()};
}

Outcome criterion_matching() {
  const auto& s = recovery_corpus();
  const TopicModel a = train_and_keep(s.corpus, recovery_hyper(1));
  const TopicModel b = train_and_keep(s.corpus, recovery_hyper(2));

  const std::vector<std::size_t> perm = {2, 4, 0, 1, 3};
  TopicModel permuted = a;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    std::copy(a.phi.row(k).begin(), a.phi.row(k).end(), permuted.phi.row(perm[k]).begin());
  }
  const auto self = match_topics(a, permuted);
  bool recovered = self.pairs.size() == perm.size();
  double worst = 0.0;
  for (const auto& p : self.pairs) {
    recovered = recovered && p.b == perm[p.a];
    worst = std::max(worst, std::abs(p.cosine - 1.0));
  }
  const double cross = match_topics(a, b).mean_cosine();
  std::ostringstream detail;
  detail << "permutation " << (recovered ? "recovered" : "missed") << ", max |cos - 1| " << worst
         << ", seeds 1 vs 2 mean cosine " << cross;
  return {recovered && worst <= 1e-12 && cross >= 0.8, detail.str()};
}

Outcome criterion_likelihood() {
  std::vector<double> trace;
  TrainOptions opts;
  opts.log_every = 1;
  opts.on_log = [&](std::size_t, double ll) { trace.push_back(ll); };
  const auto hyper = recovery_hyper();
  train_and_keep(recovery_corpus().corpus, hyper, opts);
  // trace[0] is the initial state, trace[i] follows sweep i.
  const std::size_t tail = hyper.iterations / 10;
  std::vector<double> last(trace.end() - static_cast<long>(tail), trace.end());
  std::nth_element(last.begin(), last.begin() + static_cast<long>(tail / 2), last.end());
  double median = last[tail / 2];
  if (tail % 2 == 0) {
    const double lower = *std::max_element(last.begin(), last.begin() + static_cast<long>(tail / 2));
    median = 0.5 * (median + lower);
  }
  std::ostringstream detail;
  detail.precision(10);
  detail << "initial " << trace.front() << ", median of last " << tail << " sweeps " << median;
  return {trace.size() == hyper.iterations + 1 && median > trace.front(), detail.str()};
}

Outcome criterion_normalization() {
  double worst = 0.0;
  for (const auto& m : g_trained) {
    for (const Matrix* mat : {&m.phi, &m.theta}) {
      for (std::size_t r = 0; r < mat->rows(); ++r) {
        const auto row = mat->row(r);
        worst = std::max(worst, std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0));
      }
    }
  }
  std::ostringstream detail;
  detail << g_trained.size() << " models, max |row sum - 1| " << worst;
  return {!g_trained.empty() && worst <= 1e-9, detail.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  // Normalization runs last so it covers every model trained by the others.
  const std::vector<Criterion> criteria = {
      {1, "conditional matches brute-force oracle", criterion_oracle},
      {2, "count tables consistent with assignments", criterion_consistency},
      {4, "train output is byte-identical", criterion_determinism},
      {5, "synthetic topic recovery", criterion_recovery},
      {6, "planted spike located by trend series", criterion_trend},
      {7, "keyphrase representation speedup", criterion_speedup},
      {8, "topic matching sanity", criterion_matching},
      {9, "log-likelihood improves", criterion_likelihood},
      {3, "phi and theta rows normalized", criterion_normalization},
  };
  std::vector<std::pair<int, std::string>> lines;
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    lines.emplace_back(c.number, std::string(o.pass ? "[PASS]" : "[FAIL]") + " criterion " +
                                     std::to_string(c.number) + ": " + c.name + " (" + o.detail +
                                     ")");
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [n, line] : lines) std::cout << line << "\n";
  std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? 0 : 1;
}
