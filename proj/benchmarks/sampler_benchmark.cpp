#include <benchmark/benchmark.h>

#include "lexlda/eval.hpp"
#include "lexlda/keyphrase.hpp"
#include "lexlda/lda.hpp"

namespace {

using namespace lexlda;

const SyntheticCorpus& words() {
  static const SyntheticCorpus s = [] {
    SyntheticSpec spec;
    spec.num_docs = 200;
    return generate(spec);
  }();
  return s;
}

const Corpus& reduced() {
  static const Corpus c = [] {
    const auto kv = extract_keyphrases(words().corpus, {}, KeyphraseOptions{4, 3, 0, 1});
    return reduce_corpus(words().corpus, kv, 20);
  }();
  return c;
}

void run_sweeps(benchmark::State& st, const Corpus& corpus) {
  Hyperparams h = Hyperparams::for_topics(static_cast<std::size_t>(st.range(0)));
  SamplerState state = init_state(corpus, h);
  for (auto _ : st) gibbs_sweep(state, corpus, h);
  st.counters["tokens"] = static_cast<double>(corpus.total_tokens());
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(corpus.total_tokens()));
}

void BM_SweepWords(benchmark::State& st) { run_sweeps(st, words().corpus); }
void BM_SweepKeyphrases(benchmark::State& st) { run_sweeps(st, reduced()); }

void BM_Conditional(benchmark::State& st) {
  const Corpus& corpus = words().corpus;
  Hyperparams h = Hyperparams::for_topics(static_cast<std::size_t>(st.range(0)));
  const SamplerState state = init_state(corpus, h);
  const TermId term = corpus.doc(0).tokens[0];
  for (auto _ : st) benchmark::DoNotOptimize(conditional(state, h, 0, term, state.z[0][0]));
}

void BM_LogLikelihood(benchmark::State& st) {
  Hyperparams h = Hyperparams::for_topics(20);
  const SamplerState state = init_state(words().corpus, h);
  for (auto _ : st) benchmark::DoNotOptimize(log_likelihood(state, h));
}

}  // namespace

BENCHMARK(BM_SweepWords)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepKeyphrases)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conditional)->Arg(5)->Arg(20)->Arg(100);
BENCHMARK(BM_LogLikelihood)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
