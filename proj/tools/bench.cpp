#include "bench.hpp"

#include <chrono>

#include "json.hpp"
#include "lexlda/error.hpp"

namespace lexlda::tools {

using nlohmann::json;

double BenchReport::token_ratio() const {
  return words.tokens > 0 ? static_cast<double>(reduced.tokens) / static_cast<double>(words.tokens)
                          : 0.0;
}

double BenchReport::time_ratio() const {
  return words.seconds > 0.0 ? reduced.seconds / words.seconds : 0.0;
}

namespace {

BenchRun timed_run(const Corpus& corpus, const Hyperparams& hyper) {
  TrainOptions opts;
  opts.log_every = 0;
  const auto start = std::chrono::steady_clock::now();
  const TopicModel model = train(corpus, hyper, opts);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  BenchRun run;
  run.representation = corpus.representation();
  run.docs = corpus.num_docs();
  run.tokens = corpus.total_tokens();
  run.vocab_size = corpus.vocab().size();
  run.seconds = elapsed.count();
  run.sweeps_per_second =
      run.seconds > 0.0 ? static_cast<double>(model.trained_sweeps) / run.seconds : 0.0;
  return run;
}

}  // namespace

BenchReport run_bench(const Corpus& words, const Corpus& reduced, const Hyperparams& hyper) {
  if (words.source_id() != reduced.source_id()) {
    throw Error("corpus artifacts do not match: source ids " + words.source_id() + " and " +
                reduced.source_id());
  }
  if (words.num_docs() != reduced.num_docs()) {
    throw Error("corpus artifacts do not match: different document counts");
  }
  hyper.validate();
  BenchReport report;
  report.hyper = hyper;
  report.source_id = words.source_id();
  report.words = timed_run(words, hyper);
  report.reduced = timed_run(reduced, hyper);
  return report;
}

std::string bench_json(const BenchReport& report) {
  auto run_json = [](const BenchRun& r) {
    return json{{"representation", r.representation},
                {"docs", r.docs},
                {"tokens", r.tokens},
                {"vocab_size", r.vocab_size},
                {"seconds", r.seconds},
                {"sweeps_per_second", r.sweeps_per_second}};
  };
  const auto& h = report.hyper;
  json root = {
      {"hyper",
       {{"topics", h.topics},
        {"alpha", h.alpha},
        {"beta", h.beta},
        {"iterations", h.iterations},
        {"burn_in", h.burn_in},
        {"seed", h.seed}}},
      {"source_id", report.source_id},
      {"runs", json::array({run_json(report.words), run_json(report.reduced)})},
      {"token_ratio", report.token_ratio()},
      {"time_ratio", report.time_ratio()},
      {"reference_time_ratio", kReferenceTimeRatio},
  };
  return root.dump(2) + "\n";
}

}  // namespace lexlda::tools
