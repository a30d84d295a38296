#pragma once

#include <cstddef>
#include <string>

#include "lexlda/corpus.hpp"
#include "lexlda/lda.hpp"

namespace lexlda::tools {

struct BenchRun {
  std::string representation;
  std::size_t docs = 0;
  std::size_t tokens = 0;
  std::size_t vocab_size = 0;
  double seconds = 0.0;
  double sweeps_per_second = 0.0;
};

struct BenchReport {
  Hyperparams hyper;
  std::string source_id;
  BenchRun words;
  BenchRun reduced;

  double token_ratio() const;  // reduced / words
  double time_ratio() const;   // reduced / words
};

// Reference ratio: 12 minutes on keyphrases versus roughly 2 hours on words.
inline constexpr double kReferenceTimeRatio = 12.0 / 120.0;

// Trains identical hyperparameters on both representations and times each.
// Throws when the reduced corpus was not derived from `words`.
BenchReport run_bench(const Corpus& words, const Corpus& reduced, const Hyperparams& hyper);

std::string bench_json(const BenchReport& report);

}  // namespace lexlda::tools
