#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lexlda/analysis.hpp"
#include "lexlda/corpus.hpp"
#include "lexlda/date.hpp"
#include "lexlda/lda.hpp"
#include "lexlda/matrix.hpp"

namespace lexlda {

// Boosts one topic in documents dated inside [first, last]: the drawn theta
// row gets `boost` added to the topic's entry and is renormalized by 1 + boost.
struct Spike {
  std::size_t topic = 0;
  YearMonth first;
  YearMonth last;
  double boost = 1.0;
};

struct SyntheticSpec {
  std::size_t topics = 5;
  std::size_t vocab_size = 250;
  std::size_t num_docs = 400;
  std::size_t doc_len_min = 100;
  std::size_t doc_len_max = 100;
  double alpha_gen = 0.1;
  double beta_gen = 0.01;
  // Weight of each topic's block-uniform component; the remaining mass is a
  // symmetric Dirichlet(beta_gen) draw over the whole vocabulary. Topic k's
  // block is terms [k*b, (k+1)*b) with b = V / K.
  double separation = 0.9;
  std::uint64_t seed = kDefaultSeed;
  YearMonth start{2008, 1};
  YearMonth end{2014, 5};
  std::optional<Spike> spike;

  void validate() const;
};

std::string synthetic_term(std::size_t w);  // "t<w>"

struct SyntheticCorpus {
  std::vector<RawDocument> raw;  // text is the space-joined terms
  Corpus corpus;                 // vocabulary t0..t{V-1} in id order
  Matrix phi;                    // K x V
  Matrix theta;                  // D x K
  std::vector<std::vector<Topic>> z;

  // Planted distributions packaged as a model over the synthetic vocabulary.
  TopicModel planted_model() const;
};

// Samples the LDA generative process. Fully determined by spec.seed.
SyntheticCorpus generate(const SyntheticSpec& spec);

struct RecoveryReport {
  double mean_cosine = 0.0;
  std::vector<double> cosines;  // one per matched pair
  double theta_mae = 0.0;
};

// `matching` pairs trained topics (a) with planted topics (b).
RecoveryReport recovery(const TopicModel& trained, const Matrix& planted_phi,
                        const Matrix& planted_theta, const TopicMatching& matching);

}  // namespace lexlda
