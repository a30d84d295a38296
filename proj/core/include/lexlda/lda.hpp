#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lexlda/corpus.hpp"
#include "lexlda/matrix.hpp"
#include "lexlda/random.hpp"

namespace lexlda {

using Topic = std::uint32_t;

inline constexpr std::uint64_t kDefaultSeed = 20140512;

struct Hyperparams {
  std::size_t topics = 20;
  double alpha = 50.0 / 20.0;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;
  std::uint64_t seed = kDefaultSeed;

  // Conventional defaults for K topics: alpha = 50 / K, beta = 0.01.
  static Hyperparams for_topics(std::size_t topics);

  void validate() const;
  bool operator==(const Hyperparams&) const = default;
};

// Collapsed Gibbs sampler state. Count tables are kept consistent with the
// assignments `z` after every single-token update:
//   sum_k doc_topic(d, k) = |doc d|,  sum_w topic_term(k, w) = topic_total[k].
// topic_term is dense and topic-major (K x V).
struct SamplerState {
  std::size_t num_topics = 0;
  std::size_t vocab_size = 0;
  std::vector<std::vector<Topic>> z;
  std::vector<std::int32_t> doc_topic_counts;   // D x K
  std::vector<std::int32_t> topic_term_counts;  // K x V
  std::vector<std::int32_t> topic_totals;       // K
  Rng rng;

  std::size_t num_docs() const { return z.size(); }
  std::size_t doc_length(std::size_t d) const { return z[d].size(); }

  std::int32_t& doc_topic(std::size_t d, std::size_t k) {
    return doc_topic_counts[d * num_topics + k];
  }
  std::int32_t doc_topic(std::size_t d, std::size_t k) const {
    return doc_topic_counts[d * num_topics + k];
  }
  std::int32_t& topic_term(std::size_t k, std::size_t w) {
    return topic_term_counts[k * vocab_size + w];
  }
  std::int32_t topic_term(std::size_t k, std::size_t w) const {
    return topic_term_counts[k * vocab_size + w];
  }
};

// Uniform random topic per token from the seeded generator. Throws when the
// corpus has no tokens.
SamplerState init_state(const Corpus& corpus, const Hyperparams& hyper);

// Full conditional for one token whose current topic is `current`. Counts in
// `state` include that token; it is excluded internally.
std::vector<double> conditional(const SamplerState& state, const Hyperparams& hyper,
                                std::size_t doc, TermId term, Topic current);

// Resamples every token once, in document then position order.
void gibbs_sweep(SamplerState& state, const Corpus& corpus, const Hyperparams& hyper);

// phi[k, w] = (n_kw + beta) / (n_k + V beta)
Matrix estimate_phi(const SamplerState& state, const Hyperparams& hyper);
// theta[d, k] = (n_dk + alpha) / (N_d + K alpha); uniform for empty documents.
Matrix estimate_theta(const SamplerState& state, const Hyperparams& hyper);

// Collapsed joint log p(w, z | alpha, beta).
double log_likelihood(const SamplerState& state, const Hyperparams& hyper);

struct TopicModel {
  Hyperparams hyper;
  std::vector<std::string> vocab;
  Matrix phi;    // K x V
  Matrix theta;  // D x K
  std::size_t trained_sweeps = 0;
  std::string corpus_id;

  std::size_t num_topics() const { return phi.rows(); }
  std::size_t vocab_size() const { return phi.cols(); }
  std::size_t num_docs() const { return theta.rows(); }

  bool operator==(const TopicModel&) const = default;
};

struct TrainOptions {
  // Average phi/theta over the post-burn-in sweeps instead of using the
  // final state only.
  bool average_samples = false;
  // Calls on_log(sweep, log_likelihood) at sweep 0 (initial state), every
  // log_every sweeps and after the last sweep. 0 disables logging.
  std::size_t log_every = 100;
  std::function<void(std::size_t, double)> on_log;
};

TopicModel train(const Corpus& corpus, const Hyperparams& hyper,
                 const TrainOptions& opts = {});

// JSON: {format, version, hyper, seed, vocab, phi, theta, trained_sweeps,
// corpus_id}; doubles are written with round-trip precision.
std::string model_to_json(const TopicModel& model);
TopicModel model_from_json(const std::string& text);
void save_model(const TopicModel& model, const std::filesystem::path& path);
TopicModel load_model(const std::filesystem::path& path);

}  // namespace lexlda
