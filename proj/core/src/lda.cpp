#include "lexlda/lda.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lexlda/error.hpp"

namespace lexlda {

using nlohmann::json;

namespace {

constexpr const char* kModelFormat = "lexlda-model";
constexpr int kModelVersion = 1;

// std::lgamma writes the global signgam; the reentrant variant keeps
// independent chains free of shared state.
double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

}  // namespace

Hyperparams Hyperparams::for_topics(std::size_t topics) {
  Hyperparams h;
  h.topics = topics;
  h.alpha = topics > 0 ? 50.0 / static_cast<double>(topics) : 0.0;
  return h;
}

void Hyperparams::validate() const {
  if (topics < 1) throw Error("number of topics must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error("beta must be positive");
  if (iterations < 1) throw Error("iterations must be >= 1");
  if (burn_in >= iterations) throw Error("burn_in must be smaller than iterations");
}

SamplerState init_state(const Corpus& corpus, const Hyperparams& hyper) {
  hyper.validate();
  if (corpus.total_tokens() == 0) {
    throw Error("cannot train on a corpus whose documents are all empty");
  }
  const std::size_t num_topics = hyper.topics;
  const std::size_t vocab_size = corpus.vocab().size();

  SamplerState state;
  state.num_topics = num_topics;
  state.vocab_size = vocab_size;
  state.rng = Rng(hyper.seed);
  state.z.resize(corpus.num_docs());
  state.doc_topic_counts.assign(corpus.num_docs() * num_topics, 0);
  state.topic_term_counts.assign(num_topics * vocab_size, 0);
  state.topic_totals.assign(num_topics, 0);

  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto& tokens = corpus.doc(d).tokens;
    auto& zd = state.z[d];
    zd.resize(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto k = static_cast<Topic>(state.rng.below(num_topics));
      zd[i] = k;
      ++state.doc_topic(d, k);
      ++state.topic_term(k, tokens[i]);
      ++state.topic_totals[k];
    }
  }
  return state;
}

std::vector<double> conditional(const SamplerState& state, const Hyperparams& hyper,
                                std::size_t doc, TermId term, Topic current) {
  const std::size_t num_topics = state.num_topics;
  const double vbeta = static_cast<double>(state.vocab_size) * hyper.beta;
  std::vector<double> p(num_topics);
  double total = 0.0;
  for (std::size_t k = 0; k < num_topics; ++k) {
    const int self = (k == current) ? 1 : 0;
    const double n_dk = state.doc_topic(doc, k) - self;
    const double n_kw = state.topic_term(k, term) - self;
    const double n_k = state.topic_totals[k] - self;
    p[k] = (n_dk + hyper.alpha) * (n_kw + hyper.beta) / (n_k + vbeta);
    total += p[k];
  }
  for (auto& v : p) v /= total;
  return p;
}

void gibbs_sweep(SamplerState& state, const Corpus& corpus, const Hyperparams& hyper) {
  const std::size_t num_topics = state.num_topics;
  const std::size_t vocab_size = state.vocab_size;
  const double alpha = hyper.alpha;
  const double beta = hyper.beta;
  const double vbeta = static_cast<double>(vocab_size) * beta;
  std::vector<double> cumulative(num_topics);

  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto& tokens = corpus.doc(d).tokens;
    auto& zd = state.z[d];
    std::int32_t* doc_counts = state.doc_topic_counts.data() + d * num_topics;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const TermId w = tokens[i];
      Topic k = zd[i];
      --doc_counts[k];
      --state.topic_term_counts[k * vocab_size + w];
      --state.topic_totals[k];

      double total = 0.0;
      for (std::size_t t = 0; t < num_topics; ++t) {
        total += (doc_counts[t] + alpha) * (state.topic_term_counts[t * vocab_size + w] + beta) /
                 (state.topic_totals[t] + vbeta);
        cumulative[t] = total;
      }
      const double u = state.rng.uniform() * total;
      k = static_cast<Topic>(num_topics - 1);
      for (std::size_t t = 0; t < num_topics; ++t) {
        if (u < cumulative[t]) {
          k = static_cast<Topic>(t);
          break;
        }
      }

      zd[i] = k;
      ++doc_counts[k];
      ++state.topic_term_counts[k * vocab_size + w];
      ++state.topic_totals[k];
    }
  }
}

Matrix estimate_phi(const SamplerState& state, const Hyperparams& hyper) {
  const double vbeta = static_cast<double>(state.vocab_size) * hyper.beta;
  Matrix phi(state.num_topics, state.vocab_size);
  for (std::size_t k = 0; k < state.num_topics; ++k) {
    const double denom = state.topic_totals[k] + vbeta;
    for (std::size_t w = 0; w < state.vocab_size; ++w) {
      phi(k, w) = (state.topic_term(k, w) + hyper.beta) / denom;
    }
  }
  return phi;
}

Matrix estimate_theta(const SamplerState& state, const Hyperparams& hyper) {
  const std::size_t num_topics = state.num_topics;
  const double kalpha = static_cast<double>(num_topics) * hyper.alpha;
  Matrix theta(state.num_docs(), num_topics);
  for (std::size_t d = 0; d < state.num_docs(); ++d) {
    const std::size_t len = state.doc_length(d);
    if (len == 0) {
      for (std::size_t k = 0; k < num_topics; ++k) theta(d, k) = 1.0 / num_topics;
      continue;
    }
    const double denom = static_cast<double>(len) + kalpha;
    for (std::size_t k = 0; k < num_topics; ++k) {
      theta(d, k) = (state.doc_topic(d, k) + hyper.alpha) / denom;
    }
  }
  return theta;
}

double log_likelihood(const SamplerState& state, const Hyperparams& hyper) {
  const std::size_t num_topics = state.num_topics;
  const double num_terms = static_cast<double>(state.vocab_size);
  const double beta = hyper.beta;
  const double alpha = hyper.alpha;

  double topic_part = 0.0;
  const double topic_const = log_gamma(num_terms * beta) - num_terms * log_gamma(beta);
  for (std::size_t k = 0; k < num_topics; ++k) {
    double sum = topic_const;
    for (std::size_t w = 0; w < state.vocab_size; ++w) sum += log_gamma(state.topic_term(k, w) + beta);
    sum -= log_gamma(state.topic_totals[k] + num_terms * beta);
    topic_part += sum;
  }

  double doc_part = 0.0;
  const double kalpha = static_cast<double>(num_topics) * alpha;
  const double doc_const = log_gamma(kalpha) - static_cast<double>(num_topics) * log_gamma(alpha);
  for (std::size_t d = 0; d < state.num_docs(); ++d) {
    const std::size_t len = state.doc_length(d);
    if (len == 0) continue;  // the prior terms cancel exactly
    double sum = doc_const;
    for (std::size_t k = 0; k < num_topics; ++k) sum += log_gamma(state.doc_topic(d, k) + alpha);
    sum -= log_gamma(static_cast<double>(len) + kalpha);
    doc_part += sum;
  }
  return topic_part + doc_part;
}

TopicModel train(const Corpus& corpus, const Hyperparams& hyper, const TrainOptions& opts) {
  SamplerState state = init_state(corpus, hyper);
  auto log = [&](std::size_t sweep) {
    if (opts.on_log && opts.log_every > 0) opts.on_log(sweep, log_likelihood(state, hyper));
  };
  log(0);

  Matrix phi_sum, theta_sum;
  std::size_t samples = 0;
  if (opts.average_samples) {
    phi_sum = Matrix(hyper.topics, corpus.vocab().size());
    theta_sum = Matrix(corpus.num_docs(), hyper.topics);
  }

  for (std::size_t sweep = 1; sweep <= hyper.iterations; ++sweep) {
    gibbs_sweep(state, corpus, hyper);
    if (opts.average_samples && sweep > hyper.burn_in) {
      const Matrix phi = estimate_phi(state, hyper);
      const Matrix theta = estimate_theta(state, hyper);
      for (std::size_t i = 0; i < phi.data().size(); ++i) phi_sum.data()[i] += phi.data()[i];
      for (std::size_t i = 0; i < theta.data().size(); ++i) theta_sum.data()[i] += theta.data()[i];
      ++samples;
    }
    if (opts.log_every > 0 && (sweep % opts.log_every == 0 || sweep == hyper.iterations)) {
      log(sweep);
    }
  }

  TopicModel model;
  model.hyper = hyper;
  model.vocab = corpus.vocab().terms();
  model.trained_sweeps = hyper.iterations;
  model.corpus_id = corpus.source_id();
  if (opts.average_samples) {
    for (auto& v : phi_sum.data()) v /= static_cast<double>(samples);
    for (auto& v : theta_sum.data()) v /= static_cast<double>(samples);
    model.phi = std::move(phi_sum);
    model.theta = std::move(theta_sum);
  } else {
    model.phi = estimate_phi(state, hyper);
    model.theta = estimate_theta(state, hyper);
  }
  return model;
}

std::string model_to_json(const TopicModel& model) {
  const auto& h = model.hyper;
  json root = {
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"hyper",
       {{"topics", h.topics},
        {"alpha", h.alpha},
        {"beta", h.beta},
        {"iterations", h.iterations},
        {"burn_in", h.burn_in},
        {"seed", h.seed}}},
      {"seed", h.seed},
      {"vocab", model.vocab},
      {"num_docs", model.theta.rows()},
      {"phi", model.phi.data()},
      {"theta", model.theta.data()},
      {"trained_sweeps", model.trained_sweeps},
      {"corpus_id", model.corpus_id},
  };
  return root.dump() + "\n";
}

TopicModel model_from_json(const std::string& text) {
  try {
    const json root = json::parse(text);
    if (root.value("format", "") != kModelFormat) throw Error("not a model artifact");
    if (root.at("version").get<int>() != kModelVersion) throw Error("unsupported model version");
    TopicModel model;
    const auto& h = root.at("hyper");
    model.hyper.topics = h.at("topics").get<std::size_t>();
    model.hyper.alpha = h.at("alpha").get<double>();
    model.hyper.beta = h.at("beta").get<double>();
    model.hyper.iterations = h.at("iterations").get<std::size_t>();
    model.hyper.burn_in = h.at("burn_in").get<std::size_t>();
    model.hyper.seed = h.at("seed").get<std::uint64_t>();
    model.vocab = root.at("vocab").get<std::vector<std::string>>();
    model.trained_sweeps = root.at("trained_sweeps").get<std::size_t>();
    model.corpus_id = root.at("corpus_id").get<std::string>();

    const std::size_t topics = model.hyper.topics;
    const std::size_t num_docs = root.at("num_docs").get<std::size_t>();
    auto phi = root.at("phi").get<std::vector<double>>();
    auto theta = root.at("theta").get<std::vector<double>>();
    if (phi.size() != topics * model.vocab.size()) throw Error("phi has wrong size");
    if (theta.size() != num_docs * topics) throw Error("theta has wrong size");
    model.phi = Matrix(topics, model.vocab.size());
    model.phi.data() = std::move(phi);
    model.theta = Matrix(num_docs, topics);
    model.theta.data() = std::move(theta);
    return model;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model artifact (") + e.what() + ")");
  }
}

void save_model(const TopicModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file '" + path.string() + "'");
  out << model_to_json(model);
  if (!out) throw Error("failed writing model file '" + path.string() + "'");
}

TopicModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return model_from_json(buf.str());
  } catch (const Error& e) {
    throw Error("'" + path.string() + "': " + e.what());
  }
}

}  // namespace lexlda
