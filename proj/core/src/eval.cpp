#include "lexlda/eval.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "lexlda/error.hpp"
#include "lexlda/random.hpp"

namespace lexlda {

void SyntheticSpec::validate() const {
  if (topics < 1) throw Error("synthetic spec: topics must be >= 1");
  if (vocab_size < 1) throw Error("synthetic spec: vocabulary size must be >= 1");
  if (num_docs < 1) throw Error("synthetic spec: number of documents must be >= 1");
  if (doc_len_min < 1 || doc_len_min > doc_len_max) {
    throw Error("synthetic spec: document length range must satisfy 1 <= min <= max");
  }
  if (!(alpha_gen > 0.0) || !(beta_gen > 0.0)) {
    throw Error("synthetic spec: alpha_gen and beta_gen must be positive");
  }
  if (!(separation >= 0.0 && separation <= 1.0)) {
    throw Error("synthetic spec: separation must lie in [0, 1]");
  }
  if (separation > 0.0 && vocab_size < topics) {
    throw Error("synthetic spec: separation needs at least one vocabulary term per topic");
  }
  if (end < start) throw Error("synthetic spec: date range end precedes start");
  if (spike) {
    if (spike->topic >= topics) throw Error("synthetic spec: spike topic out of range");
    if (spike->last < spike->first) throw Error("synthetic spec: spike window is empty");
    if (!(spike->boost >= 0.0)) throw Error("synthetic spec: spike boost must be >= 0");
  }
}

std::string synthetic_term(std::size_t w) { return "t" + std::to_string(w); }

namespace {

// Symmetric Dirichlet draw; falls back to uniform if every gamma underflows.
std::vector<double> dirichlet(Rng& rng, std::size_t dim, double concentration) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> out(dim);
  double sum = 0.0;
  for (auto& v : out) {
    v = gamma(rng.engine());
    sum += v;
  }
  if (sum <= 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(dim));
    return out;
  }
  for (auto& v : out) v /= sum;
  return out;
}

std::size_t draw_index(Rng& rng, std::span<const double> cumulative) {
  const double u = rng.uniform() * cumulative.back();
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (u < cumulative[i]) return i;
  }
  return cumulative.size() - 1;
}

std::vector<double> cumulative_of(std::span<const double> p) {
  std::vector<double> c(p.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) c[i] = total += p[i];
  return c;
}

}  // namespace

SyntheticCorpus generate(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t num_topics = spec.topics;
  const std::size_t vocab_size = spec.vocab_size;
  Rng rng(spec.seed);

  SyntheticCorpus out;
  out.phi = Matrix(num_topics, vocab_size);
  const std::size_t block = vocab_size / num_topics;
  for (std::size_t k = 0; k < num_topics; ++k) {
    const auto noise = dirichlet(rng, vocab_size, spec.beta_gen);
    for (std::size_t w = 0; w < vocab_size; ++w) {
      const bool in_block = block > 0 && w >= k * block && w < (k + 1) * block;
      const double concentrated = in_block ? 1.0 / static_cast<double>(block) : 0.0;
      out.phi(k, w) = (1.0 - spec.separation) * noise[w] + spec.separation * concentrated;
    }
  }
  std::vector<std::vector<double>> phi_cumulative(num_topics);
  for (std::size_t k = 0; k < num_topics; ++k) phi_cumulative[k] = cumulative_of(out.phi.row(k));

  const int first_month = spec.start.ordinal();
  const int num_months = spec.end.ordinal() - first_month + 1;
  out.theta = Matrix(spec.num_docs, num_topics);
  out.z.resize(spec.num_docs);
  std::vector<Document> docs;
  docs.reserve(spec.num_docs);
  std::vector<std::uint32_t> doc_frequency(vocab_size, 0);
  std::vector<std::size_t> last_seen(vocab_size, spec.num_docs);

  for (std::size_t d = 0; d < spec.num_docs; ++d) {
    const YearMonth ym = YearMonth::from_ordinal(
        first_month + static_cast<int>(rng.below(static_cast<std::uint64_t>(num_months))));
    const auto day = static_cast<unsigned>(rng.below(28) + 1);
    const Date date{std::chrono::year{ym.year}, std::chrono::month{ym.month}, std::chrono::day{day}};

    auto theta = dirichlet(rng, num_topics, spec.alpha_gen);
    if (spec.spike && ym >= spec.spike->first && ym <= spec.spike->last) {
      theta[spec.spike->topic] += spec.spike->boost;
      for (auto& v : theta) v /= 1.0 + spec.spike->boost;
    }
    for (std::size_t k = 0; k < num_topics; ++k) out.theta(d, k) = theta[k];
    const auto theta_cumulative = cumulative_of(theta);

    const std::size_t len =
        spec.doc_len_min + rng.below(spec.doc_len_max - spec.doc_len_min + 1);
    Document doc{"d" + std::to_string(d), date, {}};
    doc.tokens.reserve(len);
    out.z[d].reserve(len);
    std::string text;
    for (std::size_t i = 0; i < len; ++i) {
      const auto k = draw_index(rng, theta_cumulative);
      const auto w = draw_index(rng, phi_cumulative[k]);
      out.z[d].push_back(static_cast<Topic>(k));
      doc.tokens.push_back(static_cast<TermId>(w));
      if (last_seen[w] != d) {
        last_seen[w] = d;
        ++doc_frequency[w];
      }
      if (i > 0) text.push_back(' ');
      text += synthetic_term(w);
    }
    out.raw.push_back({doc.id, date, std::move(text)});
    docs.push_back(std::move(doc));
  }

  std::vector<std::string> terms;
  terms.reserve(vocab_size);
  for (std::size_t w = 0; w < vocab_size; ++w) terms.push_back(synthetic_term(w));
  out.corpus = Corpus(std::move(docs), Vocabulary(std::move(terms), std::move(doc_frequency)));
  return out;
}

TopicModel SyntheticCorpus::planted_model() const {
  TopicModel model;
  model.hyper.topics = phi.rows();
  model.hyper.iterations = 1;
  model.hyper.burn_in = 0;
  model.vocab = corpus.vocab().terms();
  model.phi = phi;
  model.theta = theta;
  model.trained_sweeps = 0;
  model.corpus_id = corpus.source_id();
  return model;
}

RecoveryReport recovery(const TopicModel& trained, const Matrix& planted_phi,
                        const Matrix& planted_theta, const TopicMatching& matching) {
  if (trained.phi.cols() != planted_phi.cols()) {
    throw Error("recovery: trained and planted phi use different vocabularies");
  }
  if (trained.theta.rows() != planted_theta.rows()) {
    throw Error("recovery: trained and planted theta cover different documents");
  }
  RecoveryReport report;
  double cos_sum = 0.0;
  for (const auto& pair : matching.pairs) {
    const double c = cosine_similarity(trained.phi.row(pair.a), planted_phi.row(pair.b));
    report.cosines.push_back(c);
    cos_sum += c;
  }
  if (!matching.pairs.empty()) {
    report.mean_cosine = cos_sum / static_cast<double>(matching.pairs.size());
  }
  double abs_err = 0.0;
  std::size_t cells = 0;
  for (std::size_t d = 0; d < planted_theta.rows(); ++d) {
    for (const auto& pair : matching.pairs) {
      abs_err += std::abs(trained.theta(d, pair.a) - planted_theta(d, pair.b));
      ++cells;
    }
  }
  report.theta_mae = cells > 0 ? abs_err / static_cast<double>(cells) : 0.0;
  return report;
}

}  // namespace lexlda
