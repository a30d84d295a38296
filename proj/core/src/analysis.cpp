#include "lexlda/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "lexlda/error.hpp"
#include "lexlda/keyphrase.hpp"

namespace lexlda {

using nlohmann::json;

TopicSummary top_terms(const TopicModel& model, std::size_t topic, std::size_t n) {
  if (topic >= model.num_topics()) {
    throw Error("topic " + std::to_string(topic) + " out of range (model has " +
                std::to_string(model.num_topics()) + " topics)");
  }
  if (n < 1) throw Error("number of terms must be >= 1");
  const auto row = model.phi.row(topic);
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t count = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(count), order.end(),
                    [&](std::size_t x, std::size_t y) {
                      if (row[x] != row[y]) return row[x] > row[y];
                      return model.vocab[x] < model.vocab[y];
                    });
  TopicSummary summary{topic, {}};
  summary.terms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    summary.terms.push_back({model.vocab[order[i]], row[order[i]]});
  }
  return summary;
}

std::string word_cloud_json(const TopicSummary& summary) {
  double max = 0.0;
  for (const auto& t : summary.terms) max = std::max(max, t.probability);
  json arr = json::array();
  for (const auto& t : summary.terms) {
    arr.push_back({{"term", t.term}, {"weight", max > 0.0 ? t.probability / max : 0.0}});
  }
  return arr.dump(2) + "\n";
}

void export_word_cloud(const TopicSummary& summary, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write word cloud file '" + path.string() + "'");
  out << word_cloud_json(summary);
  if (!out) throw Error("failed writing word cloud file '" + path.string() + "'");
}

Granularity parse_granularity(std::string_view text) {
  if (text == "month") return Granularity::month;
  if (text == "quarter") return Granularity::quarter;
  throw Error("unknown granularity '" + std::string(text) + "' (expected month or quarter)");
}

namespace {

int bucket_key(Date date, Granularity granularity) {
  const int year = static_cast<int>(date.year());
  const int month0 = static_cast<int>(static_cast<unsigned>(date.month())) - 1;
  return granularity == Granularity::month ? year * 12 + month0 : year * 4 + month0 / 3;
}

}  // namespace

std::string bucket_label(Date date, Granularity granularity) {
  const YearMonth ym{static_cast<int>(date.year()), static_cast<unsigned>(date.month())};
  if (granularity == Granularity::month) return format_year_month(ym);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-Q%u", ym.year, (ym.month - 1) / 3 + 1);
  return buf;
}

std::vector<TrendSeries> trend(const TopicModel& model, const Corpus& corpus,
                               Granularity granularity) {
  if (model.num_docs() != corpus.num_docs()) {
    throw Error("model covers " + std::to_string(model.num_docs()) +
                " documents but the corpus has " + std::to_string(corpus.num_docs()));
  }
  const std::size_t num_topics = model.num_topics();
  struct Accumulator {
    std::string label;
    std::vector<double> sum;
    std::size_t docs = 0;
  };
  std::map<int, Accumulator> buckets;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto& doc = corpus.doc(d);
    if (doc.empty()) continue;
    auto& acc = buckets[bucket_key(doc.date, granularity)];
    if (acc.docs == 0) {
      acc.label = bucket_label(doc.date, granularity);
      acc.sum.assign(num_topics, 0.0);
    }
    const auto row = model.theta.row(d);
    for (std::size_t k = 0; k < num_topics; ++k) acc.sum[k] += row[k];
    ++acc.docs;
  }
  std::vector<TrendSeries> series(num_topics);
  for (std::size_t k = 0; k < num_topics; ++k) {
    series[k].topic = k;
    series[k].buckets.reserve(buckets.size());
    for (const auto& [key, acc] : buckets) {
      series[k].buckets.push_back(
          {acc.label, acc.sum[k] / static_cast<double>(acc.docs), acc.docs});
    }
  }
  return series;
}

void write_trends_csv(std::span<const TrendSeries> series, std::ostream& out) {
  out << "bucket,topic_id,mean_proportion,doc_count\n";
  if (series.empty()) return;
  out << std::setprecision(12);
  const std::size_t num_buckets = series.front().buckets.size();
  for (std::size_t b = 0; b < num_buckets; ++b) {
    for (const auto& s : series) {
      const auto& bucket = s.buckets.at(b);
      out << bucket.label << ',' << s.topic << ',' << bucket.mean_proportion << ','
          << bucket.doc_count << '\n';
    }
  }
}

double TopicMatching::mean_cosine() const {
  if (pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : pairs) sum += p.cosine;
  return sum / static_cast<double>(pairs.size());
}

double cosine_similarity(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("cosine similarity of vectors with different lengths");
  double dot = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  if (xx == 0.0 || yy == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(xx) * std::sqrt(yy)), 0.0, 1.0);
}

std::vector<long> max_weight_assignment(const Matrix& score) {
  const bool transposed = score.rows() > score.cols();
  const std::size_t n = transposed ? score.cols() : score.rows();
  const std::size_t m = transposed ? score.rows() : score.cols();
  std::vector<long> result(score.rows(), -1);
  if (n == 0) return result;

  auto cost = [&](std::size_t i, std::size_t j) {
    return transposed ? -score(j - 1, i - 1) : -score(i - 1, j - 1);
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Potentials-based Hungarian method, 1-based with a sentinel column 0.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    if (transposed) {
      result[j - 1] = static_cast<long>(p[j] - 1);
    } else {
      result[p[j] - 1] = static_cast<long>(j - 1);
    }
  }
  return result;
}

namespace {

std::vector<long> greedy_assignment(const Matrix& score) {
  struct Cell {
    double s;
    std::size_t r, c;
  };
  std::vector<Cell> cells;
  cells.reserve(score.rows() * score.cols());
  for (std::size_t r = 0; r < score.rows(); ++r) {
    for (std::size_t c = 0; c < score.cols(); ++c) cells.push_back({score(r, c), r, c});
  }
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.s > y.s; });
  std::vector<long> result(score.rows(), -1);
  std::vector<char> col_used(score.cols(), 0);
  for (const auto& cell : cells) {
    if (result[cell.r] >= 0 || col_used[cell.c]) continue;
    result[cell.r] = static_cast<long>(cell.c);
    col_used[cell.c] = 1;
  }
  return result;
}

}  // namespace

TopicMatching match_rows(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw Error("cannot match topics over different term spaces");
  Matrix score(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) score(i, j) = cosine_similarity(a.row(i), b.row(j));
  }
  const bool exact = a.rows() <= kExactMatchLimit && b.rows() <= kExactMatchLimit;
  const auto assignment = exact ? max_weight_assignment(score) : greedy_assignment(score);

  TopicMatching matching;
  std::vector<char> b_used(b.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (assignment[i] < 0) {
      matching.unmatched_a.push_back(i);
      continue;
    }
    const auto j = static_cast<std::size_t>(assignment[i]);
    b_used[j] = 1;
    matching.pairs.push_back({i, j, score(i, j)});
  }
  for (std::size_t j = 0; j < b.rows(); ++j) {
    if (!b_used[j]) matching.unmatched_b.push_back(j);
  }
  return matching;
}

Matrix project_to_words(const TopicModel& model, const std::vector<std::string>& words) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], i);

  struct Share {
    std::vector<std::size_t> targets;
    double fraction = 0.0;
  };
  std::vector<Share> shares(model.vocab.size());
  for (std::size_t t = 0; t < model.vocab.size(); ++t) {
    const auto parts = split_phrase(model.vocab[t]);
    for (const auto& w : parts) {
      if (auto it = index.find(w); it != index.end()) shares[t].targets.push_back(it->second);
    }
    if (!parts.empty()) shares[t].fraction = 1.0 / static_cast<double>(parts.size());
  }

  Matrix out(model.num_topics(), words.size());
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    for (std::size_t t = 0; t < model.vocab.size(); ++t) {
      const double mass = model.phi(k, t) * shares[t].fraction;
      for (std::size_t target : shares[t].targets) out(k, target) += mass;
    }
  }
  return out;
}

TopicMatching match_topics(const TopicModel& a, const TopicModel& b) {
  if (a.vocab == b.vocab) return match_rows(a.phi, b.phi);

  auto words_of = [](const TopicModel& m) {
    std::set<std::string> words;
    for (const auto& term : m.vocab) {
      for (auto& w : split_phrase(term)) words.insert(std::move(w));
    }
    return words;
  };
  const auto words_a = words_of(a);
  const auto words_b = words_of(b);
  std::vector<std::string> shared;
  std::set_intersection(words_a.begin(), words_a.end(), words_b.begin(), words_b.end(),
                        std::back_inserter(shared));
  if (shared.empty()) throw Error("the two models' vocabularies share no words");

  std::vector<std::string> all;
  std::set_union(words_a.begin(), words_a.end(), words_b.begin(), words_b.end(),
                 std::back_inserter(all));
  return match_rows(project_to_words(a, all), project_to_words(b, all));
}

std::string matching_json(const TopicMatching& matching) {
  json pairs = json::array();
  for (const auto& p : matching.pairs) pairs.push_back({{"a", p.a}, {"b", p.b}, {"cosine", p.cosine}});
  json unmatched = json::array();
  for (auto k : matching.unmatched_a) unmatched.push_back({{"model", "a"}, {"topic", k}});
  for (auto k : matching.unmatched_b) unmatched.push_back({{"model", "b"}, {"topic", k}});
  json root = {{"pairs", std::move(pairs)},
               {"unmatched", std::move(unmatched)},
               {"mean_cosine", matching.mean_cosine()}};
  return root.dump(2) + "\n";
}

}  // namespace lexlda
