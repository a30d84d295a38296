#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lexlda/corpus.hpp"
#include "lexlda/lda.hpp"
#include "lexlda/matrix.hpp"

namespace lexlda {

struct WeightedTerm {
  std::string term;
  double probability = 0.0;
};

struct TopicSummary {
  std::size_t topic = 0;
  std::vector<WeightedTerm> terms;  // descending, lexicographic tie-break
};

// The n most probable terms of phi row `topic` (clamped to V).
TopicSummary top_terms(const TopicModel& model, std::size_t topic, std::size_t n);

// JSON array of {"term", "weight"}, weights scaled so the largest is 1.0.
std::string word_cloud_json(const TopicSummary& summary);
void export_word_cloud(const TopicSummary& summary, const std::filesystem::path& path);

enum class Granularity { month, quarter };

Granularity parse_granularity(std::string_view text);

struct TrendBucket {
  std::string label;  // "YYYY-MM" or "YYYY-Qn"
  double mean_proportion = 0.0;
  std::size_t doc_count = 0;
};

struct TrendSeries {
  std::size_t topic = 0;
  std::vector<TrendBucket> buckets;  // chronological
};

std::string bucket_label(Date date, Granularity granularity);

// Per calendar bucket, the unweighted mean theta row over the bucket's
// non-empty documents. Buckets without non-empty documents are omitted.
std::vector<TrendSeries> trend(const TopicModel& model, const Corpus& corpus,
                               Granularity granularity);

// CSV: bucket,topic_id,mean_proportion,doc_count
void write_trends_csv(std::span<const TrendSeries> series, std::ostream& out);

struct TopicPair {
  std::size_t a = 0;
  std::size_t b = 0;
  double cosine = 0.0;
};

struct TopicMatching {
  std::vector<TopicPair> pairs;  // ascending a
  std::vector<std::size_t> unmatched_a;
  std::vector<std::size_t> unmatched_b;

  double mean_cosine() const;
};

double cosine_similarity(std::span<const double> x, std::span<const double> y);

// Injective row pairing maximizing total cosine similarity. Exact
// (Hungarian) when both sides have <= kExactMatchLimit rows, greedy
// best-first otherwise. Column spaces must agree.
inline constexpr std::size_t kExactMatchLimit = 64;
TopicMatching match_rows(const Matrix& a, const Matrix& b);

// Solves the rectangular assignment problem maximizing total score;
// returns the column assigned to each row, or -1.
std::vector<long> max_weight_assignment(const Matrix& score);

// Projects phi rows onto a shared word space: each vocabulary entry is split
// into its space-separated words and its mass divided equally among them.
Matrix project_to_words(const TopicModel& model, const std::vector<std::string>& words);

// Matches topics of two models. Identical vocabularies are compared
// directly; otherwise both are projected onto the union of constituent
// words. Throws when the two vocabularies share no word.
TopicMatching match_topics(const TopicModel& a, const TopicModel& b);

// {"pairs":[{"a","b","cosine"}], "unmatched":[{"model","topic"}], "mean_cosine"}
std::string matching_json(const TopicMatching& matching);

}  // namespace lexlda
