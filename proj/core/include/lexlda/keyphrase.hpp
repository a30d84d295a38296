#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lexlda/corpus.hpp"

namespace lexlda {

// Words inside a phrase surface are joined with a single space.
inline constexpr char kPhraseSeparator = ' ';

struct KeyphraseOptions {
  std::size_t max_len = 4;
  std::uint32_t min_pf = 3;
  std::size_t top_global = 10000;
  std::size_t min_token_len = 1;
};

// Candidate multiset for one document: surface -> occurrence count.
using PhraseBag = std::map<std::string, std::uint32_t, std::less<>>;

std::string join_phrase(std::span<const std::string> words);
std::vector<std::string> split_phrase(std::string_view surface);

// Splits `tokens` into runs at stopwords and at tokens shorter than
// min_token_len, then counts every contiguous n-gram (1 <= n <= max_len)
// inside each run.
PhraseBag extract_candidates(std::span<const std::string> tokens,
                             const std::unordered_set<std::string>& stopwords,
                             std::size_t max_len, std::size_t min_token_len = 1);

struct ScoredPhrase {
  std::string surface;
  double score = 0.0;
  std::uint32_t phrase_frequency = 0;
  std::uint32_t doc_frequency = 0;

  std::size_t length() const;
  bool operator==(const ScoredPhrase&) const = default;
};

// Phrases ordered by descending score, ties broken lexicographically.
class KeyphraseVocabulary {
 public:
  KeyphraseVocabulary() = default;
  // Sorts `phrases` into canonical order; surfaces must be unique.
  explicit KeyphraseVocabulary(std::vector<ScoredPhrase> phrases);

  std::size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }
  const std::vector<ScoredPhrase>& phrases() const { return phrases_; }
  const ScoredPhrase& at(std::size_t i) const { return phrases_.at(i); }
  std::optional<std::size_t> find(std::string_view surface) const;

 private:
  std::vector<ScoredPhrase> phrases_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// score(p) = pf(p) * ln(D / df(p)) * len(p); phrases with pf < min_pf dropped.
KeyphraseVocabulary score_phrases(std::span<const PhraseBag> docs, std::uint32_t min_pf);

// Candidates from every document's decoded token stream, then scoring.
KeyphraseVocabulary extract_keyphrases(const Corpus& words,
                                       const std::unordered_set<std::string>& stopwords,
                                       const KeyphraseOptions& opts);

// Keeps the top_global phrases as the new vocabulary and rescans each
// document left to right, longest match first. Unmatched words are dropped.
Corpus reduce_corpus(const Corpus& words, const KeyphraseVocabulary& kv,
                     std::size_t top_global);

// CSV: surface,score,phrase_frequency,doc_frequency
void write_keyphrase_csv(const KeyphraseVocabulary& kv, std::ostream& out);
void write_keyphrase_csv(const KeyphraseVocabulary& kv, const std::filesystem::path& path);

}  // namespace lexlda
