#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexlda/date.hpp"

namespace lexlda {

using TermId = std::uint32_t;

struct RawDocument {
  std::string id;
  Date date;
  std::string text;
};

enum class WordClass {
  letters_and_digits,
  letters_only,
};

struct TokenizerConfig {
  bool lowercase = true;
  std::size_t min_token_len = 1;
  std::unordered_set<std::string> stopwords;
  WordClass word_class = WordClass::letters_and_digits;
};

struct VocabularyOptions {
  std::size_t min_df = 5;
  double max_df_ratio = 0.5;
};

struct TokenizedDocument {
  std::string id;
  Date date;
  std::vector<std::string> tokens;
};

// One JSON object per line with string fields "id", "date", "text".
// Blank lines are skipped. Errors name the offending line, id or date.
std::vector<RawDocument> load_jsonl(const std::filesystem::path& path);
std::vector<RawDocument> parse_jsonl(std::istream& in);
void write_jsonl(std::span<const RawDocument> docs, std::ostream& out);

// Plain text, one term per line; blank lines and surrounding whitespace ignored.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

// Maximal runs of word characters (Unicode letters, Polish diacritics
// included, plus digits unless WordClass::letters_only). Invalid UTF-8 bytes
// act as separators.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg);

class Vocabulary {
 public:
  Vocabulary() = default;
  // Terms must be unique; doc_frequency is either empty or parallel to terms.
  explicit Vocabulary(std::vector<std::string> terms,
                      std::vector<std::uint32_t> doc_frequency = {});

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::string& term(TermId id) const { return terms_.at(id); }
  std::optional<TermId> find(std::string_view term) const;
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint32_t>& doc_frequency() const { return doc_frequency_; }

  bool operator==(const Vocabulary& other) const {
    return terms_ == other.terms_ && doc_frequency_ == other.doc_frequency_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> terms_;
  std::vector<std::uint32_t> doc_frequency_;
  std::unordered_map<std::string, TermId, Hash, std::equal_to<>> index_;
};

// Keeps terms with min_df <= df <= max_df_ratio * D. Ids follow descending
// total frequency, ties broken lexicographically. Throws when nothing survives.
Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs,
                            const VocabularyOptions& opts);

struct Document {
  std::string id;
  Date date;
  std::vector<TermId> tokens;

  bool empty() const { return tokens.empty(); }
  bool operator==(const Document&) const = default;
};

// Encoded documents plus their vocabulary. `representation` is "words" or
// "keyphrases"; `source_id` fingerprints the word-level corpus a
// representation was derived from, so derived artifacts can be paired.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Document> docs, Vocabulary vocab,
         std::string representation = "words", std::string source_id = {});

  const std::vector<Document>& docs() const { return docs_; }
  const Document& doc(std::size_t d) const { return docs_.at(d); }
  std::size_t num_docs() const { return docs_.size(); }
  std::size_t num_nonempty() const;
  const Vocabulary& vocab() const { return vocab_; }
  std::size_t total_tokens() const { return total_tokens_; }
  const std::string& representation() const { return representation_; }
  const std::string& source_id() const { return source_id_; }

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<Document> docs_;
  Vocabulary vocab_;
  std::size_t total_tokens_ = 0;
  std::string representation_;
  std::string source_id_;
};

// Maps tokens to ids, dropping out-of-vocabulary tokens.
Corpus encode(std::span<const TokenizedDocument> docs, const Vocabulary& vocab);
std::vector<std::string> decode(const Document& doc, const Vocabulary& vocab);

// tokenize -> build_vocabulary -> encode.
Corpus ingest(std::span<const RawDocument> docs, const TokenizerConfig& cfg,
              const VocabularyOptions& opts);

// 16 hex digits; FNV-1a over ids, dates and token strings.
std::string fingerprint(std::span<const Document> docs, const Vocabulary& vocab);

// Versioned JSON artifact; round-trips a Corpus exactly.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);

}  // namespace lexlda
