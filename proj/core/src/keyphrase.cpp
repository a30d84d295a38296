#include "lexlda/keyphrase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <unordered_map>

#include "lexlda/error.hpp"
#include "utf8.hpp"

namespace lexlda {

std::string join_phrase(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(kPhraseSeparator);
    out += words[i];
  }
  return out;
}

std::vector<std::string> split_phrase(std::string_view surface) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= surface.size()) {
    const auto end = std::min(surface.find(kPhraseSeparator, start), surface.size());
    if (end > start) words.emplace_back(surface.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

PhraseBag extract_candidates(std::span<const std::string> tokens,
                             const std::unordered_set<std::string>& stopwords,
                             std::size_t max_len, std::size_t min_token_len) {
  if (max_len < 1) throw Error("max_len must be >= 1");
  PhraseBag bag;
  auto is_boundary = [&](const std::string& tok) {
    return stopwords.contains(tok) || utf8::length(tok) < min_token_len;
  };
  std::size_t run_start = 0;
  while (run_start < tokens.size()) {
    if (is_boundary(tokens[run_start])) {
      ++run_start;
      continue;
    }
    std::size_t run_end = run_start;
    while (run_end < tokens.size() && !is_boundary(tokens[run_end])) ++run_end;
    for (std::size_t i = run_start; i < run_end; ++i) {
      const std::size_t longest = std::min(max_len, run_end - i);
      for (std::size_t n = 1; n <= longest; ++n) ++bag[join_phrase(tokens.subspan(i, n))];
    }
    run_start = run_end;
  }
  return bag;
}

std::size_t ScoredPhrase::length() const {
  return static_cast<std::size_t>(std::count(surface.begin(), surface.end(), kPhraseSeparator)) + 1;
}

KeyphraseVocabulary::KeyphraseVocabulary(std::vector<ScoredPhrase> phrases)
    : phrases_(std::move(phrases)) {
  std::sort(phrases_.begin(), phrases_.end(), [](const ScoredPhrase& x, const ScoredPhrase& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.surface < y.surface;
  });
  for (std::size_t i = 0; i < phrases_.size(); ++i) {
    if (!index_.emplace(phrases_[i].surface, i).second) {
      throw Error("keyphrase vocabulary: duplicate phrase '" + phrases_[i].surface + "'");
    }
  }
}

std::optional<std::size_t> KeyphraseVocabulary::find(std::string_view surface) const {
  auto it = index_.find(surface);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

KeyphraseVocabulary score_phrases(std::span<const PhraseBag> docs, std::uint32_t min_pf) {
  if (docs.empty()) throw Error("keyphrase scoring needs at least one document");
  struct Totals {
    std::uint32_t pf = 0;
    std::uint32_t df = 0;
  };
  std::map<std::string_view, Totals> totals;
  for (const auto& bag : docs) {
    for (const auto& [surface, count] : bag) {
      auto& t = totals[surface];
      t.pf += count;
      ++t.df;
    }
  }
  const double num_docs = static_cast<double>(docs.size());
  std::vector<ScoredPhrase> phrases;
  for (const auto& [surface, t] : totals) {
    if (t.pf < min_pf) continue;
    ScoredPhrase p{std::string(surface), 0.0, t.pf, t.df};
    p.score = static_cast<double>(t.pf) * std::log(num_docs / t.df) *
              static_cast<double>(p.length());
    phrases.push_back(std::move(p));
  }
  return KeyphraseVocabulary(std::move(phrases));
}

KeyphraseVocabulary extract_keyphrases(const Corpus& words,
                                       const std::unordered_set<std::string>& stopwords,
                                       const KeyphraseOptions& opts) {
  std::vector<PhraseBag> bags;
  bags.reserve(words.num_docs());
  for (const auto& doc : words.docs()) {
    const auto tokens = decode(doc, words.vocab());
    bags.push_back(extract_candidates(tokens, stopwords, opts.max_len, opts.min_token_len));
  }
  return score_phrases(bags, opts.min_pf);
}

namespace {

// Prefix tree over word ids; `phrase` is the vocabulary id ending here.
class PhraseTrie {
 public:
  PhraseTrie() : nodes_(1) {}

  void insert(std::span<const TermId> words, std::uint32_t phrase) {
    std::uint32_t node = 0;
    for (TermId w : words) {
      auto [it, inserted] = nodes_[node].children.try_emplace(w, 0);
      if (inserted) {
        it->second = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
      }
      node = it->second;
    }
    // First insertion wins: phrases arrive in descending score order.
    if (nodes_[node].phrase < 0) nodes_[node].phrase = phrase;
  }

  // Longest phrase starting at tokens[0]: (phrase id, words consumed).
  std::pair<long, std::size_t> longest_match(std::span<const TermId> tokens) const {
    std::pair<long, std::size_t> best{-1, 0};
    std::uint32_t node = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      auto it = nodes_[node].children.find(tokens[i]);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      if (nodes_[node].phrase >= 0) best = {nodes_[node].phrase, i + 1};
    }
    return best;
  }

 private:
  struct Node {
    std::unordered_map<TermId, std::uint32_t> children;
    long phrase = -1;
  };
  std::vector<Node> nodes_;
};

}  // namespace

Corpus reduce_corpus(const Corpus& words, const KeyphraseVocabulary& kv, std::size_t top_global) {
  if (top_global < 1) throw Error("top_global must be >= 1");
  const std::size_t kept = std::min(top_global, kv.size());

  PhraseTrie trie;
  std::vector<std::string> terms;
  terms.reserve(kept);
  for (std::size_t i = 0; i < kept; ++i) {
    const auto& phrase = kv.at(i);
    terms.push_back(phrase.surface);
    std::vector<TermId> ids;
    bool resolvable = true;
    for (const auto& w : split_phrase(phrase.surface)) {
      auto id = words.vocab().find(w);
      if (!id) {
        resolvable = false;
        break;
      }
      ids.push_back(*id);
    }
    if (resolvable) trie.insert(ids, static_cast<std::uint32_t>(i));
  }

  std::vector<std::uint32_t> doc_frequency(kept, 0);
  std::vector<Document> docs;
  docs.reserve(words.num_docs());
  std::vector<char> seen(kept);
  for (const auto& doc : words.docs()) {
    Document out{doc.id, doc.date, {}};
    std::fill(seen.begin(), seen.end(), 0);
    std::span<const TermId> tokens(doc.tokens);
    for (std::size_t i = 0; i < tokens.size();) {
      auto [phrase, consumed] = trie.longest_match(tokens.subspan(i));
      if (phrase < 0) {
        ++i;
        continue;
      }
      out.tokens.push_back(static_cast<TermId>(phrase));
      if (!seen[phrase]) {
        seen[phrase] = 1;
        ++doc_frequency[phrase];
      }
      i += consumed;
    }
    docs.push_back(std::move(out));
  }
  return Corpus(std::move(docs), Vocabulary(std::move(terms), std::move(doc_frequency)),
                "keyphrases", words.source_id());
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_keyphrase_csv(const KeyphraseVocabulary& kv, std::ostream& out) {
  out << "surface,score,phrase_frequency,doc_frequency\n";
  out << std::setprecision(10);
  for (const auto& p : kv.phrases()) {
    out << csv_field(p.surface) << ',' << p.score << ',' << p.phrase_frequency << ','
        << p.doc_frequency << '\n';
  }
}

void write_keyphrase_csv(const KeyphraseVocabulary& kv, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write keyphrase file '" + path.string() + "'");
  write_keyphrase_csv(kv, out);
}

}  // namespace lexlda
