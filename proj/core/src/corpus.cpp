#include "lexlda/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "lexlda/error.hpp"
#include "utf8.hpp"

namespace lexlda {

using nlohmann::json;

namespace {

constexpr const char* kCorpusFormat = "lexlda-corpus";
constexpr int kCorpusVersion = 1;

const std::string& string_field(const json& obj, const char* name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end() || !it->is_string()) {
    throw Error("line " + std::to_string(line) + ": missing string field \"" + name + "\"");
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

std::vector<RawDocument> parse_jsonl(std::istream& in) {
  std::vector<RawDocument> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) {
      throw Error("line " + std::to_string(line_no) + ": expected a JSON object");
    }
    RawDocument doc;
    doc.id = string_field(obj, "id", line_no);
    const auto& raw_date = string_field(obj, "date", line_no);
    doc.text = string_field(obj, "text", line_no);
    if (doc.id.empty()) throw Error("line " + std::to_string(line_no) + ": empty document id");
    if (!seen.insert(doc.id).second) {
      throw Error("duplicate document id '" + doc.id + "' (line " + std::to_string(line_no) + ")");
    }
    try {
      doc.date = parse_date(raw_date);
    } catch (const Error&) {
      throw Error("document '" + doc.id + "': unparseable date '" + raw_date + "'");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<RawDocument> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file '" + path.string() + "'");
  return parse_jsonl(in);
}

void write_jsonl(std::span<const RawDocument> docs, std::ostream& out) {
  for (const auto& doc : docs) {
    json obj = {{"id", doc.id}, {"date", format_date(doc.date)}, {"text", doc.text}};
    out << obj.dump() << '\n';
  }
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file '" + path.string() + "'");
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.insert(line.substr(first, last - first + 1));
  }
  return words;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t current_len = 0;
  auto flush = [&] {
    if (current_len >= cfg.min_token_len && !cfg.stopwords.contains(current)) {
      tokens.push_back(std::move(current));
    }
    current.clear();
    current_len = 0;
  };
  for (std::size_t pos = 0; pos < text.size();) {
    char32_t cp = utf8::decode(text, pos);
    const bool word = utf8::is_letter(cp) ||
                      (cfg.word_class == WordClass::letters_and_digits && utf8::is_digit(cp));
    if (!word) {
      if (current_len > 0) flush();
      continue;
    }
    if (cfg.lowercase) cp = utf8::to_lower(cp);
    utf8::append(current, cp);
    ++current_len;
  }
  if (current_len > 0) flush();
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_frequency)
    : terms_(std::move(terms)), doc_frequency_(std::move(doc_frequency)) {
  if (!doc_frequency_.empty() && doc_frequency_.size() != terms_.size()) {
    throw Error("vocabulary: doc_frequency length does not match terms");
  }
  if (doc_frequency_.empty()) doc_frequency_.assign(terms_.size(), 0);
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], static_cast<TermId>(i)).second) {
      throw Error("vocabulary: duplicate term '" + terms_[i] + "'");
    }
  }
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs,
                            const VocabularyOptions& opts) {
  if (opts.min_df < 1) throw Error("min_df must be >= 1");
  if (!(opts.max_df_ratio > 0.0 && opts.max_df_ratio <= 1.0)) {
    throw Error("max_df_ratio must lie in (0, 1]");
  }
  struct Stats {
    std::uint64_t total = 0;
    std::uint32_t df = 0;
  };
  // Ordered map: the reduction result does not depend on hash iteration order.
  std::map<std::string, Stats, std::less<>> stats;
  for (const auto& doc : docs) {
    std::unordered_set<std::string_view> in_doc;
    for (const auto& tok : doc) {
      auto& s = stats[tok];
      ++s.total;
      if (in_doc.insert(tok).second) ++s.df;
    }
  }
  const double max_df = opts.max_df_ratio * static_cast<double>(docs.size());
  std::vector<std::pair<std::string, Stats>> kept;
  for (auto& [term, s] : stats) {
    if (s.df >= opts.min_df && static_cast<double>(s.df) <= max_df) kept.emplace_back(term, s);
  }
  if (kept.empty()) {
    throw Error("vocabulary is empty after frequency filtering (min_df=" +
                std::to_string(opts.min_df) + ", max_df_ratio=" +
                std::to_string(opts.max_df_ratio) + "); relax the thresholds");
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) {
    return x.second.total > y.second.total;
  });
  std::vector<std::string> terms;
  std::vector<std::uint32_t> df;
  terms.reserve(kept.size());
  df.reserve(kept.size());
  for (auto& [term, s] : kept) {
    terms.push_back(term);
    df.push_back(s.df);
  }
  return Vocabulary(std::move(terms), std::move(df));
}

Corpus::Corpus(std::vector<Document> docs, Vocabulary vocab, std::string representation,
               std::string source_id)
    : docs_(std::move(docs)),
      vocab_(std::move(vocab)),
      representation_(std::move(representation)),
      source_id_(std::move(source_id)) {
  for (const auto& doc : docs_) {
    for (TermId t : doc.tokens) {
      if (t >= vocab_.size()) {
        throw Error("document '" + doc.id + "': token id " + std::to_string(t) +
                    " outside vocabulary of size " + std::to_string(vocab_.size()));
      }
    }
    total_tokens_ += doc.tokens.size();
  }
  if (source_id_.empty()) source_id_ = fingerprint(docs_, vocab_);
}

std::size_t Corpus::num_nonempty() const {
  return static_cast<std::size_t>(
      std::count_if(docs_.begin(), docs_.end(), [](const Document& d) { return !d.empty(); }));
}

Corpus encode(std::span<const TokenizedDocument> docs, const Vocabulary& vocab) {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    Document enc{doc.id, doc.date, {}};
    enc.tokens.reserve(doc.tokens.size());
    for (const auto& tok : doc.tokens) {
      if (auto id = vocab.find(tok)) enc.tokens.push_back(*id);
    }
    out.push_back(std::move(enc));
  }
  return Corpus(std::move(out), vocab);
}

std::vector<std::string> decode(const Document& doc, const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(doc.tokens.size());
  for (TermId t : doc.tokens) out.push_back(vocab.term(t));
  return out;
}

Corpus ingest(std::span<const RawDocument> docs, const TokenizerConfig& cfg,
              const VocabularyOptions& opts) {
  if (cfg.min_token_len < 1) throw Error("min_token_len must be >= 1");
  std::vector<TokenizedDocument> tokenized;
  tokenized.reserve(docs.size());
  for (const auto& doc : docs) tokenized.push_back({doc.id, doc.date, tokenize(doc.text, cfg)});
  std::vector<std::vector<std::string>> streams;
  streams.reserve(tokenized.size());
  for (const auto& doc : tokenized) streams.push_back(doc.tokens);
  return encode(tokenized, build_vocabulary(streams, opts));
}

std::string fingerprint(std::span<const Document> docs, const Vocabulary& vocab) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const auto& doc : docs) {
    mix(doc.id);
    mix(format_date(doc.date));
    for (TermId t : doc.tokens) mix(vocab.term(t));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  json docs = json::array();
  for (const auto& doc : corpus.docs()) {
    docs.push_back({{"id", doc.id}, {"date", format_date(doc.date)}, {"tokens", doc.tokens}});
  }
  json root = {
      {"format", kCorpusFormat},
      {"version", kCorpusVersion},
      {"representation", corpus.representation()},
      {"source_id", corpus.source_id()},
      {"vocab",
       {{"terms", corpus.vocab().terms()}, {"doc_frequency", corpus.vocab().doc_frequency()}}},
      {"docs", std::move(docs)},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file '" + path.string() + "'");
  out << root.dump() << '\n';
  if (!out) throw Error("failed writing corpus file '" + path.string() + "'");
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file '" + path.string() + "'");
  try {
    const json root = json::parse(in);
    if (root.value("format", "") != kCorpusFormat) {
      throw Error("'" + path.string() + "' is not a corpus artifact");
    }
    if (root.at("version").get<int>() != kCorpusVersion) {
      throw Error("'" + path.string() + "': unsupported corpus version");
    }
    Vocabulary vocab(root.at("vocab").at("terms").get<std::vector<std::string>>(),
                     root.at("vocab").at("doc_frequency").get<std::vector<std::uint32_t>>());
    std::vector<Document> docs;
    for (const auto& d : root.at("docs")) {
      docs.push_back({d.at("id").get<std::string>(), parse_date(d.at("date").get<std::string>()),
                      d.at("tokens").get<std::vector<TermId>>()});
    }
    return Corpus(std::move(docs), std::move(vocab), root.at("representation").get<std::string>(),
                  root.at("source_id").get<std::string>());
  } catch (const json::exception& e) {
    throw Error("'" + path.string() + "': malformed corpus artifact (" + e.what() + ")");
  }
}

}  // namespace lexlda
