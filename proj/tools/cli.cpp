#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bench.hpp"
#include "lexlda/analysis.hpp"
#include "lexlda/corpus.hpp"
#include "lexlda/error.hpp"
#include "lexlda/eval.hpp"
#include "lexlda/keyphrase.hpp"
#include "lexlda/lda.hpp"

namespace lexlda::tools {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

struct TrainFlags {
  std::size_t topics = 20;
  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;
  std::uint64_t seed = kDefaultSeed;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--topics,-k", topics, "Number of topics")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", alpha, "Dirichlet prior on document-topic proportions (default 50/K)");
    cmd->add_option("--beta", beta, "Dirichlet prior on topic-term distributions");
    cmd->add_option("--iterations", iterations, "Gibbs sweeps")->check(CLI::PositiveNumber);
    cmd->add_option("--burn-in", burn_in, "Sweeps ignored by sample averaging");
    cmd->add_option("--seed", seed, "Random seed");
  }

  Hyperparams resolve() const {
    Hyperparams h = Hyperparams::for_topics(topics);
    if (alpha) h.alpha = *alpha;
    h.beta = beta;
    h.iterations = iterations;
    h.burn_in = burn_in;
    h.seed = seed;
    h.validate();
    return h;
  }
};

std::filesystem::path chain_path(const std::filesystem::path& base, std::size_t chain) {
  auto p = base;
  p.replace_filename(base.stem().string() + ".chain" + std::to_string(chain) +
                     base.extension().string());
  return p;
}

}  // namespace

std::vector<std::string> config_arguments(const std::filesystem::path& path,
                                          const std::string& subcommand,
                                          const std::vector<std::string>& args) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string section;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    if (!section.empty() && section != subcommand) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config file: expected key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") continue;
    const std::string flag = "--" + key;
    if (!given(flag)) extra.push_back(flag + "=" + value);
  }
  return extra;
}

int run_cli(const std::vector<std::string>& input_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = input_args;

  // Config files contribute flags the user did not pass explicitly.
  try {
    for (std::size_t i = 0; i < input_args.size(); ++i) {
      std::string path;
      if (input_args[i] == "--config" && i + 1 < input_args.size()) {
        path = input_args[i + 1];
      } else if (input_args[i].rfind("--config=", 0) == 0) {
        path = input_args[i].substr(9);
      }
      if (path.empty()) continue;
      const std::string subcommand = input_args.empty() ? "" : input_args.front();
      auto extra = config_arguments(path, subcommand, input_args);
      args.insert(args.end(), extra.begin(), extra.end());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  CLI::App app{"Topic modelling of dated document collections with collapsed Gibbs LDA",
               "lexlda"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  std::string config_path;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value file supplying defaults for flags");
  };

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Tokenize a JSONL collection into a corpus artifact");
  std::string ingest_in, ingest_out, ingest_stopwords;
  TokenizerConfig tok;
  VocabularyOptions vocab_opts;
  bool keep_case = false, letters_only = false;
  ingest_cmd->add_option("--in", ingest_in, "JSONL input (id, date, text)")->required();
  ingest_cmd->add_option("--out", ingest_out, "Corpus artifact to write")->required();
  ingest_cmd->add_option("--stopwords", ingest_stopwords, "Stopword list, one per line");
  ingest_cmd->add_option("--min-df", vocab_opts.min_df, "Minimum document frequency")
      ->check(CLI::PositiveNumber);
  ingest_cmd->add_option("--max-df-ratio", vocab_opts.max_df_ratio,
                     "Maximum document frequency as a fraction of documents");
  ingest_cmd->add_option("--min-token-len", tok.min_token_len, "Shortest token kept (characters)")
      ->check(CLI::PositiveNumber);
  ingest_cmd->add_flag("--keep-case", keep_case, "Do not lowercase tokens");
  ingest_cmd->add_flag("--letters-only", letters_only, "Treat digits as separators");
  add_config(ingest_cmd);

  // keyphrases
  auto* kp = app.add_subcommand("keyphrases", "Extract keyphrases and build the reduced corpus");
  std::string kp_corpus, kp_out, kp_phrases, kp_stopwords;
  KeyphraseOptions kp_opts;
  kp->add_option("--corpus", kp_corpus, "Word-level corpus artifact")->required();
  kp->add_option("--out", kp_out, "Reduced corpus artifact to write")->required();
  kp->add_option("--phrases", kp_phrases, "Keyphrase vocabulary CSV to write")->required();
  kp->add_option("--stopwords", kp_stopwords, "Extra phrase boundary words, one per line");
  kp->add_option("--max-len", kp_opts.max_len, "Longest candidate phrase (words)")
      ->check(CLI::PositiveNumber);
  kp->add_option("--min-pf", kp_opts.min_pf, "Minimum phrase frequency");
  kp->add_option("--top", kp_opts.top_global, "Phrases kept as the reduced vocabulary")
      ->check(CLI::PositiveNumber);
  add_config(kp);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train LDA with collapsed Gibbs sampling");
  std::string train_corpus, train_out;
  TrainFlags train_flags;
  std::size_t log_every = 100, chains = 1;
  bool average = false;
  train_cmd->add_option("--corpus", train_corpus, "Corpus artifact")->required();
  train_cmd->add_option("--out", train_out, "Model JSON to write")->required();
  train_flags.add_to(train_cmd);
  train_cmd->add_flag("--average", average, "Average estimates over post-burn-in sweeps");
  train_cmd->add_option("--log-every", log_every, "Print log-likelihood every N sweeps (0: off)");
  train_cmd->add_option("--chains", chains, "Independent chains run in parallel")
      ->check(CLI::PositiveNumber);
  add_config(train_cmd);

  // topics
  auto* topics_cmd = app.add_subcommand("topics", "Print top terms and export word-cloud weights");
  std::string topics_model, topics_dir;
  std::size_t top_n = 10;
  std::optional<std::size_t> only_topic;
  topics_cmd->add_option("--model", topics_model, "Model JSON")->required();
  topics_cmd->add_option("--top", top_n, "Terms per topic")->check(CLI::PositiveNumber);
  topics_cmd->add_option("--topic", only_topic, "Only this topic id");
  topics_cmd->add_option("--out-dir", topics_dir, "Directory for topic_<k>.json word clouds");
  add_config(topics_cmd);

  // trends
  auto* trends_cmd = app.add_subcommand("trends", "Per-topic mean proportions over time");
  std::string trends_model, trends_corpus, trends_out, granularity = "month";
  trends_cmd->add_option("--model", trends_model, "Model JSON")->required();
  trends_cmd->add_option("--corpus", trends_corpus, "Corpus the model was trained on")->required();
  trends_cmd->add_option("--granularity", granularity, "month or quarter")
      ->check(CLI::IsMember({"month", "quarter"}));
  trends_cmd->add_option("--out", trends_out, "CSV output (default: standard output)");
  add_config(trends_cmd);

  // match
  auto* match_cmd = app.add_subcommand("match", "Pair topics of two models by cosine similarity");
  std::string match_a, match_b, match_out;
  match_cmd->add_option("--a", match_a, "First model JSON")->required();
  match_cmd->add_option("--b", match_b, "Second model JSON")->required();
  match_cmd->add_option("--out", match_out, "JSON report (default: standard output)");
  add_config(match_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time training on word and keyphrase corpora");
  std::string bench_words, bench_reduced, bench_out;
  TrainFlags bench_flags;
  bench_cmd->add_option("--words", bench_words, "Word-level corpus artifact")->required();
  bench_cmd->add_option("--reduced", bench_reduced, "Keyphrase corpus artifact")->required();
  bench_cmd->add_option("--out", bench_out, "JSON report (default: standard output)");
  bench_flags.add_to(bench_cmd);
  add_config(bench_cmd);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic LDA collection as JSONL");
  std::string synth_out, synth_planted, start = "2008-01", end = "2014-05";
  SyntheticSpec spec;
  std::optional<std::size_t> doc_len_max, spike_topic;
  std::size_t doc_len = spec.doc_len_min;
  std::string spike_start, spike_end;
  double spike_boost = 1.0;
  synth_cmd->add_option("--out", synth_out, "JSONL output")->required();
  synth_cmd->add_option("--planted", synth_planted, "Planted phi/theta as model JSON");
  synth_cmd->add_option("--topics,-k", spec.topics, "Planted topics")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--vocab", spec.vocab_size, "Vocabulary size")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--docs", spec.num_docs, "Documents")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--doc-len", doc_len, "Document length (minimum when --doc-len-max is set)")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--doc-len-max", doc_len_max, "Maximum document length");
  synth_cmd->add_option("--alpha", spec.alpha_gen, "Dirichlet concentration for theta");
  synth_cmd->add_option("--beta", spec.beta_gen, "Dirichlet concentration for phi noise");
  synth_cmd->add_option("--separation", spec.separation, "Block-concentrated share of each topic")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--seed", spec.seed, "Random seed");
  synth_cmd->add_option("--start", start, "First month (YYYY-MM)");
  synth_cmd->add_option("--end", end, "Last month (YYYY-MM)");
  synth_cmd->add_option("--spike-topic", spike_topic, "Topic boosted inside the spike window");
  synth_cmd->add_option("--spike-start", spike_start, "First spike month (YYYY-MM)");
  synth_cmd->add_option("--spike-end", spike_end, "Last spike month (YYYY-MM)");
  synth_cmd->add_option("--spike-boost", spike_boost, "Mass added to the spiked topic");
  add_config(synth_cmd);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("lexlda");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsageError;
  }

  try {
    if (ingest_cmd->parsed()) {
      tok.lowercase = !keep_case;
      tok.word_class = letters_only ? WordClass::letters_only : WordClass::letters_and_digits;
      if (!ingest_stopwords.empty()) tok.stopwords = load_stopwords(ingest_stopwords);
      const auto raw = load_jsonl(ingest_in);
      const Corpus corpus = ingest(raw, tok, vocab_opts);
      save_corpus(corpus, ingest_out);
      out << "D=" << corpus.num_docs() << " V=" << corpus.vocab().size()
          << " tokens=" << corpus.total_tokens() << "\n";
      const auto empty = corpus.num_docs() - corpus.num_nonempty();
      if (empty > 0) err << "note: " << empty << " documents have no in-vocabulary tokens\n";
    } else if (kp->parsed()) {
      const Corpus words = load_corpus(kp_corpus);
      std::unordered_set<std::string> stopwords;
      if (!kp_stopwords.empty()) stopwords = load_stopwords(kp_stopwords);
      const auto kv = extract_keyphrases(words, stopwords, kp_opts);
      if (kv.empty()) throw Error("no keyphrase reached the minimum phrase frequency");
      const Corpus reduced = reduce_corpus(words, kv, kp_opts.top_global);
      write_keyphrase_csv(kv, std::filesystem::path(kp_phrases));
      save_corpus(reduced, kp_out);
      out << "phrases=" << kv.size() << " kept=" << reduced.vocab().size() << "\n";
      out << "tokens: " << words.total_tokens() << " -> " << reduced.total_tokens() << "\n";
    } else if (train_cmd->parsed()) {
      const Corpus corpus = load_corpus(train_corpus);
      const Hyperparams base = train_flags.resolve();
      std::vector<std::ostringstream> logs(chains);
      std::vector<TopicModel> models(chains);
      std::vector<std::exception_ptr> failures(chains);
      auto run_chain = [&](std::size_t c) {
        try {
          Hyperparams h = base;
          if (chains > 1) h.seed = Rng::derive_seed(base.seed, c);
          TrainOptions opts;
          opts.average_samples = average;
          opts.log_every = log_every;
          opts.on_log = [&, c](std::size_t sweep, double ll) {
            if (chains > 1) logs[c] << "[chain " << c << "] ";
            logs[c] << "sweep " << sweep << " log_likelihood " << std::setprecision(12) << ll
                    << "\n";
          };
          models[c] = train(corpus, h, opts);
        } catch (...) {
          failures[c] = std::current_exception();
        }
      };
      if (chains == 1) {
        run_chain(0);
      } else {
        std::vector<std::thread> threads;
        for (std::size_t c = 0; c < chains; ++c) threads.emplace_back(run_chain, c);
        for (auto& t : threads) t.join();
      }
      for (std::size_t c = 0; c < chains; ++c) {
        if (failures[c]) std::rethrow_exception(failures[c]);
        out << logs[c].str();
        const auto path = chains > 1 ? chain_path(train_out, c) : std::filesystem::path(train_out);
        save_model(models[c], path);
        if (chains > 1) out << "[chain " << c << "] seed " << models[c].hyper.seed << " -> " << path.string() << "\n";
      }
    } else if (topics_cmd->parsed()) {
      const TopicModel model = load_model(topics_model);
      if (!topics_dir.empty()) std::filesystem::create_directories(topics_dir);
      const std::size_t first = only_topic.value_or(0);
      const std::size_t last = only_topic ? first + 1 : model.num_topics();
      for (std::size_t k = first; k < last; ++k) {
        const auto summary = top_terms(model, k, top_n);
        out << "topic " << k << ":";
        for (const auto& t : summary.terms) {
          out << " " << t.term << " (" << std::setprecision(4) << t.probability << ")";
        }
        out << "\n";
        if (!topics_dir.empty()) {
          export_word_cloud(summary, std::filesystem::path(topics_dir) /
                                         ("topic_" + std::to_string(k) + ".json"));
        }
      }
    } else if (trends_cmd->parsed()) {
      const TopicModel model = load_model(trends_model);
      const Corpus corpus = load_corpus(trends_corpus);
      const auto series = trend(model, corpus, parse_granularity(granularity));
      if (trends_out.empty()) {
        write_trends_csv(series, out);
      } else {
        std::ostringstream csv;
        write_trends_csv(series, csv);
        write_text(trends_out, csv.str());
      }
    } else if (match_cmd->parsed()) {
      const auto matching = match_topics(load_model(match_a), load_model(match_b));
      const auto report = matching_json(matching);
      if (match_out.empty()) {
        out << report;
      } else {
        write_text(match_out, report);
        out << "pairs=" << matching.pairs.size() << " mean_cosine=" << matching.mean_cosine()
            << "\n";
      }
    } else if (bench_cmd->parsed()) {
      const Corpus words = load_corpus(bench_words);
      const Corpus reduced = load_corpus(bench_reduced);
      const auto report = run_bench(words, reduced, bench_flags.resolve());
      if (bench_out.empty()) {
        out << bench_json(report);
      } else {
        write_text(bench_out, bench_json(report));
        out << "tokens: " << report.words.tokens << " -> " << report.reduced.tokens
            << " time_ratio=" << report.time_ratio() << "\n";
      }
    } else if (synth_cmd->parsed()) {
      spec.doc_len_min = doc_len;
      spec.doc_len_max = doc_len_max.value_or(doc_len);
      spec.start = parse_year_month(start);
      spec.end = parse_year_month(end);
      if (spike_topic) {
        if (spike_start.empty() || spike_end.empty()) {
          throw Error("--spike-topic needs --spike-start and --spike-end");
        }
        spec.spike = Spike{*spike_topic, parse_year_month(spike_start),
                           parse_year_month(spike_end), spike_boost};
      }
      const auto synthetic = generate(spec);
      std::ostringstream jsonl;
      write_jsonl(synthetic.raw, jsonl);
      write_text(synth_out, jsonl.str());
      if (!synth_planted.empty()) save_model(synthetic.planted_model(), synth_planted);
      out << "D=" << synthetic.corpus.num_docs() << " V=" << spec.vocab_size
          << " tokens=" << synthetic.corpus.total_tokens() << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace lexlda::tools
