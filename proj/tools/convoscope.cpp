#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"
#include "convoscope/corpus/io.hpp"
#include "convoscope/corpus/synthetic.hpp"
#include "convoscope/lda/lda.hpp"
#include "convoscope/phrase/embeddings.hpp"
#include "convoscope/sentiment/lexicon.hpp"
#include "convoscope/service/api.hpp"
#include "convoscope/service/http_server.hpp"
#include "convoscope/service/snapshot.hpp"
#include "convoscope/service/verdicts.hpp"
#include "convoscope/topics/agreement.hpp"
#include "convoscope/topics/annotations.hpp"
#include "convoscope/topics/evaluation.hpp"
#include "convoscope/topics/hierarchy.hpp"
#include "convoscope/topics/model_io.hpp"
#include "convoscope/topics/vectorizer.hpp"

namespace fs = std::filesystem;
using namespace convoscope;

namespace {

fs::path data_root() {
  const char* env = std::getenv("CONVOSCOPE_DATA_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

// Explicit paths must exist; defaults under the data root are optional.
std::optional<fs::path> resolve(const std::string& explicit_path, const std::string& default_name) {
  if (!explicit_path.empty()) {
    if (!fs::exists(explicit_path)) throw InvalidInputError("no such file: " + explicit_path);
    return fs::path(explicit_path);
  }
  fs::path fallback = data_root() / default_name;
  if (fs::exists(fallback)) return fallback;
  return std::nullopt;
}

fs::path output_path(const std::string& explicit_path, const std::string& default_name) {
  return explicit_path.empty() ? data_root() / default_name : fs::path(explicit_path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error("cannot write " + path.string());
}

Corpus load_filtered_corpus(const std::string& corpus_arg, std::size_t min_messages) {
  auto path = resolve(corpus_arg, "corpus");
  if (!path) throw InvalidInputError("no corpus given and none found under " + data_root().string());
  auto loaded = load_corpus(*path);
  if (loaded.report.malformed_lines > 0)
    std::cerr << "warning: skipped " << loaded.report.malformed_lines << " malformed lines\n";
  return filter_short(loaded.corpus, min_messages);
}

TopicHierarchy load_hierarchy(const std::string& arg) {
  auto path = resolve(arg, "topics.tsv");
  return path ? load_topic_hierarchy(*path) : default_topic_hierarchy();
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : "undefined"; }

int run_ingest(const std::string& path, std::size_t min_messages, const std::string& out) {
  auto loaded = load_corpus(path);
  const auto& r = loaded.report;
  std::cout << "lines read: " << r.lines_read << "\nmalformed lines: " << r.malformed_lines
            << "\nduplicate message ids: " << r.duplicate_message_ids
            << "\nunknown feature values: " << r.unknown_feature_values << '\n';
  for (const auto& d : r.diagnostics) std::cout << "  " << d << '\n';
  Corpus filtered = filter_short(loaded.corpus, min_messages);
  auto stats = corpus_stats(filtered);
  std::cout << "conversations: " << loaded.corpus.conversations.size() << " -> " << stats.conversation_count
            << " (min " << min_messages << " messages)\nmessages: " << stats.message_count
            << "\nmean messages per conversation: " << format_double(stats.mean_messages)
            << "\ntime span: " << format_iso8601(stats.time_span.first) << " .. "
            << format_iso8601(stats.time_span.second) << '\n';
  if (!out.empty()) {
    save_corpus(filtered, out);
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

int run_synth(std::size_t n, std::size_t n_short, std::uint64_t seed, std::size_t annotators, double flip_rate,
              const std::string& out_arg) {
  fs::path out = output_path(out_arg, "");
  auto spec = default_synthetic_spec(n, seed);
  spec.short_conversations = n_short;
  auto synthetic = generate_synthetic_corpus(spec);
  save_corpus(synthetic.corpus, out / "corpus");

  auto hierarchy = default_topic_hierarchy();
  {
    std::ofstream f(out / "topics.tsv");
    write_topic_hierarchy(f, hierarchy);
  }
  {
    std::ofstream f(out / "lexicon.tsv");
    write_lexicon(f, default_lexicon());
  }
  {
    std::ofstream f(out / "embeddings.txt");
    write_embeddings(f, synthetic_embeddings(spec));
  }
  auto leaves = hierarchy.leaves();
  write_file(out / "annotations.csv",
             format_annotations_csv(synthetic_annotations(synthetic.ledger, leaves, annotators, flip_rate, seed + 1)));

  std::ostringstream ledger;
  ledger << "conversation_id\tmessages\tpolarity\ttopics\n";
  for (const auto& e : synthetic.ledger.entries) {
    ledger << e.conversation_id << '\t' << e.message_count << '\t' << static_cast<int>(e.polarity) << '\t';
    for (std::size_t i = 0; i < e.planted_topics.size(); ++i) ledger << (i ? "," : "") << e.planted_topics[i];
    ledger << '\n';
  }
  write_file(out / "ledger.tsv", ledger.str());
  std::cout << "wrote " << synthetic.corpus.conversations.size() << " conversations ("
            << synthetic.ledger.total_messages << " messages) to " << out.string() << '\n';
  return 0;
}

int run_train(const std::string& annotations_arg, const std::string& corpus_arg, const std::string& topics_arg,
              const std::string& out_arg, double holdout, std::size_t min_doc_freq, const TrainConfig& config) {
  auto corpus = load_filtered_corpus(corpus_arg, 3);
  auto hierarchy = load_hierarchy(topics_arg);
  auto annotations_path = resolve(annotations_arg, "annotations.csv");
  if (!annotations_path) throw InvalidInputError("no annotations given");
  auto annotations = parse_annotations_csv(read_file(*annotations_path));
  annotations.validate(hierarchy);
  auto leaves = hierarchy.leaves();

  for (const auto& a : annotation_agreement(annotations, leaves))
    if (a.pairs > 0)
      std::cout << "agreement " << a.topic_id << ": mean kappa " << format_double(a.mean_kappa) << " over "
                << a.pairs << " annotator pairs\n";

  if (!(holdout >= 0.0 && holdout < 1.0)) throw InvalidInputError("--holdout must lie in [0, 1)");
  const auto& convs = corpus.conversations;
  std::size_t n_test = static_cast<std::size_t>(holdout * static_cast<double>(convs.size()));
  std::size_t n_train = convs.size() - n_test;
  std::span<const Conversation> train_convs(convs.data(), n_train);
  std::span<const Conversation> test_convs(convs.data() + n_train, n_test);

  auto vectorizer = fit_vectorizer(train_convs, min_doc_freq);
  auto featurize = [&](std::span<const Conversation> part, std::vector<std::string>& ids) {
    std::vector<SparseVector> features;
    for (const auto& c : part) {
      ids.push_back(c.id);
      features.push_back(vectorizer.transform(conversation_text(c)));
    }
    return features;
  };
  std::vector<std::string> train_ids, test_ids;
  auto train_features = featurize(train_convs, train_ids);
  auto test_features = featurize(test_convs, test_ids);

  auto result = train(train_features, vectorizer.dimension(), consensus_targets(annotations, train_ids, leaves), config);
  for (const auto& report : result.reports) {
    std::cout << "topic " << report.topic_id << ": ";
    if (report.skipped)
      std::cout << "skipped (" << report.diagnostic << ")\n";
    else
      std::cout << "final loss " << format_double(report.epoch_losses.back()) << " after "
                << report.epoch_losses.size() - 1 << " epochs" << (report.halted ? " (halted)" : "") << '\n';
  }
  if (n_test > 0) {
    auto eval = evaluate(result.classifier, test_features, consensus_targets(annotations, test_ids, leaves));
    std::cout << "held-out (" << eval.n_items << " conversations): micro P " << format_optional(eval.micro.precision)
              << " R " << format_optional(eval.micro.recall) << " F1 " << format_optional(eval.micro.f1)
              << "; macro F1 " << format_optional(eval.macro.f1) << '\n';
  }
  fs::path out = output_path(out_arg, "model.txt");
  save_topic_model({vectorizer, result.classifier}, out);
  std::cout << "wrote " << out.string() << '\n';
  return 0;
}

int run_lda(const std::string& corpus_arg, const LdaConfig& config, const std::string& out_arg) {
  auto corpus = load_filtered_corpus(corpus_arg, 3);
  std::vector<LdaDocument> docs;
  for (const auto& c : corpus.conversations)
    docs.push_back({c.id, tokenize(conversation_text(c), bag_of_words_tokenizer())});
  auto model = fit_lda(docs, config);
  for (std::size_t t = 0; t < model.k(); ++t) {
    auto topic = topic_label(model, t);
    std::cout << "topic " << t << " (weight " << format_double(topic.weight) << "):";
    for (const auto& w : topic.label) std::cout << ' ' << w;
    std::cout << '\n';
  }
  fs::path out = output_path(out_arg, "lda.txt");
  save_lda_model(model, out);
  std::cout << "wrote " << out.string() << '\n';
  return 0;
}

HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

struct ServeOptions {
  std::string corpus, lexicon, embeddings, model, topics, lda_model, verdicts, host = "127.0.0.1";
  int port = 8080;
  std::size_t lda_k = 3, min_messages = 3, lda_iterations = 1000;
  std::uint64_t lda_seed = 1;
  bool no_lda = false;
};

int run_serve(const ServeOptions& o) {
  SnapshotInputs inputs;
  inputs.corpus = load_filtered_corpus(o.corpus, o.min_messages);
  inputs.hierarchy = load_hierarchy(o.topics);
  if (auto p = resolve(o.lexicon, "lexicon.tsv"))
    inputs.lexicon = load_lexicon(*p);
  else
    inputs.lexicon = default_lexicon();
  if (auto p = resolve(o.embeddings, "embeddings.txt")) {
    auto loaded = load_embeddings(*p);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
    inputs.embeddings = std::make_shared<const EmbeddingTable>(std::move(loaded.table));
  }
  if (auto p = resolve(o.model, "model.txt")) inputs.model = load_topic_model(*p);
  if (auto p = resolve(o.lda_model, "lda.txt")) {
    inputs.lda_model = load_lda_model(*p);
  } else if (!o.no_lda) {
    LdaConfig config;
    config.k = o.lda_k;
    config.seed = o.lda_seed;
    config.iterations = o.lda_iterations;
    inputs.lda_config = config;
  }
  auto snapshot = build_snapshot(std::move(inputs));
  auto verdicts = std::make_shared<VerdictStore>(output_path(o.verdicts, "verdicts.jsonl"));
  ExplorerService service(snapshot, verdicts);
  HttpServer server(service);
  int port = server.bind(o.host, o.port);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cout << "serving " << snapshot->index.universe() << " conversations on http://" << o.host << ':' << port
            << std::endl;
  server.listen();
  g_server = nullptr;
  return 0;
}

int run_export(const std::string& verdicts_arg, const std::string& out_arg) {
  auto log = resolve(verdicts_arg, "verdicts.jsonl");
  std::vector<TopicVerdict> latest;
  if (log) {
    VerdictStore store(*log);
    if (store.skipped_log_lines() > 0)
      std::cerr << "warning: ignored " << store.skipped_log_lines() << " unreadable log lines\n";
    latest = store.latest();
  }
  std::string csv = export_labels_csv(latest);
  if (out_arg.empty() || out_arg == "-") {
    std::cout << csv;
  } else {
    write_file(out_arg, csv);
    std::cerr << "wrote " << latest.size() << " verdicts to " << out_arg << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convoscope: conversation topic and sentiment explorer"};
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Validate a corpus, drop short conversations and report statistics");
  std::string ingest_path, ingest_out;
  std::size_t ingest_min = 3;
  ingest->add_option("path", ingest_path, "Corpus directory or .jsonl file")->required();
  ingest->add_option("--min-messages", ingest_min, "Minimum messages per conversation");
  ingest->add_option("--out", ingest_out, "Write the filtered corpus to this directory");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth and fixtures");
  std::size_t synth_n = 500, synth_short = 0, synth_annotators = 2;
  std::uint64_t synth_seed = 7;
  double synth_flip = 0.05;
  std::string synth_out;
  synth->add_option("--n", synth_n, "Number of conversations");
  synth->add_option("--short", synth_short, "Conversations with fewer than three messages");
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--annotators", synth_annotators, "Simulated annotators");
  synth->add_option("--flip-rate", synth_flip, "Per-label annotator error rate");
  synth->add_option("--out", synth_out, "Output directory (default: data root)");

  auto* train_cmd = app.add_subcommand("train", "Train the pre-defined topic classifier from annotations");
  std::string train_annotations, train_corpus, train_topics, train_out;
  double train_holdout = 0.2;
  std::size_t train_min_df = 2;
  TrainConfig train_config;
  train_cmd->add_option("--annotations", train_annotations, "Annotation CSV");
  train_cmd->add_option("--corpus", train_corpus, "Corpus directory or .jsonl file");
  train_cmd->add_option("--topics", train_topics, "Topic hierarchy TSV");
  train_cmd->add_option("--out", train_out, "Model output path");
  train_cmd->add_option("--holdout", train_holdout, "Fraction of conversations held out for evaluation");
  train_cmd->add_option("--min-doc-freq", train_min_df, "Minimum document frequency of vocabulary words");
  train_cmd->add_option("--l2", train_config.l2, "L2 regularization strength");
  train_cmd->add_option("--epochs", train_config.epochs, "Training epochs");
  train_cmd->add_option("--threshold", train_config.threshold, "Decision threshold");
  train_cmd->add_option("--seed", train_config.seed, "Random seed");

  auto* lda_cmd = app.add_subcommand("lda", "Fit an LDA topic model and print discovered topics");
  std::string lda_corpus, lda_out;
  LdaConfig lda_config;
  double lda_alpha = 0.0;
  lda_cmd->add_option("--corpus", lda_corpus, "Corpus directory or .jsonl file");
  lda_cmd->add_option("--k", lda_config.k, "Number of topics");
  lda_cmd->add_option("--seed", lda_config.seed, "Random seed");
  lda_cmd->add_option("--iterations", lda_config.iterations, "Gibbs sweeps");
  lda_cmd->add_option("--alpha", lda_alpha, "Document-topic prior (default 50/k)");
  lda_cmd->add_option("--beta", lda_config.beta, "Topic-word prior");
  lda_cmd->add_option("--out", lda_out, "Model dump path");

  auto* serve = app.add_subcommand("serve", "Serve the explorer HTTP API");
  ServeOptions serve_options;
  serve->add_option("--corpus", serve_options.corpus, "Corpus directory or .jsonl file");
  serve->add_option("--lexicon", serve_options.lexicon, "Sentiment lexicon");
  serve->add_option("--embeddings", serve_options.embeddings, "Word embeddings for phrase search");
  serve->add_option("--model", serve_options.model, "Trained topic model");
  serve->add_option("--topics", serve_options.topics, "Topic hierarchy TSV");
  serve->add_option("--lda-model", serve_options.lda_model, "Fitted LDA dump (skips fitting at startup)");
  serve->add_option("--lda-k", serve_options.lda_k, "Discovered topics fitted at startup");
  serve->add_option("--lda-seed", serve_options.lda_seed, "Seed for the startup LDA fit");
  serve->add_option("--lda-iterations", serve_options.lda_iterations, "Gibbs sweeps for the startup LDA fit");
  serve->add_flag("--no-lda", serve_options.no_lda, "Do not fit discovered topics");
  serve->add_option("--verdicts", serve_options.verdicts, "Verdict log (default: data root/verdicts.jsonl)");
  serve->add_option("--min-messages", serve_options.min_messages, "Minimum messages per conversation");
  serve->add_option("--host", serve_options.host, "Listen address");
  serve->add_option("--port", serve_options.port, "Listen port (0 picks a free port)");

  auto* export_cmd = app.add_subcommand("export-labels", "Export the latest verdicts as CSV");
  std::string export_verdicts, export_out;
  export_cmd->add_option("--verdicts", export_verdicts, "Verdict log");
  export_cmd->add_option("--out", export_out, "Output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return run_ingest(ingest_path, ingest_min, ingest_out);
    if (*synth) return run_synth(synth_n, synth_short, synth_seed, synth_annotators, synth_flip, synth_out);
    if (*train_cmd)
      return run_train(train_annotations, train_corpus, train_topics, train_out, train_holdout, train_min_df,
                       train_config);
    if (*lda_cmd) {
      if (lda_alpha > 0.0) lda_config.alpha = lda_alpha;
      return run_lda(lda_corpus, lda_config, lda_out);
    }
    if (*serve) return run_serve(serve_options);
    if (*export_cmd) return run_export(export_verdicts, export_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
