#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mgsag/config.hpp"
#include "mgsag/gradcheck.hpp"
#include "mgsag/rng.hpp"
#include "mgsag/synthetic.hpp"
#include "mgsag/train.hpp"

namespace fs = std::filesystem;

namespace mgsag::cli {

namespace {

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Output files are validated by re-reading what was just written.
void write_json_checked(const fs::path& path, const std::string& payload) {
  write_text(path, payload);
  if (nlohmann::json::parse(read_text(path), nullptr, false).is_discarded())
    throw DataError("output '" + path.string() + "' failed JSON re-validation");
}

void write_csv_checked(const fs::path& path, const std::string& payload,
                       const std::string& header) {
  write_text(path, payload);
  const std::string body = read_text(path);
  if (body.rfind(header, 0) != 0)
    throw DataError("output '" + path.string() + "' failed CSV re-validation");
}

void write_jsonl_checked(const fs::path& path, const std::string& payload) {
  write_text(path, payload);
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (nlohmann::json::parse(line, nullptr, false).is_discarded())
      throw DataError("output '" + path.string() + "' line " + std::to_string(line_no) +
                      " failed JSON re-validation");
  }
}

// ---- shared config wiring ----------------------------------------------------

struct ConfigFlags {
  std::string config_file;
  std::size_t epochs = 0, folds = 0, jobs = 0;
  std::size_t emb_dim = 0, word_hidden = 0, gat_layers = 0;
  double lr = 0.0, dropout = 0.0;
  std::uint64_t seed = 0;
  std::string loss, fgsag_norm, keyword_mode;
  bool no_fgsag = false, no_cgsag = false, random_kw = false;
  std::map<std::string, CLI::Option*> opts;
};

void register_config_flags(CLI::App& cmd, ConfigFlags& f) {
  cmd.add_option("--config", f.config_file, "key=value config file (defaults < file < flags)");
  f.opts["seed"] = cmd.add_option("--seed", f.seed, "master random seed");
  f.opts["epochs"] = cmd.add_option("--epochs", f.epochs, "training epochs");
  f.opts["lr"] = cmd.add_option("--lr", f.lr, "Adam learning rate");
  f.opts["folds"] = cmd.add_option("--folds", f.folds, "cross-validation folds");
  f.opts["jobs"] = cmd.add_option("--jobs", f.jobs, "parallel fold workers");
  f.opts["dropout"] = cmd.add_option("--dropout", f.dropout, "dropout rate per graph layer");
  f.opts["emb_dim"] = cmd.add_option("--emb-dim", f.emb_dim, "word embedding dimension (= 2 d_h)");
  f.opts["word_hidden"] = cmd.add_option("--word-hidden", f.word_hidden,
                                         "word-level hidden units per direction");
  f.opts["gat_layers"] = cmd.add_option("--gat-layers", f.gat_layers,
                                        "stacked clause-graph attention layers");
  f.opts["loss"] = cmd.add_option("--loss", f.loss, "loss terms: pair | full")
                       ->check(CLI::IsMember({"pair", "full"}));
  f.opts["fgsag_norm"] =
      cmd.add_option("--fgsag-norm", f.fgsag_norm,
                     "bipartite attention normalization: clauses | keywords")
          ->check(CLI::IsMember({"clauses", "keywords"}));
  f.opts["keyword_mode"] = cmd.add_option("--keyword-mode", f.keyword_mode,
                                          "keyword set: ew | tw | cw")
                               ->check(CLI::IsMember({"ew", "tw", "cw"}));
  f.opts["no_fgsag"] = cmd.add_flag("--no-fgsag", f.no_fgsag,
                                    "ablation: drop the clause-keyword graph");
  f.opts["no_cgsag"] = cmd.add_flag("--no-cgsag", f.no_cgsag,
                                    "ablation: drop the clause graph");
  f.opts["random_kw"] = cmd.add_flag("--random-keyword-features", f.random_kw,
                                     "ablation: random keyword node features");
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

TrainConfig resolve_config(const ConfigFlags& f,
                           const std::map<std::string, std::string>& overrides = {}) {
  TrainConfig config;
  for (const auto& [k, v] : overrides) apply_config_entry(config, k, v);
  if (!f.config_file.empty())
    for (const auto& [k, v] : load_config_file(f.config_file))
      apply_config_entry(config, k, v);
  auto passed = [&f](const char* name) {
    auto it = f.opts.find(name);
    return it != f.opts.end() && it->second->count() > 0;
  };
  if (passed("seed")) apply_config_entry(config, "seed", std::to_string(f.seed));
  if (passed("epochs")) apply_config_entry(config, "epochs", std::to_string(f.epochs));
  if (passed("lr")) apply_config_entry(config, "lr", fmt_double(f.lr));
  if (passed("folds")) apply_config_entry(config, "folds", std::to_string(f.folds));
  if (passed("jobs")) apply_config_entry(config, "jobs", std::to_string(f.jobs));
  if (passed("dropout")) apply_config_entry(config, "dropout", fmt_double(f.dropout));
  if (passed("emb_dim")) apply_config_entry(config, "emb_dim", std::to_string(f.emb_dim));
  if (passed("word_hidden"))
    apply_config_entry(config, "word_hidden", std::to_string(f.word_hidden));
  if (passed("gat_layers"))
    apply_config_entry(config, "gat_layers", std::to_string(f.gat_layers));
  if (passed("loss")) apply_config_entry(config, "loss", f.loss);
  if (passed("fgsag_norm")) apply_config_entry(config, "fgsag_norm", f.fgsag_norm);
  if (passed("keyword_mode")) apply_config_entry(config, "keyword_mode", f.keyword_mode);
  if (f.no_fgsag) apply_config_entry(config, "fgsag", "false");
  if (f.no_cgsag) apply_config_entry(config, "cgsag", "false");
  if (f.random_kw) apply_config_entry(config, "random_keyword_features", "true");
  config.model.validate();
  return config;
}

void print_resolved(const TrainConfig& config) {
  std::cout << "resolved configuration:\n";
  std::istringstream lines(resolved_config_text(config));
  std::string line;
  while (std::getline(lines, line)) std::cout << "  " << line << "\n";
}

// ---- shared data loading -------------------------------------------------------

struct DataFlags {
  std::string corpus, embeddings, lexicon, stopwords;
};

void register_data_flags(CLI::App& cmd, DataFlags& d, bool corpus_required = true) {
  auto* corpus = cmd.add_option("--corpus", d.corpus, "JSONL corpus file");
  if (corpus_required) corpus->required();
  cmd.add_option("--embeddings", d.embeddings,
                 "word embedding file (absent: seeded random vectors)");
  cmd.add_option("--lexicon", d.lexicon, "emotion lexicon, one word per line");
  cmd.add_option("--stopwords", d.stopwords, "stopword list, one word per line");
}

struct LoadedData {
  std::vector<Document> docs;
  EmbeddingTable embeddings{200, 0};
  std::set<std::string> lexicon;
  std::set<std::string> stopwords;
};

LoadedData load_data(const DataFlags& d, const TrainConfig& config) {
  LoadedData data;
  data.docs = load_corpus(d.corpus);
  if (!d.embeddings.empty()) {
    data.embeddings = EmbeddingTable::load(d.embeddings, split_seed(config.seed, 0x00f));
    if (data.embeddings.dimension() != config.model.emb_dim)
      throw DataError("embedding file dimension " +
                      std::to_string(data.embeddings.dimension()) +
                      " does not match emb_dim " +
                      std::to_string(config.model.emb_dim));
  } else {
    data.embeddings = EmbeddingTable(config.model.emb_dim, split_seed(config.seed, 0x00f));
  }
  if (!d.lexicon.empty()) data.lexicon = load_word_list(d.lexicon);
  if (!d.stopwords.empty()) data.stopwords = load_word_list(d.stopwords);
  return data;
}

// ---- subcommands -----------------------------------------------------------------

struct SynthArgs {
  std::string out;
  SyntheticConfig config;
  std::string profile;
};

int run_synth(const SynthArgs& a) {
  SyntheticConfig config = a.config;
  if (!a.profile.empty()) {
    std::array<double, 4> profile{};
    std::istringstream in(a.profile);
    std::string item;
    std::size_t i = 0;
    while (std::getline(in, item, ',')) {
      if (i >= 4) throw DataError("--profile expects four comma-separated probabilities");
      profile[i++] = std::stod(item);
    }
    if (i != 4) throw DataError("--profile expects four comma-separated probabilities");
    config.distance_profile = profile;
  }
  std::cout << "resolved configuration:\n"
            << "  docs = " << config.n_docs << "\n"
            << "  vocab_size = " << config.vocab_size << "\n"
            << "  max_clauses = " << config.max_clauses << "\n"
            << "  profile = " << config.distance_profile[0] << ","
            << config.distance_profile[1] << "," << config.distance_profile[2] << ","
            << config.distance_profile[3] << "\n"
            << "  multi_pair_prob = " << config.multi_pair_prob << "\n"
            << "  seed = " << config.seed << "\n";

  const auto docs = generate_synthetic_corpus(config);
  const fs::path out_dir(a.out);
  const fs::path corpus_path = out_dir / "corpus.jsonl";
  write_text(corpus_path, serialize_corpus(docs));
  const auto reloaded = load_corpus(corpus_path.string());  // schema check
  if (reloaded.size() != docs.size())
    throw DataError("corpus re-validation lost documents");
  write_text(out_dir / "lexicon.txt", synthetic_lexicon_text());

  const auto hist = distance_histogram(docs);
  std::cout << "wrote " << docs.size() << " documents to " << corpus_path.string()
            << "\n"
            << "distance buckets: dist0=" << hist[0] << " dist1=" << hist[1]
            << " dist2=" << hist[2] << " dist_gt2=" << hist[3] << "\n";
  return 0;
}

int run_keywords(const DataFlags& d, const ConfigFlags& f, const std::string& out) {
  const TrainConfig config = resolve_config(f);
  print_resolved(config);
  LoadedData data = load_data(d, config);

  const auto sets = build_keyword_sets(data.docs, data.lexicon, data.stopwords, config);
  nlohmann::json docs_json = nlohmann::json::array();
  for (std::size_t i = 0; i < data.docs.size(); ++i) {
    docs_json.push_back({{"id", data.docs[i].id},
                         {"emotion_words", sets[i].emotion_words},
                         {"textrank_words", sets[i].textrank_words},
                         {"combined", sets[i].combined()},
                         {"sources", sets[i].source_tags()}});
  }
  const fs::path out_dir(out);
  write_json_checked(out_dir / "keywords.json", docs_json.dump(2));

  nlohmann::json coverage_json;
  for (auto mode : {KeywordMode::EmotionWords, KeywordMode::TextRankWords,
                    KeywordMode::Combined}) {
    TrainConfig mode_config = config;
    mode_config.model.keyword_mode = mode;
    const auto mode_sets =
        build_keyword_sets(data.docs, data.lexicon, data.stopwords, mode_config);
    const auto stats = coverage_stats(data.docs, mode_sets);
    coverage_json[to_string(mode)] = {{"emotion_clauses", stats.emotion_clauses},
                                      {"cause_clauses", stats.cause_clauses},
                                      {"pairs", stats.pairs},
                                      {"clauses", stats.clauses}};
  }
  write_json_checked(out_dir / "coverage.json", coverage_json.dump(2));
  std::cout << "wrote keyword sets for " << data.docs.size() << " documents\n";
  return 0;
}

int run_train(const DataFlags& d, const ConfigFlags& f, const std::string& out) {
  const TrainConfig config = resolve_config(f);
  print_resolved(config);
  LoadedData data = load_data(d, config);
  if (data.docs.empty()) throw DataError("corpus is empty");

  const auto sets = build_keyword_sets(data.docs, data.lexicon, data.stopwords, config);
  auto trained = train_fold(data.docs, sets, data.embeddings, config);

  nlohmann::json dump;
  dump["config"] = config_to_map(config);
  dump["store"] = nlohmann::json::parse(trained.model.params().to_json());
  const fs::path out_dir(out);
  write_json_checked(out_dir / "params.json", dump.dump(2));

  std::ostringstream trace;
  trace << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < trained.loss_trace.size(); ++e)
    trace << e << "," << fmt_double(trained.loss_trace[e]) << "\n";
  write_csv_checked(out_dir / "loss_trace.csv", trace.str(), "epoch,mean_loss");

  std::cout << "trained on " << data.docs.size() << " documents for " << config.epochs
            << " epochs\n";
  if (!trained.loss_trace.empty())
    std::cout << "loss: first epoch " << trained.loss_trace.front() << ", last epoch "
              << trained.loss_trace.back() << "\n";
  return 0;
}

int run_eval(const DataFlags& d, const ConfigFlags& f, const std::string& params_path,
             const std::string& out, bool dump_attention) {
  nlohmann::json dump = nlohmann::json::parse(read_text(params_path));
  std::map<std::string, std::string> stored_config;
  if (dump.contains("config"))
    stored_config = dump.at("config").get<std::map<std::string, std::string>>();
  const TrainConfig config = resolve_config(f, stored_config);
  print_resolved(config);
  LoadedData data = load_data(d, config);

  MgsagModel model(config.model, ParamStore::from_json(dump.at("store").dump()));
  const auto sets = build_keyword_sets(data.docs, data.lexicon, data.stopwords, config);
  const auto evals = evaluate_documents(model, data.docs, sets, data.embeddings);

  std::string predictions;
  std::string attention;
  std::size_t degraded = 0;
  for (const auto& ev : evals) {
    predictions += prediction_to_json(ev.doc_id, ev.extraction);
    predictions += '\n';
    if (ev.fgsag_degraded) ++degraded;
    if (dump_attention && !ev.fgsag_alpha.empty()) {
      attention += attention_to_json(ev.doc_id, ev.keyword_nodes, ev.fgsag_alpha);
      attention += '\n';
    }
  }
  const fs::path out_dir(out);
  write_jsonl_checked(out_dir / "predictions.jsonl", predictions);
  if (dump_attention) write_jsonl_checked(out_dir / "attention.jsonl", attention);

  EvalReport report;
  report.resolved_config = config_to_map(config);
  report.folds.push_back(make_fold_report(0, evals, data.docs));
  report.histogram = distance_histogram(data.docs);
  for (auto mode : {KeywordMode::EmotionWords, KeywordMode::TextRankWords,
                    KeywordMode::Combined}) {
    TrainConfig mode_config = config;
    mode_config.model.keyword_mode = mode;
    report.coverage[to_string(mode)] = coverage_stats(
        data.docs, build_keyword_sets(data.docs, data.lexicon, data.stopwords, mode_config));
  }
  report.degraded_fgsag_docs = degraded;
  write_json_checked(out_dir / "report.json", report.to_json());
  write_text(out_dir / "report.txt", report.to_table());
  std::cout << report.to_table();
  return 0;
}

int run_cv(const DataFlags& d, const ConfigFlags& f, const std::string& out) {
  const TrainConfig config = resolve_config(f);
  print_resolved(config);
  LoadedData data = load_data(d, config);

  const auto report =
      cross_validate(data.docs, config, data.embeddings, data.lexicon, data.stopwords);
  const fs::path out_dir(out);
  write_json_checked(out_dir / "report.json", report.to_json());
  write_text(out_dir / "report.txt", report.to_table());
  std::cout << report.to_table();
  return 0;
}

int run_gradcheck(const DataFlags& d, const ConfigFlags& f, std::size_t n_docs,
                  double eps, double threshold) {
  TrainConfig config = resolve_config(f);
  // Desk-scale dimensions unless the user asked otherwise; a full-size model
  // would take hours under coordinate-wise central differences.
  auto passed = [&f](const char* name) {
    auto it = f.opts.find(name);
    return it != f.opts.end() && it->second->count() > 0;
  };
  if (!passed("emb_dim")) config.model.emb_dim = 8;
  if (!passed("word_hidden")) config.model.word_hidden = 4;
  config.model.dropout_rate = 0.0;  // the oracle needs a deterministic loss
  print_resolved(config);

  SyntheticConfig sc;
  sc.n_docs = n_docs;
  sc.max_clauses = 5;
  sc.seed = config.seed;
  const auto docs = generate_synthetic_corpus(sc);

  std::set<std::string> lexicon = d.lexicon.empty()
                                      ? std::set<std::string>{synthetic_emotion_token()}
                                      : load_word_list(d.lexicon);
  std::set<std::string> stopwords =
      d.stopwords.empty() ? std::set<std::string>{} : load_word_list(d.stopwords);
  const auto sets = build_keyword_sets(docs, lexicon, stopwords, config);
  EmbeddingTable embeddings(config.model.emb_dim, split_seed(config.seed, 0x00f));

  MgsagModel model(config.model, split_seed(config.seed, 0x6c4d));
  auto model_fn = [&](ParamStore&) {
    ForwardContext ctx;
    Tensor loss = Tensor::scalar(0.0);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      auto fwd = model.forward(docs[i], embeddings, sets[i], ctx);
      loss = add(loss, total_loss(fwd, docs[i], config.loss_mode));
    }
    return loss;
  };

  const auto start = std::chrono::steady_clock::now();
  const auto report = finite_difference_check(model_fn, model.params(), eps);
  const auto elapsed = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start).count();

  std::cout << "checked " << report.coordinates << " parameter coordinates in "
            << elapsed << " s\n"
            << "max relative error: " << report.max_rel_err << " at "
            << report.worst_param << "[" << report.worst_index << "]"
            << " (analytic " << report.worst_analytic << ", numeric "
            << report.worst_numeric << ")\n"
            << "threshold: " << threshold << "\n";
  if (report.max_rel_err >= threshold) {
    std::cerr << "gradient check FAILED\n";
    return 3;
  }
  std::cout << "gradient check passed\n";
  return 0;
}

int run_stats(const DataFlags& d, const ConfigFlags& f, const std::string& out) {
  const TrainConfig config = resolve_config(f);
  print_resolved(config);
  const auto docs = load_corpus(d.corpus);
  const auto hist = distance_histogram(docs);
  const auto csv = histogram_to_csv(hist);
  write_csv_checked(fs::path(out) / "histogram.csv", csv, "bucket,count,proportion");
  std::cout << csv;
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"MGSAG emotion-cause pair extraction"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic corpus");
  SynthArgs synth_args;
  synth->add_option("--out", synth_args.out, "output directory")->required();
  synth->add_option("--docs", synth_args.config.n_docs, "number of documents");
  synth->add_option("--vocab-size", synth_args.config.vocab_size, "filler vocabulary size");
  synth->add_option("--max-clauses", synth_args.config.max_clauses, "max clauses per document");
  synth->add_option("--profile", synth_args.profile,
                    "distance profile p0,p1,p2,p_gt2 (sums to 1)");
  synth->add_option("--multi-pair-prob", synth_args.config.multi_pair_prob,
                    "probability of a second gold pair");
  synth->add_option("--seed", synth_args.config.seed, "generator seed");

  // keywords
  auto* keywords = app.add_subcommand("keywords", "extract keyword sets and coverage");
  DataFlags kw_data;
  ConfigFlags kw_flags;
  std::string kw_out = "out";
  register_data_flags(*keywords, kw_data);
  register_config_flags(*keywords, kw_flags);
  keywords->add_option("--out", kw_out, "output directory");

  // train
  auto* train = app.add_subcommand("train", "train on a whole corpus");
  DataFlags train_data;
  ConfigFlags train_flags;
  std::string train_out = "out";
  register_data_flags(*train, train_data);
  register_config_flags(*train, train_flags);
  train->add_option("--out", train_out, "output directory");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate dumped parameters on a corpus");
  DataFlags eval_data;
  ConfigFlags eval_flags;
  std::string eval_out = "out";
  std::string eval_params;
  bool dump_attention = false;
  register_data_flags(*eval, eval_data);
  register_config_flags(*eval, eval_flags);
  eval->add_option("--params", eval_params, "params.json from train")->required();
  eval->add_option("--out", eval_out, "output directory");
  eval->add_flag("--dump-attention", dump_attention,
                 "write bipartite attention matrices per document");

  // cv
  auto* cv = app.add_subcommand("cv", "k-fold cross-validated evaluation");
  DataFlags cv_data;
  ConfigFlags cv_flags;
  std::string cv_out = "out";
  register_data_flags(*cv, cv_data);
  register_config_flags(*cv, cv_flags);
  cv->add_option("--out", cv_out, "output directory");

  // gradcheck
  auto* gradcheck = app.add_subcommand(
      "gradcheck", "compare analytic gradients against central differences");
  DataFlags gc_data;
  ConfigFlags gc_flags;
  std::size_t gc_docs = 3;
  double gc_eps = 1e-5, gc_threshold = 1e-4;
  register_data_flags(*gradcheck, gc_data, /*corpus_required=*/false);
  register_config_flags(*gradcheck, gc_flags);
  gradcheck->add_option("--docs", gc_docs, "synthetic documents to check on");
  gradcheck->add_option("--eps", gc_eps, "central difference step");
  gradcheck->add_option("--threshold", gc_threshold, "max relative error allowed");

  // stats
  auto* stats = app.add_subcommand("stats", "gold-pair distance histogram");
  DataFlags stats_data;
  ConfigFlags stats_flags;
  std::string stats_out = "out";
  register_data_flags(*stats, stats_data);
  register_config_flags(*stats, stats_flags);
  stats->add_option("--out", stats_out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) return run_synth(synth_args);
    if (keywords->parsed()) return run_keywords(kw_data, kw_flags, kw_out);
    if (train->parsed()) return run_train(train_data, train_flags, train_out);
    if (eval->parsed())
      return run_eval(eval_data, eval_flags, eval_params, eval_out, dump_attention);
    if (cv->parsed()) return run_cv(cv_data, cv_flags, cv_out);
    if (gradcheck->parsed())
      return run_gradcheck(gc_data, gc_flags, gc_docs, gc_eps, gc_threshold);
    if (stats->parsed()) return run_stats(stats_data, stats_flags, stats_out);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace mgsag::cli
