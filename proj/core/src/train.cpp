#include "mgsag/train.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mgsag/config.hpp"
#include "mgsag/rng.hpp"

namespace mgsag {

std::vector<KeywordSet> build_keyword_sets(const std::vector<Document>& docs,
                                           const std::set<std::string>& lexicon,
                                           const std::set<std::string>& stopwords,
                                           const TrainConfig& config) {
  std::vector<KeywordSet> sets;
  sets.reserve(docs.size());
  for (const auto& doc : docs)
    sets.push_back(build_keyword_set(doc, lexicon, stopwords, config.textrank,
                                     config.model.keyword_mode));
  return sets;
}

FoldTraining train_fold(const std::vector<Document>& train_docs,
                        const std::vector<KeywordSet>& keyword_sets,
                        EmbeddingTable& embeddings, const TrainConfig& config,
                        std::uint64_t stream, const EpochCallback& on_epoch) {
  if (train_docs.empty()) throw DataError("train_fold: empty training set");
  if (train_docs.size() != keyword_sets.size())
    throw DataError("train_fold: docs and keyword sets are misaligned");
  for (const auto& doc : train_docs) {
    if (doc.gold_pairs.empty())
      throw DataError("train_fold: training document '" + doc.id + "' has no gold pairs");
  }

  MgsagModel model(config.model, split_seed(config.seed, 0x11117 + stream));
  AdamState adam(AdamConfig{config.learning_rate});
  auto dropout_rng = make_rng(split_seed(config.seed, 0x22227 + stream), 0);

  std::vector<std::size_t> order(train_docs.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> trace;
  trace.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    auto shuffle_rng = make_rng(split_seed(config.seed, 0x33337 + stream), epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double total = 0.0;
    for (std::size_t idx : order) {
      model.params().zero_grad();
      ForwardContext ctx;
      ctx.training = true;
      ctx.rng = &dropout_rng;
      auto fwd = model.forward(train_docs[idx], embeddings, keyword_sets[idx], ctx);
      Tensor loss = total_loss(fwd, train_docs[idx], config.loss_mode);
      const double loss_value = loss.value(0);
      if (!std::isfinite(loss_value)) {
        throw NumericError("training diverged: loss=" + std::to_string(loss_value) +
                           " at epoch " + std::to_string(epoch) + ", document '" +
                           train_docs[idx].id + "'");
      }
      backward(loss);
      adam.step(model.params());
      total += loss_value;
    }
    trace.push_back(total / static_cast<double>(train_docs.size()));
    if (on_epoch && !on_epoch(epoch, model, trace.back())) break;
  }
  return {std::move(model), std::move(trace)};
}

std::vector<DocEval> evaluate_documents(const MgsagModel& model,
                                        const std::vector<Document>& docs,
                                        const std::vector<KeywordSet>& keyword_sets,
                                        EmbeddingTable& embeddings) {
  if (docs.size() != keyword_sets.size())
    throw DataError("evaluate_documents: docs and keyword sets are misaligned");
  std::vector<DocEval> out;
  out.reserve(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto& doc = docs[d];
    ForwardContext ctx;  // eval mode
    auto fwd = model.forward(doc, embeddings, keyword_sets[d], ctx);
    DocEval ev;
    ev.doc_id = doc.id;
    ev.extraction = extraction_result(fwd.pairs);
    ev.keyword_nodes = model.keyword_nodes(keyword_sets[d]);
    ev.fgsag_alpha = std::move(fwd.fgsag_alpha);
    ev.fgsag_degraded = fwd.fgsag_degraded;

    std::set<std::size_t> gold_emotions, gold_causes;
    for (const auto& clause : doc.clauses) {
      if (clause.is_emotion) gold_emotions.insert(clause.index);
      if (clause.is_cause) gold_causes.insert(clause.index);
    }
    ev.ecpe = count_overlap(ev.extraction.pairs, doc.gold_pairs);
    ev.ee = count_overlap(ev.extraction.emotions, gold_emotions);
    ev.ce = count_overlap(ev.extraction.causes, gold_causes);
    out.push_back(std::move(ev));
  }
  return out;
}

FoldReport make_fold_report(std::size_t fold, const std::vector<DocEval>& doc_evals,
                            const std::vector<Document>& docs) {
  if (doc_evals.size() != docs.size())
    throw DataError("make_fold_report: evals and docs are misaligned");
  const BiasSplit split = split_bias(docs);
  FoldReport report;
  report.fold = fold;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto& ev = doc_evals[d];
    auto bucket = [&ev](SplitCounts& counts) {
      counts.ecpe += ev.ecpe;
      counts.ee += ev.ee;
      counts.ce += ev.ce;
      ++counts.documents;
    };
    bucket(report.all);
    bucket(split.bias_ids.count(docs[d].id) ? report.bias : report.nobias);
  }
  return report;
}

namespace {

nlohmann::json counts_json(const TaskCounts& counts) {
  const Prf prf = counts.prf();
  return {{"precision", prf.precision}, {"recall", prf.recall},     {"f1", prf.f1},
          {"correct", counts.correct},  {"predicted", counts.predicted},
          {"gold", counts.gold}};
}

nlohmann::json split_json(const SplitCounts& split) {
  return {{"documents", split.documents},
          {"ECPE", counts_json(split.ecpe)},
          {"EE", counts_json(split.ee)},
          {"CE", counts_json(split.ce)}};
}

struct MeanStdev {
  double mean = 0.0;
  double stdev = 0.0;
};

MeanStdev mean_stdev(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
                      static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {mean, std::sqrt(var)};
}

const TaskCounts& task_of(const SplitCounts& split, int task) {
  switch (task) {
    case 0: return split.ecpe;
    case 1: return split.ee;
    default: return split.ce;
  }
}

const SplitCounts& split_of(const FoldReport& fold, int split) {
  switch (split) {
    case 0: return fold.all;
    case 1: return fold.bias;
    default: return fold.nobias;
  }
}

nlohmann::json coverage_json(const CoverageStats& stats) {
  return {{"emotion_clauses", stats.emotion_clauses},
          {"cause_clauses", stats.cause_clauses},
          {"pairs", stats.pairs},
          {"clauses", stats.clauses}};
}

}  // namespace

std::string EvalReport::to_json() const {
  static const char* kSplitNames[3] = {"Test_all", "Test_Bias", "Test_NoBias"};
  static const char* kTaskNames[3] = {"ECPE", "EE", "CE"};
  static const char* kMetricNames[3] = {"precision", "recall", "f1"};

  nlohmann::json j;
  j["config"] = resolved_config;

  nlohmann::json folds_json = nlohmann::json::array();
  for (const auto& fold : folds) {
    nlohmann::json fj;
    fj["fold"] = fold.fold;
    fj["loss_trace"] = fold.loss_trace;
    fj["Test_all"] = split_json(fold.all);
    fj["Test_Bias"] = split_json(fold.bias);
    fj["Test_NoBias"] = split_json(fold.nobias);
    folds_json.push_back(std::move(fj));
  }
  j["folds"] = folds_json;

  nlohmann::json mean_json, stdev_json;
  for (int s = 0; s < 3; ++s) {
    for (int t = 0; t < 3; ++t) {
      for (int m = 0; m < 3; ++m) {
        std::vector<double> xs;
        xs.reserve(folds.size());
        for (const auto& fold : folds) {
          const Prf prf = task_of(split_of(fold, s), t).prf();
          xs.push_back(m == 0 ? prf.precision : m == 1 ? prf.recall : prf.f1);
        }
        const auto ms = mean_stdev(xs);
        mean_json[kSplitNames[s]][kTaskNames[t]][kMetricNames[m]] = ms.mean;
        stdev_json[kSplitNames[s]][kTaskNames[t]][kMetricNames[m]] = ms.stdev;
      }
    }
  }
  j["mean"] = mean_json;
  j["stdev"] = stdev_json;

  j["distance_histogram"] = {{"dist0", histogram[0]},
                             {"dist1", histogram[1]},
                             {"dist2", histogram[2]},
                             {"dist_gt2", histogram[3]}};
  nlohmann::json cov;
  for (const auto& [mode, stats] : coverage) cov[mode] = coverage_json(stats);
  j["keyword_coverage"] = cov;
  j["diagnostics"] = {{"degraded_fgsag_docs", degraded_fgsag_docs}};
  return j.dump(2);
}

std::string EvalReport::to_table() const {
  static const char* kSplitNames[3] = {"Test_all", "Test_Bias", "Test_NoBias"};
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);

  os << "Mean over " << folds.size() << " fold(s)\n";
  os << "Split          | Emotion Ext.            | Cause Ext.              | EC Pair Ext.\n";
  os << "               | P      R      F1        | P      R      F1        | P      R      F1\n";
  for (int s = 0; s < 3; ++s) {
    double acc[3][3] = {};
    for (const auto& fold : folds) {
      for (int t = 0; t < 3; ++t) {
        const Prf prf = task_of(split_of(fold, s), t).prf();
        acc[t][0] += prf.precision;
        acc[t][1] += prf.recall;
        acc[t][2] += prf.f1;
      }
    }
    const double n = folds.empty() ? 1.0 : static_cast<double>(folds.size());
    os << kSplitNames[s];
    for (std::size_t pad = std::string(kSplitNames[s]).size(); pad < 15; ++pad) os << ' ';
    // table order: EE, CE, ECPE
    for (int t : {1, 2, 0}) {
      os << "| " << acc[t][0] / n << " " << acc[t][1] / n << " " << acc[t][2] / n << "  ";
    }
    os << "\n";
  }
  return os.str();
}

EvalReport cross_validate(const std::vector<Document>& docs, const TrainConfig& config,
                          EmbeddingTable& embeddings,
                          const std::set<std::string>& lexicon,
                          const std::set<std::string>& stopwords) {
  const auto keyword_sets = build_keyword_sets(docs, lexicon, stopwords, config);
  const FoldPlan plan =
      make_folds(docs, config.folds, config.fold_seed.value_or(config.seed));

  // Fill the embedding cache up front; parallel folds then only read it.
  for (const auto& doc : docs)
    for (const auto& clause : doc.clauses)
      for (const auto& token : clause.tokens) embeddings.lookup(token);

  std::vector<FoldReport> reports(config.folds);
  std::vector<std::size_t> degraded(config.folds, 0);
  std::vector<std::exception_ptr> errors(config.folds);

  auto run_fold = [&](std::size_t f) {
    try {
      std::vector<Document> train_docs, test_docs;
      std::vector<KeywordSet> train_sets, test_sets;
      for (std::size_t d = 0; d < docs.size(); ++d) {
        if (plan.assignments.at(docs[d].id) == f) {
          test_docs.push_back(docs[d]);
          test_sets.push_back(keyword_sets[d]);
        } else {
          train_docs.push_back(docs[d]);
          train_sets.push_back(keyword_sets[d]);
        }
      }
      auto trained = train_fold(train_docs, train_sets, embeddings, config, f);
      auto evals = evaluate_documents(trained.model, test_docs, test_sets, embeddings);
      reports[f] = make_fold_report(f, evals, test_docs);
      reports[f].loss_trace = std::move(trained.loss_trace);
      for (const auto& ev : evals)
        if (ev.fgsag_degraded) ++degraded[f];
    } catch (...) {
      errors[f] = std::current_exception();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, config.folds));
  if (jobs == 1) {
    for (std::size_t f = 0; f < config.folds; ++f) run_fold(f);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t f = w; f < config.folds; f += jobs) run_fold(f);
      });
    }
    for (auto& t : workers) t.join();
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);

  EvalReport report;
  report.resolved_config = config_to_map(config);
  report.folds = std::move(reports);
  report.histogram = distance_histogram(docs);
  for (auto mode : {KeywordMode::EmotionWords, KeywordMode::TextRankWords,
                    KeywordMode::Combined}) {
    TrainConfig mode_config = config;
    mode_config.model.keyword_mode = mode;
    const auto sets = build_keyword_sets(docs, lexicon, stopwords, mode_config);
    report.coverage[to_string(mode)] = coverage_stats(docs, sets);
  }
  report.degraded_fgsag_docs = std::accumulate(degraded.begin(), degraded.end(),
                                               static_cast<std::size_t>(0));
  return report;
}

}  // namespace mgsag
