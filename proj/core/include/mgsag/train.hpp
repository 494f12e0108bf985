// Multi-task training loop, per-fold evaluation with the bias/no-bias test
// redistricting, and the cross-validated evaluation report.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mgsag/adam.hpp"
#include "mgsag/embedding.hpp"
#include "mgsag/folds.hpp"
#include "mgsag/keywords.hpp"
#include "mgsag/metrics.hpp"
#include "mgsag/model.hpp"
#include "mgsag/textrank.hpp"

namespace mgsag {

struct TrainConfig {
  std::size_t epochs = 30;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  /// Fold plan seed; unset means `seed`. Pinning it while varying `seed`
  /// repeats an experiment over the same fold plan.
  std::optional<std::uint64_t> fold_seed;
  LossMode loss_mode = LossMode::Full;
  std::size_t folds = 10;
  std::size_t jobs = 1;
  ModelConfig model;
  TextRankConfig textrank;
};

/// Per-document keyword sets under the configured mode, aligned with docs.
std::vector<KeywordSet> build_keyword_sets(const std::vector<Document>& docs,
                                           const std::set<std::string>& lexicon,
                                           const std::set<std::string>& stopwords,
                                           const TrainConfig& config);

struct FoldTraining {
  MgsagModel model;
  std::vector<double> loss_trace;  // mean loss per epoch
};

/// Called after each epoch; returning false stops training early.
using EpochCallback =
    std::function<bool(std::size_t epoch, const MgsagModel& model, double mean_loss)>;

/// Trains a fresh model on the given documents: seeded per-epoch shuffle,
/// one Adam step per document. A non-finite loss aborts with diagnostics.
/// `stream` decorates the seed so folds get independent randomness.
FoldTraining train_fold(const std::vector<Document>& train_docs,
                        const std::vector<KeywordSet>& keyword_sets,
                        EmbeddingTable& embeddings, const TrainConfig& config,
                        std::uint64_t stream = 0, const EpochCallback& on_epoch = {});

struct DocEval {
  std::string doc_id;
  ExtractionResult extraction;
  TaskCounts ecpe, ee, ce;
  std::vector<std::string> keyword_nodes;
  std::vector<std::vector<double>> fgsag_alpha;
  bool fgsag_degraded = false;
};

std::vector<DocEval> evaluate_documents(const MgsagModel& model,
                                        const std::vector<Document>& docs,
                                        const std::vector<KeywordSet>& keyword_sets,
                                        EmbeddingTable& embeddings);

struct SplitCounts {
  TaskCounts ecpe, ee, ce;
  std::size_t documents = 0;
};

struct FoldReport {
  std::size_t fold = 0;
  SplitCounts all, bias, nobias;
  std::vector<double> loss_trace;
};

/// Buckets per-document counts into Test_all and its Bias/NoBias partition.
FoldReport make_fold_report(std::size_t fold, const std::vector<DocEval>& doc_evals,
                            const std::vector<Document>& docs);

struct EvalReport {
  std::map<std::string, std::string> resolved_config;
  std::vector<FoldReport> folds;
  std::array<std::size_t, 4> histogram{0, 0, 0, 0};
  std::map<std::string, CoverageStats> coverage;  // keyed "ew" / "tw" / "cw"
  std::size_t degraded_fgsag_docs = 0;

  std::string to_json() const;
  /// Plain-text P/R/F1 tables (per task on Test_all; ECPE F1 on the splits).
  std::string to_table() const;
};

/// k-fold cross-validation: per fold, train on the other folds, evaluate the
/// held-out fold on Test_all and, with the same trained parameters, on its
/// Bias/NoBias subsets. Folds run independently (config.jobs in parallel);
/// results merge by fold index, so the report is seed-deterministic.
EvalReport cross_validate(const std::vector<Document>& docs, const TrainConfig& config,
                          EmbeddingTable& embeddings,
                          const std::set<std::string>& lexicon,
                          const std::set<std::string>& stopwords);

}  // namespace mgsag
