// Precision/recall/F1 for the three tasks, the bias/no-bias test split, and
// the gold-pair distance histogram.

#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "mgsag/corpus.hpp"

namespace mgsag {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Micro-averaged counts; precision/recall fall back to 0 when undefined.
struct TaskCounts {
  std::size_t correct = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;

  Prf prf() const;
  TaskCounts& operator+=(const TaskCounts& other);
};

/// Set-overlap P/R/F1. An empty gold set is an error: every evaluated
/// document carries at least one pair.
template <typename T>
Prf compute_prf(const std::set<T>& predicted, const std::set<T>& gold) {
  if (gold.empty()) throw DataError("compute_prf: empty gold set");
  std::size_t correct = 0;
  for (const auto& p : predicted)
    if (gold.count(p)) ++correct;
  TaskCounts counts{correct, predicted.size(), gold.size()};
  return counts.prf();
}

template <typename T>
TaskCounts count_overlap(const std::set<T>& predicted, const std::set<T>& gold) {
  if (gold.empty()) throw DataError("count_overlap: empty gold set");
  std::size_t correct = 0;
  for (const auto& p : predicted)
    if (gold.count(p)) ++correct;
  return {correct, predicted.size(), gold.size()};
}

/// Bias: exactly one gold pair and |emotion - cause| < 2. Everything else is
/// NoBias. The two sets partition the input.
struct BiasSplit {
  std::set<std::string> bias_ids;
  std::set<std::string> nobias_ids;
};

BiasSplit split_bias(const std::vector<Document>& test_docs);

/// Buckets over |emotion - cause|: {0, 1, 2, >2}.
std::array<std::size_t, 4> distance_histogram(const std::vector<Document>& docs);

std::string histogram_to_csv(const std::array<std::size_t, 4>& histogram);

}  // namespace mgsag
