#include "mgsag/metrics.hpp"

#include <cmath>
#include <sstream>

namespace mgsag {

Prf TaskCounts::prf() const {
  Prf out;
  out.precision = predicted == 0 ? 0.0
                                 : static_cast<double>(correct) /
                                       static_cast<double>(predicted);
  out.recall = gold == 0 ? 0.0
                         : static_cast<double>(correct) / static_cast<double>(gold);
  out.f1 = (out.precision + out.recall) > 0.0
               ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

TaskCounts& TaskCounts::operator+=(const TaskCounts& other) {
  correct += other.correct;
  predicted += other.predicted;
  gold += other.gold;
  return *this;
}

BiasSplit split_bias(const std::vector<Document>& test_docs) {
  BiasSplit split;
  for (const auto& doc : test_docs) {
    if (doc.gold_pairs.empty())
      throw DataError("split_bias: document '" + doc.id + "' has no gold pairs");
    bool bias = false;
    if (doc.gold_pairs.size() == 1) {
      const auto& [e, c] = *doc.gold_pairs.begin();
      const std::size_t dist = e > c ? e - c : c - e;
      bias = dist < 2;
    }
    (bias ? split.bias_ids : split.nobias_ids).insert(doc.id);
  }
  return split;
}

std::array<std::size_t, 4> distance_histogram(const std::vector<Document>& docs) {
  std::array<std::size_t, 4> hist{0, 0, 0, 0};
  for (const auto& doc : docs) {
    for (const auto& [e, c] : doc.gold_pairs) {
      const std::size_t dist = e > c ? e - c : c - e;
      hist[dist > 2 ? 3 : dist] += 1;
    }
  }
  return hist;
}

std::string histogram_to_csv(const std::array<std::size_t, 4>& histogram) {
  const std::size_t total = histogram[0] + histogram[1] + histogram[2] + histogram[3];
  static const char* kLabels[4] = {"dist0", "dist1", "dist2", "dist_gt2"};
  std::ostringstream os;
  os << "bucket,count,proportion\n";
  for (std::size_t b = 0; b < 4; ++b) {
    const double prop =
        total == 0 ? 0.0 : static_cast<double>(histogram[b]) / static_cast<double>(total);
    os << kLabels[b] << "," << histogram[b] << "," << prop << "\n";
  }
  return os.str();
}

}  // namespace mgsag
