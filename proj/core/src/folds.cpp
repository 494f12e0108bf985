#include "mgsag/folds.hpp"

#include <algorithm>

#include "mgsag/rng.hpp"

namespace mgsag {

std::vector<std::string> FoldPlan::fold_members(std::size_t fold) const {
  std::vector<std::string> out;
  for (const auto& [id, f] : assignments)
    if (f == fold) out.push_back(id);
  return out;
}

FoldPlan make_folds(const std::vector<Document>& docs, std::size_t k,
                    std::uint64_t seed) {
  if (k < 2) throw DataError("make_folds: k must be at least 2");
  if (docs.size() < k) {
    throw DataError("make_folds: k=" + std::to_string(k) + " exceeds corpus size " +
                    std::to_string(docs.size()));
  }
  std::vector<std::string> ids;
  ids.reserve(docs.size());
  for (const auto& doc : docs) ids.push_back(doc.id);
  {
    auto sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DataError("make_folds: duplicate document ids in corpus");
  }

  auto rng = make_rng(seed, /*stream=*/0xf01d);
  std::shuffle(ids.begin(), ids.end(), rng);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  for (std::size_t i = 0; i < ids.size(); ++i) plan.assignments[ids[i]] = i % k;
  return plan;
}

}  // namespace mgsag
