// Deterministic k-fold planning for cross-validation.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mgsag/corpus.hpp"

namespace mgsag {

struct FoldPlan {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::map<std::string, std::size_t> assignments;  // document id -> fold index

  std::vector<std::string> fold_members(std::size_t fold) const;
};

/// Seeded shuffle followed by round-robin assignment; fold sizes differ by at
/// most one. Requires 2 <= k <= |docs| and unique document ids.
FoldPlan make_folds(const std::vector<Document>& docs, std::size_t k,
                    std::uint64_t seed);

}  // namespace mgsag
