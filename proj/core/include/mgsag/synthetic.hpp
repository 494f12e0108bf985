// Seeded synthetic ECPE corpora. Emotion clauses carry a designated emotion
// token, cause clauses a designated cause-signal token, and each gold pair
// shares a link token, so the pairing is learnable from lexical evidence
// alone. Pair distances are drawn from a configurable bucket profile over
// {0, 1, 2, >2}.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mgsag/corpus.hpp"

namespace mgsag {

/// Designated signal tokens planted by the generator.
const std::string& synthetic_emotion_token();
const std::string& synthetic_cause_token();

struct SyntheticConfig {
  std::size_t n_docs = 20;
  std::size_t vocab_size = 50;
  std::size_t max_clauses = 10;  // documents have 4..max_clauses clauses
  /// Probabilities for relative distances {0, 1, 2, >2}; must sum to 1.
  std::array<double, 4> distance_profile = {0.51, 0.26, 0.08, 0.15};
  double multi_pair_prob = 0.15;  // chance of a second gold pair
  std::uint64_t seed = 0;
};

std::vector<Document> generate_synthetic_corpus(const SyntheticConfig& config);

/// One-word-per-line lexicon matching the generator's emotion token; makes a
/// synthetic corpus usable with lexicon-based keyword extraction.
std::string synthetic_lexicon_text();

}  // namespace mgsag
