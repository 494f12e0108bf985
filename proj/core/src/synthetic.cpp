#include "mgsag/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mgsag/rng.hpp"

namespace mgsag {

const std::string& synthetic_emotion_token() {
  static const std::string token = "emoterm";
  return token;
}

const std::string& synthetic_cause_token() {
  static const std::string token = "causeterm";
  return token;
}

std::string synthetic_lexicon_text() {
  return "# synthetic emotion lexicon\n" + synthetic_emotion_token() + "\n";
}

namespace {

std::size_t draw_bucket(const std::array<double, 4>& profile, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double u = uni(rng);
  double acc = 0.0;
  for (std::size_t b = 0; b < 4; ++b) {
    acc += profile[b];
    if (u < acc) return b;
  }
  return 3;
}

}  // namespace

std::vector<Document> generate_synthetic_corpus(const SyntheticConfig& config) {
  if (config.n_docs == 0) throw DataError("synthetic: n_docs must be positive");
  if (config.vocab_size == 0) throw DataError("synthetic: vocab_size must be positive");
  if (config.max_clauses < 4)
    throw DataError("synthetic: max_clauses must be at least 4 to realize distance > 2");
  double profile_sum = 0.0;
  for (double p : config.distance_profile) {
    if (p < 0.0) throw DataError("synthetic: distance_profile entries must be nonnegative");
    profile_sum += p;
  }
  if (std::abs(profile_sum - 1.0) > 1e-9)
    throw DataError("synthetic: distance_profile must sum to 1");

  auto rng = make_rng(config.seed, /*stream=*/0x575e);
  std::uniform_int_distribution<std::size_t> clause_count(4, config.max_clauses);
  std::uniform_int_distribution<std::size_t> filler_count(3, 6);
  std::uniform_int_distribution<std::size_t> vocab(0, config.vocab_size - 1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  std::vector<Document> docs;
  docs.reserve(config.n_docs);
  for (std::size_t d = 0; d < config.n_docs; ++d) {
    Document doc;
    doc.id = "synth-" + std::to_string(d);
    const std::size_t n_clauses = clause_count(rng);
    doc.clauses.resize(n_clauses);
    for (auto& clause : doc.clauses) {
      const std::size_t n_tokens = filler_count(rng);
      for (std::size_t t = 0; t < n_tokens; ++t)
        clause.tokens.push_back("w" + std::to_string(vocab(rng)));
    }

    const std::size_t n_pairs = uni(rng) < config.multi_pair_prob ? 2 : 1;
    for (std::size_t p = 0; p < n_pairs; ++p) {
      std::size_t dist;
      const std::size_t bucket = draw_bucket(config.distance_profile, rng);
      if (bucket < 3) {
        dist = bucket;
      } else {
        std::uniform_int_distribution<std::size_t> far(3, n_clauses - 1);
        dist = far(rng);
      }
      // Emotion position with at least one in-range cause at that distance.
      std::vector<std::size_t> feasible;
      for (std::size_t e = 1; e <= n_clauses; ++e)
        if (e > dist || e + dist <= n_clauses) feasible.push_back(e);
      std::uniform_int_distribution<std::size_t> pos(0, feasible.size() - 1);
      const std::size_t e = feasible[pos(rng)];
      std::vector<std::size_t> cause_options;
      if (e > dist) cause_options.push_back(e - dist);
      if (e + dist <= n_clauses && (dist > 0 || cause_options.empty()))
        cause_options.push_back(e + dist);
      std::uniform_int_distribution<std::size_t> side(0, cause_options.size() - 1);
      const std::size_t c = cause_options[side(rng)];

      const std::string link = "link" + std::to_string(p);
      doc.clauses[e - 1].tokens.push_back(synthetic_emotion_token());
      doc.clauses[e - 1].tokens.push_back(link);
      doc.clauses[c - 1].tokens.push_back(synthetic_cause_token());
      doc.clauses[c - 1].tokens.push_back(link);
      doc.gold_pairs.emplace(e, c);
    }
    doc.finalize();
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace mgsag
