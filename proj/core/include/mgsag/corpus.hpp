// Document model and corpus file I/O.
//
// Corpus files are UTF-8 JSON Lines, one document per line:
//   {"id": "...", "clauses": [{"tokens": ["...", ...]}, ...], "pairs": [[e,c], ...]}
// Clause indices in pairs (and everywhere user-facing) are 1-based.

#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mgsag {

/// Thrown on malformed corpus/lexicon/embedding files or invalid documents.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct Clause {
  std::size_t index = 0;  // 1-based position
  std::vector<std::string> tokens;
  bool is_emotion = false;  // derived: appears as first element of a gold pair
  bool is_cause = false;    // derived: appears as second element
};

/// Gold emotion-cause pair, 1-based clause indices.
using GoldPair = std::pair<std::size_t, std::size_t>;

struct Document {
  std::string id;
  std::vector<Clause> clauses;
  std::set<GoldPair> gold_pairs;

  std::size_t num_clauses() const { return clauses.size(); }
  const Clause& clause(std::size_t index_1based) const {
    return clauses.at(index_1based - 1);
  }

  /// Recomputes derived clause labels and validates pair indices.
  void finalize();
};

/// Loads a JSONL corpus; malformed lines and out-of-range pair indices raise
/// DataError naming the line / document.
std::vector<Document> load_corpus(const std::string& path);
std::vector<Document> parse_corpus(const std::string& text,
                                   const std::string& origin = "<memory>");

std::string serialize_document(const Document& doc);
std::string serialize_corpus(const std::vector<Document>& docs);
void save_corpus(const std::vector<Document>& docs, const std::string& path);

}  // namespace mgsag
