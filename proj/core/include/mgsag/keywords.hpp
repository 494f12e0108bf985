// Per-document keyword sets: lexicon emotion words, TextRank key phrases,
// and their union, plus coverage diagnostics over a corpus.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mgsag/corpus.hpp"
#include "mgsag/textrank.hpp"

namespace mgsag {

enum class KeywordMode { EmotionWords, TextRankWords, Combined };  // EW / TW / CW

std::string to_string(KeywordMode mode);
KeywordMode keyword_mode_from_string(const std::string& s);

struct KeywordSet {
  std::set<std::string> emotion_words;   // EW
  std::set<std::string> textrank_words;  // TW

  /// CW = EW union TW.
  std::set<std::string> combined() const;
  bool empty() const { return emotion_words.empty() && textrank_words.empty(); }

  /// Source tags: "ew", "tw", or "ew+tw" per token.
  std::map<std::string, std::string> source_tags() const;
};

/// One word per line, UTF-8; lines starting with '#' are ignored.
std::set<std::string> load_word_list(const std::string& path);

/// Document tokens present in the lexicon (exact string match).
std::set<std::string> lexicon_emotion_words(const Document& doc,
                                            const std::set<std::string>& lexicon);

/// Keyword set per mode; EW-only and TW-only modes leave the other side
/// empty. Empty results are permitted (downstream degrades gracefully).
KeywordSet build_keyword_set(const Document& doc, const std::set<std::string>& lexicon,
                             const std::set<std::string>& stopwords,
                             const TextRankConfig& config, KeywordMode mode);

struct CoverageStats {
  double emotion_clauses = 0.0;  // proportion of emotion clauses with a keyword
  double cause_clauses = 0.0;
  double pairs = 0.0;  // both clauses of the pair contain a keyword
  double clauses = 0.0;
};

/// keyword_sets[i] belongs to docs[i]. A clause is covered iff it contains at
/// least one keyword of its document's set.
CoverageStats coverage_stats(const std::vector<Document>& docs,
                             const std::vector<KeywordSet>& keyword_sets);

}  // namespace mgsag
