#include "mgsag/keywords.hpp"

#include <fstream>

namespace mgsag {

std::string to_string(KeywordMode mode) {
  switch (mode) {
    case KeywordMode::EmotionWords: return "ew";
    case KeywordMode::TextRankWords: return "tw";
    case KeywordMode::Combined: return "cw";
  }
  return "cw";
}

KeywordMode keyword_mode_from_string(const std::string& s) {
  if (s == "ew") return KeywordMode::EmotionWords;
  if (s == "tw") return KeywordMode::TextRankWords;
  if (s == "cw") return KeywordMode::Combined;
  throw DataError("unknown keyword mode '" + s + "' (expected ew, tw, or cw)");
}

std::set<std::string> KeywordSet::combined() const {
  std::set<std::string> out = emotion_words;
  out.insert(textrank_words.begin(), textrank_words.end());
  return out;
}

std::map<std::string, std::string> KeywordSet::source_tags() const {
  std::map<std::string, std::string> tags;
  for (const auto& w : emotion_words) tags[w] = "ew";
  for (const auto& w : textrank_words) {
    auto it = tags.find(w);
    if (it == tags.end())
      tags[w] = "tw";
    else
      it->second = "ew+tw";
  }
  return tags;
}

std::set<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open word list '" + path + "'");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' ||
                             line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.insert(line);
  }
  return words;
}

std::set<std::string> lexicon_emotion_words(const Document& doc,
                                            const std::set<std::string>& lexicon) {
  std::set<std::string> out;
  for (const auto& clause : doc.clauses)
    for (const auto& token : clause.tokens)
      if (lexicon.count(token)) out.insert(token);
  return out;
}

KeywordSet build_keyword_set(const Document& doc, const std::set<std::string>& lexicon,
                             const std::set<std::string>& stopwords,
                             const TextRankConfig& config, KeywordMode mode) {
  KeywordSet set;
  if (mode == KeywordMode::EmotionWords || mode == KeywordMode::Combined) {
    set.emotion_words = lexicon_emotion_words(doc, lexicon);
  }
  if (mode == KeywordMode::TextRankWords || mode == KeywordMode::Combined) {
    const auto graph = build_cooccurrence_graph(doc, stopwords, config.window);
    if (graph.size() > 0) {
      const auto scores = textrank_scores(graph, config);
      const auto selected = select_key_phrases(graph, scores, config.keyword_ratio);
      set.textrank_words.insert(selected.begin(), selected.end());
    }
  }
  return set;
}

CoverageStats coverage_stats(const std::vector<Document>& docs,
                             const std::vector<KeywordSet>& keyword_sets) {
  if (docs.size() != keyword_sets.size())
    throw DataError("coverage_stats: docs and keyword sets are misaligned");

  std::size_t emo_total = 0, emo_hit = 0;
  std::size_t cau_total = 0, cau_hit = 0;
  std::size_t pair_total = 0, pair_hit = 0;
  std::size_t clause_total = 0, clause_hit = 0;

  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto& doc = docs[d];
    const auto keywords = keyword_sets[d].combined();
    std::vector<bool> covered(doc.clauses.size(), false);
    for (std::size_t i = 0; i < doc.clauses.size(); ++i) {
      for (const auto& token : doc.clauses[i].tokens) {
        if (keywords.count(token)) {
          covered[i] = true;
          break;
        }
      }
      ++clause_total;
      if (covered[i]) ++clause_hit;
      if (doc.clauses[i].is_emotion) {
        ++emo_total;
        if (covered[i]) ++emo_hit;
      }
      if (doc.clauses[i].is_cause) {
        ++cau_total;
        if (covered[i]) ++cau_hit;
      }
    }
    for (const auto& [e, c] : doc.gold_pairs) {
      ++pair_total;
      if (covered[e - 1] && covered[c - 1]) ++pair_hit;
    }
  }

  auto ratio = [](std::size_t hit, std::size_t total) {
    return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
  };
  CoverageStats stats;
  stats.emotion_clauses = ratio(emo_hit, emo_total);
  stats.cause_clauses = ratio(cau_hit, cau_total);
  stats.pairs = ratio(pair_hit, pair_total);
  stats.clauses = ratio(clause_hit, clause_total);
  return stats;
}

}  // namespace mgsag
