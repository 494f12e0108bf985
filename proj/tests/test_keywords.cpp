#include <doctest.h>

#include <algorithm>

#include "mgsag/keywords.hpp"
#include "mgsag/synthetic.hpp"

using namespace mgsag;

namespace {

Document make_doc(std::vector<std::vector<std::string>> clause_tokens,
                  std::set<GoldPair> pairs) {
  Document doc;
  doc.id = "kw";
  for (auto& tokens : clause_tokens) {
    Clause clause;
    clause.tokens = std::move(tokens);
    doc.clauses.push_back(std::move(clause));
  }
  doc.gold_pairs = std::move(pairs);
  doc.finalize();
  return doc;
}

}  // namespace

TEST_CASE("lexicon lookup finds emotion words in their clauses") {
  auto doc = make_doc({{"the", "delay", "grew"},
                       {"the", "train", "broke", "down"},
                       {"people", "waited"},
                       {"some", "were", "angry"}},
                      {{4, 2}});
  auto words = lexicon_emotion_words(doc, {"angry"});
  CHECK(words == std::set<std::string>{"angry"});
  CHECK(lexicon_emotion_words(doc, {}).empty());
}

TEST_CASE("a token in several clauses appears once in the set") {
  auto doc = make_doc({{"sad", "news"}, {"sad", "again"}, {"still", "sad"}}, {{1, 2}});
  auto words = lexicon_emotion_words(doc, {"sad"});
  CHECK(words.size() == 1);
}

TEST_CASE("keyword modes populate only their own side") {
  auto doc = make_doc({{"storm", "hit", "town"}, {"people", "felt", "fear"}}, {{2, 1}});
  TextRankConfig config;
  const std::set<std::string> lexicon{"fear"};

  auto ew = build_keyword_set(doc, lexicon, {}, config, KeywordMode::EmotionWords);
  CHECK(ew.emotion_words == std::set<std::string>{"fear"});
  CHECK(ew.textrank_words.empty());

  auto tw = build_keyword_set(doc, lexicon, {}, config, KeywordMode::TextRankWords);
  CHECK(tw.emotion_words.empty());
  CHECK(!tw.textrank_words.empty());

  auto cw = build_keyword_set(doc, lexicon, {}, config, KeywordMode::Combined);
  CHECK(cw.combined().count("fear") == 1);
  CHECK(cw.combined().size() >= tw.textrank_words.size());
}

TEST_CASE("disjoint EW and TW make the union additive") {
  KeywordSet set;
  set.emotion_words = {"angry", "sad"};
  set.textrank_words = {"storm", "train", "delay"};
  CHECK(set.combined().size() == 5);
  auto tags = set.source_tags();
  CHECK(tags.at("angry") == "ew");
  CHECK(tags.at("storm") == "tw");
  set.textrank_words.insert("angry");
  CHECK(set.combined().size() == 5);
  CHECK(set.source_tags().at("angry") == "ew+tw");
}

TEST_CASE("a document of stopwords yields an empty keyword set") {
  auto doc = make_doc({{"the", "and"}, {"and", "the"}}, {{1, 2}});
  auto set = build_keyword_set(doc, {}, {"the", "and"}, TextRankConfig{},
                               KeywordMode::Combined);
  CHECK(set.empty());
}

TEST_CASE("coverage is 1.0 when every clause holds a keyword") {
  auto doc = make_doc({{"alpha", "x"}, {"beta", "y"}}, {{1, 2}});
  KeywordSet set;
  set.emotion_words = {"alpha", "beta"};
  auto stats = coverage_stats({doc}, {set});
  CHECK(stats.emotion_clauses == 1.0);
  CHECK(stats.cause_clauses == 1.0);
  CHECK(stats.pairs == 1.0);
  CHECK(stats.clauses == 1.0);
}

TEST_CASE("coverage on a crafted two-document corpus matches hand counts") {
  // doc1: clauses {kw, -, kw}; pair (1,3): emotion covered, cause covered.
  // doc2: clauses {kw, -}; pair (2,1): emotion clause 2 NOT covered.
  auto doc1 = make_doc({{"storm", "a"}, {"b"}, {"storm", "c"}}, {{1, 3}});
  auto doc2 = make_doc({{"rain", "d"}, {"e"}}, {{2, 1}});
  KeywordSet s1, s2;
  s1.textrank_words = {"storm"};
  s2.textrank_words = {"rain"};
  auto stats = coverage_stats({doc1, doc2}, {s1, s2});
  // emotion clauses: doc1 c1 covered, doc2 c2 not -> 1/2
  CHECK(stats.emotion_clauses == doctest::Approx(0.5));
  // cause clauses: doc1 c3 covered, doc2 c1 covered -> 2/2
  CHECK(stats.cause_clauses == doctest::Approx(1.0));
  // pairs: doc1 both ends covered; doc2 emotion end missing -> 1/2
  CHECK(stats.pairs == doctest::Approx(0.5));
  // clauses: covered {c1, c3} of 3 + {c1} of 2 -> 3/5
  CHECK(stats.clauses == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("combined coverage dominates either source on a synthetic corpus") {
  SyntheticConfig config;
  config.n_docs = 60;
  config.seed = 21;
  auto docs = generate_synthetic_corpus(config);
  const std::set<std::string> lexicon{synthetic_emotion_token()};
  TextRankConfig tr;
  tr.keyword_ratio = 0.2;

  std::vector<KeywordSet> ew_sets, tw_sets, cw_sets;
  for (const auto& doc : docs) {
    ew_sets.push_back(build_keyword_set(doc, lexicon, {}, tr, KeywordMode::EmotionWords));
    tw_sets.push_back(build_keyword_set(doc, lexicon, {}, tr, KeywordMode::TextRankWords));
    cw_sets.push_back(build_keyword_set(doc, lexicon, {}, tr, KeywordMode::Combined));
  }
  auto ew = coverage_stats(docs, ew_sets);
  auto tw = coverage_stats(docs, tw_sets);
  auto cw = coverage_stats(docs, cw_sets);

  // Pointwise dominance on all four statistics.
  for (auto stat : {&CoverageStats::emotion_clauses, &CoverageStats::cause_clauses,
                    &CoverageStats::pairs, &CoverageStats::clauses}) {
    CHECK(cw.*stat >= ew.*stat);
    CHECK(cw.*stat >= tw.*stat);
  }
  // The union covers strictly more clauses than either source alone.
  CHECK(cw.clauses > ew.clauses);
  CHECK(cw.clauses > tw.clauses);
}

TEST_CASE("all keywords occur in the document") {
  SyntheticConfig config;
  config.n_docs = 10;
  config.seed = 33;
  auto docs = generate_synthetic_corpus(config);
  for (const auto& doc : docs) {
    auto set = build_keyword_set(doc, {synthetic_emotion_token()}, {}, TextRankConfig{},
                                 KeywordMode::Combined);
    std::set<std::string> doc_tokens;
    for (const auto& clause : doc.clauses)
      doc_tokens.insert(clause.tokens.begin(), clause.tokens.end());
    for (const auto& kw : set.combined()) CHECK(doc_tokens.count(kw) == 1);
  }
}
