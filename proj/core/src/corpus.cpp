#include "mgsag/corpus.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mgsag {

void Document::finalize() {
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    clauses[i].index = i + 1;
    clauses[i].is_emotion = false;
    clauses[i].is_cause = false;
  }
  for (const auto& [e, c] : gold_pairs) {
    if (e < 1 || e > clauses.size() || c < 1 || c > clauses.size()) {
      throw DataError("document '" + id + "': pair [" + std::to_string(e) + "," +
                      std::to_string(c) + "] out of range for " +
                      std::to_string(clauses.size()) + " clauses");
    }
    clauses[e - 1].is_emotion = true;
    clauses[c - 1].is_cause = true;
  }
}

namespace {

Document parse_document(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw DataError(where + ": expected a JSON object");
  Document doc;
  try {
    doc.id = j.at("id").get<std::string>();
    for (const auto& cj : j.at("clauses")) {
      Clause clause;
      clause.tokens = cj.at("tokens").get<std::vector<std::string>>();
      doc.clauses.push_back(std::move(clause));
    }
    if (j.contains("pairs")) {
      for (const auto& pj : j.at("pairs")) {
        if (!pj.is_array() || pj.size() != 2)
          throw DataError(where + ": pair entries must be [emotion, cause]");
        const long long e = pj[0].get<long long>();
        const long long c = pj[1].get<long long>();
        if (e < 1 || c < 1)
          throw DataError("document '" + doc.id + "': pair indices are 1-based, got [" +
                          std::to_string(e) + "," + std::to_string(c) + "]");
        doc.gold_pairs.emplace(static_cast<std::size_t>(e), static_cast<std::size_t>(c));
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(where + ": " + ex.what());
  }
  doc.finalize();
  return doc;
}

}  // namespace

std::vector<Document> parse_corpus(const std::string& text, const std::string& origin) {
  std::vector<Document> docs;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError(where + ": malformed JSON line");
    docs.push_back(parse_document(j, where));
  }
  return docs;
}

std::vector<Document> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), path);
}

std::string serialize_document(const Document& doc) {
  nlohmann::json j;
  j["id"] = doc.id;
  nlohmann::json clauses = nlohmann::json::array();
  for (const auto& clause : doc.clauses) clauses.push_back({{"tokens", clause.tokens}});
  j["clauses"] = clauses;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [e, c] : doc.gold_pairs) pairs.push_back({e, c});
  j["pairs"] = pairs;
  return j.dump();
}

std::string serialize_corpus(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& doc : docs) {
    out += serialize_document(doc);
    out += '\n';
  }
  return out;
}

void save_corpus(const std::vector<Document>& docs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file '" + path + "'");
  out << serialize_corpus(docs);
}

}  // namespace mgsag
