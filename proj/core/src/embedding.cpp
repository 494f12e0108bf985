#include "mgsag/embedding.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "mgsag/corpus.hpp"
#include "mgsag/rng.hpp"

namespace mgsag {

EmbeddingTable::EmbeddingTable(std::size_t dimension, std::uint64_t oov_seed)
    : dimension_(dimension), oov_seed_(oov_seed) {
  if (dimension_ == 0) throw DataError("EmbeddingTable: dimension must be positive");
}

void EmbeddingTable::insert(const std::string& token, std::vector<double> vec) {
  if (vec.size() != dimension_) {
    throw DataError("embedding for '" + token + "' has " + std::to_string(vec.size()) +
                    " values, expected " + std::to_string(dimension_));
  }
  vectors_[token] = std::move(vec);
}

const std::vector<double>& EmbeddingTable::lookup(const std::string& token) {
  auto it = vectors_.find(token);
  if (it != vectors_.end()) return it->second;
  std::mt19937_64 rng(split_seed(oov_seed_, fnv1a(token)));
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  std::vector<double> vec(dimension_);
  for (double& v : vec) v = dist(rng);
  return vectors_.emplace(token, std::move(vec)).first->second;
}

EmbeddingTable EmbeddingTable::load(const std::string& path, std::uint64_t oov_seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding file '" + path + "'");

  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  bool maybe_header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    std::vector<double> vec;
    double x;
    while (ls >> x) vec.push_back(x);
    if (maybe_header && vec.size() == 1 && line_no == 1) {
      // "<count> <dim>" header: both fields are nonnegative integers.
      const bool count_is_int =
          !token.empty() && token.find_first_not_of("0123456789") == std::string::npos;
      const bool dim_is_int = vec[0] > 0.0 && vec[0] == std::floor(vec[0]);
      if (count_is_int && dim_is_int) {
        dim = static_cast<std::size_t>(vec[0]);
        maybe_header = false;
        continue;
      }
    }
    maybe_header = false;
    if (vec.empty()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": no vector values");
    }
    if (dim == 0) dim = vec.size();
    if (vec.size() != dim) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, got " + std::to_string(vec.size()));
    }
    rows.emplace_back(std::move(token), std::move(vec));
  }
  if (dim == 0) throw DataError("embedding file '" + path + "' is empty");

  EmbeddingTable table(dim, oov_seed);
  for (auto& [token, vec] : rows) table.insert(token, std::move(vec));
  return table;
}

}  // namespace mgsag
