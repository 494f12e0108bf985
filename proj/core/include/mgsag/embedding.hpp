// Word embedding table with a seeded, cached out-of-vocabulary policy.
//
// File format: UTF-8 text, optional "<count> <dim>" header, then one
// "<token> <v1> ... <vdim>" record per line.

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace mgsag {

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 200, std::uint64_t oov_seed = 0);

  static EmbeddingTable load(const std::string& path, std::uint64_t oov_seed = 0);

  std::size_t dimension() const { return dimension_; }
  std::size_t vocabulary_size() const { return vectors_.size(); }
  bool contains(const std::string& token) const { return vectors_.count(token) > 0; }

  void insert(const std::string& token, std::vector<double> vec);

  /// Known tokens return their stored vector; unseen tokens get a vector
  /// generated from (oov_seed, token) and cached, so lookups are stable
  /// within and across runs.
  const std::vector<double>& lookup(const std::string& token);

 private:
  std::size_t dimension_;
  std::uint64_t oov_seed_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

}  // namespace mgsag
