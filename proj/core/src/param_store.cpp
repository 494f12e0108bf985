#include "mgsag/param_store.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mgsag/rng.hpp"

namespace mgsag {

ParamStore::ParamStore(std::uint64_t rng_seed)
    : seed_(rng_seed), rng_(make_rng(rng_seed, /*stream=*/0x9a7a)) {}

Tensor& ParamStore::insert(const std::string& name, Tensor t) {
  auto [it, ok] = entries_.emplace(name, std::move(t));
  if (!ok) throw std::invalid_argument("ParamStore: duplicate parameter '" + name + "'");
  return it->second;
}

Tensor& ParamStore::add_matrix(const std::string& name, std::size_t rows,
                               std::size_t cols) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> values(rows * cols);
  for (double& v : values) v = dist(rng_);
  return insert(name, Tensor::leaf({rows, cols}, std::move(values), true));
}

Tensor& ParamStore::add_vector(const std::string& name, std::size_t n, double fill) {
  return insert(name, Tensor::full({n}, fill, true));
}

Tensor& ParamStore::add_scalar(const std::string& name, double v) {
  return insert(name, Tensor::leaf({1}, {v}, true));
}

Tensor& ParamStore::at(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end())
    throw std::out_of_range("ParamStore: unknown parameter '" + name + "'");
  return it->second;
}

const Tensor& ParamStore::at(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end())
    throw std::out_of_range("ParamStore: unknown parameter '" + name + "'");
  return it->second;
}

std::size_t ParamStore::coordinate_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : entries_) n += t.size();
  return n;
}

void ParamStore::zero_grad() {
  for (auto& [name, t] : entries_) {
    t.clear_grad();
    t.ensure_zero_grad();
  }
}

std::string ParamStore::to_json() const {
  nlohmann::json j;
  j["rng_seed"] = seed_;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [name, t] : entries_) {
    params[name] = {{"shape", t.shape()}, {"values", t.values()}};
  }
  j["params"] = params;
  return j.dump(2);
}

ParamStore ParamStore::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ParamStore store(j.value("rng_seed", 0ull));
  for (const auto& [name, entry] : j.at("params").items()) {
    auto shape = entry.at("shape").get<std::vector<std::size_t>>();
    auto values = entry.at("values").get<std::vector<double>>();
    store.insert(name, Tensor::leaf(std::move(shape), std::move(values), true));
  }
  return store;
}

}  // namespace mgsag
