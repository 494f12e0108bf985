#include "mgsag/config.hpp"

#include <fstream>
#include <sstream>

namespace mgsag {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw DataError("config: '" + key + "' expects true/false, got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw DataError("config: '" + key + "' expects a number, got '" + value + "'");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw DataError("config: '" + key + "' expects a nonnegative integer, got '" +
                    value + "'");
  }
}

}  // namespace

std::map<std::string, std::string> config_to_map(const TrainConfig& config) {
  std::map<std::string, std::string> m;
  m["epochs"] = std::to_string(config.epochs);
  m["lr"] = fmt(config.learning_rate);
  m["seed"] = std::to_string(config.seed);
  m["fold_seed"] = std::to_string(config.fold_seed.value_or(config.seed));
  m["loss"] = to_string(config.loss_mode);
  m["folds"] = std::to_string(config.folds);
  m["jobs"] = std::to_string(config.jobs);
  m["emb_dim"] = std::to_string(config.model.emb_dim);
  m["word_hidden"] = std::to_string(config.model.word_hidden);
  m["gat_layers"] = std::to_string(config.model.gat_layers);
  m["fgsag"] = config.model.fgsag_enabled ? "true" : "false";
  m["cgsag"] = config.model.cgsag_enabled ? "true" : "false";
  m["fgsag_norm"] = to_string(config.model.fgsag_norm);
  m["keyword_mode"] = to_string(config.model.keyword_mode);
  m["random_keyword_features"] = config.model.random_keyword_features ? "true" : "false";
  m["dropout"] = fmt(config.model.dropout_rate);
  m["leaky_slope"] = fmt(config.model.leaky_slope);
  m["textrank_window"] = std::to_string(config.textrank.window);
  m["textrank_damping"] = fmt(config.textrank.damping);
  m["textrank_tolerance"] = fmt(config.textrank.tolerance);
  m["textrank_max_iterations"] = std::to_string(config.textrank.max_iterations);
  m["textrank_keyword_ratio"] = fmt(config.textrank.keyword_ratio);
  return m;
}

void apply_config_entry(TrainConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "epochs") config.epochs = parse_uint(key, value);
  else if (key == "lr") config.learning_rate = parse_double(key, value);
  else if (key == "seed") config.seed = parse_uint(key, value);
  else if (key == "fold_seed") config.fold_seed = parse_uint(key, value);
  else if (key == "loss") config.loss_mode = loss_mode_from_string(value);
  else if (key == "folds") config.folds = parse_uint(key, value);
  else if (key == "jobs") config.jobs = parse_uint(key, value);
  else if (key == "emb_dim") config.model.emb_dim = parse_uint(key, value);
  else if (key == "word_hidden") config.model.word_hidden = parse_uint(key, value);
  else if (key == "gat_layers") config.model.gat_layers = parse_uint(key, value);
  else if (key == "fgsag") config.model.fgsag_enabled = parse_bool(key, value);
  else if (key == "cgsag") config.model.cgsag_enabled = parse_bool(key, value);
  else if (key == "fgsag_norm") config.model.fgsag_norm = fgsag_norm_from_string(value);
  else if (key == "keyword_mode") config.model.keyword_mode = keyword_mode_from_string(value);
  else if (key == "random_keyword_features")
    config.model.random_keyword_features = parse_bool(key, value);
  else if (key == "dropout") config.model.dropout_rate = parse_double(key, value);
  else if (key == "leaky_slope") config.model.leaky_slope = parse_double(key, value);
  else if (key == "textrank_window") config.textrank.window = parse_uint(key, value);
  else if (key == "textrank_damping") config.textrank.damping = parse_double(key, value);
  else if (key == "textrank_tolerance") config.textrank.tolerance = parse_double(key, value);
  else if (key == "textrank_max_iterations")
    config.textrank.max_iterations = parse_uint(key, value);
  else if (key == "textrank_keyword_ratio")
    config.textrank.keyword_ratio = parse_double(key, value);
  else
    throw DataError("config: unknown key '" + key + "'");
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto begin = s.find_first_not_of(" \t\r");
    const auto end = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected key=value");
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

std::string resolved_config_text(const TrainConfig& config) {
  std::string out;
  for (const auto& [key, value] : config_to_map(config))
    out += key + " = " + value + "\n";
  return out;
}

}  // namespace mgsag
