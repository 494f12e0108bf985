// TrainConfig <-> key=value plumbing: the resolved-config printout, config
// file parsing, and entry application (precedence: defaults < file < flags).

#pragma once

#include <map>
#include <string>

#include "mgsag/train.hpp"

namespace mgsag {

/// Every field materialized, including defaults.
std::map<std::string, std::string> config_to_map(const TrainConfig& config);

/// Applies one key=value entry; unknown keys or unparsable values raise
/// DataError.
void apply_config_entry(TrainConfig& config, const std::string& key,
                        const std::string& value);

/// key=value per line; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> load_config_file(const std::string& path);

/// Sorted "key = value" lines.
std::string resolved_config_text(const TrainConfig& config);

}  // namespace mgsag
