#pragma once

// Flat `key = value` configuration files for PipelineConfig.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "holo/model.hpp"

namespace holo {

/// Applies the keys found in `in` on top of `base`. Unknown keys, repeated
/// keys and unparsable values throw ConfigError; the result is validated.
PipelineConfig parse_config(std::istream& in, PipelineConfig base = {}, const std::string& where = "<config>");
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

/// Every field, one `key = value` line each, in a fixed order. Parsing the
/// output yields an equal config.
std::string format_config(const PipelineConfig& cfg);

}  // namespace holo
