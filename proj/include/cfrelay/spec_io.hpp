#pragma once

#include <string>

#include <json.hpp>

#include "cfrelay/pmf.hpp"

namespace cfrelay {

/// Reads the field layout of a spec document. Structural problems (missing
/// fields, wrong JSON types) raise Error(Parse); dimension and normalization
/// problems are left for validate().
ChannelSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const ChannelSpec& spec);

ChannelSpec parse_spec(const std::string& text);
/// Error(Io) when the file cannot be read, Error(Parse) on malformed content.
ChannelSpec load_spec_file(const std::string& path);
void save_spec_file(const ChannelSpec& spec, const std::string& path);

}  // namespace cfrelay
