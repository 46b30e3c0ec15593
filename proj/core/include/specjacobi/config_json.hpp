// Copyright 2026 The specjacobi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "specjacobi/config.hpp"
#include "specjacobi/model.hpp"

namespace specjacobi {

// JSON schemas are documented in docs/formats.md. Parsers reject unknown
// keys and wrong types with ConfigError; absent keys keep their defaults.

nlohmann::json model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const nlohmann::json& j);

nlohmann::json decode_config_to_json(const DecodeConfig& config);
/// Fields present in `j` override those of `base`.
DecodeConfig decode_config_from_json(const nlohmann::json& j, DecodeConfig base = {});

/// Named model presets usable wherever a model JSON is accepted.
ModelSpec model_preset(std::string_view name);
std::vector<std::string> model_preset_names();

/// Accepts inline JSON (leading '{'), a path to a JSON file, or a preset name.
ModelSpec resolve_model(std::string_view text);

/// Parses "HxW" (e.g. "16x16").
GridGeom parse_grid(std::string_view text);

/// True for integer JSON values >= 0, whether stored signed or unsigned.
bool is_non_negative_integer(const nlohmann::json& j);

}  // namespace specjacobi
