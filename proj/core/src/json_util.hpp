// SPDX-License-Identifier: Apache-2.0
// Private JSON helpers shared by the loaders; not installed.
#pragma once

#include <json.hpp>

#include "trom/sampling.hpp"

namespace trom::detail {

using json = nlohmann::json;

[[nodiscard]] json parse_json_text(const std::string& text, const char* what);
[[nodiscard]] json read_json_file(const std::filesystem::path& path);

[[nodiscard]] ParameterBox box_from_json(const json& j);
[[nodiscard]] json box_to_json(const ParameterBox& box);
[[nodiscard]] SamplingScheme sampling_from_json(const json& j);
[[nodiscard]] json sampling_to_json_value(const SamplingScheme& s);

}  // namespace trom::detail
