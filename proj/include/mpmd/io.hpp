#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mpmd/cost.hpp"
#include "mpmd/instance.hpp"

namespace mpmd {

using json = nlohmann::json;

/// Costs serialize as numbers, infinity as the string "inf".
json cost_to_json(Cost c);
Cost cost_from_json(const json& j);

/// Strict instance loader: unknown fields, missing fields and invalid values
/// throw ValidationError. The result passes validate().
Instance instance_from_json(const json& j);
json instance_to_json(const Instance& instance);

DelayModel delay_from_json(const json& j, std::size_t request_count);
json delay_to_json(const DelayModel& delay);

Instance load_instance(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace mpmd
