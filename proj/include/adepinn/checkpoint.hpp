#pragma once
/**
 * @file checkpoint.hpp
 * @brief JSON parameter checkpoints: the network spec plus the flat
 *        parameter vector, written with shortest round-trip doubles.
 */

#include <filesystem>
#include <string>

#include <json.hpp>

#include "adepinn/network.hpp"

namespace adepinn {

inline constexpr const char* kCheckpointFormat = "adepinn-params";
inline constexpr int kCheckpointVersion = 1;

nlohmann::json spec_to_json(const MlpSpec& spec);
nlohmann::json spec_to_json(const EnsembleSpec& spec);
MlpSpec mlp_spec_from_json(const nlohmann::json& j);
EnsembleSpec ensemble_spec_from_json(const nlohmann::json& j);

/// {"format", "version", "spec", "params"}; params are exact doubles.
nlohmann::json checkpoint_to_json(const ParamStore& params);
ParamStore checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const ParamStore& params);
ParamStore load_checkpoint(const std::filesystem::path& path);

}  // namespace adepinn
