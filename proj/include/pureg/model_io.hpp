#pragma once

#include <string>

#include <json.hpp>

#include "pureg/config.hpp"
#include "pureg/stitched_model.hpp"

namespace pureg {

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

nlohmann::json config_to_json(const FitConfig& config);
FitConfig config_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const StitchedModel& model);
StitchedModel model_from_json(const nlohmann::json& j);

// JSON round trip preserves every double bit-for-bit, so a saved and
// reloaded model predicts identically. save_model writes atomically.
void save_model(const StitchedModel& model, const std::string& path);
StitchedModel load_model(const std::string& path);

}  // namespace pureg
