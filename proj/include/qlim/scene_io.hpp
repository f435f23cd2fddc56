#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "qlim/scene.hpp"

namespace qlim {

// Scene file schema (single JSON object):
//
//   {
//     "sources":    [{"x": 0.0, "w": 0.5}, {"x": 0.0, "w": 0.5}],
//     "collectors": [0.0, 1.0],
//     "scale":      1.0,
//     "binding":    "ShiftLastSource" | "SymmetricSeparation"
//   }
//
// Missing keys fall back to the corresponding field of `defaults`.

SceneConfig scene_config_from_json(const nlohmann::json& doc, const SceneConfig& defaults);
nlohmann::json scene_config_to_json(const SceneConfig& config);
SceneConfig load_scene_config(const std::filesystem::path& path, const SceneConfig& defaults);

ParamBinding parse_binding(std::string_view name);
std::string_view to_string(ParamBinding binding) noexcept;

}  // namespace qlim
