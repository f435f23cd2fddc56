#include "qlim/scene_io.hpp"

#include <fstream>

#include "qlim/error.hpp"

namespace qlim {

using nlohmann::json;

ParamBinding parse_binding(std::string_view name) {
  if (name == "ShiftLastSource") return ParamBinding::ShiftLastSource;
  if (name == "SymmetricSeparation") return ParamBinding::SymmetricSeparation;
  throw Error(ErrorKind::BadConfig, "unknown binding '" + std::string(name) + "'");
}

std::string_view to_string(ParamBinding binding) noexcept {
  switch (binding) {
    case ParamBinding::ShiftLastSource: return "ShiftLastSource";
    case ParamBinding::SymmetricSeparation: return "SymmetricSeparation";
  }
  return "ShiftLastSource";
}

SceneConfig scene_config_from_json(const json& doc, const SceneConfig& defaults) {
  if (!doc.is_object()) throw Error(ErrorKind::BadConfig, "scene config must be a JSON object");
  SceneConfig cfg = defaults;
  try {
    if (doc.contains("sources")) {
      cfg.source_positions.clear();
      cfg.source_weights.clear();
      for (const auto& src : doc.at("sources")) {
        cfg.source_positions.push_back(src.at("x").get<double>());
        cfg.source_weights.push_back(src.at("w").get<double>());
      }
    }
    if (doc.contains("collectors")) {
      cfg.collector_positions = doc.at("collectors").get<std::vector<double>>();
    }
    if (doc.contains("scale")) cfg.scale = doc.at("scale").get<double>();
    if (doc.contains("binding")) cfg.binding = parse_binding(doc.at("binding").get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadConfig, std::string("malformed scene config: ") + e.what());
  }
  return cfg;
}

json scene_config_to_json(const SceneConfig& config) {
  json sources = json::array();
  for (std::size_t j = 0; j < config.source_positions.size(); ++j) {
    sources.push_back({{"x", config.source_positions[j]}, {"w", config.source_weights[j]}});
  }
  return {{"sources", sources},
          {"collectors", config.collector_positions},
          {"scale", config.scale},
          {"binding", std::string(to_string(config.binding))}};
}

SceneConfig load_scene_config(const std::filesystem::path& path, const SceneConfig& defaults) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadConfig, "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadConfig, "cannot parse " + path.string() + ": " + e.what());
  }
  return scene_config_from_json(doc, defaults);
}

}  // namespace qlim
