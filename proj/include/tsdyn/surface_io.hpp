// JSON form of translation surfaces:
// {"schema": "tsdyn.surface/1", "label": ..., "polygons": [[[x,y],...],...],
//  "gluings": [[poly, side, poly, side], ...]}
#pragma once

#include <string>

#include "json.hpp"
#include "tsdyn/surface.hpp"

namespace tsdyn {

inline constexpr const char* kSurfaceSchema = "tsdyn.surface/1";

nlohmann::json surface_to_json(const TranslationSurface& s);
TranslationSurface surface_from_json(const nlohmann::json& j, const BuildOptions& opts = {});
TranslationSurface load_surface(const std::string& path, const BuildOptions& opts = {});
void save_surface(const TranslationSurface& s, const std::string& path);

}  // namespace tsdyn
