#include "tsdyn/surface_io.hpp"

#include <fstream>

#include "tsdyn/errors.hpp"

namespace tsdyn {

nlohmann::json surface_to_json(const TranslationSurface& s) {
  nlohmann::json j;
  j["schema"] = kSurfaceSchema;
  j["label"] = s.label();
  nlohmann::json polys = nlohmann::json::array();
  for (const Polygon& p : s.polygons()) {
    nlohmann::json pj = nlohmann::json::array();
    for (const Vec2& v : p) pj.push_back({v.x, v.y});
    polys.push_back(pj);
  }
  j["polygons"] = polys;
  nlohmann::json gl = nlohmann::json::array();
  for (const Gluing& g : s.gluings()) gl.push_back({g.a.polygon, g.a.side, g.b.polygon, g.b.side});
  j["gluings"] = gl;
  nlohmann::json cones = nlohmann::json::array();
  for (const ConePoint& c : s.cone_points()) cones.push_back({{"id", c.vertex}, {"angle_over_2pi", c.angle_multiple}});
  j["cone_points"] = cones;
  j["genus"] = s.genus();
  j["stratum"] = s.stratum();
  j["area"] = s.area();
  return j;
}

TranslationSurface surface_from_json(const nlohmann::json& j, const BuildOptions& opts) {
  try {
    if (j.contains("schema") && j.at("schema").get<std::string>() != kSurfaceSchema)
      throw Error(ErrorCode::kInvalidArgument, "unsupported surface schema " + j.at("schema").get<std::string>());
    std::vector<Polygon> polys;
    for (const auto& pj : j.at("polygons")) {
      Polygon p;
      for (const auto& v : pj) p.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      polys.push_back(std::move(p));
    }
    std::vector<Gluing> gl;
    for (const auto& g : j.at("gluings")) {
      if (g.size() != 4) throw Error(ErrorCode::kInvalidArgument, "gluing entries must have 4 integers");
      gl.push_back({{g[0].get<int>(), g[1].get<int>()}, {g[2].get<int>(), g[3].get<int>()}});
    }
    return TranslationSurface::build(std::move(polys), std::move(gl), j.value("label", std::string{}), opts);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed surface JSON: ") + e.what());
  }
}

TranslationSurface load_surface(const std::string& path, const BuildOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path + ": " + e.what());
  }
  return surface_from_json(j, opts);
}

void save_surface(const TranslationSurface& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << surface_to_json(s).dump(2) << '\n';
}

}  // namespace tsdyn
