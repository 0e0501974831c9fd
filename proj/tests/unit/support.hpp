#pragma once

#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "tsdyn/surface_io.hpp"

namespace tsdyn::test {

inline std::string corpus(const std::string& name) { return std::string(TSDYN_CORPUS_DIR) + "/" + name + ".json"; }

inline TranslationSurface load(const std::string& name) { return load_surface(corpus(name)); }

inline TranslationSurface load_unit(const std::string& name) { return normalize_area(load(name)); }

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = {"square_torus", "hexagonal_torus", "double_pentagon"};
  return names;
}

inline double shoelace(const Polygon& p) {
  double a = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const Vec2 u = p[i], v = p[(i + 1) % p.size()];
    a += u.x * v.y - u.y * v.x;
  }
  return 0.5 * a;
}

// Corner classes of a polygon gluing: union-find over corners identified by
// the side gluings. Returns a class id per (polygon, corner), flattened.
inline std::vector<int> corner_classes(const std::vector<Polygon>& polys, const std::vector<Gluing>& gluings) {
  std::vector<int> offset(polys.size() + 1, 0);
  for (size_t i = 0; i < polys.size(); ++i) offset[i + 1] = offset[i] + static_cast<int>(polys[i].size());
  std::vector<int> parent(offset.back());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const Gluing& g : gluings) {
    const int na = static_cast<int>(polys[g.a.polygon].size()), nb = static_cast<int>(polys[g.b.polygon].size());
    parent[find(offset[g.a.polygon] + g.a.side)] = find(offset[g.b.polygon] + (g.b.side + 1) % nb);
    parent[find(offset[g.a.polygon] + (g.a.side + 1) % na)] = find(offset[g.b.polygon] + g.b.side);
  }
  std::vector<int> out(offset.back());
  for (int i = 0; i < offset.back(); ++i) out[i] = find(i);
  return out;
}

inline int euler_characteristic_oracle(const std::vector<Polygon>& polys, const std::vector<Gluing>& gluings) {
  const auto cls = corner_classes(polys, gluings);
  const int v = static_cast<int>(std::set<int>(cls.begin(), cls.end()).size());
  int sides = 0;
  for (const auto& p : polys) sides += static_cast<int>(p.size());
  return v - sides / 2 + static_cast<int>(polys.size());
}

}  // namespace tsdyn::test
