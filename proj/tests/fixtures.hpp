#pragma once

#include <map>
#include <memory>

#include "cgc/hodge.hpp"
#include "cgc/mesh.hpp"

namespace fixtures {

// Meshes and bases are expensive at level 4; build each once per test binary.
inline const cgc::SurfaceMesh& mesh(int level) {
  static std::map<int, std::unique_ptr<cgc::SurfaceMesh>> cache;
  auto& slot = cache[level];
  if (!slot) slot = std::make_unique<cgc::SurfaceMesh>(cgc::build_bolza(level));
  return *slot;
}

inline const cgc::QdBasis& basis(int level) {
  static std::map<int, std::unique_ptr<cgc::QdBasis>> cache;
  auto& slot = cache[level];
  if (!slot) slot = std::make_unique<cgc::QdBasis>(cgc::holomorphic_qd_basis(mesh(level)));
  return *slot;
}

}  // namespace fixtures
