#pragma once

#include "cgc/fields.hpp"
#include "cgc/mesh.hpp"

namespace cgc {

/// First fundamental form and shape operator of an equivariant surface, with derived caches.
struct ImmersionData {
  TensorField I;
  OperatorField B;
  TensorField II;   // I(B., .)
  TensorField III;  // I(B., B.)
  ScalarField H;    // tr B
  ScalarField Ke;   // det B
  ScalarField Ki;   // discrete Gaussian curvature of I

  /// Fills the caches; Ki needs the mesh because it is an angle-defect curvature.
  static ImmersionData make(const TensorField& I, const OperatorField& B, const SurfaceMesh& mesh);

  bool convex() const;
  /// Largest |B^2 - H B + Ke Id| entry over faces.
  double cayley_hamilton_defect() const;
};

/// L2(I) norm of Ki - (Ke - 1).
double gauss_residual(const ImmersionData& s, const SurfaceMesh& mesh);

}  // namespace cgc
