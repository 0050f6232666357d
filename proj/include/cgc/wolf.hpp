#pragma once

#include "cgc/fields.hpp"
#include "cgc/immersion.hpp"
#include "cgc/mesh.hpp"

namespace cgc {

struct WolfOptions {
  /// Area-weighted L2 bound on K(h) + 1.
  double tolerance = 1e-11;
  int maxIterations = 50;
  double margin = 1e-6;
};

struct HyperbolicSolution {
  TensorField h;
  ScalarField e;  // h = 2 Re q + e sigma
  int iterations = 0;
  double residual = 0.0;
};

/// Pointwise |q|_sigma = |phi| / lambda^2.
ScalarField qd_norm(const QuadraticDifferential& q, const SurfaceMesh& mesh);

HyperbolicSolution solve_hyperbolic_from(const SurfaceMesh& mesh, const QuadraticDifferential& q, const ScalarField& initial,
                                         const WolfOptions& options = {});
HyperbolicSolution solve_hyperbolic_detailed(const SurfaceMesh& mesh, const QuadraticDifferential& q,
                                             const WolfOptions& options = {});
TensorField solve_hyperbolic(const SurfaceMesh& mesh, const QuadraticDifferential& q);

OperatorField labourie_operator(const TensorField& h, const TensorField& hStar);

struct NormalizedPair {
  TensorField h;
  TensorField hStar;
  OperatorField b;
};

NormalizedPair make_pair(const TensorField& h, const TensorField& hStar);

/// Integral of tr b against the area of h.
double j_functional(const NormalizedPair& pair, const SurfaceMesh& mesh);
/// Same functional with the roles of the two metrics exchanged.
double j_functional_swapped(const NormalizedPair& pair, const SurfaceMesh& mesh);

struct ConfCotangentPoint {
  const SurfaceMesh* mesh = nullptr;
  QuadraticDifferential q;
  double k = -0.5;
};

struct KSurfaceResiduals {
  double curvature = 0.0;     // worse of the two Wolf solves
  double gauss = 0.0;         // L2 of Ki - (Ke - 1)
  double codazzi = 0.0;
  double conformality = 0.0;  // sigma-traceless part of II, in the II norm
  double eq21 = 0.0;          // 2 Re q_k against 2 sqrt(k+1) (I - H/(2(k+1)) II), in the I norm
  double determinant = 0.0;   // L2(I) of det B - (k + 1)
};

struct KSurface {
  double k = 0.0;
  ImmersionData data;
  NormalizedPair pair;
  ScalarField e, eStar;
  int iterations = 0;  // Newton steps of both solves
  KSurfaceResiduals residuals;
};

KSurface reconstruct_ksurface(const ConfCotangentPoint& point, const WolfOptions& options = {});

struct HypCotangentPoint {
  TensorField h;
  TensorField p;
  double k = 0.0;
};

/// Density of the covector -(sqrt(k+1)/k) dL_{h*} at h_k through the L2(h_k) pairing.
TensorField psi_density(const NormalizedPair& pair, double k);
HypCotangentPoint psi_point(const ConfCotangentPoint& point, const WolfOptions& options = {});
HypCotangentPoint psi_point(const KSurface& surface);

/// Pairing of a covector density with a tensor variation: integral of <dh, p>_h da_h.
double covector_pairing(const TensorField& p, const TensorField& dh, const TensorField& h, const SurfaceMesh& mesh);

/// Length function L_{h*}(h) = j(h, h*), for finite-difference checks.
double length_function(const TensorField& h, const TensorField& hStar, const SurfaceMesh& mesh);

/// Integral of the mean curvature over a k-surface, m_k.
double mean_curvature_integral(const KSurface& s, const SurfaceMesh& mesh);

}  // namespace cgc
