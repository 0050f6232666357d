#pragma once

#include <vector>

#include "cgc/fields.hpp"
#include "cgc/immersion.hpp"
#include "cgc/mesh.hpp"
#include "cgc/wolf.hpp"

namespace cgc {

/// Half the antilinear coefficient of the traceless part of g^-1 dg. Assumes g conformal to the chart.
BeltramiField beltrami_from_variation(const TensorField& g, const TensorField& dg);

/// Integral of phi nu against coordinate area.
Complex pairing_beltrami(const QuadraticDifferential& q, const BeltramiField& nu, const SurfaceMesh& mesh);

/// 1/4 integral of <dg, Re q>_g da_g.
double pairing_tensor(const QuadraticDifferential& q, const TensorField& dg, const TensorField& g, const SurfaceMesh& mesh);

/// 1/4 integral of <dII, Re q>_II da_II with dII = (II_B - II_A) / step, evaluated on A.
double liouville_phi(const ImmersionData& a, const ImmersionData& b, const QuadraticDifferential& q, double step,
                     const SurfaceMesh& mesh);
/// -1/2 integral of <dI, II - H I>_I da_I with dI = (I_B - I_A) / step, evaluated on A.
double liouville_psi(const ImmersionData& a, const ImmersionData& b, double step, const SurfaceMesh& mesh);

/// Central versions: the variation is (plus - minus) / (2 step), forms are evaluated on base.
double liouville_phi_central(const ImmersionData& base, const ImmersionData& minus, const ImmersionData& plus,
                             const QuadraticDifferential& q, double step, const SurfaceMesh& mesh);
double liouville_psi_central(const ImmersionData& base, const ImmersionData& minus, const ImmersionData& plus, double step,
                             const SurfaceMesh& mesh);

/// Integral of H over the surface.
double mk(const ImmersionData& s, const SurfaceMesh& mesh);

struct ExactnessResult {
  double phi = 0.0;  // Phi pullback of the conformal Liouville form
  double psi = 0.0;  // Psi pullback of the hyperbolic Liouville form
  double lhs = 0.0;  // 2 phi - psi
  double rhs = 0.0;  // -1/2 dm_k
  double residual = 0.0;
};

ExactnessResult exactness_check(const ConfCotangentPoint& point, const QuadraticDifferential& direction, double step,
                                const WolfOptions& options = {});

struct HamiltonianRow {
  double k = 0.0;
  double wDot = 0.0;
  double conformalTerm = 0.0;   // m_k / (8 (k + 1))
  double conformalResidual = 0.0;
  double vStarDot = 0.0;
  double hyperbolicBalance = 0.0;  // -2 dv*/dk + m_k / (2k)
  double hyperbolicLiouville = 0.0;
  double hyperbolicResidual = 0.0;
};

/// Fuchsian closed forms for one end with |chi(boundary)| = chi shared over two ends; central k-differences.
std::vector<HamiltonianRow> hamiltonian_check_fuchsian(const std::vector<double>& kGrid, int chi, double step = 1e-5);

}  // namespace cgc
