#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cgc/fields.hpp"
#include "cgc/immersion.hpp"
#include "cgc/mesh.hpp"

namespace cgc {

struct VolumeReport {
  double k = 0.0;
  double epsilon = 0.0;  // distance from the totally geodesic surface
  double V = 0.0;
  double meanH = 0.0;    // integral of H over both boundary surfaces
  double W = 0.0;        // V - meanH / 4
  double Vstar = 0.0;    // V - meanH / 2
  double Wtilde = 0.0;   // W - pi |chi| epsilon
  double mk = 0.0;       // integral of H over one end
};

/// arctanh(sqrt(k + 1)).
double epsilon_of_k(double k);

/// I = sigma, B = 0.
ImmersionData geodesic_surface(const SurfaceMesh& mesh);

/// Equidistant surface at signed distance rho along the normal.
ImmersionData parallel_flow(const ImmersionData& s, double rho, const SurfaceMesh& mesh);

/// I = -sigma / k, B = sqrt(k + 1) Id.
ImmersionData fuchsian_ksurface(const SurfaceMesh& mesh, double k);

/// Volume swept by the normal flow between rho0 and rho1 (signed by orientation of the interval).
double slab_volume(const ImmersionData& s, double rho0, double rho1, const SurfaceMesh& mesh);

/// Closed forms for the Fuchsian manifold with |chi(boundary)| = chi.
VolumeReport volume_report(double k, int chi);
/// Same quantities integrated on the mesh: slab between the two equidistant k-surfaces, scaled to |chi|.
VolumeReport volume_report(const SurfaceMesh& mesh, double k, int chi);
void write_volumes_csv(std::ostream& out, const std::vector<VolumeReport>& rows);
void write_volumes_csv(const std::string& path, const std::vector<VolumeReport>& rows);

double schlafli_integrand(const TensorField& I, const TensorField& II, const TensorField& dI, const ScalarField& dH,
                          const SurfaceMesh& mesh);
double dW_integrand(const ImmersionData& s, const TensorField& dII, const ScalarField& dKe, const SurfaceMesh& mesh);
double dVstar_integrand(const ImmersionData& s, const TensorField& dI, const SurfaceMesh& mesh);

/// I* = III, B* = B^-1.
ImmersionData desitter_dual(const ImmersionData& s, const SurfaceMesh& mesh);
/// L2(I*) norm of Ki* - (1 - Ke*) for a dual surface.
double dual_gauss_residual(const ImmersionData& dual, const SurfaceMesh& mesh);

/// Value at x0 of the quadratic through the three samples nearest to x0.
double richardson_extrapolate(const std::vector<double>& x, const std::vector<double>& y, double x0);

/// Extrapolated k -> 0 limit of Wtilde over the closed-form Fuchsian reports.
double renormalized_limit(const std::vector<double>& kGrid, int chi);
/// Same limit with the reports integrated on the mesh.
double renormalized_limit(const SurfaceMesh& mesh, const std::vector<double>& kGrid, int chi);

/// Analytic dVstar/dk on the Fuchsian locus.
double vstar_derivative(double k, int chi);

std::vector<double> default_k_grid();

}  // namespace cgc
