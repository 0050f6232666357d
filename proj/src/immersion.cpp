#include "cgc/immersion.hpp"

#include <cmath>

#include "cgc/tensor.hpp"

namespace cgc {

ImmersionData ImmersionData::make(const TensorField& I, const OperatorField& B, const SurfaceMesh& mesh) {
  ImmersionData s;
  s.I = I;
  s.B = B;
  s.II = lower(I, B);
  s.III = lower_twice(I, B);
  const std::size_t n = I.size();
  s.H = ScalarField(n);
  s.Ke = ScalarField(n);
  for (std::size_t f = 0; f < n; ++f) {
    s.H[f] = B[f].trace();
    s.Ke[f] = B[f].determinant();
  }
  s.Ki = gaussian_curvature(I, mesh);
  return s;
}

bool ImmersionData::convex() const {
  for (std::size_t f = 0; f < B.size(); ++f)
    if (Ke[f] <= 0.0 || H[f] <= 0.0) return false;
  return true;
}

double ImmersionData::cayley_hamilton_defect() const {
  double worst = 0.0;
  for (std::size_t f = 0; f < B.size(); ++f) {
    const Eigen::Matrix2d d = B[f] * B[f] - H[f] * B[f] + Ke[f] * Eigen::Matrix2d::Identity();
    worst = std::max(worst, d.cwiseAbs().maxCoeff());
  }
  return worst;
}

double gauss_residual(const ImmersionData& s, const SurfaceMesh& mesh) {
  ScalarField d(s.I.size());
  for (std::size_t f = 0; f < d.size(); ++f) d[f] = s.Ki[f] - (s.Ke[f] - 1.0);
  return l2_norm(d, s.I, mesh);
}

}  // namespace cgc
