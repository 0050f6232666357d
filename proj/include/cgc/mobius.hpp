#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cgc {

using Complex = std::complex<double>;

/// Orientation-preserving isometry of the Poincare disk,
/// z -> (a z + b) / (conj(b) z + conj(a)) with |a|^2 - |b|^2 = 1.
struct Mobius {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  static Mobius identity() { return {}; }
  /// Hyperbolic translation by `distance` along the diameter at angle `theta`.
  static Mobius translation(double distance, double theta);
  static Mobius rotation(double theta);
  /// Isometry taking p to the origin.
  static Mobius recentre(Complex p);

  Complex operator()(Complex z) const;
  /// Complex derivative at z.
  Complex derivative(Complex z) const;
  /// Real 2x2 Jacobian of the map at z (a conformal matrix).
  Eigen::Matrix2d jacobian(Complex z) const;

  Mobius inverse() const;
  /// (*this) o other
  Mobius compose(const Mobius& other) const;
};

/// Hyperbolic distance in the Poincare disk.
double hyperbolic_distance(Complex z, Complex w);
/// Point halfway along the geodesic from z to w.
Complex geodesic_midpoint(Complex z, Complex w);
/// Area of the geodesic triangle with the given vertices.
double geodesic_triangle_area(Complex z0, Complex z1, Complex z2);
/// Interior angle at z0 of the geodesic triangle (z0, z1, z2).
double geodesic_triangle_angle(Complex z0, Complex z1, Complex z2);

inline Complex to_complex(const Eigen::Vector2d& p) { return {p.x(), p.y()}; }
inline Eigen::Vector2d to_vec(Complex z) { return {z.real(), z.imag()}; }

}  // namespace cgc
