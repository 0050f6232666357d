#include "cgc/mobius.hpp"

#include <cmath>

namespace cgc {

Mobius Mobius::translation(double distance, double theta) {
  // Conjugate of z -> (z + t) / (1 + t z) by the rotation e^{i theta}.
  const double c = std::cosh(distance / 2.0);
  const double s = std::sinh(distance / 2.0);
  return {Complex(c, 0.0), s * std::polar(1.0, theta)};
}

Mobius Mobius::rotation(double theta) {
  return {std::polar(1.0, theta / 2.0), Complex(0.0, 0.0)};
}

Mobius Mobius::recentre(Complex p) {
  const double s = std::sqrt(1.0 - std::norm(p));
  return {Complex(1.0 / s, 0.0), -p / s};
}

Complex Mobius::operator()(Complex z) const {
  return (a * z + b) / (std::conj(b) * z + std::conj(a));
}

Complex Mobius::derivative(Complex z) const {
  const Complex den = std::conj(b) * z + std::conj(a);
  return 1.0 / (den * den);
}

Eigen::Matrix2d Mobius::jacobian(Complex z) const {
  const Complex d = derivative(z);
  Eigen::Matrix2d J;
  J << d.real(), -d.imag(), d.imag(), d.real();
  return J;
}

Mobius Mobius::inverse() const { return {std::conj(a), -b}; }

Mobius Mobius::compose(const Mobius& o) const {
  // Matrices [[a, b], [conj b, conj a]] multiply within SU(1,1).
  return {a * o.a + b * std::conj(o.b), a * o.b + b * std::conj(o.a)};
}

double hyperbolic_distance(Complex z, Complex w) {
  const double r = std::abs((z - w) / (1.0 - std::conj(z) * w));
  return 2.0 * std::atanh(r);
}

Complex geodesic_midpoint(Complex z, Complex w) {
  // Move z to the origin, halve the hyperbolic radius of w, move back.
  const Mobius to_origin{Complex(1.0, 0.0), -z};
  const double n = 1.0 / std::sqrt(1.0 - std::norm(z));
  const Mobius t{to_origin.a * n, to_origin.b * n};
  const Complex v = t(w);
  const double r = std::abs(v);
  if (r == 0.0) return z;
  const double half = r / (1.0 + std::sqrt(1.0 - r * r));
  return t.inverse()(v * (half / r));
}

double geodesic_triangle_area(Complex z0, Complex z1, Complex z2) {
  const double n = 1.0 / std::sqrt(1.0 - std::norm(z0));
  const Mobius t{Complex(n, 0.0), -z0 * n};
  const Complex w1 = t(z1);
  const Complex w2 = t(z2);
  return 2.0 * std::abs(std::arg(1.0 - std::conj(w1) * w2));
}

double geodesic_triangle_angle(Complex z0, Complex z1, Complex z2) {
  // Geodesics through the origin are diameters, so the angle is Euclidean there.
  const double n = 1.0 / std::sqrt(1.0 - std::norm(z0));
  const Mobius t{Complex(n, 0.0), -z0 * n};
  return std::abs(std::arg(t(z2) / t(z1)));
}

}  // namespace cgc
