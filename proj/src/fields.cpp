#include "cgc/fields.hpp"

#include "cgc/error.hpp"

namespace cgc {

namespace {

template <class F>
void require_same(const F& a, const F& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::MismatchedMesh, "field sizes differ");
}

}  // namespace

TensorField operator+(const TensorField& a, const TensorField& b) {
  require_same(a, b);
  TensorField out(a.size());
  for (std::size_t f = 0; f < a.size(); ++f) out[f] = a[f] + b[f];
  return out;
}

TensorField operator-(const TensorField& a, const TensorField& b) {
  require_same(a, b);
  TensorField out(a.size());
  for (std::size_t f = 0; f < a.size(); ++f) out[f] = a[f] - b[f];
  return out;
}

TensorField operator*(double s, const TensorField& a) {
  TensorField out(a.size());
  for (std::size_t f = 0; f < a.size(); ++f) out[f] = s * a[f];
  return out;
}

QuadraticDifferential operator+(const QuadraticDifferential& a, const QuadraticDifferential& b) {
  require_same(a, b);
  QuadraticDifferential out(a.size());
  for (std::size_t f = 0; f < a.size(); ++f) out[f] = a[f] + b[f];
  return out;
}

QuadraticDifferential operator*(Complex s, const QuadraticDifferential& a) {
  QuadraticDifferential out(a.size());
  for (std::size_t f = 0; f < a.size(); ++f) out[f] = s * a[f];
  return out;
}

QuadraticDifferential operator*(double s, const QuadraticDifferential& a) { return Complex(s, 0.0) * a; }

Eigen::Matrix2d real_part_tensor(Complex phi) {
  Eigen::Matrix2d m;
  m << phi.real(), -phi.imag(), -phi.imag(), -phi.real();
  return m;
}

TensorField two_real_part(const QuadraticDifferential& q) {
  TensorField out(q.size());
  for (std::size_t f = 0; f < q.size(); ++f) out[f] = 2.0 * real_part_tensor(q[f]);
  return out;
}

}  // namespace cgc
