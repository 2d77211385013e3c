#include "qsllab/matrix2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsllab/error.hpp"

namespace qsllab {

double frobenius_sq(const ComplexMatrix2& a) {
  return std::norm(a.a11) + std::norm(a.a12) + std::norm(a.a21) + std::norm(a.a22);
}

double max_abs_diff(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a21 - b.a21),
                   std::abs(a.a22 - b.a22)});
}

double hermiticity_defect(const ComplexMatrix2& a) { return max_abs_diff(a, adjoint(a)); }

bool is_finite(const ComplexMatrix2& a) {
  for (const Complex& z : {a.a11, a.a12, a.a21, a.a22}) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexMatrix2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
ComplexMatrix2 pauli_y() { return {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}; }
ComplexMatrix2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

SingularPair singular_values(const ComplexMatrix2& m) {
  const double row1 = std::norm(m.a11) + std::norm(m.a12);
  const double row2 = std::norm(m.a21) + std::norm(m.a22);
  const double frob = row1 + row2;
  if (frob == 0.0) return {0.0, 0.0};

  const Complex cross = m.a11 * std::conj(m.a21) + m.a12 * std::conj(m.a22);
  double radicand = (row1 - row2) * (row1 - row2) + 4.0 * std::norm(cross);
  if (radicand < 0.0) radicand = 0.0;

  const double sigma1 = std::sqrt(0.5 * (frob + std::sqrt(radicand)));
  double sigma2 = std::abs(det(m)) / sigma1;
  sigma2 = std::min(sigma2, sigma1);
  return {sigma1, sigma2};
}

double schatten_norm(const SingularPair& s, SchattenP p) {
  switch (p) {
    case SchattenP::one: return s.sigma1 + s.sigma2;
    case SchattenP::two: return std::hypot(s.sigma1, s.sigma2);
    case SchattenP::infinity: return s.sigma1;
  }
  return s.sigma1;
}

double schatten_norm(const ComplexMatrix2& m, SchattenP p) {
  return schatten_norm(singular_values(m), p);
}

namespace {

Vector2 normalized(const Vector2& v) {
  const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  return {v[0] / n, v[1] / n};
}

}  // namespace

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix2& h) {
  const double defect = hermiticity_defect(h);
  if (!(defect <= kHermitianTolerance)) {
    throw Error(ErrorKind::NotHermitian,
                "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const double a = h.a11.real();
  const double d = h.a22.real();
  const Complex b = 0.5 * (h.a12 + std::conj(h.a21));

  const double mean = 0.5 * (a + d);
  const double half_gap = std::hypot(0.5 * (a - d), std::abs(b));
  HermitianEigensystem es;
  es.values = {mean + half_gap, mean - half_gap};

  if (std::abs(b) == 0.0) {
    if (a >= d) {
      es.vectors = {Vector2{1.0, 0.0}, Vector2{0.0, 1.0}};
    } else {
      es.vectors = {Vector2{0.0, 1.0}, Vector2{1.0, 0.0}};
    }
    return es;
  }

  // (H - l1) v = 0 admits v = (b, l1 - a) and v = (l1 - d, conj b); take the
  // better conditioned of the two.
  const double l1 = es.values[0];
  const Vector2 u{b, l1 - a};
  const Vector2 w{l1 - d, std::conj(b)};
  const double nu = std::norm(u[0]) + std::norm(u[1]);
  const double nw = std::norm(w[0]) + std::norm(w[1]);
  const Vector2 v1 = normalized(nu >= nw ? u : w);
  es.vectors[0] = v1;
  es.vectors[1] = Vector2{-std::conj(v1[1]), std::conj(v1[0])};
  return es;
}

Complex sinhc(Complex z) {
  if (std::abs(z) < kSinhcSeriesRadius) {
    const Complex z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

ComplexMatrix2 matrix_exponential(const ComplexMatrix2& m) {
  const Complex s = 0.5 * trace(m);
  const Complex q = std::sqrt(s * s - det(m));
  const ComplexMatrix2 shifted = m - s * ComplexMatrix2::identity();
  const Complex es = std::exp(s);
  return es * (std::cosh(q) * ComplexMatrix2::identity() + sinhc(q) * shifted);
}

}  // namespace qsllab
