#pragma once

// Closed-form complex 2x2 linear algebra. Every operation returns a new value.

#include <array>
#include <complex>

namespace qsllab {

using Complex = std::complex<double>;
using Vector2 = std::array<Complex, 2>;

struct ComplexMatrix2 {
  Complex a11{};
  Complex a12{};
  Complex a21{};
  Complex a22{};

  static ComplexMatrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static ComplexMatrix2 zero() { return {}; }
  static ComplexMatrix2 diagonal(Complex d1, Complex d2) { return {d1, 0.0, 0.0, d2}; }

  friend bool operator==(const ComplexMatrix2&, const ComplexMatrix2&) = default;
};

inline ComplexMatrix2 operator+(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}

inline ComplexMatrix2 operator-(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

inline ComplexMatrix2 operator-(const ComplexMatrix2& a) {
  return {-a.a11, -a.a12, -a.a21, -a.a22};
}

inline ComplexMatrix2 operator*(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

inline ComplexMatrix2 operator*(Complex s, const ComplexMatrix2& a) {
  return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

inline ComplexMatrix2 operator*(const ComplexMatrix2& a, Complex s) { return s * a; }

inline ComplexMatrix2 operator*(double s, const ComplexMatrix2& a) {
  return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

inline ComplexMatrix2 operator*(const ComplexMatrix2& a, double s) { return s * a; }

inline ComplexMatrix2 operator/(const ComplexMatrix2& a, Complex s) {
  return {a.a11 / s, a.a12 / s, a.a21 / s, a.a22 / s};
}

inline Vector2 operator*(const ComplexMatrix2& a, const Vector2& v) {
  return {a.a11 * v[0] + a.a12 * v[1], a.a21 * v[0] + a.a22 * v[1]};
}

inline ComplexMatrix2 add(const ComplexMatrix2& a, const ComplexMatrix2& b) { return a + b; }
inline ComplexMatrix2 sub(const ComplexMatrix2& a, const ComplexMatrix2& b) { return a - b; }
inline ComplexMatrix2 mul(const ComplexMatrix2& a, const ComplexMatrix2& b) { return a * b; }
inline ComplexMatrix2 scale(const ComplexMatrix2& a, Complex s) { return s * a; }

/// Conjugate transpose.
inline ComplexMatrix2 adjoint(const ComplexMatrix2& a) {
  return {std::conj(a.a11), std::conj(a.a21), std::conj(a.a12), std::conj(a.a22)};
}

inline Complex trace(const ComplexMatrix2& a) { return a.a11 + a.a22; }
inline Complex det(const ComplexMatrix2& a) { return a.a11 * a.a22 - a.a12 * a.a21; }

inline ComplexMatrix2 commutator(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return a * b - b * a;
}

inline ComplexMatrix2 anticommutator(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return a * b + b * a;
}

/// Sum of |m_ij|^2.
double frobenius_sq(const ComplexMatrix2& a);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix2& a, const ComplexMatrix2& b);

/// max_abs_diff(a, adjoint(a)).
double hermiticity_defect(const ComplexMatrix2& a);

bool is_finite(const ComplexMatrix2& a);

ComplexMatrix2 pauli_x();
ComplexMatrix2 pauli_y();
ComplexMatrix2 pauli_z();

struct SingularPair {
  double sigma1 = 0.0;  // largest
  double sigma2 = 0.0;
};

/// Singular values in descending order from the radical formula
///   sigma^2 = (F +- sqrt(F^2 - 4|det M|^2)) / 2,  F = sum |m_ij|^2.
/// The radicand is evaluated as (p - r)^2 + 4|q|^2 using the entries
/// p, q, r of M M^dagger, which is the same number without the
/// cancellation that hurts (nearly) degenerate pairs. sigma2 is recovered
/// as |det M| / sigma1.
SingularPair singular_values(const ComplexMatrix2& m);

enum class SchattenP { one, two, infinity };

inline constexpr std::array<SchattenP, 3> kAllSchattenP{SchattenP::one, SchattenP::two,
                                                        SchattenP::infinity};

/// Index of p in kAllSchattenP.
constexpr std::size_t index_of(SchattenP p) { return static_cast<std::size_t>(p); }

double schatten_norm(const ComplexMatrix2& m, SchattenP p);
double schatten_norm(const SingularPair& s, SchattenP p);

struct HermitianEigensystem {
  std::array<double, 2> values{};   // descending
  std::array<Vector2, 2> vectors{};  // vectors[k] belongs to values[k]
};

inline constexpr double kHermitianTolerance = 1e-10;

/// Throws Error{NotHermitian} if hermiticity_defect(h) > kHermitianTolerance.
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix2& h);

/// sinh(z)/z, with the series 1 + z^2/6 + z^4/120 for |z| < kSinhcSeriesRadius.
Complex sinhc(Complex z);
inline constexpr double kSinhcSeriesRadius = 1e-4;

/// exp(M) = e^s (cosh(q) I + sinhc(q) (M - s I)),  s = tr M / 2,  q^2 = s^2 - det M.
/// Exact at defective M (q = 0), where the sinhc series branch is taken.
ComplexMatrix2 matrix_exponential(const ComplexMatrix2& m);

}  // namespace qsllab
