#include "qsllab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsllab/error.hpp"

namespace qsllab {

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::pt_symmetric: return "pt_symmetric";
    case Regime::exceptional_point: return "exceptional_point";
    case Regime::pt_broken: return "pt_broken";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// ModelParams

ModelParams::ModelParams(double omega, double gamma) : ModelParams(omega, gamma, gamma / omega) {}

ModelParams::ModelParams(double omega, double gamma, double delta)
    : omega_(omega), gamma_(gamma), delta_(delta) {
  if (!std::isfinite(omega) || !std::isfinite(gamma) || omega == 0.0) {
    throw Error(ErrorKind::InvalidParams, "omega must be finite and nonzero, gamma finite");
  }
  // (delta - 1)(delta + 1) keeps relative accuracy next to |delta| = 1.
  gamma1_ = std::sqrt(Complex((delta_ - 1.0) * (delta_ + 1.0), 0.0));
}

ModelParams ModelParams::from_delta(double delta, double omega) {
  if (!std::isfinite(delta)) throw Error(ErrorKind::InvalidParams, "delta must be finite");
  return ModelParams(omega, delta * omega, delta);
}

Regime ModelParams::regime() const noexcept {
  const double gap = std::abs(delta_) - 1.0;
  if (std::abs(gap) <= kExceptionalPointTolerance) return Regime::exceptional_point;
  return gap < 0.0 ? Regime::pt_symmetric : Regime::pt_broken;
}

// ---------------------------------------------------------------------------
// DensityMatrix

namespace {

std::pair<double, double> hermitian_eigenvalues(const ComplexMatrix2& m) {
  const double a = m.a11.real();
  const double d = m.a22.real();
  const double off = std::abs(0.5 * (m.a12 + std::conj(m.a21)));
  const double mean = 0.5 * (a + d);
  const double half_gap = std::hypot(0.5 * (a - d), off);
  return {mean + half_gap, mean - half_gap};
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix2& m) : m_(m) {
  if (!is_finite(m)) throw Error(ErrorKind::InvalidState, "density matrix has non-finite entries");
  const double defect = hermiticity_defect(m);
  if (defect > kStateTolerance) {
    throw Error(ErrorKind::InvalidState,
                "density matrix not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const double tr_err = std::abs(trace(m) - 1.0);
  if (tr_err > kStateTolerance) {
    throw Error(ErrorKind::InvalidState,
                "density matrix trace differs from 1 by " + std::to_string(tr_err));
  }
  const double min_eig = hermitian_eigenvalues(m).second;
  if (min_eig < -kStateTolerance) {
    throw Error(ErrorKind::InvalidState,
                "density matrix has negative eigenvalue " + std::to_string(min_eig));
  }
}

DensityMatrix DensityMatrix::excited() { return DensityMatrix(ComplexMatrix2::diagonal(1.0, 0.0)); }

DensityMatrix DensityMatrix::ground() { return DensityMatrix(ComplexMatrix2::diagonal(0.0, 1.0)); }

DensityMatrix DensityMatrix::mixed(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidState, "mixing parameter p must lie in (0, 1)");
  }
  return DensityMatrix(ComplexMatrix2::diagonal(1.0 - 0.5 * p, 0.5 * p));
}

DensityMatrix DensityMatrix::from_bloch(double x, double y, double z) {
  const ComplexMatrix2 m = ComplexMatrix2::identity() + Complex(x) * pauli_x() +
                           Complex(y) * pauli_y() + Complex(z) * pauli_z();
  return DensityMatrix(Complex(0.5) * m);
}

double DensityMatrix::purity() const noexcept { return trace(m_ * m_).real(); }

// ---------------------------------------------------------------------------
// Model

ComplexMatrix2 hamiltonian(const ModelParams& params) {
  const Complex i_delta(0.0, params.delta());
  return Complex(-params.omega()) * ComplexMatrix2{i_delta, 1.0, 1.0, -i_delta};
}

std::pair<Complex, Complex> energy_eigenvalues(const ModelParams& params) {
  const double delta = params.delta();
  const Complex e = params.omega() * std::sqrt(Complex((1.0 - delta) * (1.0 + delta), 0.0));
  return {e, -e};
}

ComplexMatrix2 propagator(const ModelParams& params, double t) {
  return matrix_exponential(Complex(0.0, -t) * hamiltonian(params));
}

namespace {

inline constexpr double kNormalizationFloor = 1e-14;

// Hyperbolic factors of the closed form at x = gamma1 * s, each multiplied
// by exp(-2|Re x|) so that the common growth cancels before it can
// overflow:
//   cosh2    = cosh^2(x)
//   sinh2_g2 = sinh^2(x) / gamma1^2
//   sinh2x_g = sinh(2x) / gamma1
struct ScaledHyperbolics {
  Complex cosh2;
  Complex sinh2_g2;
  Complex sinh2x_g;
};

ScaledHyperbolics scaled_hyperbolics(Complex gamma1, double s) {
  const Complex x = gamma1 * s;
  const double shift = std::abs(x.real());
  const double damp = std::exp(-2.0 * shift);
  ScaledHyperbolics h;
  if (shift > 20.0) {
    // e^{-2|Re x|} already makes the subdominant exponential negligible, so
    // the exponential forms carry no cancellation here.
    const Complex ep = std::exp(x - shift);
    const Complex em = std::exp(-x - shift);
    h.cosh2 = 0.25 * (ep + em) * (ep + em);
    h.sinh2_g2 = 0.25 * (ep - em) * (ep - em) / (gamma1 * gamma1);
    h.sinh2x_g = 0.5 * (ep * ep - em * em) / gamma1;
    return h;
  }
  const Complex c = std::cosh(x);
  h.cosh2 = c * c * damp;
  // Exceptional-point limit is handled inside sinhc:
  //   sinh^2(x)/gamma1^2 = s^2 sinhc^2(x),  sinh(2x)/gamma1 = 2 s sinhc(2x).
  const Complex sc = sinhc(x);
  h.sinh2_g2 = s * s * sc * sc * damp;
  h.sinh2x_g = 2.0 * s * sinhc(2.0 * x) * damp;
  return h;
}

}  // namespace

DensityMatrix evolve_closed_form(const DensityMatrix& rho0, const ModelParams& params, double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidParams, "time must be finite");
  if (t == 0.0) return rho0;

  const ComplexMatrix2& r = rho0.matrix();
  const Complex a = r.a11;
  const Complex b = r.a12;
  const Complex c = r.a21;
  const Complex d = r.a22;
  const double delta = params.delta();
  const Complex gamma1 = params.gamma1();
  const Complex i(0.0, 1.0);

  // Dimensionless time: U(t) for omega equals the omega = 1 propagator at omega t.
  const ScaledHyperbolics h = scaled_hyperbolics(gamma1, params.omega() * t);
  const Complex diag_growth = h.cosh2 + gamma1 * gamma1 * h.sinh2_g2;  // cosh^2 + sinh^2
  const Complex coherence = i * delta * (b - c);

  const Complex n11 = a * diag_growth + (1.0 + coherence) * h.sinh2_g2 -
                      (delta * a + 0.5 * i * (b - c)) * h.sinh2x_g;
  const Complex n12 = b * h.cosh2 + (i * delta - delta * delta * b + c) * h.sinh2_g2 +
                      0.5 * i * (1.0 - 2.0 * a) * h.sinh2x_g;
  // n11 + n22, where n22 follows from n11 under the sigma_x symmetry
  // (delta -> -delta, rho0 -> sigma_x rho0 sigma_x).
  const Complex norm = (a + d) * diag_growth + 2.0 * (1.0 + coherence) * h.sinh2_g2 -
                       delta * (a - d) * h.sinh2x_g;

  const double tr = norm.real();
  if (!std::isfinite(tr) || !(tr >= kNormalizationFloor)) {
    throw Error(ErrorKind::DegenerateNormalization,
                "Tr(U rho0 U^dagger) underflowed in closed-form evolution");
  }
  const double p11 = n11.real() / tr;
  const Complex p12 = n12 / tr;
  return DensityMatrix(ComplexMatrix2{p11, p12, std::conj(p12), 1.0 - p11});
}

DensityMatrix evolve_propagator(const DensityMatrix& rho0, const ModelParams& params, double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidParams, "time must be finite");
  if (t == 0.0) return rho0;

  ComplexMatrix2 u = propagator(params, t);
  if (!is_finite(u)) {
    throw Error(ErrorKind::DegenerateNormalization, "propagator overflowed");
  }
  // Any scalar factor cancels in the renormalisation.
  const double largest = std::sqrt(frobenius_sq(u));
  u = u / Complex(largest);

  const ComplexMatrix2 m = u * rho0.matrix() * adjoint(u);
  const double tr = trace(m).real();
  if (!std::isfinite(tr) || !(tr >= kNormalizationFloor)) {
    throw Error(ErrorKind::DegenerateNormalization,
                "Tr(U rho0 U^dagger) underflowed in propagator evolution");
  }
  const ComplexMatrix2 herm = Complex(0.5 / tr) * (m + adjoint(m));
  return DensityMatrix(herm);
}

ComplexMatrix2 generator(const ComplexMatrix2& rho, const ModelParams& params) {
  // Expanded by hand: -i[-omega sigma_x, rho] = i omega [sigma_x, rho],
  // {gamma sigma_z, rho} = 2 gamma diag(a, -d), Tr(rho Gamma) = gamma (a - d).
  const double w = params.omega();
  const double g = params.gamma();
  const Complex a = rho.a11, b = rho.a12, c = rho.a21, d = rho.a22;
  auto i_times = [](Complex z) { return Complex(-z.imag(), z.real()); };
  auto mul = [](Complex x, Complex y) {
    return Complex(x.real() * y.real() - x.imag() * y.imag(),
                   x.real() * y.imag() + x.imag() * y.real());
  };
  const Complex m = 2.0 * g * (a - d);
  return {w * i_times(c - b) - 2.0 * g * a + mul(m, a), w * i_times(d - a) + mul(m, b),
          w * i_times(a - d) + mul(m, c), w * i_times(b - c) + 2.0 * g * d + mul(m, d)};
}

ComplexMatrix2 generator(const DensityMatrix& rho, const ModelParams& params) {
  return generator(rho.matrix(), params);
}

namespace {

inline constexpr double kOverflowLimit = 1e12;

void check_overflow(const ComplexMatrix2& m, double t) {
  if (!is_finite(m) || std::abs(m.a11) > kOverflowLimit || std::abs(m.a12) > kOverflowLimit ||
      std::abs(m.a21) > kOverflowLimit || std::abs(m.a22) > kOverflowLimit) {
    throw Error(ErrorKind::StepOverflow, "RK4 state exceeded 1e12 near t = " + std::to_string(t));
  }
}

}  // namespace

Trajectory integrate_ode(const DensityMatrix& rho0, const ModelParams& params, double t_end,
                         int steps) {
  if (steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be >= 1");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorKind::InvalidParams, "t_end must be positive and finite");
  }
  const double h = t_end / steps;
  const auto count = static_cast<std::size_t>(steps) + 1;

  Trajectory traj;
  traj.times.reserve(count);
  traj.states.reserve(count);
  traj.generators.reserve(count);

  ComplexMatrix2 rho = rho0.matrix();
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  traj.generators.push_back(generator(rho, params));

  for (int n = 0; n < steps; ++n) {
    const double t = n * h;
    const ComplexMatrix2 k1 = traj.generators.back();
    const ComplexMatrix2 k2 = generator(rho + (0.5 * h) * k1, params);
    const ComplexMatrix2 k3 = generator(rho + (0.5 * h) * k2, params);
    const ComplexMatrix2 k4 = generator(rho + h * k3, params);
    check_overflow(k4, t);
    rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_overflow(rho, t);

    rho = 0.5 * (rho + adjoint(rho));
    rho = (1.0 / trace(rho).real()) * rho;

    traj.times.push_back(t_end * (n + 1) / steps);
    traj.states.push_back(DensityMatrix(rho, DensityMatrix::Unchecked{}));
    traj.generators.push_back(generator(rho, params));
  }
  return traj;
}

Trajectory sample_trajectory(const DensityMatrix& rho0, const ModelParams& params, double t_start,
                             double t_end, int nodes) {
  if (nodes < 3 || nodes % 2 == 0) {
    throw Error(ErrorKind::BadGrid,
                "trajectory needs an odd node count >= 3, got " + std::to_string(nodes));
  }
  if (!(t_end > t_start) || !std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw Error(ErrorKind::InvalidParams, "trajectory window must satisfy t_end > t_start");
  }
  const auto count = static_cast<std::size_t>(nodes);
  const double span = t_end - t_start;

  Trajectory traj;
  traj.times.reserve(count);
  traj.states.reserve(count);
  traj.generators.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = k + 1 == count ? t_end
                                    : t_start + span * static_cast<double>(k) / (nodes - 1);
    traj.times.push_back(t);
    traj.states.push_back(evolve_closed_form(rho0, params, t));
    traj.generators.push_back(generator(traj.states.back(), params));
  }
  return traj;
}

double excited_population(const DensityMatrix& rho) {
  return std::clamp(rho.matrix().a11.real(), 0.0, 1.0);
}

}  // namespace qsllab
