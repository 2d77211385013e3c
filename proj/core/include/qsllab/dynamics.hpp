#pragma once

// Qubit with non-Hermitian detuning, H = -omega sigma_x - i gamma sigma_z.
//
// Basis: |1> = (1, 0)^T is the excited level, |0> = (0, 1)^T the ground
// level, sigma_z |1> = +|1>. With this choice gamma > 0 drains the excited
// population.

#include <string_view>
#include <utility>
#include <vector>

#include "qsllab/matrix2.hpp"

namespace qsllab {

enum class Regime { pt_symmetric, exceptional_point, pt_broken };

/// pt_symmetric | exceptional_point | pt_broken
std::string_view to_string(Regime regime) noexcept;

inline constexpr double kExceptionalPointTolerance = 1e-12;

class ModelParams {
 public:
  /// Throws Error{InvalidParams} for omega == 0 or non-finite input.
  ModelParams(double omega, double gamma);

  /// gamma = delta * omega, with delta stored exactly as given.
  static ModelParams from_delta(double delta, double omega = 1.0);

  double omega() const noexcept { return omega_; }
  double gamma() const noexcept { return gamma_; }
  double delta() const noexcept { return delta_; }

  /// Principal sqrt(delta^2 - 1): imaginary for |delta| < 1, real for |delta| > 1.
  Complex gamma1() const noexcept { return gamma1_; }

  Regime regime() const noexcept;

 private:
  ModelParams(double omega, double gamma, double delta);

  double omega_;
  double gamma_;
  double delta_;
  Complex gamma1_;
};

inline constexpr double kStateTolerance = 1e-10;

/// Qubit density matrix. Construction validates Hermiticity, unit trace and
/// positivity to kStateTolerance and throws Error{InvalidState} otherwise.
struct Trajectory;

class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix2& m);

  static DensityMatrix excited();
  static DensityMatrix ground();
  /// (1 - p/2)|1><1| + (p/2)|0><0| for p in (0, 1).
  static DensityMatrix mixed(double p);
  /// (I + x sigma_x + y sigma_y + z sigma_z) / 2 with |(x, y, z)| <= 1.
  static DensityMatrix from_bloch(double x, double y, double z);

  const ComplexMatrix2& matrix() const noexcept { return m_; }
  double purity() const noexcept;

 private:
  struct Unchecked {};
  DensityMatrix(const ComplexMatrix2& m, Unchecked) : m_(m) {}

  friend Trajectory integrate_ode(const DensityMatrix&, const ModelParams&, double, int);

  ComplexMatrix2 m_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<ComplexMatrix2> generators;

  std::size_t size() const noexcept { return times.size(); }
  double spacing() const noexcept {
    return times.size() < 2 ? 0.0 : duration() / static_cast<double>(times.size() - 1);
  }
  double duration() const noexcept { return times.empty() ? 0.0 : times.back() - times.front(); }
};

ComplexMatrix2 hamiltonian(const ModelParams& params);

/// (E+, E-) = +-omega sqrt(1 - delta^2).
std::pair<Complex, Complex> energy_eigenvalues(const ModelParams& params);

/// exp(-i H t); not unitary unless gamma == 0.
ComplexMatrix2 propagator(const ModelParams& params, double t);

/// Closed-form matrix elements of U rho0 U^dagger / Tr(U rho0 U^dagger).
DensityMatrix evolve_closed_form(const DensityMatrix& rho0, const ModelParams& params, double t);

/// Same state through the propagator and explicit renormalisation.
DensityMatrix evolve_propagator(const DensityMatrix& rho0, const ModelParams& params, double t);

/// Right-hand side of the norm-preserving equation of motion,
///   L rho = -i[H+, rho] - {Gamma, rho} + 2 Tr(rho Gamma) rho,
/// with H+ = -omega sigma_x and Gamma = gamma sigma_z.
ComplexMatrix2 generator(const ComplexMatrix2& rho, const ModelParams& params);
ComplexMatrix2 generator(const DensityMatrix& rho, const ModelParams& params);

/// Fixed-step classical RK4 on the equation of motion, steps + 1 recorded
/// nodes. Each step is followed by re-Hermitisation and trace
/// renormalisation. Positivity is not re-checked: near pure states the
/// recorded nodes may carry eigenvalues below zero by the truncation error.
/// Throws Error{StepOverflow} once any entry exceeds 1e12.
Trajectory integrate_ode(const DensityMatrix& rho0, const ModelParams& params, double t_end,
                         int steps);

/// Closed-form states on a uniform grid of `nodes` (odd, >= 3) points over
/// [t_start, t_end], each evolved continuously from rho0 at t = 0.
Trajectory sample_trajectory(const DensityMatrix& rho0, const ModelParams& params,
                             double t_start, double t_end, int nodes);

/// Re(rho_11) clamped to [0, 1].
double excited_population(const DensityMatrix& rho);

}  // namespace qsllab
