#pragma once

// Quantum speed limit times for non-unitary qubit dynamics:
//
//   pure initial state (operator-norm family)
//     tau_qsl = max_p{1 / Lambda^p} sin^2 B(rho_0, rho_tauD),
//     Lambda^p = tauD^-1 int ||L_t rho_t||_p dt,
//
//   arbitrary initial state (relative purity)
//     tau_qsl = max{1 / avg(sum_i s_i r_i), 1 / avg(sqrt(sum_i s_i^2))}
//               |f - 1| Tr(rho_tau^2),
//
// with s_i the singular values of L_t rho_t, r_i those of rho_tau (both
// descending) and f the relative purity. Time averages use composite
// Simpson quadrature over a Trajectory window.

#include <array>
#include <functional>
#include <optional>

#include "qsllab/dynamics.hpp"
#include "qsllab/matrix2.hpp"

namespace qsllab {

enum class BoundKind { operator_norm, relative_purity };

struct MixedTerms {
  double weighted_sum = 0.0;     // avg(sum_i s_i r_i)
  double hilbert_schmidt = 0.0;  // avg(sqrt(sum_i s_i^2))
};

struct QslResult {
  double tau_d = 0.0;
  std::array<double, 3> lambda{};  // indexed by index_of(SchattenP)
  double distinguishability = 0.0;
  double tau_qsl = 0.0;
  BoundKind bound_kind = BoundKind::operator_norm;
  std::optional<MixedTerms> mixed_terms;
  int nodes = 0;

  double lambda_p(SchattenP p) const { return lambda[index_of(p)]; }
};

inline constexpr double kPurityTolerance = 1e-8;
inline constexpr double kDomainSlack = 1e-12;
inline constexpr double kIdenticalStateThreshold = 1e-14;

/// arccos sqrt(<psi0|rho|psi0>) for pure psi0. Throws Error{NotPure}.
double bures_angle(const DensityMatrix& psi0, const DensityMatrix& rho);

/// sin^2 of the Bures angle, evaluated as 1 - <psi0|rho|psi0>.
double bures_sin_sq(const DensityMatrix& psi0, const DensityMatrix& rho);

/// Tr(rho_end rho_tau) / Tr(rho_tau^2).
double relative_purity(const DensityMatrix& rho_tau, const DensityMatrix& rho_end);

/// (1/2) sum |eig(rho1 - rho2)|.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Simpson time average of ||L_t rho_t||_p over the trajectory window.
double averaged_schatten(const Trajectory& traj, SchattenP p);

/// Bound for a pure initial state from a window whose first state is that state.
QslResult pure_bound(const Trajectory& window);

/// Relative-purity bound for the window's first state, which may be mixed.
QslResult mixed_bound(const Trajectory& window);

QslResult qsl_pure(const DensityMatrix& psi0, const ModelParams& params, double tau_d, int nodes);

QslResult qsl_mixed(const DensityMatrix& rho_tau, const ModelParams& params, double tau,
                    double tau_d, int nodes);

/// 200 nodes per unit of driving time, made odd, at least 3.
int default_nodes(double tau_d);

inline constexpr int kMaxNodes = 3201;

/// Refinement ceiling for a start of n nodes: four doublings, at least kMaxNodes.
int max_nodes(int start) noexcept;
inline constexpr double kQuadratureTolerance = 1e-8;

/// Evaluates at n and 2n - 1 nodes, accepting the finer result once every
/// averaged quantity moves by less than kQuadratureTolerance. n doubles
/// until 2n - 1 would exceed max_nodes(n), then Error{QuadratureNonconvergent}.
QslResult converged(const std::function<QslResult(int)>& evaluate, int nodes);

}  // namespace qsllab
