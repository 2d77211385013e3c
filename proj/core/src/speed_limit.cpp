#include "qsllab/speed_limit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qsllab/error.hpp"
#include "qsllab/quadrature.hpp"

namespace qsllab {

namespace {

void require_pure(const DensityMatrix& psi0) {
  const double purity = psi0.purity();
  if (purity < 1.0 - kPurityTolerance) {
    throw Error(ErrorKind::NotPure,
                "reference state is not pure (Tr rho^2 = " + std::to_string(purity) + ")");
  }
}

// Clamps x into [lo, hi], tolerating excursions up to kDomainSlack.
double clamp_domain(double x, double lo, double hi, const char* what) {
  if (!(x >= lo - kDomainSlack && x <= hi + kDomainSlack)) {
    throw Error(ErrorKind::NumericalDomain,
                std::string(what) + " out of domain: " + std::to_string(x));
  }
  return std::clamp(x, lo, hi);
}

double overlap(const DensityMatrix& psi0, const DensityMatrix& rho) {
  require_pure(psi0);
  return clamp_domain(trace(psi0.matrix() * rho.matrix()).real(), 0.0, 1.0, "fidelity");
}

double window_average(const std::vector<double>& samples, const Trajectory& window) {
  return simpson(samples, window.spacing()) / window.duration();
}

void check_window(const Trajectory& window) {
  if (window.size() < 3 || window.size() % 2 == 0) {
    throw Error(ErrorKind::BadGrid, "quadrature window needs an odd node count >= 3, got " +
                                        std::to_string(window.size()));
  }
}

std::array<double, 3> averaged_norms(const Trajectory& window) {
  std::array<std::vector<double>, 3> samples;
  for (auto& s : samples) s.reserve(window.size());
  for (const ComplexMatrix2& g : window.generators) {
    const SingularPair sv = singular_values(g);
    for (SchattenP p : kAllSchattenP) samples[index_of(p)].push_back(schatten_norm(sv, p));
  }
  std::array<double, 3> lambda{};
  for (SchattenP p : kAllSchattenP) {
    lambda[index_of(p)] = window_average(samples[index_of(p)], window);
  }
  const double l1 = lambda[index_of(SchattenP::one)];
  const double l2 = lambda[index_of(SchattenP::two)];
  const double linf = lambda[index_of(SchattenP::infinity)];
  const double slack = kDomainSlack * (1.0 + l1);
  if (linf > l2 + slack || l2 > l1 + slack) {
    throw Error(ErrorKind::NumericalDomain, "averaged Schatten norms violate ordering");
  }
  return lambda;
}

}  // namespace

double bures_angle(const DensityMatrix& psi0, const DensityMatrix& rho) {
  return std::acos(std::sqrt(overlap(psi0, rho)));
}

double bures_sin_sq(const DensityMatrix& psi0, const DensityMatrix& rho) {
  return 1.0 - overlap(psi0, rho);
}

double relative_purity(const DensityMatrix& rho_tau, const DensityMatrix& rho_end) {
  const double purity = rho_tau.purity();
  if (!(purity > kIdenticalStateThreshold)) {
    throw Error(ErrorKind::DegeneratePurity, "Tr(rho_tau^2) vanishes");
  }
  return trace(rho_end.matrix() * rho_tau.matrix()).real() / purity;
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const HermitianEigensystem es = hermitian_eigensystem(rho1.matrix() - rho2.matrix());
  return std::min(1.0, 0.5 * (std::abs(es.values[0]) + std::abs(es.values[1])));
}

double averaged_schatten(const Trajectory& traj, SchattenP p) {
  check_window(traj);
  std::vector<double> samples;
  samples.reserve(traj.size());
  for (const ComplexMatrix2& g : traj.generators) samples.push_back(schatten_norm(g, p));
  return window_average(samples, traj);
}

QslResult pure_bound(const Trajectory& window) {
  check_window(window);
  QslResult r;
  r.bound_kind = BoundKind::operator_norm;
  r.tau_d = window.duration();
  r.nodes = static_cast<int>(window.size());
  r.lambda = averaged_norms(window);
  r.distinguishability = bures_sin_sq(window.states.front(), window.states.back());

  if (r.distinguishability < kIdenticalStateThreshold) {
    r.tau_qsl = 0.0;
    return r;
  }
  double inverse = 0.0;
  for (double l : r.lambda) {
    if (!(l > 0.0)) throw Error(ErrorKind::NumericalDomain, "vanishing averaged generator norm");
    inverse = std::max(inverse, 1.0 / l);
  }
  r.tau_qsl = inverse * r.distinguishability;
  return r;
}

QslResult mixed_bound(const Trajectory& window) {
  check_window(window);
  const DensityMatrix& rho_tau = window.states.front();
  const DensityMatrix& rho_end = window.states.back();

  QslResult r;
  r.bound_kind = BoundKind::relative_purity;
  r.tau_d = window.duration();
  r.nodes = static_cast<int>(window.size());
  r.lambda = averaged_norms(window);

  // Singular values of a density matrix are its eigenvalues.
  const HermitianEigensystem es = hermitian_eigensystem(rho_tau.matrix());
  const double r1 = std::max(es.values[0], 0.0);
  const double r2 = std::max(es.values[1], 0.0);

  std::vector<double> weighted;
  std::vector<double> hs;
  weighted.reserve(window.size());
  hs.reserve(window.size());
  for (const ComplexMatrix2& g : window.generators) {
    const SingularPair s = singular_values(g);
    weighted.push_back(s.sigma1 * r1 + s.sigma2 * r2);
    hs.push_back(std::hypot(s.sigma1, s.sigma2));
  }
  MixedTerms terms{window_average(weighted, window), window_average(hs, window)};
  if (terms.weighted_sum > terms.hilbert_schmidt * (1.0 + kDomainSlack) + kDomainSlack) {
    throw Error(ErrorKind::NumericalDomain, "weighted singular sum exceeds Hilbert-Schmidt term");
  }
  r.mixed_terms = terms;

  const double purity = rho_tau.purity();
  if (!(purity > kIdenticalStateThreshold)) {
    throw Error(ErrorKind::DegeneratePurity, "Tr(rho_tau^2) vanishes");
  }
  // |f - 1| Tr(rho_tau^2) without the round trip through f.
  r.distinguishability = std::abs(trace(rho_end.matrix() * rho_tau.matrix()).real() - purity);

  if (r.distinguishability < kIdenticalStateThreshold) {
    r.tau_qsl = 0.0;
    return r;
  }
  if (!(terms.weighted_sum > 0.0) || !(terms.hilbert_schmidt > 0.0)) {
    throw Error(ErrorKind::NumericalDomain, "vanishing averaged generator norm");
  }
  r.tau_qsl =
      std::max(1.0 / terms.weighted_sum, 1.0 / terms.hilbert_schmidt) * r.distinguishability;
  return r;
}

QslResult qsl_pure(const DensityMatrix& psi0, const ModelParams& params, double tau_d, int nodes) {
  if (!(tau_d > 0.0)) throw Error(ErrorKind::InvalidParams, "tau_d must be positive");
  require_pure(psi0);
  return pure_bound(sample_trajectory(psi0, params, 0.0, tau_d, nodes));
}

QslResult qsl_mixed(const DensityMatrix& rho_tau, const ModelParams& params, double tau,
                    double tau_d, int nodes) {
  if (!(tau_d > 0.0)) throw Error(ErrorKind::InvalidParams, "tau_d must be positive");
  if (!(tau >= 0.0)) throw Error(ErrorKind::InvalidParams, "tau must be non-negative");
  Trajectory window = sample_trajectory(rho_tau, params, 0.0, tau_d, nodes);
  for (double& t : window.times) t += tau;
  return mixed_bound(window);
}

int default_nodes(double tau_d) {
  const int n = static_cast<int>(std::ceil(200.0 * tau_d)) + 1;
  return std::max(3, n % 2 == 0 ? n + 1 : n);
}

namespace {

double quadrature_change(const QslResult& coarse, const QslResult& fine) {
  double change = 0.0;
  for (std::size_t k = 0; k < coarse.lambda.size(); ++k) {
    change = std::max(change, std::abs(coarse.lambda[k] - fine.lambda[k]));
  }
  if (coarse.mixed_terms && fine.mixed_terms) {
    change = std::max({change,
                       std::abs(coarse.mixed_terms->weighted_sum - fine.mixed_terms->weighted_sum),
                       std::abs(coarse.mixed_terms->hilbert_schmidt -
                                fine.mixed_terms->hilbert_schmidt)});
  }
  return change;
}

}  // namespace

int max_nodes(int start) noexcept { return std::max(kMaxNodes, 16 * (start - 1) + 1); }

QslResult converged(const std::function<QslResult(int)>& evaluate, int nodes) {
  if (nodes < 3 || nodes % 2 == 0) {
    throw Error(ErrorKind::BadGrid, "node count must be odd and >= 3");
  }
  const int limit = max_nodes(nodes);
  QslResult coarse = evaluate(nodes);
  double change = 0.0;
  while (2 * nodes - 1 <= limit) {
    nodes = 2 * nodes - 1;
    QslResult fine = evaluate(nodes);
    change = quadrature_change(coarse, fine);
    if (change < kQuadratureTolerance) return fine;
    coarse = std::move(fine);
  }
  throw Error(ErrorKind::QuadratureNonconvergent,
              "Simpson refinement stalled at " + std::to_string(nodes) + " nodes (change " +
                  std::to_string(change) + ")");
}

}  // namespace qsllab
