#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qsllab/dynamics.hpp"
#include "qsllab/error.hpp"
#include "test_support.hpp"

using namespace qsllab;
using qsllab::testing::make_rng;
using qsllab::testing::min_eigenvalue;
using qsllab::testing::random_state;

namespace {

const Complex I{0.0, 1.0};

const double kPanel[] = {0.0, 0.4, 0.9, 0.999, 1.0, 1.001, 1.1, 2.5, -1.0, -2.5};

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no qsllab::Error thrown";
  return ErrorKind::IoError;
}

// Half the trace norm of the difference, from the Bloch components.
double trace_norm_half(const DensityMatrix& a, const DensityMatrix& b) {
  const ComplexMatrix2 d = a.matrix() - b.matrix();
  return std::sqrt(std::norm(d.a12) + std::pow(d.a11.real(), 2));
}

}  // namespace

TEST(ModelParams, RegimesAndValidation) {
  EXPECT_EQ(ModelParams::from_delta(0.4).regime(), Regime::pt_symmetric);
  EXPECT_EQ(ModelParams::from_delta(1.0).regime(), Regime::exceptional_point);
  EXPECT_EQ(ModelParams::from_delta(-1.0).regime(), Regime::exceptional_point);
  EXPECT_EQ(ModelParams::from_delta(1.001).regime(), Regime::pt_broken);
  EXPECT_EQ(to_string(Regime::pt_broken), "pt_broken");

  const ModelParams p(2.0, 1.0);
  EXPECT_DOUBLE_EQ(p.delta(), 0.5);
  EXPECT_NEAR(p.gamma1().imag(), std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(ModelParams::from_delta(2.5).gamma1().real(), std::sqrt(5.25), 1e-15);

  EXPECT_EQ(kind_of([] { ModelParams(0.0, 1.0); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { ModelParams(1.0, std::nan("")); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { ModelParams::from_delta(INFINITY); }), ErrorKind::InvalidParams);
}

TEST(DensityMatrix, FactoriesAndValidation) {
  EXPECT_EQ(DensityMatrix::excited().matrix(), ComplexMatrix2::diagonal(1.0, 0.0));
  EXPECT_EQ(DensityMatrix::ground().matrix(), ComplexMatrix2::diagonal(0.0, 1.0));
  EXPECT_EQ(DensityMatrix::mixed(0.6).matrix(), ComplexMatrix2::diagonal(0.7, 0.3));
  EXPECT_NEAR(DensityMatrix::mixed(0.6).purity(), 0.58, 1e-15);
  EXPECT_DOUBLE_EQ(DensityMatrix::excited().purity(), 1.0);
  EXPECT_EQ(DensityMatrix::from_bloch(0, 0, 1).matrix(), DensityMatrix::excited().matrix());

  EXPECT_EQ(kind_of([] { DensityMatrix::mixed(0.0); }), ErrorKind::InvalidState);
  EXPECT_EQ(kind_of([] { DensityMatrix::mixed(1.0); }), ErrorKind::InvalidState);
  EXPECT_EQ(kind_of([] { DensityMatrix::from_bloch(1.0, 0.1, 0.0); }), ErrorKind::InvalidState);
  EXPECT_EQ(kind_of([] { DensityMatrix({0.5, 0.1, 0.2, 0.5}); }), ErrorKind::InvalidState);
  EXPECT_EQ(kind_of([] { DensityMatrix({0.6, 0.0, 0.0, 0.6}); }), ErrorKind::InvalidState);
  EXPECT_EQ(kind_of([] { DensityMatrix({1.2, 0.0, 0.0, -0.2}); }), ErrorKind::InvalidState);
}

TEST(Hamiltonian, MatrixAndEigenvalues) {
  const ModelParams p = ModelParams::from_delta(0.5, 2.0);
  const ComplexMatrix2 h = hamiltonian(p);
  EXPECT_EQ(h, (ComplexMatrix2{-I, -2.0, -2.0, I}));

  // Characteristic polynomial of -omega [[i d, 1], [1, -i d]]: l^2 = omega^2 (1 - d^2).
  const auto [ep, em] = energy_eigenvalues(ModelParams::from_delta(2.5));
  EXPECT_NEAR(std::abs(ep - Complex(0.0, std::sqrt(5.25))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(em + Complex(0.0, std::sqrt(5.25))), 0.0, 1e-15);
  const auto [a, b] = energy_eigenvalues(ModelParams::from_delta(0.6));
  EXPECT_NEAR(a.real(), 0.8, 1e-15);
  EXPECT_NEAR(b.real(), -0.8, 1e-15);

  for (double d : kPanel) {
    const ModelParams q = ModelParams::from_delta(d);
    const ComplexMatrix2 hq = hamiltonian(q);
    const auto [e1, e2] = energy_eigenvalues(q);
    EXPECT_LT(std::abs(det(hq - e1 * ComplexMatrix2::identity())), 1e-14) << d;
    EXPECT_LT(std::abs(det(hq - e2 * ComplexMatrix2::identity())), 1e-14) << d;
  }
}

TEST(Propagator, NonUnitaryUnlessHermitian) {
  const ComplexMatrix2 u = propagator(ModelParams(1.0, 0.9), 1.0);
  EXPECT_GT(max_abs_diff(adjoint(u) * u, ComplexMatrix2::identity()), 0.1);

  const ComplexMatrix2 v = propagator(ModelParams(1.0, 0.0), 2.3);
  EXPECT_LT(max_abs_diff(adjoint(v) * v, ComplexMatrix2::identity()), 1e-15);
}

TEST(Evolution, InitialStateReturnedAtZero) {
  const DensityMatrix rho = DensityMatrix::mixed(0.3);
  for (double d : kPanel) {
    EXPECT_EQ(evolve_closed_form(rho, ModelParams::from_delta(d), 0.0).matrix(), rho.matrix());
  }
}

TEST(Evolution, RabiOscillation) {
  // delta = 0: rho11(t) = cos^2(omega t).
  const ModelParams p = ModelParams::from_delta(0.0, 1.5);
  for (double t : {0.0, 0.3, 1.0, 4.0}) {
    const DensityMatrix rho = evolve_closed_form(DensityMatrix::excited(), p, t);
    EXPECT_NEAR(rho.matrix().a11.real(), std::pow(std::cos(1.5 * t), 2), 1e-15);
  }
}

TEST(Evolution, ExceptionalPointPolynomial) {
  // At delta = 1, U|1> = (1 - t, i t) up to normalisation.
  const ModelParams ep = ModelParams::from_delta(1.0);
  for (double t : {0.5, 1.0, 3.0, 20.0}) {
    const double a = 1.0 - t, b = t;
    const double n = a * a + b * b;
    const DensityMatrix rho = evolve_closed_form(DensityMatrix::excited(), ep, t);
    EXPECT_NEAR(rho.matrix().a11.real(), a * a / n, 1e-14);
    EXPECT_LT(std::abs(rho.matrix().a12 - Complex(0.0, -a * b / n)), 1e-14);
  }
}

TEST(Evolution, RouteEquivalenceOnPanel) {
  for (double d : kPanel) {
    const ModelParams p = ModelParams::from_delta(d);
    for (const DensityMatrix& rho0 :
         {DensityMatrix::excited(), DensityMatrix::ground(), DensityMatrix::mixed(0.6),
          DensityMatrix::from_bloch(0.3, -0.5, 0.2)}) {
      for (double t : {0.1, 1.0, 5.0}) {
        const DensityMatrix a = evolve_closed_form(rho0, p, t);
        const DensityMatrix b = evolve_propagator(rho0, p, t);
        EXPECT_LT(max_abs_diff(a.matrix(), b.matrix()), 1e-10) << "delta " << d << " t " << t;
      }
    }
  }
}

TEST(Evolution, ClosedFormMatchesFineOde) {
  const ModelParams p = ModelParams::from_delta(2.5);
  const Trajectory traj = integrate_ode(DensityMatrix::excited(), p, 1.0, 100000);
  const DensityMatrix exact = evolve_closed_form(DensityMatrix::excited(), p, 1.0);
  EXPECT_LT(max_abs_diff(traj.states.back().matrix(), exact.matrix()), 1e-8);
  EXPECT_EQ(traj.size(), 100001u);
  EXPECT_DOUBLE_EQ(traj.times.back(), 1.0);
}

TEST(Evolution, LargeTimesStayFinite) {
  for (double d : {1.5, 2.5, 15.0, -15.0}) {
    const ModelParams p = ModelParams::from_delta(d);
    for (double t : {50.0, 500.0, 1e4}) {
      const DensityMatrix rho = evolve_closed_form(DensityMatrix::mixed(0.6), p, t);
      EXPECT_TRUE(is_finite(rho.matrix()));
    }
  }
  // gamma > 0 drains the excited level.
  const DensityMatrix late = evolve_closed_form(DensityMatrix::excited(), ModelParams::from_delta(15.0), 1e4);
  EXPECT_LT(excited_population(late), 0.01);
}

TEST(Evolution, ConservationOnRandomSamples) {
  auto rng = make_rng(11);
  std::uniform_real_distribution<double> delta(-5.0, 5.0);
  std::uniform_real_distribution<double> time(0.0, 20.0);
  for (int n = 0; n < 10000; ++n) {
    const ModelParams p = ModelParams::from_delta(delta(rng));
    const DensityMatrix rho0 = random_state(rng);
    const ComplexMatrix2 m = evolve_closed_form(rho0, p, time(rng)).matrix();
    ASSERT_NEAR(trace(m).real(), 1.0, 1e-10);
    ASSERT_LT(std::abs(trace(m).imag()), 1e-10);
    ASSERT_LT(hermiticity_defect(m), 1e-10);
    ASSERT_GE(min_eigenvalue(m), -1e-10);
  }
}

TEST(Evolution, PeriodicInPtSymmetricRegime) {
  for (double d : {0.0, 0.4, 0.9, -0.7}) {
    const ModelParams p = ModelParams::from_delta(d);
    const double period = std::numbers::pi / std::sqrt(1.0 - d * d);
    for (double t : {0.2, 1.3}) {
      const DensityMatrix rho0 = DensityMatrix::from_bloch(0.1, 0.4, -0.3);
      const DensityMatrix a = evolve_closed_form(rho0, p, t);
      const DensityMatrix b = evolve_closed_form(rho0, p, t + 3.0 * period);
      EXPECT_LT(max_abs_diff(a.matrix(), b.matrix()), 1e-10) << d;
    }
  }
}

TEST(Evolution, SigmaXSymmetry) {
  // H(-delta) = sigma_x H(delta) sigma_x.
  const ComplexMatrix2 sx = pauli_x();
  auto rng = make_rng(12);
  std::uniform_real_distribution<double> delta(-4.0, 4.0);
  std::uniform_real_distribution<double> time(0.0, 10.0);
  for (int n = 0; n < 2000; ++n) {
    const double d = delta(rng);
    const double t = time(rng);
    const DensityMatrix rho0 = random_state(rng);
    const DensityMatrix flipped(sx * rho0.matrix() * sx);
    const ComplexMatrix2 a = sx * evolve_closed_form(rho0, ModelParams::from_delta(d), t).matrix() * sx;
    const ComplexMatrix2 b = evolve_closed_form(flipped, ModelParams::from_delta(-d), t).matrix();
    ASSERT_LT(max_abs_diff(a, b), 1e-12) << d << " " << t;
  }
}

TEST(Generator, Examples) {
  const ComplexMatrix2 l0 = generator(DensityMatrix::excited(), ModelParams::from_delta(0.0));
  EXPECT_LT(max_abs_diff(l0, {0.0, -I, I, 0.0}), 1e-15);

  // Gamma part on diag(a, b): -2 gamma a + 2 gamma (a - b) a = -4 gamma a b.
  const ComplexMatrix2 l1 = generator(DensityMatrix::mixed(0.6), ModelParams(1e-20, 1.0));
  EXPECT_NEAR(l1.a11.real(), -4.0 * 0.7 * 0.3, 1e-15);
  EXPECT_NEAR(l1.a22.real(), 4.0 * 0.7 * 0.3, 1e-15);

  EXPECT_EQ(generator(DensityMatrix::from_bloch(0, 0, 0), ModelParams(1.0, 0.0)),
            ComplexMatrix2::zero());
}

TEST(Generator, MatchesFiniteDifference) {
  auto rng = make_rng(13);
  std::uniform_real_distribution<double> delta(-3.0, 3.0);
  std::uniform_real_distribution<double> time(0.0, 5.0);
  const double h = 1e-5;
  for (int n = 0; n < 200; ++n) {
    const ModelParams p = ModelParams::from_delta(delta(rng));
    const DensityMatrix rho0 = random_state(rng);
    const double t = time(rng) + h;
    const ComplexMatrix2 fd = (evolve_closed_form(rho0, p, t + h).matrix() -
                               evolve_closed_form(rho0, p, t - h).matrix()) /
                              Complex(2.0 * h);
    const ComplexMatrix2 l = generator(evolve_closed_form(rho0, p, t), p);
    ASSERT_LT(max_abs_diff(fd, l), 1e-7 * (1.0 + schatten_norm(l, SchattenP::infinity)));
  }
}

TEST(Generator, TracelessAndHermitian) {
  auto rng = make_rng(14);
  std::uniform_real_distribution<double> delta(-5.0, 5.0);
  for (int n = 0; n < 5000; ++n) {
    const ComplexMatrix2 l = generator(random_state(rng), ModelParams::from_delta(delta(rng)));
    ASSERT_LT(std::abs(trace(l)), 1e-13);
    ASSERT_LT(hermiticity_defect(l), 1e-13);
  }
}

TEST(Generator, VanishesAtPtBrokenSteadyState) {
  for (double d : {1.1, 2.5}) {
    const ModelParams p = ModelParams::from_delta(d);
    const ComplexMatrix2 l = generator(evolve_closed_form(DensityMatrix::excited(), p, 50.0), p);
    EXPECT_LT(schatten_norm(l, SchattenP::two), 1e-6) << d;
  }
}

TEST(Rk4, ConvergesToClosedForm) {
  const ModelParams p = ModelParams::from_delta(0.9);
  const DensityMatrix rho0 = DensityMatrix::mixed(0.6);
  const Trajectory traj = integrate_ode(rho0, p, 1.0, 10000);
  EXPECT_LT(max_abs_diff(traj.states.back().matrix(),
                         evolve_closed_form(rho0, p, 1.0).matrix()),
            1e-9);
}

TEST(Rk4, FourthOrderUnderHalving) {
  const ModelParams p = ModelParams::from_delta(0.9);
  const DensityMatrix rho0 = DensityMatrix::excited();
  const double t_end = 10.0;
  const ComplexMatrix2 exact = evolve_closed_form(rho0, p, t_end).matrix();
  const double e1 = max_abs_diff(integrate_ode(rho0, p, t_end, 200).states.back().matrix(), exact);
  const double e2 = max_abs_diff(integrate_ode(rho0, p, t_end, 400).states.back().matrix(), exact);
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 16.0 * 0.7);
  EXPECT_LT(ratio, 16.0 * 1.3);
}

TEST(Rk4, Validation) {
  const ModelParams p = ModelParams::from_delta(0.5);
  EXPECT_EQ(kind_of([&] { integrate_ode(DensityMatrix::excited(), p, 1.0, 0); }),
            ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { integrate_ode(DensityMatrix::excited(), p, -1.0, 10); }),
            ErrorKind::InvalidParams);
  // Steps far too coarse for a stiff rate: the explicit scheme blows up.
  EXPECT_EQ(kind_of([] {
              integrate_ode(DensityMatrix::mixed(0.5), ModelParams::from_delta(1e4), 100.0, 10);
            }),
            ErrorKind::StepOverflow);
}

TEST(SampleTrajectory, GridAndStates) {
  const ModelParams p = ModelParams::from_delta(0.4);
  const Trajectory traj = sample_trajectory(DensityMatrix::excited(), p, 2.0, 3.0, 11);
  ASSERT_EQ(traj.size(), 11u);
  EXPECT_DOUBLE_EQ(traj.times.front(), 2.0);
  EXPECT_DOUBLE_EQ(traj.times.back(), 3.0);
  EXPECT_DOUBLE_EQ(traj.spacing(), 0.1);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const DensityMatrix expected = evolve_closed_form(DensityMatrix::excited(), p, traj.times[k]);
    EXPECT_EQ(traj.states[k].matrix(), expected.matrix());
    EXPECT_EQ(traj.generators[k], generator(expected, p));
  }
  EXPECT_EQ(kind_of([&] { sample_trajectory(DensityMatrix::excited(), p, 0.0, 1.0, 10); }),
            ErrorKind::BadGrid);
  EXPECT_EQ(kind_of([&] { sample_trajectory(DensityMatrix::excited(), p, 0.0, 1.0, 1); }),
            ErrorKind::BadGrid);
  EXPECT_EQ(kind_of([&] { sample_trajectory(DensityMatrix::excited(), p, 1.0, 1.0, 3); }),
            ErrorKind::InvalidParams);
}

TEST(Population, ExcitedPopulation) {
  EXPECT_DOUBLE_EQ(excited_population(DensityMatrix::mixed(0.6)), 0.7);
  EXPECT_DOUBLE_EQ(excited_population(DensityMatrix::ground()), 0.0);
  const DensityMatrix rho = evolve_closed_form(DensityMatrix::excited(), ModelParams::from_delta(0.0), 1.0);
  EXPECT_NEAR(excited_population(rho), std::pow(std::cos(1.0), 2), 1e-15);
}

TEST(Hamiltonian, AntiHermitianPart) {
  for (double g : {0.0, 0.6, -2.0}) {
    const ComplexMatrix2 h = hamiltonian(ModelParams(1.0, g));
    EXPECT_LT(max_abs_diff(h - adjoint(h), Complex(0.0, -2.0 * g) * pauli_z()), 1e-15);
  }
  EXPECT_EQ(hamiltonian(ModelParams(1.0, 0.0)), (ComplexMatrix2{0.0, -1.0, -1.0, 0.0}));
}

TEST(Evolution, HermitianLimitPreservesSpectrum) {
  const ModelParams p(1.0, 0.0);
  const DensityMatrix rho0 = DensityMatrix::from_bloch(0.2, -0.1, 0.5);
  const double lo = min_eigenvalue(rho0.matrix());
  for (double t : {0.4, 3.0, 11.0}) {
    EXPECT_NEAR(min_eigenvalue(evolve_propagator(rho0, p, t).matrix()), lo, 1e-10);
  }
  EXPECT_EQ(max_abs_diff(propagator(p, 0.0), ComplexMatrix2::identity()), 0.0);
}

TEST(Evolution, PtBrokenStepDistanceShrinks) {
  // ||rho_t - rho_{t+1}||_1 after the initial transient.
  for (double d : {1.1, 2.5, -1.5}) {
    const ModelParams p = ModelParams::from_delta(d);
    double previous = INFINITY;
    for (int k = 2; k < 60; ++k) {
      const double step = 2.0 * trace_norm_half(evolve_closed_form(DensityMatrix::mixed(0.6), p, k),
                                                 evolve_closed_form(DensityMatrix::mixed(0.6), p, k + 1));
      if (step < 1e-13) break;
      ASSERT_LT(step, previous) << d << " " << k;
      previous = step;
    }
  }
}

TEST(SampleTrajectory, AgreesWithOdeNodes) {
  const ModelParams p = ModelParams::from_delta(1.1);
  const Trajectory ode = integrate_ode(DensityMatrix::mixed(0.6), p, 2.0, 20000);
  const Trajectory cf = sample_trajectory(DensityMatrix::mixed(0.6), p, 0.0, 2.0, 21);
  for (std::size_t k = 0; k < cf.size(); ++k) {
    EXPECT_LT(max_abs_diff(cf.states[k].matrix(), ode.states[1000 * k].matrix()), 1e-8) << k;
  }
}

TEST(Rk4, RecordedTracesAreOne) {
  const Trajectory traj = integrate_ode(DensityMatrix::excited(), ModelParams::from_delta(2.5), 3.0, 500);
  for (const DensityMatrix& s : traj.states) ASSERT_NEAR(trace(s.matrix()).real(), 1.0, 1e-12);
}
