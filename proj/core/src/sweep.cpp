#include "qsllab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "qsllab/error.hpp"

namespace qsllab {

// ---------------------------------------------------------------------------
// InitialState

InitialState InitialState::parse(std::string_view text) {
  if (text == "excited") return excited();
  if (text == "ground") return ground();
  constexpr std::string_view prefix = "mixed:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view number = text.substr(prefix.size());
    double p = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), p);
    if (ec != std::errc{} || ptr != number.data() + number.size()) {
      throw Error(ErrorKind::InvalidSpec, "cannot parse mixing parameter in '" +
                                              std::string(text) + "'");
    }
    if (!(p > 0.0 && p < 1.0)) {
      throw Error(ErrorKind::InvalidSpec, "mixing parameter p must lie in (0, 1), got " +
                                              std::string(number));
    }
    return mixed(p);
  }
  throw Error(ErrorKind::InvalidSpec,
              "initial state must be excited, ground or mixed:<p>, got '" + std::string(text) +
                  "'");
}

DensityMatrix InitialState::state() const {
  switch (kind) {
    case Kind::excited: return DensityMatrix::excited();
    case Kind::ground: return DensityMatrix::ground();
    case Kind::mixed: return DensityMatrix::mixed(p);
  }
  return DensityMatrix::excited();
}

std::string InitialState::label() const {
  switch (kind) {
    case Kind::excited: return "excited";
    case Kind::ground: return "ground";
    case Kind::mixed: return fmt::format("mixed:{}", p);
  }
  return "excited";
}

// ---------------------------------------------------------------------------
// SweepSpec

void SweepSpec::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidSpec, why); };
  if (!std::isfinite(omega) || omega == 0.0) fail("omega must be finite and nonzero");
  if (!(tau_d > 0.0) || !std::isfinite(tau_d)) fail("tau_d must be positive");
  if (initial.kind == InitialState::Kind::mixed && !(initial.p > 0.0 && initial.p < 1.0)) {
    fail("mixing parameter p must lie in (0, 1)");
  }
  if (initial.kind == InitialState::Kind::ground) fail("sweeps start from excited or mixed:<p>");
  if (nodes && (*nodes < 3 || *nodes % 2 == 0)) fail("nodes must be odd and >= 3");

  if (kind == SweepKind::fig1_delta_scan) {
    if (initial.kind != InitialState::Kind::excited) fail("delta scan requires excited start");
    if (delta_steps < 2) fail("delta_steps must be >= 2");
    if (!(delta_max > delta_min) || !std::isfinite(delta_min) || !std::isfinite(delta_max)) {
      fail("delta range must satisfy delta_min < delta_max");
    }
  } else {
    if (!std::isfinite(delta)) fail("delta must be finite");
    if (tau_steps < 2) fail("tau_steps must be >= 2");
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) fail("tau_max must be positive");
  }
}

int SweepSpec::quadrature_nodes() const { return nodes.value_or(default_nodes(tau_d)); }

double grid_point(double lo, double hi, int steps, int k) {
  if (k == steps - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

// ---------------------------------------------------------------------------
// Point evaluations

SweepRow evaluate_delta_point(const SweepSpec& spec, double delta) {
  const ModelParams params = ModelParams::from_delta(delta, spec.omega);
  const DensityMatrix rho0 = spec.initial.state();
  const QslResult bound = converged(
      [&](int n) { return pure_bound(sample_trajectory(rho0, params, 0.0, spec.tau_d, n)); },
      spec.quadrature_nodes());
  const DensityMatrix rho_end = evolve_closed_form(rho0, params, spec.tau_d);

  SweepRow row;
  row.delta = delta;
  row.tau_qsl = bound.tau_qsl;
  row.population = excited_population(rho_end);
  row.trace_distance = trace_distance(rho0, rho_end);
  row.relative_purity = relative_purity(rho0, rho_end);
  row.lambda_inf = bound.lambda_p(SchattenP::infinity);
  row.regime = params.regime();
  return row;
}

SweepRow evaluate_tau_point(const SweepSpec& spec, double tau) {
  const ModelParams params = ModelParams::from_delta(spec.delta, spec.omega);
  const DensityMatrix rho0 = spec.initial.state();
  const bool pure_start = spec.initial.kind != InitialState::Kind::mixed && tau == 0.0;
  const QslResult bound = converged(
      [&](int n) {
        const Trajectory window = sample_trajectory(rho0, params, tau, tau + spec.tau_d, n);
        return pure_start ? pure_bound(window) : mixed_bound(window);
      },
      spec.quadrature_nodes());
  const DensityMatrix rho_tau = evolve_closed_form(rho0, params, tau);
  const DensityMatrix rho_end = evolve_closed_form(rho0, params, tau + spec.tau_d);

  SweepRow row;
  row.delta = spec.delta;
  row.tau = tau;
  row.tau_qsl = bound.tau_qsl;
  row.population = excited_population(rho_tau);
  row.trace_distance = trace_distance(rho_tau, rho_end);
  row.relative_purity = relative_purity(rho_tau, rho_end);
  row.lambda_inf = bound.lambda_p(SchattenP::infinity);
  row.regime = params.regime();
  return row;
}

// ---------------------------------------------------------------------------
// Drivers

namespace {

template <class Fn>
std::vector<SweepRow> parallel_rows(int count, unsigned workers, Fn&& fn) {
  std::vector<SweepRow> rows(static_cast<std::size_t>(count));
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(count));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int k = next++; k < count; k = next++) {
      try {
        rows[static_cast<std::size_t>(k)] = fn(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace

std::vector<SweepRow> run_fig1(const SweepSpec& spec, unsigned workers) {
  if (spec.kind != SweepKind::fig1_delta_scan) {
    throw Error(ErrorKind::InvalidSpec, "run_fig1 needs a delta-scan spec");
  }
  spec.validate();
  return parallel_rows(spec.delta_steps, workers, [&](int k) {
    return evaluate_delta_point(spec,
                                grid_point(spec.delta_min, spec.delta_max, spec.delta_steps, k));
  });
}

std::vector<SweepRow> run_tau_scan(const SweepSpec& spec, unsigned workers) {
  if (spec.kind != SweepKind::tau_scan) {
    throw Error(ErrorKind::InvalidSpec, "run_tau_scan needs a tau-scan spec");
  }
  spec.validate();
  return parallel_rows(spec.tau_steps, workers, [&](int k) {
    return evaluate_tau_point(spec, grid_point(0.0, spec.tau_max, spec.tau_steps, k));
  });
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers) {
  return spec.kind == SweepKind::fig1_delta_scan ? run_fig1(spec, workers)
                                                 : run_tau_scan(spec, workers);
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  return fmt::format("{:.12g}", value);
}

void emit_csv(std::span<const SweepRow> rows, std::ostream& out) {
  if (rows.empty()) throw Error(ErrorKind::InvalidSpec, "no rows to emit");
  std::string text;
  text.reserve(96 * (rows.size() + 1));
  text += kCsvHeader;
  text += '\n';
  for (const SweepRow& r : rows) {
    text += format_number(r.delta);
    text += ',';
    if (r.tau) text += format_number(*r.tau);
    for (double v : {r.tau_qsl, r.population, r.trace_distance, r.relative_purity, r.lambda_inf}) {
      text += ',';
      text += format_number(v);
    }
    text += ',';
    text += to_string(r.regime);
    text += '\n';
  }
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "failed writing CSV stream");
}

void emit_csv(std::span<const SweepRow> rows, const std::filesystem::path& destination) {
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + destination.string());
  emit_csv(rows, file);
  file.close();
  if (!file) throw Error(ErrorKind::IoError, "failed writing " + destination.string());
}

// ---------------------------------------------------------------------------
// Figure presets

FigurePreset figure_preset(int figure) {
  FigurePreset preset{figure, {}};
  auto tau_scans = [&](std::initializer_list<double> deltas, double tau_max, InitialState init) {
    for (double delta : deltas) {
      SweepSpec spec;
      spec.kind = SweepKind::tau_scan;
      spec.delta = delta;
      spec.tau_max = tau_max;
      spec.initial = init;
      preset.specs.push_back(spec);
    }
  };
  switch (figure) {
    case 1: preset.specs.push_back(SweepSpec{}); break;
    case 2: tau_scans({0.4, 0.9}, 15.0, InitialState::excited()); break;
    case 3: tau_scans({1.1, 2.5}, 15.0, InitialState::excited()); break;
    case 4: tau_scans({0.6, 0.9}, 20.0, InitialState::mixed(0.6)); break;
    case 5: tau_scans({1.0, -1.0}, 20.0, InitialState::mixed(0.6)); break;
    default: throw Error(ErrorKind::InvalidSpec, fmt::format("no preset for figure {}", figure));
  }
  return preset;
}

}  // namespace qsllab
