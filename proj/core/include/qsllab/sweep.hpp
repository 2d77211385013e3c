#pragma once

// Parameter sweeps over detuning (delta) or initial time (tau), emitted as
// deterministic CSV tables.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsllab/dynamics.hpp"
#include "qsllab/speed_limit.hpp"

namespace qsllab {

struct InitialState {
  enum class Kind { excited, ground, mixed };

  Kind kind = Kind::excited;
  double p = 0.0;  // mixing parameter, Kind::mixed only

  static InitialState excited() { return {Kind::excited, 0.0}; }
  static InitialState ground() { return {Kind::ground, 0.0}; }
  static InitialState mixed(double p) { return {Kind::mixed, p}; }

  /// Parses "excited", "ground" or "mixed:<p>". Throws Error{InvalidSpec}.
  static InitialState parse(std::string_view text);

  DensityMatrix state() const;
  std::string label() const;
};

enum class SweepKind { fig1_delta_scan, tau_scan };

struct SweepSpec {
  SweepKind kind = SweepKind::fig1_delta_scan;

  double delta = 0.0;  // tau_scan
  double delta_min = -15.0;
  double delta_max = 15.0;
  int delta_steps = 601;

  double tau_d = 1.0;
  double tau_max = 15.0;
  int tau_steps = 400;

  InitialState initial = InitialState::excited();
  std::optional<int> nodes;  // defaults to default_nodes(tau_d)
  double omega = 1.0;

  /// Throws Error{InvalidSpec}.
  void validate() const;
  int quadrature_nodes() const;
};

struct SweepRow {
  double delta = 0.0;
  std::optional<double> tau;  // empty for delta scans
  double tau_qsl = 0.0;
  double population = 0.0;
  double trace_distance = 0.0;
  double relative_purity = 0.0;
  double lambda_inf = 0.0;
  Regime regime = Regime::pt_symmetric;
};

/// Value of grid point k of `steps` equally spaced points on [lo, hi].
double grid_point(double lo, double hi, int steps, int k);

/// One delta point: pure bound over [0, tau_d], population p(tau_d).
SweepRow evaluate_delta_point(const SweepSpec& spec, double delta);

/// One tau point: window [tau, tau + tau_d] of a single evolution from t = 0.
/// The pure bound is used for an excited start at tau == 0, the relative
/// purity bound otherwise. Population is p(tau).
SweepRow evaluate_tau_point(const SweepSpec& spec, double tau);

/// `workers` == 0 uses the hardware concurrency. Rows are ordered by the grid
/// key regardless of scheduling.
std::vector<SweepRow> run_fig1(const SweepSpec& spec, unsigned workers = 0);
std::vector<SweepRow> run_tau_scan(const SweepSpec& spec, unsigned workers = 0);
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers = 0);

inline constexpr std::string_view kCsvHeader =
    "delta,tau,tau_qsl,population,trace_distance,relative_purity,lambda_inf,regime";

/// 12 significant digits, '.' separator, '\n' line endings.
std::string format_number(double value);

void emit_csv(std::span<const SweepRow> rows, std::ostream& out);
/// Throws Error{IoError} when the destination cannot be written.
void emit_csv(std::span<const SweepRow> rows, const std::filesystem::path& destination);

struct FigurePreset {
  int figure = 0;
  std::vector<SweepSpec> specs;  // one per delta for tau scans
};

/// Captions of figures 1..5. Throws Error{InvalidSpec} for other numbers.
FigurePreset figure_preset(int figure);

}  // namespace qsllab
