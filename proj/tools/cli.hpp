#pragma once

// qsl-lab command line: argument parsing, validation and dispatch.
//
//   evolve --delta <f> [--omega <f>] --t-max <f> --steps <u>
//          --initial excited|ground|mixed:<p> [--method closed|ode] [--out <path>]
//   qsl    --delta <f> --tau <f> --tau-d <f> --initial excited|mixed:<p>
//          [--nodes <odd u>] [--out <path>]
//   sweep  --figure <1..5> | --mode fig1|tau-scan ... [--out <path>]
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsllab/sweep.hpp"

namespace qsllab::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { evolve, qsl, sweep };
enum class EvolveMethod { closed, ode };

struct EvolveOptions {
  double delta = 0.0;
  double omega = 1.0;
  double t_max = 0.0;
  int steps = 0;
  InitialState initial;
  EvolveMethod method = EvolveMethod::closed;
};

struct QslOptions {
  double delta = 0.0;
  double tau = 0.0;
  double tau_d = 1.0;
  InitialState initial;
  std::optional<int> nodes;
};

struct SweepJob {
  SweepSpec spec;
  std::optional<std::filesystem::path> out;
};

struct CliConfig {
  Subcommand subcommand = Subcommand::sweep;
  EvolveOptions evolve;
  QslOptions qsl;
  std::vector<SweepJob> sweeps;
  unsigned workers = 0;
  std::optional<std::filesystem::path> out;
  bool help_requested = false;
  std::string help_text;
};

/// Parses arguments (program name excluded). Throws UsageError.
CliConfig parse(std::span<const std::string> args);

/// "<stem>_delta<d><ext>" next to `out`.
std::filesystem::path delta_output_path(const std::filesystem::path& out, double delta);

/// Runs a parsed configuration. CSV goes to `out` (or the --out files),
/// progress to `err`. Domain errors propagate as qsllab::Error.
void run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse + run with the exit-code contract applied.
int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qsllab::cli
