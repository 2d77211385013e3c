#include "cli.hpp"

#include <fstream>
#include <functional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qsllab/dynamics.hpp"
#include "qsllab/error.hpp"
#include "qsllab/speed_limit.hpp"

namespace qsllab::cli {

namespace {

InitialState parse_initial(const std::string& text, bool allow_ground) {
  InitialState init;
  try {
    init = InitialState::parse(text);
  } catch (const Error& e) {
    throw UsageError(std::string("--initial: ") + e.what());
  }
  if (init.kind == InitialState::Kind::ground && !allow_ground) {
    throw UsageError("--initial: expected excited or mixed:<p>");
  }
  return init;
}

void check_nodes(const std::optional<int>& nodes) {
  if (nodes && (*nodes < 3 || *nodes % 2 == 0)) {
    throw UsageError("--nodes must be odd and >= 3");
  }
}

struct SweepFlags {
  std::optional<int> figure;
  std::optional<std::string> mode;
  std::optional<double> delta;
  std::optional<double> delta_min;
  std::optional<double> delta_max;
  std::optional<int> delta_steps;
  std::optional<double> tau_max;
  std::optional<int> tau_steps;
  std::optional<double> tau_d;
  std::optional<std::string> initial;
  std::optional<int> nodes;
  std::optional<double> omega;
};

void apply_overrides(SweepSpec& spec, const SweepFlags& f) {
  if (f.delta) spec.delta = *f.delta;
  if (f.delta_min) spec.delta_min = *f.delta_min;
  if (f.delta_max) spec.delta_max = *f.delta_max;
  if (f.delta_steps) spec.delta_steps = *f.delta_steps;
  if (f.tau_max) spec.tau_max = *f.tau_max;
  if (f.tau_steps) spec.tau_steps = *f.tau_steps;
  if (f.tau_d) spec.tau_d = *f.tau_d;
  if (f.initial) spec.initial = parse_initial(*f.initial, false);
  if (f.nodes) spec.nodes = *f.nodes;
  if (f.omega) spec.omega = *f.omega;
}

std::vector<SweepJob> resolve_sweeps(const SweepFlags& f,
                                     const std::optional<std::filesystem::path>& out) {
  if (f.figure && f.mode) throw UsageError("--figure and --mode are mutually exclusive");
  if (!f.figure && !f.mode) throw UsageError("sweep needs --figure <1..5> or --mode fig1|tau-scan");
  check_nodes(f.nodes);

  std::vector<SweepJob> jobs;
  if (f.figure) {
    if (*f.figure < 1 || *f.figure > 5) {
      throw UsageError(fmt::format("--figure must be in 1..5, got {}", *f.figure));
    }
    FigurePreset preset = figure_preset(*f.figure);
    if (*f.figure == 1) {
      if (f.delta) throw UsageError("--delta does not apply to figure 1; use --delta-min/--delta-max");
      SweepSpec spec = preset.specs.front();
      apply_overrides(spec, f);
      jobs.push_back({spec, out});
    } else {
      if (f.delta) preset.specs.resize(1);
      for (SweepSpec spec : preset.specs) {
        apply_overrides(spec, f);
        std::optional<std::filesystem::path> path;
        if (out) path = delta_output_path(*out, spec.delta);
        jobs.push_back({spec, path});
      }
    }
  } else {
    SweepSpec spec;
    if (*f.mode == "fig1") {
      spec.kind = SweepKind::fig1_delta_scan;
      if (f.delta) throw UsageError("--delta does not apply to --mode fig1");
    } else if (*f.mode == "tau-scan") {
      spec.kind = SweepKind::tau_scan;
      if (!f.delta) throw UsageError("--mode tau-scan requires --delta");
    } else {
      throw UsageError("--mode must be fig1 or tau-scan");
    }
    apply_overrides(spec, f);
    jobs.push_back({spec, out});
  }

  for (const SweepJob& job : jobs) {
    try {
      job.spec.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  return jobs;
}

}  // namespace

std::filesystem::path delta_output_path(const std::filesystem::path& out, double delta) {
  std::filesystem::path result = out;
  result.replace_filename(fmt::format("{}_delta{}{}", out.stem().string(), format_number(delta),
                                      out.extension().string()));
  return result;
}

CliConfig parse(std::span<const std::string> args) {
  CliConfig config;
  CLI::App app{"Quantum speed limits of a qubit with non-Hermitian detuning", "qsl-lab"};
  app.require_subcommand(1);

  std::string out_path;
  unsigned workers = 0;

  // evolve
  auto* evolve = app.add_subcommand("evolve", "Evolve a state and print its trajectory");
  std::string evolve_initial;
  std::string method = "closed";
  evolve->add_option("--delta", config.evolve.delta, "Non-Hermitian detuning gamma/omega")
      ->required();
  evolve->add_option("--omega", config.evolve.omega, "Coupling omega")->capture_default_str();
  evolve->add_option("--t-max", config.evolve.t_max, "Final time")->required();
  evolve->add_option("--steps", config.evolve.steps, "Number of time steps")->required();
  evolve->add_option("--initial", evolve_initial, "excited | ground | mixed:<p>")->required();
  evolve->add_option("--method", method, "closed | ode")->capture_default_str();
  evolve->add_option("--out", out_path, "Output CSV (default: standard output)");

  // qsl
  auto* qsl = app.add_subcommand("qsl", "Evaluate the speed limit for one window");
  std::string qsl_initial;
  qsl->add_option("--delta", config.qsl.delta, "Non-Hermitian detuning gamma/omega")->required();
  qsl->add_option("--tau", config.qsl.tau, "Initial time of the window")->required();
  qsl->add_option("--tau-d", config.qsl.tau_d, "Driving time")->required();
  qsl->add_option("--initial", qsl_initial, "excited | mixed:<p>")->required();
  qsl->add_option("--nodes", config.qsl.nodes, "Odd Simpson node count (default 200 tau_d + 1)");
  qsl->add_option("--out", out_path, "Output CSV (default: standard output)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Regenerate a figure table or a custom scan");
  SweepFlags flags;
  sweep->add_option("--figure", flags.figure, "Figure preset 1..5");
  sweep->add_option("--mode", flags.mode, "fig1 | tau-scan");
  sweep->add_option("--delta", flags.delta, "Detuning for tau scans");
  sweep->add_option("--delta-min", flags.delta_min, "Delta scan lower end (default -15)");
  sweep->add_option("--delta-max", flags.delta_max, "Delta scan upper end (default 15)");
  sweep->add_option("--delta-steps", flags.delta_steps, "Delta grid points (default 601)");
  sweep->add_option("--tau-max", flags.tau_max, "Upper end of the tau grid");
  sweep->add_option("--tau-steps", flags.tau_steps, "Tau grid points (default 400)");
  sweep->add_option("--tau-d", flags.tau_d, "Driving time (default 1)");
  sweep->add_option("--initial", flags.initial, "excited | mixed:<p>");
  sweep->add_option("--nodes", flags.nodes, "Odd Simpson node count (default 200 tau_d + 1)");
  sweep->add_option("--omega", flags.omega, "Coupling omega (default 1)");
  sweep->add_option("--workers", workers, "Worker threads (default: hardware concurrency)");
  sweep->add_option("--out", out_path, "Output CSV; figures 2-5 add a _delta<d> suffix");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    config.help_requested = true;
    config.help_text = app.help();
    return config;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (!out_path.empty()) config.out = out_path;
  config.workers = workers;

  if (evolve->parsed()) {
    config.subcommand = Subcommand::evolve;
    config.evolve.initial = parse_initial(evolve_initial, true);
    if (method == "closed") {
      config.evolve.method = EvolveMethod::closed;
    } else if (method == "ode") {
      config.evolve.method = EvolveMethod::ode;
    } else {
      throw UsageError("--method must be closed or ode");
    }
    if (!(config.evolve.t_max > 0.0)) throw UsageError("--t-max must be positive");
    if (config.evolve.steps < 1) throw UsageError("--steps must be >= 1");
    if (config.evolve.omega == 0.0) throw UsageError("--omega must be nonzero");
  } else if (qsl->parsed()) {
    config.subcommand = Subcommand::qsl;
    config.qsl.initial = parse_initial(qsl_initial, false);
    if (!(config.qsl.tau_d > 0.0)) throw UsageError("--tau-d must be positive");
    if (!(config.qsl.tau >= 0.0)) throw UsageError("--tau must be non-negative");
    check_nodes(config.qsl.nodes);
  } else {
    config.subcommand = Subcommand::sweep;
    config.sweeps = resolve_sweeps(flags, config.out);
  }
  return config;
}

namespace {

void write_evolution(const CliConfig& config, std::ostream& out) {
  const EvolveOptions& o = config.evolve;
  const ModelParams params = ModelParams::from_delta(o.delta, o.omega);
  const DensityMatrix rho0 = o.initial.state();

  Trajectory traj;
  if (o.method == EvolveMethod::ode) {
    traj = integrate_ode(rho0, params, o.t_max, o.steps);
  } else {
    for (int k = 0; k <= o.steps; ++k) {
      const double t = k == o.steps ? o.t_max : o.t_max * k / o.steps;
      traj.times.push_back(t);
      traj.states.push_back(evolve_closed_form(rho0, params, t));
      traj.generators.push_back(generator(traj.states.back(), params));
    }
  }

  std::string text = "t,rho11,rho12_re,rho12_im,rho22,population,generator_norm\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const ComplexMatrix2& m = traj.states[k].matrix();
    text += fmt::format("{},{},{},{},{},{},{}\n", format_number(traj.times[k]),
                        format_number(m.a11.real()), format_number(m.a12.real()),
                        format_number(m.a12.imag()), format_number(m.a22.real()),
                        format_number(excited_population(traj.states[k])),
                        format_number(schatten_norm(traj.generators[k], SchattenP::infinity)));
  }
  out << text;
}

void write_to(const std::optional<std::filesystem::path>& path, std::ostream& fallback,
              const std::function<void(std::ostream&)>& writer) {
  if (!path) {
    writer(fallback);
    if (!fallback) throw Error(ErrorKind::IoError, "failed writing standard output");
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + path->string());
  writer(file);
  file.close();
  if (!file) throw Error(ErrorKind::IoError, "failed writing " + path->string());
}

}  // namespace

void run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.subcommand) {
    case Subcommand::evolve:
      write_to(config.out, out, [&](std::ostream& os) { write_evolution(config, os); });
      break;
    case Subcommand::qsl: {
      SweepSpec spec;
      spec.kind = SweepKind::tau_scan;
      spec.delta = config.qsl.delta;
      spec.tau_d = config.qsl.tau_d;
      spec.initial = config.qsl.initial;
      spec.nodes = config.qsl.nodes;
      const SweepRow row = evaluate_tau_point(spec, config.qsl.tau);
      write_to(config.out, out, [&](std::ostream& os) { emit_csv(std::span(&row, 1), os); });
      break;
    }
    case Subcommand::sweep:
      for (const SweepJob& job : config.sweeps) {
        const std::vector<SweepRow> rows = run_sweep(job.spec, config.workers);
        write_to(job.out, out, [&](std::ostream& os) { emit_csv(rows, os); });
        err << fmt::format("{} rows ({}, delta {}) -> {}\n", rows.size(),
                           job.spec.kind == SweepKind::fig1_delta_scan ? "delta scan" : "tau scan",
                           job.spec.kind == SweepKind::fig1_delta_scan
                               ? fmt::format("{}..{}", job.spec.delta_min, job.spec.delta_max)
                               : format_number(job.spec.delta),
                           job.out ? job.out->string() : "stdout");
      }
      break;
  }
}

int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CliConfig config;
  try {
    config = parse(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  if (config.help_requested) {
    out << config.help_text;
    return 0;
  }
  try {
    run(config, out, err);
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qsllab::cli
