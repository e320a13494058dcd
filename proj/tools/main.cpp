// wkbsplit command-line driver.
//
//   wkbsplit sweep --config PATH [--output PATH]
//   wkbsplit run --scheme K --eps E --nx N --nt M --tfinal T [--samples K]
//   wkbsplit selftest

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wkbsplit/composition.hpp"
#include "wkbsplit/diagnostics.hpp"
#include "wkbsplit/errors.hpp"
#include "wkbsplit/harness.hpp"
#include "wkbsplit/problem.hpp"

int run_selftest();

namespace {

using namespace wkbsplit;

int cmd_sweep(const std::string& config_path, const std::string& output) {
  SweepConfig cfg = load_config(config_path);
  if (!output.empty()) cfg.output = output;
  const auto records = run_convergence_sweep(cfg);
  write_records(records, cfg.output);
  std::size_t diverged = 0;
  for (const auto& r : records) diverged += r.status != RecordStatus::ok;
  std::cout << "wrote " << records.size() << " records to " << cfg.output;
  if (diverged) std::cout << " (" << diverged << " diverged)";
  std::cout << '\n';
  return 0;
}

void print_report(std::size_t step, double t, const ConservedReport& r) {
  std::printf("%8zu  %.6f  %.15e  %.15e  %.15e\n", step, t, r.mass, r.energy, r.momentum);
}

int cmd_run(const std::string& scheme_name, double eps, std::size_t nx, std::size_t nt,
            double t_final, std::size_t samples) {
  const SchemeKind kind = parse_scheme_kind(scheme_name);
  const InitialData data = InitialData::caustic_benchmark();
  const PeriodicGrid grid(nx);
  const Potential potential = data.sampled_potential(grid);
  const SchemeSpec spec{kind, eps, potential};
  const TimeMarch march = TimeMarch::to_final_time(t_final, nt);
  const std::size_t every = std::max<std::size_t>(1, nt / std::max<std::size_t>(samples, 1));

  std::printf("# scheme=%s eps=%.17g nx=%zu nt=%zu t_final=%.17g\n",
              std::string(to_string(kind)).c_str(), eps, nx, nt, t_final);
  std::printf("#   step  time      mass                   energy                 momentum\n");
  if (is_wkb_scheme(kind)) {
    const WkbState u0 = data.wkb_state(grid);
    print_report(0, 0.0, conserved_quantities(u0, potential, eps));
    evolve(u0, spec, march, [&](std::size_t step, double t, const WkbState& u) {
      if ((step + 1) % every == 0 || step + 1 == nt) {
        print_report(step + 1, t, conserved_quantities(u, potential, eps));
      }
    });
  } else {
    const WaveState w0 = data.wave_state(grid, eps);
    print_report(0, 0.0, conserved_quantities(w0, potential));
    evolve(w0, spec, march, [&](std::size_t step, double t, const WaveState& w) {
      if ((step + 1) % every == 0 || step + 1 == nt) {
        print_report(step + 1, t, conserved_quantities(w, potential));
      }
    });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniformly accurate splitting schemes for the semiclassical Schroedinger equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  auto* sweep = app.add_subcommand("sweep", "Run a convergence sweep and write a CSV");
  sweep->add_option("--config", config_path, "Sweep configuration file")->required();
  sweep->add_option("--output", output, "Override the CSV output path");

  std::string scheme = "strang_palindromic";
  double eps = 0.25;
  std::size_t nx = 256;
  std::size_t nt = 512;
  double t_final = 0.2;
  std::size_t samples = 10;
  auto* run = app.add_subcommand("run", "Evolve one trajectory and print conserved quantities");
  run->add_option("--scheme", scheme, "lie_1234, strang_palindromic, tssp_strang, tssp_yoshida4");
  run->add_option("--eps", eps, "Semiclassical parameter");
  run->add_option("--nx", nx, "Grid points (even, >= 4)");
  run->add_option("--nt", nt, "Number of time steps");
  run->add_option("--tfinal", t_final, "Final time");
  run->add_option("--samples", samples, "Number of report lines");

  auto* selftest = app.add_subcommand("selftest", "Check the core invariants");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return cmd_sweep(config_path, output);
    if (*run) return cmd_run(scheme, eps, nx, nt, t_final, samples);
    if (*selftest) return run_selftest();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
