// Quick invariant checks runnable from an installed binary, without the test
// suite. Each line reports one property.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "wkbsplit/composition.hpp"
#include "wkbsplit/diagnostics.hpp"
#include "wkbsplit/problem.hpp"

namespace {

using namespace wkbsplit;

struct Check {
  std::string name;
  std::function<bool(std::string&)> body;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double mass(const ComplexField& a) {
  double m = 0.0;
  for (const Complex& z : a.values()) m += std::norm(z);
  return a.grid().dx() * m;
}

bool dft_round_trip(std::string& detail) {
  const PeriodicGrid grid(64);
  const ComplexField f = ComplexField::sample(
      grid, [](double x) { return Complex{std::exp(std::sin(x)), std::cos(3 * x)}; });
  const ComplexField g = inverse_dft(forward_dft(f));
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) err = std::max(err, std::abs(f[j] - g[j]));
  detail = "max error " + sci(err);
  return err < 1e-13;
}

bool wkb_mass(std::string& detail) {
  const InitialData data = InitialData::caustic_benchmark();
  const PeriodicGrid grid(128);
  double worst = 0.0;
  for (SchemeKind kind : {SchemeKind::lie_1234, SchemeKind::strang_palindromic}) {
    for (double eps : {1.0, 1.0 / 64, 0.0}) {
      const SchemeSpec spec{kind, eps, data.sampled_potential(grid)};
      const WkbState u0 = data.wkb_state(grid);
      const double m0 = mass(u0.amplitude());
      const WkbState u = evolve(u0, spec, TimeMarch::to_final_time(0.2, 64)).state;
      worst = std::max(worst, std::abs(mass(u.amplitude()) - m0) / m0);
    }
  }
  detail = "max relative drift " + sci(worst);
  return worst < 1e-12;
}

bool tssp_mass(std::string& detail) {
  const InitialData data = InitialData::caustic_benchmark();
  const PeriodicGrid grid(256);
  const double eps = 1.0 / 16;
  const SchemeSpec spec{SchemeKind::tssp_yoshida4, eps, data.sampled_potential(grid)};
  const WaveState w0 = data.wave_state(grid, eps);
  const double m0 = mass(w0.psi());
  const WaveState w = evolve(w0, spec, TimeMarch::to_final_time(0.2, 128)).state;
  const double drift = std::abs(mass(w.psi()) - m0) / m0;
  detail = "relative drift " + sci(drift);
  return drift < 1e-12;
}

bool lie_first_order(std::string& detail) {
  const InitialData data = InitialData::caustic_benchmark();
  const PeriodicGrid grid(64);
  const double eps = 1.0 / 16;
  const SchemeSpec lie{SchemeKind::lie_1234, eps, data.sampled_potential(grid)};
  SchemeSpec strang = lie;
  strang.kind = SchemeKind::strang_palindromic;
  const WkbState u0 = data.wkb_state(grid);
  const WkbState ref = evolve(u0, strang, TimeMarch::to_final_time(0.2, 1024)).state;
  auto error = [&](std::size_t nt) {
    const WkbState u = evolve(u0, lie, TimeMarch::to_final_time(0.2, nt)).state;
    double num = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      num += std::pow(u.phase()[j] - ref.phase()[j], 2) +
             std::norm(u.amplitude()[j] - ref.amplitude()[j]);
    }
    return std::sqrt(num);
  };
  const double ratio = error(32) / error(64);
  detail = "error ratio per halving " + sci(ratio);
  return ratio > 1.8 && ratio < 2.2;
}

bool yoshida_conditions(std::string& detail) {
  const auto c = yoshida_coefficients();
  const double sum = 2 * c.outer + c.inner;
  const double cubes = 2 * c.outer * c.outer * c.outer + c.inner * c.inner * c.inner;
  detail = "sum - 1 = " + sci(sum - 1) + ", cubic = " + sci(cubes);
  return std::abs(sum - 1) < 1e-15 && std::abs(cubes) < 1e-14;
}

}  // namespace

int run_selftest() {
  const std::vector<Check> checks{{"dft round trip", dft_round_trip},
                                  {"wkb schemes preserve mass", wkb_mass},
                                  {"tssp preserves mass", tssp_mass},
                                  {"lie is first order", lie_first_order},
                                  {"triple-jump order conditions", yoshida_conditions}};
  int failures = 0;
  for (const Check& check : checks) {
    std::string detail;
    bool ok = false;
    try {
      ok = check.body(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    failures += !ok;
    std::printf("%s  %s (%s)\n", ok ? "PASS" : "FAIL", check.name.c_str(), detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
