#include "wkbsplit/diagnostics.hpp"

#include <cmath>
#include <string>

#include "wkbsplit/errors.hpp"

namespace wkbsplit {

namespace {

const Complex kI{0.0, 1.0};

void require_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* what) {
  if (!(a == b)) throw InvalidInput(std::string(what) + ": grid mismatch");
}

void require_index(int i) {
  if (i < 1 || i > 4) throw InvalidInput("generator index must be 1..4, got " + std::to_string(i));
}

// Spectral derivatives of one WKB state, computed once per use.
struct Derivatives {
  std::vector<double> s1, s2;
  std::vector<Complex> a1, a2;

  explicit Derivatives(const WkbState& u)
      : s1(spectral_derivative(u.phase(), 1).values()),
        s2(spectral_derivative(u.phase(), 2).values()),
        a1(spectral_derivative(u.amplitude(), 1).values()),
        a2(spectral_derivative(u.amplitude(), 2).values()) {}
};

WkbState make_tangent(const PeriodicGrid& grid, std::vector<double> s, std::vector<Complex> a) {
  return WkbState(RealField(grid, std::move(s)), ComplexField(grid, std::move(a)));
}

WkbState subtract(const WkbState& x, const WkbState& y) {
  const std::size_t n = x.grid().size();
  std::vector<double> s(n);
  std::vector<Complex> a(n);
  for (std::size_t j = 0; j < n; ++j) {
    s[j] = x.phase()[j] - y.phase()[j];
    a[j] = x.amplitude()[j] - y.amplitude()[j];
  }
  return make_tangent(x.grid(), std::move(s), std::move(a));
}

}  // namespace

// ---------------------------------------------------------------- invariants

ConservedReport conserved_quantities(const WaveState& w, const Potential& potential) {
  require_grid(w.grid(), potential.grid(), "conserved_quantities");
  const double eps = w.eps();
  const double dx = w.grid().dx();
  const auto& psi = w.psi().values();
  const auto dpsi = spectral_derivative(w.psi(), 1).values();
  const auto& v = potential.samples().values();
  double mass = 0.0;
  double energy = 0.0;
  double momentum = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double rho = std::norm(psi[j]);
    mass += rho;
    energy += eps * eps * std::norm(dpsi[j]) + v[j] * rho;
    momentum += (std::conj(psi[j]) * dpsi[j]).imag();
  }
  return {dx * mass, dx * energy, eps * dx * momentum, Formulation::wave};
}

ConservedReport conserved_quantities(const WkbState& u, const Potential& potential, double eps) {
  require_grid(u.grid(), potential.grid(), "conserved_quantities");
  if (!std::isfinite(eps) || eps < 0.0) throw InvalidInput("conserved_quantities: eps must be >= 0");
  const double dx = u.grid().dx();
  const auto& a = u.amplitude().values();
  const auto da = spectral_derivative(u.amplitude(), 1).values();
  const auto ds = spectral_derivative(u.phase(), 1).values();
  const auto& v = potential.samples().values();
  double mass = 0.0;
  double energy = 0.0;
  double momentum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Complex g = eps * da[j] + kI * a[j] * ds[j];
    const double rho = std::norm(a[j]);
    mass += rho;
    energy += std::norm(g) + v[j] * rho;
    momentum += (std::conj(a[j]) * g).imag();
  }
  return {dx * mass, dx * energy, dx * momentum, Formulation::wkb};
}

double hamiltonian(const WaveState& w, const Potential& potential) {
  require_grid(w.grid(), potential.grid(), "hamiltonian");
  const double eps = w.eps();
  const auto& psi = w.psi().values();
  const auto dpsi = spectral_derivative(w.psi(), 1).values();
  const auto& v = potential.samples().values();
  double sum = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    sum += 0.5 * eps * eps * std::norm(dpsi[j]) + v[j] * std::norm(psi[j]);
  }
  return w.grid().dx() * sum;
}

// ---------------------------------------------------------------- errors

ErrorTriple error_metrics(const WaveState& ref_wave, const WkbState& ref_wkb,
                          const WkbState& test, double eps) {
  require_grid(ref_wave.grid(), test.grid(), "error_metrics");
  require_grid(ref_wkb.grid(), test.grid(), "error_metrics");
  const PeriodicGrid& grid = test.grid();
  const std::size_t n = grid.size();

  const RealField rho_ref = ref_wave.psi().modulus_squared();
  const RealField rho = test.amplitude().modulus_squared();
  std::vector<double> rho_diff(n);
  for (std::size_t j = 0; j < n; ++j) rho_diff[j] = rho_ref[j] - rho[j];
  const double rho_den = l1_norm(rho_ref);
  if (!(rho_den > 0.0)) throw DegenerateReference("error_metrics: reference density vanishes");
  const double err_rho = l1_norm(RealField(grid, std::move(rho_diff))) / rho_den;

  const WaveState psi = reconstruct_wave(test, eps);
  std::vector<Complex> psi_diff(n);
  for (std::size_t j = 0; j < n; ++j) psi_diff[j] = ref_wave.psi()[j] - psi.psi()[j];
  const double psi_den = l2_norm(ref_wave.psi());
  if (!(psi_den > 0.0)) throw DegenerateReference("error_metrics: reference wave vanishes");
  const double err_psi = l2_norm(ComplexField(grid, std::move(psi_diff))) / psi_den;

  const WkbState diff = subtract(ref_wkb, test);
  const double ds = l2_norm(diff.phase());
  const double da = l2_norm(diff.amplitude());
  const double s_ref = l2_norm(ref_wkb.phase());
  const double a_ref = l2_norm(ref_wkb.amplitude());
  const double sa_den = s_ref * s_ref + a_ref * a_ref;
  if (!(sa_den > 0.0)) throw DegenerateReference("error_metrics: reference (S, A) vanishes");
  const double err_sa = std::sqrt((ds * ds + da * da) / sa_den);

  return {err_rho, err_psi, err_sa};
}

// ---------------------------------------------------------------- norms

void DiagnosticsConfig::validate() const {
  if (!(s > 1.5) || !std::isfinite(s)) {
    throw InvalidInput("DiagnosticsConfig: s must exceed 3/2");
  }
}

double sigma_s_norm(const WkbState& u, double s) {
  const double ns = sobolev_norm(u.phase(), s + 2.0);
  const double na = sobolev_norm(u.amplitude(), s);
  return std::sqrt(ns * ns + na * na);
}

double sigma_s_norm(const WkbState& u, const DiagnosticsConfig& cfg) {
  cfg.validate();
  return sigma_s_norm(u, cfg.s);
}

// ---------------------------------------------------------------- generators

WkbState generator_apply(int i, const WkbState& u, double eps, const Potential& potential) {
  require_index(i);
  require_grid(u.grid(), potential.grid(), "generator_apply");
  const PeriodicGrid& grid = u.grid();
  const std::size_t n = grid.size();
  const auto& a = u.amplitude().values();
  std::vector<double> s_out(n, 0.0);
  std::vector<Complex> a_out(n, Complex{});

  switch (i) {
    case 1: {
      const Derivatives d(u);
      for (std::size_t j = 0; j < n; ++j) {
        s_out[j] = -0.5 * d.s1[j] * d.s1[j];
        a_out[j] = -d.s1[j] * d.a1[j] - 0.5 * a[j] * d.s2[j] + 0.5 * kI * d.a2[j];
      }
      break;
    }
    case 2: {
      const auto a2 = spectral_derivative(u.amplitude(), 2).values();
      for (std::size_t j = 0; j < n; ++j) a_out[j] = 0.5 * kI * (eps - 1.0) * a2[j];
      break;
    }
    case 3: {
      const auto& v = potential.samples().values();
      for (std::size_t j = 0; j < n; ++j) s_out[j] = -v[j];
      break;
    }
    case 4: {
      const auto s2 = spectral_derivative(u.phase(), 2).values();
      for (std::size_t j = 0; j < n; ++j) {
        s_out[j] = eps * eps * s2[j];
        a_out[j] = -kI * eps * a[j] * s2[j];
      }
      break;
    }
  }
  return make_tangent(grid, std::move(s_out), std::move(a_out));
}

WkbState generator_derivative(int i, const WkbState& u, const WkbState& direction, double eps,
                              const Potential& potential) {
  require_index(i);
  require_grid(u.grid(), direction.grid(), "generator_derivative");
  require_grid(u.grid(), potential.grid(), "generator_derivative");
  const PeriodicGrid& grid = u.grid();
  const std::size_t n = grid.size();
  const auto& a = u.amplitude().values();
  const auto& a0 = direction.amplitude().values();
  std::vector<double> s_out(n, 0.0);
  std::vector<Complex> a_out(n, Complex{});

  switch (i) {
    case 1: {
      const Derivatives d(u);
      const Derivatives d0(direction);
      for (std::size_t j = 0; j < n; ++j) {
        s_out[j] = -d.s1[j] * d0.s1[j];
        a_out[j] = -d.s1[j] * d0.a1[j] - 0.5 * a0[j] * d.s2[j] - d0.s1[j] * d.a1[j] -
                   0.5 * a[j] * d0.s2[j] + 0.5 * kI * d0.a2[j];
      }
      break;
    }
    case 2: {
      // N2 is linear, so DN2(u) u0 = N2 u0.
      const auto a02 = spectral_derivative(direction.amplitude(), 2).values();
      for (std::size_t j = 0; j < n; ++j) a_out[j] = 0.5 * kI * (eps - 1.0) * a02[j];
      break;
    }
    case 3:
      // N3 is constant in u.
      break;
    case 4: {
      const auto s2 = spectral_derivative(u.phase(), 2).values();
      const auto s02 = spectral_derivative(direction.phase(), 2).values();
      for (std::size_t j = 0; j < n; ++j) {
        s_out[j] = eps * eps * s02[j];
        a_out[j] = -kI * eps * (a0[j] * s2[j] + a[j] * s02[j]);
      }
      break;
    }
  }
  return make_tangent(grid, std::move(s_out), std::move(a_out));
}

WkbState commutator_bracket(int i, int j, const WkbState& u, double eps,
                            const Potential& potential) {
  require_index(i);
  require_index(j);
  const WkbState ni = generator_apply(i, u, eps, potential);
  const WkbState nj = generator_apply(j, u, eps, potential);
  return subtract(generator_derivative(i, u, nj, eps, potential),
                  generator_derivative(j, u, ni, eps, potential));
}

}  // namespace wkbsplit
