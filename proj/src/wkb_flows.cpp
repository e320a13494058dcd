#include "wkbsplit/wkb_flows.hpp"

#include <cmath>
#include <sstream>

#include "wkbsplit/errors.hpp"

namespace wkbsplit {

namespace {

void require_step(double h, const char* what) {
  if (!std::isfinite(h) || h < 0.0) {
    throw InvalidInput(std::string(what) + ": step must be finite and >= 0");
  }
}

void require_eps(double eps, const char* what) {
  if (!std::isfinite(eps) || eps < 0.0) {
    throw InvalidInput(std::string(what) + ": eps must be finite and >= 0");
  }
}

ComplexField multiply_pointwise_phase(const ComplexField& a, const RealField& phase, double sign) {
  std::vector<Complex> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] * std::polar(1.0, sign * phase[j]);
  return ComplexField(a.grid(), std::move(v));
}

}  // namespace

WkbState::WkbState(RealField phase, ComplexField amplitude)
    : phase_(std::move(phase)), amplitude_(std::move(amplitude)) {
  if (!(phase_.grid() == amplitude_.grid())) {
    throw InvalidInput("WkbState: phase and amplitude live on different grids");
  }
}

Potential::Potential(RealField samples, Provenance provenance, std::string label)
    : samples_(std::move(samples)), provenance_(provenance), label_(std::move(label)) {}

Potential Potential::analytic(const PeriodicGrid& grid, std::string label,
                              const std::function<double(double)>& formula) {
  return Potential(RealField::sample(grid, formula), Provenance::analytic, std::move(label));
}

Potential Potential::from_samples(RealField samples) {
  return Potential(std::move(samples), Provenance::samples, "samples");
}

void EikonalSettings::validate() const {
  if (!(contraction_cap > 0.0 && contraction_cap < 1.0)) {
    throw InvalidInput("EikonalSettings: contraction cap must lie in (0, 1)");
  }
  if (!(fp_tol > 0.0)) throw InvalidInput("EikonalSettings: fp_tol must be > 0");
  if (fp_max_iter < 1) throw InvalidInput("EikonalSettings: fp_max_iter must be >= 1");
}

RealField solve_eikonal_characteristics(const RealField& phase0, double h,
                                        const EikonalSettings& settings) {
  settings.validate();
  require_step(h, "solve_eikonal_characteristics");
  if (h == 0.0) return phase0;

  const double curvature = max_norm(spectral_derivative(phase0, 2));
  if (h * curvature > settings.contraction_cap) {
    std::ostringstream msg;
    msg << "eikonal step h = " << h << " with max|S''| = " << curvature
        << " exceeds the contraction cap " << settings.contraction_cap;
    throw CharacteristicsDiverged(msg.str());
  }

  const FourierInterpolant series(phase0);
  const PeriodicGrid& grid = phase0.grid();
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    double y = x;
    bool converged = false;
    for (int it = 0; it < settings.fp_max_iter; ++it) {
      const double next = x - h * series.slope(y);
      const double delta = std::abs(next - y);
      y = next;
      if (delta < settings.fp_tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw CharacteristicsDiverged("foot-point iteration did not converge at x = " +
                                    std::to_string(x));
    }
    double s0 = 0.0;
    double v0 = 0.0;
    series.value_and_slope(y, s0, v0);
    out[j] = s0 + 0.5 * h * v0 * v0;
  }
  return RealField(grid, std::move(out));
}

WkbState flow1(const WkbState& u, double h, const EikonalSettings& settings) {
  require_step(h, "flow1");
  if (h == 0.0) return u;
  RealField phase = solve_eikonal_characteristics(u.phase(), h, settings);
  // w = A exp(iS) evolves under the free Schroedinger equation i dw/dt = -w''/2.
  const ComplexField w0 = multiply_pointwise_phase(u.amplitude(), u.phase(), 1.0);
  const ComplexField wh = apply_fourier_multiplier(
      w0, FourierMultiplier::from_symbol(u.grid(), [h](int k) {
        return std::polar(1.0, -0.5 * h * static_cast<double>(k) * k);
      }));
  ComplexField amplitude = multiply_pointwise_phase(wh, phase, -1.0);
  return WkbState(std::move(phase), std::move(amplitude));
}

WkbState flow2(const WkbState& u, double h, double eps) {
  require_step(h, "flow2");
  require_eps(eps, "flow2");
  if (h == 0.0 || eps == 1.0) return u;
  const double rate = 0.5 * (eps - 1.0) * h;
  ComplexField amplitude = apply_fourier_multiplier(
      u.amplitude(), FourierMultiplier::from_symbol(u.grid(), [rate](int k) {
        return std::polar(1.0, -rate * static_cast<double>(k) * k);
      }));
  return WkbState(u.phase(), std::move(amplitude));
}

WkbState flow3(const WkbState& u, double h, const Potential& potential) {
  require_step(h, "flow3");
  if (!(potential.grid() == u.grid())) throw InvalidInput("flow3: potential grid mismatch");
  if (h == 0.0) return u;
  const auto& s = u.phase().values();
  const auto& v = potential.samples().values();
  std::vector<double> out(s.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = s[j] - h * v[j];
  return WkbState(RealField(u.grid(), std::move(out)), u.amplitude());
}

WkbState flow4(const WkbState& u, double h, double eps) {
  require_step(h, "flow4");
  require_eps(eps, "flow4");
  if (h == 0.0 || eps == 0.0) return u;
  const SpectralCoefficients s_hat = forward_dft(u.phase());
  const PeriodicGrid& grid = u.grid();
  const double rate = eps * eps * h;
  std::vector<Complex> heated(grid.size());
  std::vector<Complex> increment(grid.size());
  for (std::size_t slot = 0; slot < grid.size(); ++slot) {
    const double k = static_cast<double>(grid.wavenumber(slot));
    // (exp(-eps^2 h k^2) - 1) / eps, with the division carried by the symbol.
    heated[slot] = std::exp(-rate * k * k) * s_hat[slot];
    increment[slot] = (std::expm1(-rate * k * k) / eps) * s_hat[slot];
  }
  RealField phase = inverse_dft_real(SpectralCoefficients(grid, std::move(heated)));
  const RealField phi = inverse_dft_real(SpectralCoefficients(grid, std::move(increment)));
  ComplexField amplitude = multiply_pointwise_phase(u.amplitude(), phi, -1.0);
  return WkbState(std::move(phase), std::move(amplitude));
}

}  // namespace wkbsplit
