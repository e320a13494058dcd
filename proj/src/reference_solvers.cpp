#include "wkbsplit/reference_solvers.hpp"

#include <cmath>

#include "wkbsplit/composition.hpp"
#include "wkbsplit/errors.hpp"

namespace wkbsplit {

WaveState::WaveState(ComplexField psi, double eps) : psi_(std::move(psi)), eps_(eps) {
  if (!std::isfinite(eps) || eps <= 0.0) throw InvalidInput("WaveState: eps must be > 0");
}

TsspPropagator::TsspPropagator(const PeriodicGrid& grid, double eps, const Potential& potential,
                               double h, int order)
    : grid_(grid), eps_(eps), h_(h), order_(order), potential_(potential.samples().values()) {
  if (!std::isfinite(eps) || eps <= 0.0) throw InvalidInput("tssp: eps must be > 0");
  if (!std::isfinite(h)) throw InvalidInput("tssp: step must be finite");
  if (!(potential.grid() == grid)) throw InvalidInput("tssp: potential grid mismatch");
  if (order == 2) {
    stages_.push_back(make_stage(h));
  } else if (order == 4) {
    const auto c = yoshida_coefficients();
    Stage outer = make_stage(c.outer * h);
    stages_.push_back(outer);
    stages_.push_back(make_stage(c.inner * h));
    stages_.push_back(std::move(outer));
  } else {
    throw InvalidInput("tssp: order must be 2 or 4");
  }
}

TsspPropagator::Stage TsspPropagator::make_stage(double tau) const {
  const std::size_t n = grid_.size();
  Stage stage;
  stage.potential_half.resize(n);
  stage.kinetic.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    stage.potential_half[j] = std::polar(1.0, -0.5 * tau * potential_[j] / eps_);
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double k = static_cast<double>(grid_.wavenumber(s));
    stage.kinetic[s] = scale * std::polar(1.0, -0.5 * eps_ * tau * k * k);
  }
  return stage;
}

void TsspPropagator::apply_stage(const Stage& stage, std::vector<Complex>& psi) const {
  const std::size_t n = psi.size();
  for (std::size_t j = 0; j < n; ++j) psi[j] *= stage.potential_half[j];
  detail::fft_forward_in_place(psi);
  for (std::size_t s = 0; s < n; ++s) psi[s] *= stage.kinetic[s];
  detail::fft_backward_in_place(psi);
  for (std::size_t j = 0; j < n; ++j) psi[j] *= stage.potential_half[j];
}

void TsspPropagator::advance(std::vector<Complex>& psi) const {
  if (psi.size() != grid_.size()) throw InvalidInput("tssp: state length mismatch");
  for (const Stage& stage : stages_) apply_stage(stage, psi);
}

WaveState tssp_step(const WaveState& w, double h, const Potential& potential, int order) {
  const TsspPropagator propagator(w.grid(), w.eps(), potential, h, order);
  std::vector<Complex> psi = w.psi().values();
  propagator.advance(psi);
  return WaveState(ComplexField(w.grid(), std::move(psi)), w.eps());
}

WaveState reconstruct_wave(const WkbState& u, double eps) {
  if (!std::isfinite(eps) || eps <= 0.0) throw InvalidInput("reconstruct_wave: eps must be > 0");
  const auto& a = u.amplitude().values();
  const auto& s = u.phase().values();
  std::vector<Complex> psi(a.size());
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = a[j] * std::polar(1.0, s[j] / eps);
  return WaveState(ComplexField(u.grid(), std::move(psi)), eps);
}

RealField cole_hopf_eikonal_oracle(const RealField& phase0, const Potential& potential, double h,
                                   double eps, int substeps) {
  if (!std::isfinite(eps) || eps <= 0.0) throw InvalidInput("cole_hopf: eps must be > 0");
  if (substeps < 1) throw InvalidInput("cole_hopf: substeps must be >= 1");
  if (!std::isfinite(h) || h < 0.0) throw InvalidInput("cole_hopf: step must be >= 0");
  if (!(potential.grid() == phase0.grid())) throw InvalidInput("cole_hopf: grid mismatch");

  const double two_eps2 = 2.0 * eps * eps;
  if (max_norm(phase0) / two_eps2 > 500.0) {
    throw OverflowRisk("cole_hopf: max|S0| / (2 eps^2) = " +
                       std::to_string(max_norm(phase0) / two_eps2) + " exceeds 500");
  }

  const PeriodicGrid& grid = phase0.grid();
  const std::size_t n = grid.size();
  std::vector<Complex> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = std::expm1(-phase0[j] / two_eps2);

  const double tau = h / substeps;
  std::vector<double> reaction(n);
  const auto& v = potential.samples().values();
  for (std::size_t j = 0; j < n; ++j) reaction[j] = std::exp(0.5 * tau * v[j] / two_eps2);
  std::vector<double> heat(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double k = static_cast<double>(grid.wavenumber(s));
    heat[s] = std::exp(-eps * eps * tau * k * k) / static_cast<double>(n);
  }

  auto react = [&] {
    for (std::size_t j = 0; j < n; ++j) {
      const double shifted = w[j].real() + 1.0;
      if (!(shifted > 0.0)) throw LogDomainError("cole_hopf: w + 1 <= 0 encountered");
      w[j] = shifted * reaction[j] - 1.0;
    }
  };

  for (int step = 0; step < substeps; ++step) {
    react();
    detail::fft_forward_in_place(w);
    for (std::size_t s = 0; s < n; ++s) w[s] *= heat[s];
    detail::fft_backward_in_place(w);
    react();
  }

  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double shifted = w[j].real() + 1.0;
    if (!(shifted > 0.0)) throw LogDomainError("cole_hopf: w + 1 <= 0 at the final time");
    out[j] = -two_eps2 * std::log1p(w[j].real());
  }
  return RealField(grid, std::move(out));
}

}  // namespace wkbsplit
