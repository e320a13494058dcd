#pragma once

// Ground-truth generators: time-splitting spectral integration of the wave
// equation  i eps dPsi/dt = -(eps^2/2) d2Psi/dx2 + V Psi,  reconstruction of
// Psi from a WKB pair, and the Cole-Hopf route for the viscous eikonal
// equation.

#include <vector>

#include "wkbsplit/periodic_spectral.hpp"
#include "wkbsplit/wkb_flows.hpp"

namespace wkbsplit {

class WaveState {
 public:
  /// eps must be > 0; the wave formulation is singular at eps = 0.
  WaveState(ComplexField psi, double eps);

  const PeriodicGrid& grid() const { return psi_.grid(); }
  const ComplexField& psi() const { return psi_; }
  double eps() const { return eps_; }

 private:
  ComplexField psi_;
  double eps_;
};

/// Kinetic/potential splitting with cached phase factors. Order 2 is
/// potential(h/2) kinetic(h) potential(h/2); order 4 is the Yoshida triple
/// jump of the order-2 map.
class TsspPropagator {
 public:
  TsspPropagator(const PeriodicGrid& grid, double eps, const Potential& potential, double h,
                 int order);

  /// Advances psi (length n, in place) by one step h.
  void advance(std::vector<Complex>& psi) const;

  double step() const { return h_; }
  int order() const { return order_; }

 private:
  struct Stage {
    std::vector<Complex> potential_half;  // exp(-i (tau/2) V / eps)
    std::vector<Complex> kinetic;         // exp(-i eps tau k^2 / 2) / n
  };
  Stage make_stage(double tau) const;
  void apply_stage(const Stage& stage, std::vector<Complex>& psi) const;

  PeriodicGrid grid_;
  double eps_;
  double h_;
  int order_;
  std::vector<double> potential_;
  std::vector<Stage> stages_;
};

/// One TSSP step of order 2 or 4. Any finite h is accepted (the Yoshida
/// inner stage runs backward in time).
WaveState tssp_step(const WaveState& w, double h, const Potential& potential, int order);

/// Psi_j = A_j exp(i S_j / eps).
WaveState reconstruct_wave(const WkbState& u, double eps);

/// Advances the viscous eikonal equation for time h through the Cole-Hopf
/// variable w = exp(-S / (2 eps^2)) - 1, which obeys
/// dw/dt = eps^2 d2w/dx2 + V (w + 1) / (2 eps^2). Heat and reaction parts are
/// Strang-split with `substeps` equal steps. Cross-check use only: throws
/// OverflowRisk when max|S0| / (2 eps^2) > 500 and LogDomainError when w + 1
/// leaves (0, inf).
RealField cole_hopf_eikonal_oracle(const RealField& phase0, const Potential& potential, double h,
                                   double eps, int substeps);

}  // namespace wkbsplit
