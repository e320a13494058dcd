#pragma once

// The four sub-flows of the viscous WKB system
//
//   dS/dt + |dS/dx|^2 / 2 + V = eps^2 d2S/dx2
//   dA/dt + dS/dx dA/dx + A d2S/dx2 / 2 = i eps d2A/dx2 / 2 - i eps A d2S/dx2
//
// split into pieces that can each be solved exactly (or, for the eikonal
// part, to interpolation accuracy):
//
//   flow1: dS/dt = -|dS/dx|^2/2,  dA/dt = -dS/dx dA/dx - A d2S/dx2 / 2 + i d2A/dx2 / 2
//   flow2: dS/dt = 0,             dA/dt = i (eps - 1) d2A/dx2 / 2
//   flow3: dS/dt = -V,            dA/dt = 0
//   flow4: dS/dt = eps^2 d2S/dx2, dA/dt = -i eps A d2S/dx2

#include <string>

#include "wkbsplit/periodic_spectral.hpp"

namespace wkbsplit {

/// Phase S (real) and amplitude A (complex) on one shared grid.
class WkbState {
 public:
  WkbState(RealField phase, ComplexField amplitude);

  const PeriodicGrid& grid() const { return phase_.grid(); }
  const RealField& phase() const { return phase_; }
  const ComplexField& amplitude() const { return amplitude_; }

 private:
  RealField phase_;
  ComplexField amplitude_;
};

class Potential {
 public:
  enum class Provenance { analytic, samples };

  /// Samples `formula` at the grid nodes; `label` names the formula.
  static Potential analytic(const PeriodicGrid& grid, std::string label,
                            const std::function<double(double)>& formula);
  static Potential from_samples(RealField samples);

  const PeriodicGrid& grid() const { return samples_.grid(); }
  const RealField& samples() const { return samples_; }
  Provenance provenance() const { return provenance_; }
  const std::string& label() const { return label_; }

 private:
  Potential(RealField samples, Provenance provenance, std::string label);

  RealField samples_;
  Provenance provenance_;
  std::string label_;
};

/// Foot-point solver settings for the eikonal characteristics.
struct EikonalSettings {
  double contraction_cap = 0.9;  // gamma, in (0, 1)
  double fp_tol = 1e-12;
  int fp_max_iter = 50;

  void validate() const;
};

/// Exact solution operator of dS/dt + |dS/dx|^2/2 = 0 over time h by backward
/// characteristics: for every node x_j, solve y + h v0(y) = x_j with
/// v0 = dS0/dx by fixed-point iteration, then S(h, x_j) = S0(y) + h v0(y)^2 / 2.
/// Throws CharacteristicsDiverged when h max|d2S0/dx2| exceeds the contraction
/// cap or the iteration stalls.
RealField solve_eikonal_characteristics(const RealField& phase0, double h,
                                        const EikonalSettings& settings = {});

WkbState flow1(const WkbState& u, double h, const EikonalSettings& settings = {});
WkbState flow2(const WkbState& u, double h, double eps);
WkbState flow3(const WkbState& u, double h, const Potential& potential);
WkbState flow4(const WkbState& u, double h, double eps);

}  // namespace wkbsplit
