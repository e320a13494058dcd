#pragma once

#include "wkbsplit/periodic_spectral.hpp"
#include "wkbsplit/reference_solvers.hpp"
#include "wkbsplit/wkb_flows.hpp"

namespace wkbsplit {

enum class Formulation { wave, wkb };

struct ConservedReport {
  double mass;
  double energy;
  double momentum;
  Formulation formulation;
};

/// mass = dx sum |Psi|^2, energy = dx sum (eps^2 |Psi'|^2 + V |Psi|^2),
/// momentum = eps dx sum Im(conj(Psi) Psi').
ConservedReport conserved_quantities(const WaveState& w, const Potential& potential);

/// The same invariants written for Psi = A exp(iS/eps), with G = eps A' + i A S':
/// mass = dx sum |A|^2, energy = dx sum (|G|^2 + V |A|^2), momentum = dx sum Im(conj(A) G).
ConservedReport conserved_quantities(const WkbState& u, const Potential& potential, double eps);

/// dx sum ((eps^2/2) |Psi'|^2 + V |Psi|^2), the Hamiltonian that the exact
/// flow conserves. The `energy` field above omits the factor 1/2 on the
/// kinetic term and is therefore not invariant in general.
double hamiltonian(const WaveState& w, const Potential& potential);

struct ErrorTriple {
  double err_rho;
  double err_psi;
  double err_sa;
};

/// Relative errors of a WKB solution against the wave and WKB references:
///   err_rho = |rho_ref - |A|^2|_1 / |rho_ref|_1 with rho_ref = |Psi_ref|^2
///   err_psi = |Psi_ref - A exp(iS/eps)|_2 / |Psi_ref|_2
///   err_sa  = sqrt((|S_ref - S|_2^2 + |A_ref - A|_2^2) / (|S_ref|_2^2 + |A_ref|_2^2))
/// with the discrete norms |u|_1 = dx sum |u_j| and |u|_2 = sqrt(dx sum |u_j|^2).
/// All fields must share one grid. Zero denominators raise DegenerateReference.
ErrorTriple error_metrics(const WaveState& ref_wave, const WkbState& ref_wkb,
                          const WkbState& test, double eps);

struct DiagnosticsConfig {
  double s = 2.0;  // must exceed 3/2 for the one-dimensional theory

  void validate() const;
};

/// sqrt(|S|_{H^{s+2}}^2 + |A|_{H^s}^2) for any s >= 0.
double sigma_s_norm(const WkbState& u, double s);
double sigma_s_norm(const WkbState& u, const DiagnosticsConfig& cfg);

/// Generator N_i of sub-flow i, i in 1..4, as a (S, A)-shaped tangent.
WkbState generator_apply(int i, const WkbState& u, double eps, const Potential& potential);

/// Frechet derivative DN_i(u) applied to the direction u0.
WkbState generator_derivative(int i, const WkbState& u, const WkbState& direction, double eps,
                              const Potential& potential);

/// [N_i, N_j](u) = DN_i(u) N_j(u) - DN_j(u) N_i(u), from the exact derivative
/// formulas (no finite differencing).
WkbState commutator_bracket(int i, int j, const WkbState& u, double eps,
                            const Potential& potential);

}  // namespace wkbsplit
