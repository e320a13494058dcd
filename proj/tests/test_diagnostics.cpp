#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "wkbsplit/diagnostics.hpp"
#include "wkbsplit/errors.hpp"
#include "wkbsplit/problem.hpp"

using namespace wkbsplit;
using oracle::TrigPoly;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

Potential zero_potential(const PeriodicGrid& g) {
  return Potential::analytic(g, "0", [](double) { return 0.0; });
}

// Random smooth state built from trigonometric polynomials, with exact
// derivatives available from the polynomials themselves.
struct SmoothState {
  TrigPoly s, a;
  WkbState on(const PeriodicGrid& g) const {
    return WkbState(RealField::sample(g, [&](double x) { return s(x).real(); }),
                    ComplexField::sample(g, [&](double x) { return a(x); }));
  }
  double S(double x, int k) const { return s.derivative(x, k).real(); }
  Complex A(double x, int k) const { return a.derivative(x, k); }
};

SmoothState random_state(std::mt19937_64& rng) {
  SmoothState st{oracle::random_trig_poly(rng, 4, true, 0.5), oracle::random_trig_poly(rng, 4, false, 0.5)};
  for (auto& c : st.s.coeffs) c *= 0.3;
  return st;
}

double max_gap(const WkbState& got, const PeriodicGrid& g, const std::function<double(double)>& s,
               const std::function<Complex(double)>& a) {
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    worst = std::max(worst, std::abs(got.phase()[j] - s(x)));
    worst = std::max(worst, std::abs(got.amplitude()[j] - a(x)));
  }
  return worst;
}

double tangent_norm(const WkbState& u) {
  double m = 0.0;
  for (double v : u.phase().values()) m = std::max(m, std::abs(v));
  for (const Complex& z : u.amplitude().values()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST_CASE("conserved quantities of simple states") {
  const PeriodicGrid g(32);
  const Potential zero = zero_potential(g);

  SUBCASE("constant wave") {
    const WaveState w(ComplexField::sample(g, [](double) { return Complex(0.6, 0.8); }), 0.5);
    const auto r = conserved_quantities(w, zero);
    CHECK(r.mass == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(std::abs(r.energy) < 1e-14);
    CHECK(std::abs(r.momentum) < 1e-14);
    CHECK(r.formulation == Formulation::wave);
  }
  SUBCASE("plane wave") {
    const WaveState w(ComplexField::sample(g, [](double x) { return std::exp(kI * x); }), 0.5);
    const auto r = conserved_quantities(w, zero);
    CHECK(r.momentum == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(r.energy == doctest::Approx(0.25 * 2 * kPi).epsilon(1e-14));
    CHECK(hamiltonian(w, zero) == doctest::Approx(0.125 * 2 * kPi).epsilon(1e-14));
  }
  SUBCASE("potential term") {
    const Potential v = Potential::analytic(g, "2", [](double) { return 2.0; });
    const WaveState w(ComplexField::sample(g, [](double) { return Complex(1.0); }), 0.5);
    CHECK(conserved_quantities(w, v).energy == doctest::Approx(4 * kPi).epsilon(1e-14));
  }
  SUBCASE("wkb and wave forms agree") {
    const InitialData data = InitialData::caustic_benchmark();
    const PeriodicGrid fine(256);
    const Potential v = data.sampled_potential(fine);
    const double eps = 0.25;
    for (bool with_phase : {false, true}) {
      const WkbState u = with_phase ? data.wkb_state(fine)
                                    : WkbState(RealField::zeros(fine), data.wkb_state(fine).amplitude());
      const auto a = conserved_quantities(u, v, eps);
      const auto b = conserved_quantities(reconstruct_wave(u, eps), v);
      CHECK(a.formulation == Formulation::wkb);
      CHECK(a.mass == doctest::Approx(b.mass).epsilon(1e-13));
      CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-10));
      CHECK(std::abs(a.momentum - b.momentum) < 1e-10);
    }
  }
}

TEST_CASE("error metrics") {
  const PeriodicGrid g(64);
  const InitialData data = InitialData::caustic_benchmark();
  const double eps = 0.25;
  const WkbState ref = data.wkb_state(g);
  const WaveState wave = reconstruct_wave(ref, eps);

  SUBCASE("identical inputs") {
    const auto e = error_metrics(wave, ref, ref, eps);
    // |A exp(iS/eps)|^2 and |A|^2 differ in the last bit.
    CHECK(e.err_rho < 1e-15);
    CHECK(e.err_psi == 0.0);
    CHECK(e.err_sa == 0.0);
  }
  SUBCASE("a global sign flip doubles the wave") {
    const WaveState flipped(ComplexField::sample(g, [&](double x) {
                              return -std::sin(x) * std::exp(kI * std::sin(x) / (2 * eps));
                            }),
                            eps);
    const auto e = error_metrics(flipped, ref, ref, eps);
    CHECK(e.err_psi == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(e.err_rho < 1e-14);
  }
  SUBCASE("formula transcription on four points") {
    const PeriodicGrid g4(4);
    const double sr[4] = {0.1, -0.2, 0.3, 0.05};
    const Complex ar[4] = {{1, 0}, {0.5, 0.5}, {0, -1}, {0.2, 0}};
    const Complex pr[4] = {{0.9, 0.1}, {0.4, 0.6}, {0.1, -1.1}, {0.3, 0}};
    const double st[4] = {0.12, -0.18, 0.31, 0.0};
    const Complex at[4] = {{0.95, 0.05}, {0.5, 0.4}, {0, -0.9}, {0.25, 0.1}};
    const double e = 0.5, dx = kPi / 2;
    double rho_num = 0, rho_den = 0, psi_num = 0, psi_den = 0, sa_num = 0, sa_den = 0;
    for (int j = 0; j < 4; ++j) {
      rho_num += dx * std::abs(std::norm(pr[j]) - std::norm(at[j]));
      rho_den += dx * std::norm(pr[j]);
      psi_num += dx * std::norm(pr[j] - at[j] * std::exp(kI * st[j] / e));
      psi_den += dx * std::norm(pr[j]);
      sa_num += dx * ((sr[j] - st[j]) * (sr[j] - st[j]) + std::norm(ar[j] - at[j]));
      sa_den += dx * (sr[j] * sr[j] + std::norm(ar[j]));
    }
    auto rf = [&](const double* v) { return RealField(g4, std::vector<double>(v, v + 4)); };
    auto cf = [&](const Complex* v) { return ComplexField(g4, std::vector<Complex>(v, v + 4)); };
    const auto got = error_metrics(WaveState(cf(pr), e), WkbState(rf(sr), cf(ar)), WkbState(rf(st), cf(at)), e);
    CHECK(got.err_rho == doctest::Approx(rho_num / rho_den).epsilon(1e-14));
    CHECK(got.err_psi == doctest::Approx(std::sqrt(psi_num / psi_den)).epsilon(1e-14));
    CHECK(got.err_sa == doctest::Approx(std::sqrt(sa_num / sa_den)).epsilon(1e-14));
  }
  SUBCASE("degenerate references") {
    const WaveState zero_wave(ComplexField::zeros(g), eps);
    CHECK_THROWS_AS(error_metrics(zero_wave, ref, ref, eps), DegenerateReference);
    const WkbState zero_pair(RealField::zeros(g), ComplexField::zeros(g));
    CHECK_THROWS_AS(error_metrics(wave, zero_pair, ref, eps), DegenerateReference);
  }
  SUBCASE("grid mismatch") {
    const WkbState coarse = data.wkb_state(PeriodicGrid(32));
    CHECK_THROWS_AS(error_metrics(wave, ref, coarse, eps), InvalidInput);
  }
  SUBCASE("relative errors are scale invariant") {
    const WkbState test = data.wkb_state(g);
    std::vector<double> s(g.size());
    std::vector<Complex> a(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      s[j] = test.phase()[j] * 1.01;
      a[j] = test.amplitude()[j] * 0.98;
    }
    const WkbState perturbed(RealField(g, s), ComplexField(g, a));
    const auto base = error_metrics(wave, ref, perturbed, eps);
    // Scaling S changes the wave, so only scale A and Psi together with S fixed.
    std::vector<Complex> a3(g.size()), psi3(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      a3[j] = 3.0 * a[j];
      psi3[j] = 3.0 * wave.psi()[j];
    }
    const auto scaled = error_metrics(WaveState(ComplexField(g, psi3), eps), ref,
                                      WkbState(RealField(g, s), ComplexField(g, a3)), eps);
    CHECK(scaled.err_rho == doctest::Approx(base.err_rho).epsilon(1e-12));
    CHECK(scaled.err_psi == doctest::Approx(base.err_psi).epsilon(1e-12));
  }
}

TEST_CASE("sigma_s norm") {
  const PeriodicGrid g(32);
  const RealField sine = RealField::sample(g, [](double x) { return std::sin(x); });
  const ComplexField csine = ComplexField::sample(g, [](double x) { return Complex(std::sin(x)); });
  CHECK(sigma_s_norm(WkbState(sine, ComplexField::zeros(g)), 0.0) ==
        doctest::Approx(3.5449077018110318).epsilon(1e-14));
  CHECK(sigma_s_norm(WkbState(RealField::zeros(g), csine), 0.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  // H^{s+2} of sin x is 2^{(s+2)/2} sqrt(pi).
  CHECK(sigma_s_norm(WkbState(sine, csine), 2.0) == doctest::Approx(std::sqrt(16 * kPi + 4 * kPi)).epsilon(1e-14));
  CHECK_NOTHROW(sigma_s_norm(WkbState(sine, csine), DiagnosticsConfig{}));
  CHECK_THROWS_AS(sigma_s_norm(WkbState(sine, csine), DiagnosticsConfig{1.5}), InvalidInput);
}

TEST_CASE("generators") {
  const PeriodicGrid g(64);
  const InitialData data = InitialData::caustic_benchmark();
  const Potential v = data.sampled_potential(g);
  std::mt19937_64 rng(11);
  const SmoothState st = random_state(rng);
  const WkbState u = st.on(g);

  CHECK(max_gap(generator_apply(3, u, 0.3, v), g, [](double x) { return -benchmark_potential(x); },
                [](double) { return Complex{}; }) < 1e-15);
  CHECK(tangent_norm(generator_apply(2, u, 1.0, v)) == 0.0);
  const WkbState flat(RealField::constant(g, 0.7), u.amplitude());
  CHECK(tangent_norm(generator_apply(4, flat, 0.3, v)) < 1e-13);
  const double eps = 0.3;
  CHECK(max_gap(
            generator_apply(1, u, eps, v), g, [&](double x) { return -0.5 * st.S(x, 1) * st.S(x, 1); },
            [&](double x) {
              return -st.S(x, 1) * st.A(x, 1) - 0.5 * st.A(x, 0) * st.S(x, 2) + 0.5 * kI * st.A(x, 2);
            }) < 1e-11);
  CHECK_THROWS_AS(generator_apply(5, u, eps, v), InvalidInput);
  CHECK_THROWS_AS(commutator_bracket(0, 1, u, eps, v), InvalidInput);

  // Frechet derivative against a centred difference quotient.
  const SmoothState dir = random_state(rng);
  const WkbState d = dir.on(g);
  for (int i = 1; i <= 4; ++i) {
    const double t = 1e-5;
    auto shifted = [&](double sign) {
      std::vector<double> s(g.size());
      std::vector<Complex> a(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) {
        s[j] = u.phase()[j] + sign * t * d.phase()[j];
        a[j] = u.amplitude()[j] + sign * t * d.amplitude()[j];
      }
      return generator_apply(i, WkbState(RealField(g, s), ComplexField(g, a)), eps, v);
    };
    const WkbState plus = shifted(1.0), minus = shifted(-1.0);
    const WkbState exact = generator_derivative(i, u, d, eps, v);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      worst = std::max(worst, std::abs((plus.phase()[j] - minus.phase()[j]) / (2 * t) - exact.phase()[j]));
      worst = std::max(worst, std::abs((plus.amplitude()[j] - minus.amplitude()[j]) / (2 * t) - exact.amplitude()[j]));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("commutator brackets") {
  const PeriodicGrid g(64);
  const Potential v = InitialData::caustic_benchmark().sampled_potential(g);
  const Potential flat_v = Potential::analytic(g, "0.4", [](double) { return 0.4; });
  // Derivatives of V by finite-difference-free spectral differentiation of a
  // well-resolved sample.
  const RealField v1 = spectral_derivative(v.samples(), 1);
  const RealField v2 = spectral_derivative(v.samples(), 2);
  std::mt19937_64 rng(2024);

  for (int trial = 0; trial < 5; ++trial) {
    const SmoothState st = random_state(rng);
    const WkbState u = st.on(g);
    for (double eps : {1.0, 0.25, 1.0 / 64}) {
      for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) {
          const WkbState ij = commutator_bracket(i, j, u, eps, v);
          const WkbState ji = commutator_bracket(j, i, u, eps, v);
          double worst = 0.0;
          for (std::size_t m = 0; m < g.size(); ++m) {
            worst = std::max(worst, std::abs(ij.phase()[m] + ji.phase()[m]));
            worst = std::max(worst, std::abs(ij.amplitude()[m] + ji.amplitude()[m]));
          }
          CHECK(worst < 1e-12);
        }
      }
      CHECK(tangent_norm(commutator_bracket(2, 3, u, eps, v)) < 1e-14);
      CHECK(tangent_norm(commutator_bracket(1, 3, u, eps, flat_v)) < 1e-12);
      CHECK(tangent_norm(commutator_bracket(3, 4, u, eps, flat_v)) < 1e-12);

      std::size_t k = 0;
      auto at_node = [&](double x) {
        k = static_cast<std::size_t>(std::lround(x / g.dx())) % g.size();
        return k;
      };
      CHECK(max_gap(
                commutator_bracket(1, 3, u, eps, v), g, [&](double x) { return st.S(x, 1) * v1[at_node(x)]; },
                [&](double x) {
                  at_node(x);
                  return v1[k] * st.A(x, 1) + 0.5 * st.A(x, 0) * v2[k];
                }) < 1e-9);
      CHECK(max_gap(
                commutator_bracket(3, 4, u, eps, v), g, [&](double x) { return eps * eps * v2[at_node(x)]; },
                [&](double x) { return -kI * eps * st.A(x, 0) * v2[at_node(x)]; }) < 1e-9);
      CHECK(max_gap(
                commutator_bracket(1, 2, u, eps, v), g, [](double) { return 0.0; },
                [&](double x) {
                  return 0.5 * kI * (eps - 1.0) *
                         (2.0 * st.S(x, 3) * st.A(x, 1) + 2.0 * st.S(x, 2) * st.A(x, 2) + 0.5 * st.A(x, 0) * st.S(x, 4));
                }) < 1e-9);
      CHECK(max_gap(
                commutator_bracket(2, 4, u, eps, v), g, [](double) { return 0.0; },
                [&](double x) {
                  return 0.5 * eps * (eps - 1.0) * (2.0 * st.A(x, 1) * st.S(x, 3) + st.A(x, 0) * st.S(x, 4));
                }) < 1e-10);
      CHECK(max_gap(
                commutator_bracket(1, 4, u, eps, v), g, [&](double x) { return eps * eps * st.S(x, 2) * st.S(x, 2); },
                [&](double x) {
                  return eps * (1.0 - eps) * (st.A(x, 1) * st.S(x, 3) + 0.5 * st.A(x, 0) * st.S(x, 4)) -
                         kI * eps * st.A(x, 0) * st.S(x, 2) * st.S(x, 2);
                }) < 1e-9);
    }
  }
}

TEST_CASE("bracket scaling in eps") {
  const PeriodicGrid g(64);
  const Potential v = InitialData::caustic_benchmark().sampled_potential(g);
  const WkbState u = InitialData::caustic_benchmark().wkb_state(g);
  const double e1 = std::ldexp(1.0, -10), e2 = std::ldexp(1.0, -11);
  const double r24 = tangent_norm(commutator_bracket(2, 4, u, e1, v)) / tangent_norm(commutator_bracket(2, 4, u, e2, v));
  CHECK(r24 == doctest::Approx((e1 * (1 - e1)) / (e2 * (1 - e2))).epsilon(1e-8));
  const double r14 = tangent_norm(commutator_bracket(1, 4, u, e1, v)) / tangent_norm(commutator_bracket(1, 4, u, e2, v));
  CHECK(r14 == doctest::Approx(2.0).epsilon(0.01));
  // [N1,N2] does not vanish as eps -> 0.
  CHECK(tangent_norm(commutator_bracket(1, 2, u, e2, v)) > 0.1);
}
