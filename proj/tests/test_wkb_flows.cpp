#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wkbsplit/errors.hpp"
#include "wkbsplit/problem.hpp"
#include "wkbsplit/wkb_flows.hpp"

using namespace wkbsplit;

namespace {

const Complex kI{0.0, 1.0};

double mass(const ComplexField& a) {
  double m = 0.0;
  for (const Complex& z : a.values()) m += std::norm(z);
  return a.grid().dx() * m;
}

double max_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

WkbState smooth_random_state(std::mt19937_64& rng, const PeriodicGrid& g, double s_scale) {
  const auto ps = oracle::random_trig_poly(rng, 6, true, 0.5);
  const auto pa = oracle::random_trig_poly(rng, 6, false, 0.5);
  return WkbState(RealField::sample(g, [&](double x) { return s_scale * ps(x).real(); }),
                  ComplexField::sample(g, [&](double x) { return pa(x); }));
}

Potential benchmark(const PeriodicGrid& g) { return InitialData::caustic_benchmark().sampled_potential(g); }

}  // namespace

TEST_CASE("state and potential construction") {
  const PeriodicGrid g8(8), g16(16);
  CHECK_THROWS_AS(WkbState(RealField::zeros(g8), ComplexField::zeros(g16)), InvalidInput);
  const Potential v = benchmark(g16);
  CHECK(v.provenance() == Potential::Provenance::analytic);
  for (std::size_t j = 0; j < g16.size(); ++j) {
    const double x = g16.node(j);
    CHECK(std::abs(v.samples()[j] - std::sin(x) / (1 + std::cos(x) * std::cos(x))) <= 1e-15);
  }
  CHECK(Potential::from_samples(RealField::zeros(g8)).provenance() == Potential::Provenance::samples);
}

TEST_CASE("eikonal settings validation") {
  CHECK_THROWS_AS((EikonalSettings{1.0, 1e-12, 50}.validate()), InvalidInput);
  CHECK_THROWS_AS((EikonalSettings{0.9, 0.0, 50}.validate()), InvalidInput);
  CHECK_THROWS_AS((EikonalSettings{0.9, 1e-12, 0}.validate()), InvalidInput);
  CHECK_NOTHROW(EikonalSettings{}.validate());
}

TEST_CASE("eikonal characteristics") {
  SUBCASE("constant phase is stationary") {
    const PeriodicGrid g(32);
    const RealField c = RealField::constant(g, 0.7);
    CHECK(max_diff(solve_eikonal_characteristics(c, 0.5), c) == 0.0);
  }
  SUBCASE("forward-characteristics oracle") {
    const PeriodicGrid g(64);
    const RealField s0 = RealField::sample(g, [](double x) { return 0.1 * std::sin(x); });
    const RealField s = solve_eikonal_characteristics(s0, 0.01);
    const auto ref = oracle::forward_characteristics_eikonal(
        [](double x) { return 0.1 * std::sin(x); }, [](double x) { return 0.1 * std::cos(x); },
        0.01, 64);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(s[j] - ref[j]));
    CHECK(err <= 1e-8);
  }
  SUBCASE("larger step against the oracle") {
    const PeriodicGrid g(64);
    const RealField s0 = RealField::sample(g, [](double x) { return 0.5 * std::sin(x) + 0.1 * std::cos(2 * x); });
    const double h = 0.6;  // h max|S0''| ~ 0.5
    const RealField s = solve_eikonal_characteristics(s0, h);
    const auto ref = oracle::forward_characteristics_eikonal(
        [](double x) { return 0.5 * std::sin(x) + 0.1 * std::cos(2 * x); },
        [](double x) { return 0.5 * std::cos(x) - 0.2 * std::sin(2 * x); }, h, 64);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(s[j] - ref[j]));
    CHECK(err <= 1e-8);
  }
  SUBCASE("contraction cap") {
    const PeriodicGrid g(64);
    const RealField s0 = RealField::sample(g, [](double x) { return std::sin(x); });
    CHECK_THROWS_AS(solve_eikonal_characteristics(s0, 1.0), CharacteristicsDiverged);
    // 50 plain fixed-point iterations reach 1e-12 only while the contraction
    // factor stays below about 0.57; closer to the cap the budget runs out.
    CHECK_NOTHROW(solve_eikonal_characteristics(s0, 0.5));
    CHECK_THROWS_AS(solve_eikonal_characteristics(s0, 0.85), CharacteristicsDiverged);
    CHECK_THROWS_AS(solve_eikonal_characteristics(s0, 0.6, EikonalSettings{0.5, 1e-12, 50}),
                    CharacteristicsDiverged);
  }
  SUBCASE("iteration budget") {
    const PeriodicGrid g(64);
    const RealField s0 = RealField::sample(g, [](double x) { return std::sin(x); });
    CHECK_THROWS_AS(solve_eikonal_characteristics(s0, 0.8, EikonalSettings{0.9, 1e-12, 2}),
                    CharacteristicsDiverged);
  }
  SUBCASE("negative step") {
    const PeriodicGrid g(8);
    CHECK_THROWS_AS(solve_eikonal_characteristics(RealField::zeros(g), -0.1), InvalidInput);
  }
}

TEST_CASE("flow1") {
  SUBCASE("constant phase, single mode") {
    const PeriodicGrid g(32);
    const WkbState u(RealField::constant(g, 0.3), ComplexField::sample(g, [](double x) { return std::polar(1.0, x); }));
    const WkbState v = flow1(u, 0.2);
    CHECK(max_diff(v.phase(), u.phase()) == 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(std::abs(v.amplitude()[j] - std::polar(1.0, -0.1) * u.amplitude()[j]) < 1e-13);
    }
  }
  SUBCASE("zero amplitude") {
    const PeriodicGrid g(32);
    const RealField s0 = RealField::sample(g, [](double x) { return 0.1 * std::sin(x); });
    const WkbState v = flow1(WkbState(s0, ComplexField::zeros(g)), 0.01);
    CHECK(max_norm(v.amplitude().modulus_squared()) == 0.0);
    CHECK(max_diff(v.phase(), solve_eikonal_characteristics(s0, 0.01)) == 0.0);
  }
  SUBCASE("fine sub-split oracle") {
    const PeriodicGrid g(128);
    const WkbState u(RealField::sample(g, [](double x) { return 0.05 * std::sin(x); }),
                     ComplexField::sample(g, [](double x) { return Complex{std::cos(x), 0.0}; }));
    const WkbState v = flow1(u, 0.02);
    std::vector<double> s = u.phase().values();
    std::vector<Complex> a = u.amplitude().values();
    oracle::subsplit_flow1(s, a, 0.02, 256);
    double num = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      num += std::pow(v.phase()[j] - s[j], 2) + std::norm(v.amplitude()[j] - a[j]);
    }
    CHECK(std::sqrt(g.dx() * num) <= 1e-6);
  }
  SUBCASE("preserves mass and is the identity at h = 0") {
    std::mt19937_64 rng(41);
    const PeriodicGrid g(64);
    const WkbState u = smooth_random_state(rng, g, 0.2);
    CHECK(mass(flow1(u, 0.05).amplitude()) == doctest::Approx(mass(u.amplitude())).epsilon(1e-13));
    const WkbState z = flow1(u, 0.0);
    CHECK(max_diff(z.phase(), u.phase()) == 0.0);
    CHECK(max_diff(z.amplitude(), u.amplitude()) == 0.0);
  }
  SUBCASE("semigroup up to interpolation error") {
    const PeriodicGrid g(64);
    const WkbState u(RealField::sample(g, [](double x) { return 0.1 * std::sin(x); }),
                     ComplexField::sample(g, [](double x) { return Complex{std::sin(x), 0.2 * std::cos(2 * x)}; }));
    const WkbState once = flow1(u, 0.03);
    const WkbState twice = flow1(flow1(u, 0.01), 0.02);
    CHECK(max_diff(once.phase(), twice.phase()) < 1e-8);
    CHECK(max_diff(once.amplitude(), twice.amplitude()) < 1e-8);
  }
}

TEST_CASE("flow2") {
  std::mt19937_64 rng(43);
  const PeriodicGrid g(64);
  const WkbState u = smooth_random_state(rng, g, 1.0);

  SUBCASE("identity at eps = 1") {
    const WkbState v = flow2(u, 0.7, 1.0);
    CHECK(max_diff(v.amplitude(), u.amplitude()) == 0.0);
  }
  SUBCASE("single mode at eps = 0") {
    const WkbState s(RealField::zeros(g), ComplexField::sample(g, [](double x) { return Complex{std::sin(x), 0.0}; }));
    const WkbState v = flow2(s, 0.3, 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(std::abs(v.amplitude()[j] - std::polar(1.0, 0.15) * std::sin(g.node(j))) < 1e-14);
    }
  }
  SUBCASE("direct-summation oracle") {
    const WkbState v = flow2(u, 0.1, 0.25);
    const auto ref = oracle::direct_multiplier(u.amplitude().values(), [](int k) {
      return std::polar(1.0, -(0.25 - 1.0) * 0.1 * k * k / 2.0);
    });
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(v.amplitude()[j] - ref[j]));
    CHECK(err < 1e-12);
    CHECK(max_diff(v.phase(), u.phase()) == 0.0);
  }
  SUBCASE("mass, semigroup, continuity in eps") {
    CHECK(mass(flow2(u, 0.4, 0.3).amplitude()) == doctest::Approx(mass(u.amplitude())).epsilon(1e-13));
    CHECK(max_diff(flow2(u, 0.5, 0.3).amplitude(), flow2(flow2(u, 0.2, 0.3), 0.3, 0.3).amplitude()) < 1e-12);
    CHECK(max_diff(flow2(u, 0.5, 1e-8).amplitude(), flow2(u, 0.5, 0.0).amplitude()) <= 1e-7);
    CHECK(max_diff(flow2(u, 0.0, 0.3).amplitude(), u.amplitude()) == 0.0);
  }
  SUBCASE("eps must be nonnegative") { CHECK_THROWS_AS(flow2(u, 0.1, -0.5), InvalidInput); }
}

TEST_CASE("flow3") {
  const PeriodicGrid g(32);
  const Potential v = benchmark(g);
  const WkbState u(RealField::zeros(g), ComplexField::sample(g, [](double x) { return std::polar(1.0, x); }));

  const WkbState w = flow3(u, 0.5, v);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    CHECK(w.phase()[j] == doctest::Approx(-0.5 * std::sin(x) / (1 + std::cos(x) * std::cos(x))).epsilon(1e-15));
  }
  CHECK(max_diff(w.amplitude(), u.amplitude()) == 0.0);

  const WkbState z = flow3(u, 0.0, v);
  CHECK(max_diff(z.phase(), u.phase()) == 0.0);
  CHECK(max_diff(flow3(u, 0.7, v).phase(), flow3(flow3(u, 0.3, v), 0.4, v).phase()) < 1e-15);
  CHECK_THROWS_AS(flow3(u, 0.1, benchmark(PeriodicGrid(16))), InvalidInput);
}

TEST_CASE("flow4") {
  const PeriodicGrid g(32);

  SUBCASE("single-mode analytic solution") {
    const WkbState u(RealField::sample(g, [](double x) { return std::sin(x); }),
                     ComplexField::sample(g, [](double) { return Complex{1.0, 0.0}; }));
    const WkbState v = flow4(u, 0.1, 0.5);
    const double decay = std::exp(-0.025);
    CHECK(decay == doctest::Approx(0.9753099120283326).epsilon(1e-15));
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g.node(j);
      const double phi = (decay - 1.0) / 0.5 * std::sin(x);
      CHECK(std::abs(v.phase()[j] - decay * std::sin(x)) < 1e-12);
      CHECK(std::abs(v.amplitude()[j] - std::exp(-kI * phi)) < 1e-12);
    }
  }
  SUBCASE("eps = 0 and constant phase are fixed points") {
    std::mt19937_64 rng(47);
    const WkbState u = smooth_random_state(rng, g, 1.0);
    const WkbState v = flow4(u, 0.3, 0.0);
    CHECK(max_diff(v.phase(), u.phase()) == 0.0);
    CHECK(max_diff(v.amplitude(), u.amplitude()) == 0.0);

    const WkbState c(RealField::constant(g, 2.0), u.amplitude());
    const WkbState w = flow4(c, 0.3, 0.5);
    CHECK(max_diff(w.phase(), c.phase()) < 1e-14);
    CHECK(max_diff(w.amplitude(), c.amplitude()) < 1e-14);
  }
  SUBCASE("pointwise modulus, semigroup, continuity in eps") {
    std::mt19937_64 rng(53);
    const WkbState u = smooth_random_state(rng, g, 1.0);
    const WkbState v = flow4(u, 0.2, 0.4);
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(std::abs(v.amplitude()[j]) == doctest::Approx(std::abs(u.amplitude()[j])).epsilon(1e-15));
    }
    const WkbState once = flow4(u, 0.5, 0.4);
    const WkbState twice = flow4(flow4(u, 0.2, 0.4), 0.3, 0.4);
    CHECK(max_diff(once.phase(), twice.phase()) < 1e-12);
    CHECK(max_diff(once.amplitude(), twice.amplitude()) < 1e-12);
    // The gap is about eps h |S''|, so use the smooth benchmark data here.
    const WkbState b = InitialData::caustic_benchmark().wkb_state(g);
    const WkbState tiny = flow4(b, 0.5, 1e-8);
    const WkbState zero = flow4(b, 0.5, 0.0);
    CHECK(max_diff(tiny.phase(), zero.phase()) <= 1e-7);
    CHECK(max_diff(tiny.amplitude(), zero.amplitude()) <= 1e-7);
  }
}

TEST_CASE("every flow preserves the amplitude mass") {
  std::mt19937_64 rng(59);
  const PeriodicGrid g(64);
  const Potential v = benchmark(g);
  for (int trial = 0; trial < 5; ++trial) {
    const WkbState u = smooth_random_state(rng, g, 0.3);
    const double m0 = mass(u.amplitude());
    CHECK(mass(flow1(u, 0.05).amplitude()) == doctest::Approx(m0).epsilon(1e-13));
    CHECK(mass(flow2(u, 0.05, 0.1).amplitude()) == doctest::Approx(m0).epsilon(1e-13));
    CHECK(mass(flow3(u, 0.05, v).amplitude()) == m0);
    CHECK(mass(flow4(u, 0.05, 0.1).amplitude()) == doctest::Approx(m0).epsilon(1e-13));
  }
}
