#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wkbsplit/errors.hpp"
#include "wkbsplit/problem.hpp"

using namespace wkbsplit;

TEST_CASE("expression arithmetic") {
  CHECK(Expression::parse("1 + 2 * 3")(0.0) == 7.0);
  CHECK(Expression::parse("(1 + 2) * 3")(0.0) == 9.0);
  CHECK(Expression::parse("8 / 4 / 2")(0.0) == 1.0);
  CHECK(Expression::parse("2 - 3 - 4")(0.0) == -5.0);
  CHECK(Expression::parse("2^3^2")(0.0) == 512.0);
  CHECK(Expression::parse("-2^2")(0.0) == -4.0);
  CHECK(Expression::parse("2^-10")(0.0) == std::ldexp(1.0, -10));
  CHECK(Expression::parse("1e-3")(0.0) == 1e-3);
  CHECK(Expression::parse(".5")(0.0) == 0.5);
  CHECK(Expression::parse("  pi ")(0.0) == std::numbers::pi);
}

TEST_CASE("expression functions of x") {
  const double xs[] = {0.0, 0.3, 1.7, 4.0};
  for (double x : xs) {
    CHECK(Expression::parse("sin(x)/2")(x) == std::sin(x) / 2);
    CHECK(Expression::parse("sin(x)/(1+cos(x)^2)")(x) == doctest::Approx(benchmark_potential(x)).epsilon(1e-15));
    CHECK(Expression::parse("exp(-x) * sqrt(x + 1)")(x) == doctest::Approx(std::exp(-x) * std::sqrt(x + 1)));
    CHECK(Expression::parse("abs(x - 2) + tanh(x) + atan(x)")(x) ==
          doctest::Approx(std::abs(x - 2) + std::tanh(x) + std::atan(x)));
    CHECK(Expression::parse("log(2 + x) + sinh(x) - cosh(x) + tan(x/8)")(x) ==
          doctest::Approx(std::log(2 + x) + std::sinh(x) - std::cosh(x) + std::tan(x / 8)));
  }
  CHECK(Expression::parse("sin(x)").source() == "sin(x)");
}

TEST_CASE("expression errors") {
  for (const char* bad : {"", "1 +", "(1", "1)", "foo(x)", "sin x", "y", "2 ** 3", "1..2", "sin()"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Expression::parse(bad), InvalidInput);
  }
}

TEST_CASE("initial data") {
  const PeriodicGrid g(16);
  const InitialData bench = InitialData::caustic_benchmark();
  CHECK(bench.name == "paper41");
  const WkbState u = bench.wkb_state(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    CHECK(u.phase()[j] == std::sin(x) / 2);
    CHECK(u.amplitude()[j] == Complex(std::sin(x), 0.0));
    CHECK(bench.sampled_potential(g).samples()[j] == benchmark_potential(x));
  }
  CHECK(benchmark_potential(std::numbers::pi / 2) == 1.0);

  const InitialData expr = InitialData::from_expressions("sin(x)/2", "sin(x)", "0", "sin(x)/(1+cos(x)^2)");
  CHECK(expr.name == "expr");
  const WkbState v = expr.wkb_state(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(v.phase()[j] == doctest::Approx(u.phase()[j]).epsilon(1e-15));
    CHECK(std::abs(v.amplitude()[j] - u.amplitude()[j]) < 1e-15);
  }
  CHECK(expr.canonical != bench.canonical);
  CHECK(InitialData::from_expressions("0", "1", "0", "0").canonical !=
        InitialData::from_expressions("0", "1", "0", "1").canonical);

  const WaveState w = bench.wave_state(g, 0.5);
  CHECK(w.eps() == 0.5);
  CHECK(std::abs(w.psi()[3] - u.amplitude()[3] * std::exp(Complex(0, u.phase()[3] / 0.5))) < 1e-15);
  CHECK_THROWS_AS(InitialData::from_expressions("sin(", "1", "0", "0"), InvalidInput);
}
