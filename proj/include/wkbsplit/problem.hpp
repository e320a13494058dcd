#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "wkbsplit/reference_solvers.hpp"
#include "wkbsplit/wkb_flows.hpp"

namespace wkbsplit {

/// A parsed scalar expression in the variable x. Supports + - * / ^, unary
/// minus, parentheses, the constant pi and the functions sin cos tan exp log
/// sqrt abs sinh cosh tanh atan. Parse errors raise InvalidInput.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double operator()(double x) const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  Expression(std::string source, std::shared_ptr<const Node> root);

  std::string source_;
  std::shared_ptr<const Node> root_;
};

/// Initial phase S0, amplitude A0 and potential V of a periodic problem.
struct InitialData {
  std::string name;
  std::function<double(double)> phase;
  std::function<Complex(double)> amplitude;
  std::function<double(double)> potential;
  /// Canonical description, used to key cached reference solutions.
  std::string canonical;

  /// S0 = sin(x)/2, A0 = sin(x), V = sin(x) / (1 + cos(x)^2). Caustics form
  /// near t = 0.8.
  static InitialData caustic_benchmark();
  static InitialData from_expressions(std::string_view phase, std::string_view amplitude_re,
                                      std::string_view amplitude_im, std::string_view potential);

  WkbState wkb_state(const PeriodicGrid& grid) const;
  WaveState wave_state(const PeriodicGrid& grid, double eps) const;
  Potential sampled_potential(const PeriodicGrid& grid) const;
};

/// sin(x) / (1 + cos(x)^2).
double benchmark_potential(double x);

}  // namespace wkbsplit
