#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "wkbsplit/errors.hpp"
#include "wkbsplit/reference_solvers.hpp"
#include "wkbsplit/wkb_flows.hpp"

namespace wkbsplit {

enum class SchemeKind { lie_1234, strang_palindromic, tssp_strang, tssp_yoshida4 };

std::string_view to_string(SchemeKind kind);
/// Throws InvalidInput for unknown names.
SchemeKind parse_scheme_kind(std::string_view name);
bool is_wkb_scheme(SchemeKind kind);

struct SchemeSpec {
  SchemeKind kind;
  double eps;
  Potential potential;
  EikonalSettings eikonal{};
  double eps_max = 1.0;
  /// Apply 2/3-rule truncation to the state after every step.
  bool dealias = false;

  void validate() const;
};

struct TimeMarch {
  double h;
  std::size_t n_steps;

  /// h = t_final / n_steps.
  static TimeMarch to_final_time(double t_final, std::size_t n_steps);
  double t_final() const { return h * static_cast<double>(n_steps); }
};

/// One sub-flow invocation inside a composed step: flow index 1..4 run for
/// fraction * h. Sequences are listed in execution order.
struct SubStep {
  int flow;
  double fraction;

  bool operator==(const SubStep&) const = default;
};

/// phi1 o phi2 o phi3 o phi4: flow4 executes first.
std::span<const SubStep> lie_sequence();
/// phi1(h/2) o phi2(h/2) o phi3(h/2) o phi4(h) o phi3(h/2) o phi2(h/2) o phi1(h/2).
std::span<const SubStep> strang_sequence();

WkbState apply_sequence(const WkbState& u, std::span<const SubStep> sequence, double h,
                        const SchemeSpec& spec);

WkbState lie_step(const WkbState& u, double h, const SchemeSpec& spec);
WkbState strang_step(const WkbState& u, double h, const SchemeSpec& spec);

struct YoshidaCoefficients {
  double outer;  // gamma1, used twice
  double inner;  // gamma2 = 1 - 2 gamma1
};

/// Solution of 2 g1 + g2 = 1, 2 g1^3 + g2^3 = 0 (real root).
YoshidaCoefficients yoshida_coefficients();

/// Triple-jump composition base(g1 h) o base(g2 h) o base(g1 h) of a
/// time-symmetric one-step map base(state, h).
template <class Step>
auto yoshida4_compose(Step base) {
  return [base](const auto& u, double h) {
    const auto c = yoshida_coefficients();
    auto v = base(u, c.outer * h);
    v = base(v, c.inner * h);
    return base(v, c.outer * h);
  };
}

template <class State, class Record>
struct EvolveResult {
  State state;
  std::vector<Record> log;
};

struct NoObserver {
  template <class State>
  void operator()(std::size_t, double, const State&) const {}
};

namespace detail {
WkbState postprocess(const WkbState& u, const SchemeSpec& spec);
WaveState postprocess(const WaveState& w, const SchemeSpec& spec);
void require_kind(const WkbState&, const SchemeSpec& spec);
void require_kind(const WaveState& w, const SchemeSpec& spec);
}  // namespace detail

/// Applies the scheme's one-step map march.n_steps times. The observer is
/// called as observer(step_index, time, state) after every step; non-void
/// return values are collected into the result log. CharacteristicsDiverged
/// is rethrown annotated with the failing step and time.
template <class State, class Observer = NoObserver>
auto evolve(const State& u0, const SchemeSpec& spec, const TimeMarch& march,
            Observer&& observer = {}) {
  using Raw = std::invoke_result_t<Observer&, std::size_t, double, const State&>;
  using Record = std::conditional_t<std::is_void_v<Raw>, std::monostate, Raw>;

  spec.validate();
  detail::require_kind(u0, spec);
  if (!(march.h > 0.0) || march.n_steps == 0) {
    throw InvalidInput("evolve: need h > 0 and at least one step");
  }

  EvolveResult<State, Record> result{u0, {}};
  std::optional<TsspPropagator> propagator;
  if constexpr (std::is_same_v<State, WaveState>) {
    propagator.emplace(u0.grid(), u0.eps(), spec.potential, march.h,
                       spec.kind == SchemeKind::tssp_strang ? 2 : 4);
  }

  for (std::size_t step = 0; step < march.n_steps; ++step) {
    const double t = static_cast<double>(step + 1) * march.h;
    if constexpr (std::is_same_v<State, WaveState>) {
      std::vector<Complex> psi = result.state.psi().values();
      propagator->advance(psi);
      result.state = WaveState(ComplexField(result.state.grid(), std::move(psi)), u0.eps());
    } else {
      try {
        result.state = spec.kind == SchemeKind::lie_1234 ? lie_step(result.state, march.h, spec)
                                                         : strang_step(result.state, march.h, spec);
      } catch (const CharacteristicsDiverged& e) {
        throw CharacteristicsDiverged(e.what(), step, t - march.h);
      }
    }
    result.state = detail::postprocess(result.state, spec);
    if constexpr (std::is_void_v<Raw>) {
      observer(step, t, static_cast<const State&>(result.state));
    } else {
      result.log.push_back(observer(step, t, static_cast<const State&>(result.state)));
    }
  }
  return result;
}

}  // namespace wkbsplit
