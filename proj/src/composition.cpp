#include "wkbsplit/composition.hpp"

#include <array>
#include <cmath>

namespace wkbsplit {

namespace {

constexpr std::array<SubStep, 4> kLie{{{4, 1.0}, {3, 1.0}, {2, 1.0}, {1, 1.0}}};

constexpr std::array<SubStep, 7> kStrang{
    {{1, 0.5}, {2, 0.5}, {3, 0.5}, {4, 1.0}, {3, 0.5}, {2, 0.5}, {1, 0.5}}};

}  // namespace

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::lie_1234:
      return "lie_1234";
    case SchemeKind::strang_palindromic:
      return "strang_palindromic";
    case SchemeKind::tssp_strang:
      return "tssp_strang";
    case SchemeKind::tssp_yoshida4:
      return "tssp_yoshida4";
  }
  return "unknown";
}

SchemeKind parse_scheme_kind(std::string_view name) {
  for (SchemeKind k : {SchemeKind::lie_1234, SchemeKind::strang_palindromic,
                       SchemeKind::tssp_strang, SchemeKind::tssp_yoshida4}) {
    if (name == to_string(k)) return k;
  }
  // Short aliases accepted on the command line.
  if (name == "lie") return SchemeKind::lie_1234;
  if (name == "strang") return SchemeKind::strang_palindromic;
  throw InvalidInput("unknown scheme '" + std::string(name) + "'");
}

bool is_wkb_scheme(SchemeKind kind) {
  return kind == SchemeKind::lie_1234 || kind == SchemeKind::strang_palindromic;
}

void SchemeSpec::validate() const {
  if (!std::isfinite(eps_max) || eps_max <= 0.0) {
    throw InvalidInput("SchemeSpec: eps_max must be > 0");
  }
  if (!std::isfinite(eps) || eps < 0.0 || eps > eps_max) {
    throw InvalidInput("SchemeSpec: eps must lie in [0, eps_max]");
  }
  if (!is_wkb_scheme(kind) && eps == 0.0) {
    throw InvalidInput("SchemeSpec: wave schemes need eps > 0");
  }
  eikonal.validate();
}

TimeMarch TimeMarch::to_final_time(double t_final, std::size_t n_steps) {
  if (!(t_final > 0.0) || !std::isfinite(t_final) || n_steps == 0) {
    throw InvalidInput("TimeMarch: need t_final > 0 and n_steps >= 1");
  }
  return TimeMarch{t_final / static_cast<double>(n_steps), n_steps};
}

std::span<const SubStep> lie_sequence() { return kLie; }
std::span<const SubStep> strang_sequence() { return kStrang; }

WkbState apply_sequence(const WkbState& u, std::span<const SubStep> sequence, double h,
                        const SchemeSpec& spec) {
  WkbState v = u;
  for (const SubStep& sub : sequence) {
    const double tau = sub.fraction * h;
    switch (sub.flow) {
      case 1:
        v = flow1(v, tau, spec.eikonal);
        break;
      case 2:
        v = flow2(v, tau, spec.eps);
        break;
      case 3:
        v = flow3(v, tau, spec.potential);
        break;
      case 4:
        v = flow4(v, tau, spec.eps);
        break;
      default:
        throw InvalidInput("apply_sequence: flow index must be 1..4");
    }
  }
  return v;
}

WkbState lie_step(const WkbState& u, double h, const SchemeSpec& spec) {
  return apply_sequence(u, lie_sequence(), h, spec);
}

WkbState strang_step(const WkbState& u, double h, const SchemeSpec& spec) {
  return apply_sequence(u, strang_sequence(), h, spec);
}

YoshidaCoefficients yoshida_coefficients() {
  // 2 g1^3 + g2^3 = 0 gives g2 = -cbrt(2) g1; with 2 g1 + g2 = 1 this fixes g1.
  const double cbrt2 = std::cbrt(2.0);
  const double outer = 1.0 / (2.0 - cbrt2);
  return {outer, 1.0 - 2.0 * outer};
}

namespace detail {

WkbState postprocess(const WkbState& u, const SchemeSpec& spec) {
  if (!spec.dealias) return u;
  return WkbState(truncate_two_thirds(u.phase()), truncate_two_thirds(u.amplitude()));
}

WaveState postprocess(const WaveState& w, const SchemeSpec& spec) {
  if (!spec.dealias) return w;
  return WaveState(truncate_two_thirds(w.psi()), w.eps());
}

void require_kind(const WkbState& u, const SchemeSpec& spec) {
  if (!is_wkb_scheme(spec.kind)) {
    throw InvalidInput("evolve: scheme " + std::string(to_string(spec.kind)) +
                       " advances wave states, not WKB states");
  }
  if (!(spec.potential.grid() == u.grid())) throw InvalidInput("evolve: potential grid mismatch");
}

void require_kind(const WaveState& w, const SchemeSpec& spec) {
  if (is_wkb_scheme(spec.kind)) {
    throw InvalidInput("evolve: scheme " + std::string(to_string(spec.kind)) +
                       " advances WKB states, not wave states");
  }
  if (w.eps() != spec.eps) throw InvalidInput("evolve: wave state eps differs from the scheme's");
  if (!(spec.potential.grid() == w.grid())) throw InvalidInput("evolve: potential grid mismatch");
}

}  // namespace detail

}  // namespace wkbsplit
