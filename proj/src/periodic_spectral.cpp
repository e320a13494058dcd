#include "wkbsplit/periodic_spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "wkbsplit/errors.hpp"

namespace wkbsplit {

namespace {

// FFTW plans are created once per size and shared; planning is serialized,
// execution through the new-array interface is thread-safe.
class FftPlans {
 public:
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  static FftPlans& instance() {
    static FftPlans plans;
    return plans;
  }

  std::pair<fftw_plan, fftw_plan> get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<Complex> scratch(n);
    auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan fwd = fftw_plan_dft_1d(len, data, data, FFTW_FORWARD, flags);
    fftw_plan bwd = fftw_plan_dft_1d(len, data, data, FFTW_BACKWARD, flags);
    return plans_.emplace(n, std::make_pair(fwd, bwd)).first->second;
  }

 private:
  FftPlans() = default;
  ~FftPlans() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.first);
      fftw_destroy_plan(p.second);
    }
  }

  std::mutex mutex_;
  std::map<std::size_t, std::pair<fftw_plan, fftw_plan>> plans_;
};

void fft_in_place(std::vector<Complex>& data, bool forward) {
  auto [fwd, bwd] = FftPlans::instance().get(data.size());
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(forward ? fwd : bwd, ptr, ptr);
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput(std::string(what) + ": non-finite sample");
  }
}

void require_finite(std::span<const Complex> values, const char* what) {
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InvalidInput(std::string(what) + ": non-finite sample");
    }
  }
}

void require_length(std::size_t got, const PeriodicGrid& grid, const char* what) {
  if (got != grid.size()) {
    throw InvalidInput(std::string(what) + ": length " + std::to_string(got) +
                       " does not match grid size " + std::to_string(grid.size()));
  }
}

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* what) {
  if (!(a == b)) throw InvalidInput(std::string(what) + ": grid mismatch");
}

double wrap_angle(double y) {
  double r = std::fmod(y, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

// Powers e^{iky} for k = 0..count-1. The recurrence is re-seeded from
// std::polar every 32 terms to bound the accumulated phase error.
void unit_powers(double y, std::size_t count, std::vector<Complex>& out) {
  out.resize(count);
  Complex step = std::polar(1.0, y);
  Complex z{1.0, 0.0};
  for (std::size_t k = 0; k < count; ++k) {
    if (k % 32 == 0) z = std::polar(1.0, static_cast<double>(k) * y);
    out[k] = z;
    z *= step;
  }
}

}  // namespace

namespace detail {
void fft_forward_in_place(std::vector<Complex>& data) { fft_in_place(data, true); }
void fft_backward_in_place(std::vector<Complex>& data) { fft_in_place(data, false); }
}  // namespace detail

// ---------------------------------------------------------------- grid

PeriodicGrid::PeriodicGrid(std::size_t n) : n_(n), dx_(0.0) {
  if (n < 4 || n % 2 != 0) {
    throw InvalidInput("PeriodicGrid: n must be even and >= 4, got " + std::to_string(n));
  }
  dx_ = kTwoPi / static_cast<double>(n);
}

std::vector<double> PeriodicGrid::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
  return x;
}

std::vector<int> PeriodicGrid::wavenumbers() const {
  std::vector<int> k(n_);
  for (std::size_t s = 0; s < n_; ++s) k[s] = wavenumber(s);
  return k;
}

std::size_t PeriodicGrid::slot_of(int k) const {
  const int half = static_cast<int>(n_ / 2);
  if (k < -half || k >= half) {
    throw InvalidInput("wavenumber " + std::to_string(k) + " outside the grid band");
  }
  return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + static_cast<int>(n_));
}

// ---------------------------------------------------------------- fields

RealField::RealField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require_length(values_.size(), grid_, "RealField");
  require_finite(values_, "RealField");
}

RealField RealField::zeros(const PeriodicGrid& grid) {
  return RealField(grid, std::vector<double>(grid.size(), 0.0));
}

RealField RealField::constant(const PeriodicGrid& grid, double value) {
  return RealField(grid, std::vector<double>(grid.size(), value));
}

RealField RealField::sample(const PeriodicGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
  return RealField(grid, std::move(v));
}

ComplexField::ComplexField(PeriodicGrid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  require_length(values_.size(), grid_, "ComplexField");
  require_finite(values_, "ComplexField");
}

ComplexField::ComplexField(const RealField& real)
    : grid_(real.grid()), values_(real.values().begin(), real.values().end()) {}

ComplexField ComplexField::zeros(const PeriodicGrid& grid) {
  return ComplexField(grid, std::vector<Complex>(grid.size()));
}

ComplexField ComplexField::sample(const PeriodicGrid& grid,
                                  const std::function<Complex(double)>& f) {
  std::vector<Complex> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
  return ComplexField(grid, std::move(v));
}

RealField ComplexField::real_part() const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](Complex z) { return z.real(); });
  return RealField(grid_, std::move(v));
}

RealField ComplexField::modulus_squared() const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](Complex z) { return std::norm(z); });
  return RealField(grid_, std::move(v));
}

SpectralCoefficients::SpectralCoefficients(PeriodicGrid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  require_length(coeffs_.size(), grid_, "SpectralCoefficients");
}

// ---------------------------------------------------------------- multipliers

FourierMultiplier::FourierMultiplier(PeriodicGrid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  require_length(values_.size(), grid_, "FourierMultiplier");
  for (std::size_t s = 0; s < values_.size(); ++s) {
    if (!std::isfinite(values_[s].real()) || !std::isfinite(values_[s].imag())) {
      throw InvalidInput("FourierMultiplier: undefined at k = " +
                         std::to_string(grid_.wavenumber(s)));
    }
  }
}

FourierMultiplier FourierMultiplier::from_symbol(const PeriodicGrid& grid,
                                                 const std::function<Complex(int)>& symbol) {
  std::vector<Complex> v(grid.size());
  for (std::size_t s = 0; s < v.size(); ++s) v[s] = symbol(grid.wavenumber(s));
  return FourierMultiplier(grid, std::move(v));
}

bool FourierMultiplier::is_hermitian(double tol) const {
  const std::size_t n = grid_.size();
  const std::size_t half = n / 2;
  auto close = [tol](Complex a, Complex b) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
  };
  if (!close(values_[0], std::conj(values_[0]))) return false;
  if (!close(values_[half], std::conj(values_[half]))) return false;
  for (std::size_t s = 1; s < half; ++s) {
    if (!close(values_[n - s], std::conj(values_[s]))) return false;
  }
  return true;
}

FourierMultiplier FourierMultiplier::operator*(const FourierMultiplier& other) const {
  require_same_grid(grid_, other.grid_, "FourierMultiplier product");
  std::vector<Complex> v(values_.size());
  for (std::size_t s = 0; s < v.size(); ++s) v[s] = values_[s] * other.values_[s];
  return FourierMultiplier(grid_, std::move(v));
}

FourierMultiplier derivative_multiplier(const PeriodicGrid& grid, int order) {
  if (order < 1) throw InvalidInput("spectral_derivative: order must be >= 1");
  const int nyquist = -static_cast<int>(grid.size() / 2);
  return FourierMultiplier::from_symbol(grid, [order, nyquist](int k) {
    if (order % 2 == 1 && k == nyquist) return Complex{0.0, 0.0};
    Complex ik{0.0, static_cast<double>(k)};
    Complex m{1.0, 0.0};
    for (int p = 0; p < order; ++p) m *= ik;
    return m;
  });
}

// ---------------------------------------------------------------- transforms

SpectralCoefficients forward_dft(const ComplexField& field) {
  std::vector<Complex> data = field.values();
  fft_in_place(data, true);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& c : data) c *= scale;
  return SpectralCoefficients(field.grid(), std::move(data));
}

SpectralCoefficients forward_dft(const RealField& field) {
  return forward_dft(ComplexField(field));
}

ComplexField inverse_dft(const SpectralCoefficients& coeffs) {
  std::vector<Complex> data = coeffs.coeffs();
  fft_in_place(data, false);
  return ComplexField(coeffs.grid(), std::move(data));
}

RealField inverse_dft_real(const SpectralCoefficients& coeffs) {
  return inverse_dft(coeffs).real_part();
}

ComplexField apply_fourier_multiplier(const ComplexField& field, const FourierMultiplier& m) {
  require_same_grid(field.grid(), m.grid(), "apply_fourier_multiplier");
  std::vector<Complex> data = field.values();
  fft_in_place(data, true);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (std::size_t s = 0; s < data.size(); ++s) data[s] *= m[s] * scale;
  fft_in_place(data, false);
  return ComplexField(field.grid(), std::move(data));
}

RealField apply_fourier_multiplier(const RealField& field, const FourierMultiplier& m) {
  if (!m.is_hermitian(1e-13)) {
    throw InvalidInput("apply_fourier_multiplier: a real field needs a Hermitian multiplier");
  }
  return apply_fourier_multiplier(ComplexField(field), m).real_part();
}

RealField spectral_derivative(const RealField& field, int order) {
  return apply_fourier_multiplier(field, derivative_multiplier(field.grid(), order));
}

ComplexField spectral_derivative(const ComplexField& field, int order) {
  return apply_fourier_multiplier(field, derivative_multiplier(field.grid(), order));
}

// ---------------------------------------------------------------- off-grid

FourierInterpolant::FourierInterpolant(const RealField& field) {
  const auto coeffs = forward_dft(field);
  const std::size_t n = field.size();
  half_n_ = static_cast<int>(n / 2);
  half_.resize(n / 2);
  half_[0] = Complex{coeffs[0].real(), 0.0};
  for (std::size_t k = 1; k < n / 2; ++k) half_[k] = 2.0 * coeffs[k];
  nyquist_ = coeffs[n / 2].real();
}

double FourierInterpolant::value(double y) const {
  double v = 0.0;
  double d = 0.0;
  value_and_slope(y, v, d);
  return v;
}

double FourierInterpolant::slope(double y) const {
  double v = 0.0;
  double d = 0.0;
  value_and_slope(y, v, d);
  return d;
}

void FourierInterpolant::value_and_slope(double y, double& value, double& slope) const {
  y = wrap_angle(y);
  const Complex step = std::polar(1.0, y);
  Complex z{1.0, 0.0};
  double re = 0.0;
  double im_k = 0.0;
  const std::size_t count = half_.size();
  for (std::size_t k = 0; k < count; ++k) {
    if (k % 32 == 0) z = std::polar(1.0, static_cast<double>(k) * y);
    const Complex t = half_[k] * z;
    re += t.real();
    im_k += static_cast<double>(k) * t.imag();
    z *= step;
  }
  value = re + nyquist_ * std::cos(static_cast<double>(half_n_) * y);
  slope = -im_k;
}

std::vector<double> evaluate_off_grid(const RealField& field, std::span<const double> points) {
  const FourierInterpolant interp(field);
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = interp.value(points[i]);
  return out;
}

std::vector<Complex> evaluate_off_grid(const ComplexField& field, std::span<const double> points) {
  const auto coeffs = forward_dft(field);
  const std::size_t n = field.size();
  const std::size_t half = n / 2;
  std::vector<Complex> powers;
  std::vector<Complex> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double y = wrap_angle(points[i]);
    unit_powers(y, half, powers);
    Complex acc = coeffs[0];
    for (std::size_t k = 1; k < half; ++k) {
      acc += coeffs[k] * powers[k] + coeffs[n - k] * std::conj(powers[k]);
    }
    acc += coeffs[half] * std::cos(static_cast<double>(half) * y);
    out[i] = acc;
  }
  return out;
}

// ---------------------------------------------------------------- norms

namespace {
double sobolev_from_coeffs(const SpectralCoefficients& c, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw InvalidInput("sobolev_norm: s must be finite and >= 0");
  }
  double acc = 0.0;
  for (std::size_t slot = 0; slot < c.size(); ++slot) {
    const double k = static_cast<double>(c.wavenumber(slot));
    acc += std::pow(1.0 + k * k, s) * std::norm(c[slot]);
  }
  return std::sqrt(kTwoPi * acc);
}
}  // namespace

double sobolev_norm(const RealField& field, double s) {
  return sobolev_from_coeffs(forward_dft(field), s);
}

double sobolev_norm(const ComplexField& field, double s) {
  return sobolev_from_coeffs(forward_dft(field), s);
}

double l2_norm(const RealField& field) {
  double acc = 0.0;
  for (double v : field.values()) acc += v * v;
  return std::sqrt(field.grid().dx() * acc);
}

double l2_norm(const ComplexField& field) {
  double acc = 0.0;
  for (const Complex& v : field.values()) acc += std::norm(v);
  return std::sqrt(field.grid().dx() * acc);
}

double l1_norm(const RealField& field) {
  double acc = 0.0;
  for (double v : field.values()) acc += std::abs(v);
  return field.grid().dx() * acc;
}

double max_norm(const RealField& field) {
  double m = 0.0;
  for (double v : field.values()) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------- resampling

RealField resample(const RealField& field, const PeriodicGrid& target) {
  const std::size_t n = field.size();
  const std::size_t m = target.size();
  if (n % m == 0) {
    const std::size_t stride = n / m;
    std::vector<double> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = field[j * stride];
    return RealField(target, std::move(v));
  }
  const auto x = target.nodes();
  return RealField(target, evaluate_off_grid(field, x));
}

ComplexField resample(const ComplexField& field, const PeriodicGrid& target) {
  const std::size_t n = field.size();
  const std::size_t m = target.size();
  if (n % m == 0) {
    const std::size_t stride = n / m;
    std::vector<Complex> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = field[j * stride];
    return ComplexField(target, std::move(v));
  }
  const auto x = target.nodes();
  return ComplexField(target, evaluate_off_grid(field, x));
}

namespace {
FourierMultiplier two_thirds_mask(const PeriodicGrid& grid) {
  const double cutoff = static_cast<double>(grid.size()) / 3.0;
  return FourierMultiplier::from_symbol(grid, [cutoff](int k) {
    return std::abs(static_cast<double>(k)) > cutoff ? Complex{0.0, 0.0} : Complex{1.0, 0.0};
  });
}
}  // namespace

RealField truncate_two_thirds(const RealField& field) {
  return apply_fourier_multiplier(field, two_thirds_mask(field.grid()));
}

ComplexField truncate_two_thirds(const ComplexField& field) {
  return apply_fourier_multiplier(field, two_thirds_mask(field.grid()));
}

}  // namespace wkbsplit
