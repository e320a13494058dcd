#pragma once

// Fourier machinery on the uniform periodic grid of [0, 2*pi).
//
// Conventions:
//   forward:  u_hat[k] = (1/n) sum_j u_j exp(-i k x_j)
//   inverse:  u_j      = sum_k u_hat[k] exp(+i k x_j)
// Coefficients are stored in FFT-natural order {0, 1, ..., n/2-1, -n/2, ..., -1};
// wavenumber(slot) gives the signed integer of a slot.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wkbsplit {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

class PeriodicGrid {
 public:
  /// n must be even and at least 4.
  explicit PeriodicGrid(std::size_t n);

  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double node(std::size_t j) const { return static_cast<double>(j) * dx_; }
  std::vector<double> nodes() const;

  /// Signed wavenumber stored in FFT slot `slot`.
  int wavenumber(std::size_t slot) const {
    const auto half = n_ / 2;
    return slot < half ? static_cast<int>(slot) : static_cast<int>(slot) - static_cast<int>(n_);
  }
  std::vector<int> wavenumbers() const;

  /// Slot holding wavenumber k, for k in [-n/2, n/2).
  std::size_t slot_of(int k) const;

  bool operator==(const PeriodicGrid& other) const { return n_ == other.n_; }

 private:
  std::size_t n_;
  double dx_;
};

class RealField {
 public:
  RealField(PeriodicGrid grid, std::vector<double> values);

  static RealField zeros(const PeriodicGrid& grid);
  static RealField constant(const PeriodicGrid& grid, double value);
  static RealField sample(const PeriodicGrid& grid, const std::function<double(double)>& f);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

class ComplexField {
 public:
  ComplexField(PeriodicGrid grid, std::vector<Complex> values);
  explicit ComplexField(const RealField& real);

  static ComplexField zeros(const PeriodicGrid& grid);
  static ComplexField sample(const PeriodicGrid& grid, const std::function<Complex(double)>& f);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Complex>& values() const { return values_; }
  Complex operator[](std::size_t j) const { return values_[j]; }

  RealField real_part() const;
  RealField modulus_squared() const;

 private:
  PeriodicGrid grid_;
  std::vector<Complex> values_;
};

class SpectralCoefficients {
 public:
  SpectralCoefficients(PeriodicGrid grid, std::vector<Complex> coeffs);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex operator[](std::size_t slot) const { return coeffs_[slot]; }
  int wavenumber(std::size_t slot) const { return grid_.wavenumber(slot); }
  /// Coefficient of signed wavenumber k in [-n/2, n/2).
  Complex at(int k) const { return coeffs_[grid_.slot_of(k)]; }

 private:
  PeriodicGrid grid_;
  std::vector<Complex> coeffs_;
};

/// Diagonal operator on Fourier coefficients, tabulated per FFT slot.
class FourierMultiplier {
 public:
  FourierMultiplier(PeriodicGrid grid, std::vector<Complex> values);

  /// Tabulates symbol(k) on every grid wavenumber. A non-finite value means
  /// the multiplier is undefined there and raises InvalidInput.
  static FourierMultiplier from_symbol(const PeriodicGrid& grid,
                                       const std::function<Complex(int)>& symbol);

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<Complex>& values() const { return values_; }
  Complex operator[](std::size_t slot) const { return values_[slot]; }

  /// m(-k) == conj(m(k)) and the unpaired Nyquist value is real.
  bool is_hermitian(double tol = 1e-13) const;

  FourierMultiplier operator*(const FourierMultiplier& other) const;

 private:
  PeriodicGrid grid_;
  std::vector<Complex> values_;
};

SpectralCoefficients forward_dft(const ComplexField& field);
SpectralCoefficients forward_dft(const RealField& field);
ComplexField inverse_dft(const SpectralCoefficients& coeffs);
/// Inverse transform keeping only the real part; for Hermitian spectra.
RealField inverse_dft_real(const SpectralCoefficients& coeffs);

ComplexField apply_fourier_multiplier(const ComplexField& field, const FourierMultiplier& m);
/// Requires a Hermitian multiplier so the result stays real.
RealField apply_fourier_multiplier(const RealField& field, const FourierMultiplier& m);

template <class Field>
Field apply_fourier_multiplier(const Field& field, const std::function<Complex(int)>& symbol) {
  return apply_fourier_multiplier(field, FourierMultiplier::from_symbol(field.grid(), symbol));
}

/// Multiplier (ik)^order; the Nyquist mode is dropped for odd orders.
FourierMultiplier derivative_multiplier(const PeriodicGrid& grid, int order);

RealField spectral_derivative(const RealField& field, int order);
ComplexField spectral_derivative(const ComplexField& field, int order);

/// Fourier series of the field summed directly at arbitrary points
/// (reduced mod 2*pi). The Nyquist mode contributes as a real cosine.
std::vector<double> evaluate_off_grid(const RealField& field, std::span<const double> points);
std::vector<Complex> evaluate_off_grid(const ComplexField& field, std::span<const double> points);

/// sqrt(2*pi * sum_k (1 + k^2)^s |u_hat[k]|^2); s = 0 is the L2(0, 2*pi) norm.
double sobolev_norm(const RealField& field, double s);
double sobolev_norm(const ComplexField& field, double s);

/// Discrete norms sqrt(dx sum |u_j|^2) and dx sum |u_j|.
double l2_norm(const RealField& field);
double l2_norm(const ComplexField& field);
double l1_norm(const RealField& field);
double max_norm(const RealField& field);

/// Values of the field's Fourier series at the nodes of `target`. Nested
/// grids (target nodes a subset of the source nodes) are sampled directly.
RealField resample(const RealField& field, const PeriodicGrid& target);
ComplexField resample(const ComplexField& field, const PeriodicGrid& target);

/// Zeroes all modes with |k| > n/3.
RealField truncate_two_thirds(const RealField& field);
ComplexField truncate_two_thirds(const ComplexField& field);

/// Fast repeated evaluation of a real field's Fourier series and its first
/// derivative at arbitrary points. Uses the Hermitian half spectrum.
class FourierInterpolant {
 public:
  explicit FourierInterpolant(const RealField& field);

  double value(double y) const;
  /// Derivative of the series; the Nyquist cosine contributes nothing,
  /// consistent with spectral_derivative for odd orders.
  double slope(double y) const;
  void value_and_slope(double y, double& value, double& slope) const;

 private:
  std::vector<Complex> half_;  // k = 0 .. n/2-1, with the factor 2 folded in for k >= 1
  double nyquist_ = 0.0;
  int half_n_ = 0;
};

namespace detail {
// Unnormalized in-place transforms: forward sums exp(-i k x_j), backward
// sums exp(+i k x_j). Used by solvers that keep raw buffers across steps.
void fft_forward_in_place(std::vector<Complex>& data);
void fft_backward_in_place(std::vector<Complex>& data);
}  // namespace detail

}  // namespace wkbsplit
