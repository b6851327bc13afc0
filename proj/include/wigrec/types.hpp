#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace wigrec {

/// A phase-space point / field amplitude in units of sqrt(photons).
struct ComplexAmplitude {
  double re = 0.0;
  double im = 0.0;

  ComplexAmplitude() = default;
  ComplexAmplitude(double re_, double im_) : re(re_), im(im_) {}
  explicit ComplexAmplitude(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  static ComplexAmplitude polar(double modulus, double phase) {
    return {modulus * std::cos(phase), modulus * std::sin(phase)};
  }

  double mod2() const { return re * re + im * im; }
  double mod() const { return std::hypot(re, im); }
  double arg() const { return std::atan2(im, re); }
  std::complex<double> as_complex() const { return {re, im}; }
  bool is_finite() const { return std::isfinite(re) && std::isfinite(im); }
};

inline ComplexAmplitude operator-(ComplexAmplitude a, ComplexAmplitude b) {
  return {a.re - b.re, a.im - b.im};
}
inline ComplexAmplitude operator*(double s, ComplexAmplitude a) {
  return {s * a.re, s * a.im};
}

/// Invalid run or experiment configuration.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fewer data points than the operation requires.
struct insufficient_data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gain calibration produced an unusable result; message carries diagnostics.
struct calibration_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Interference series is flat, no fringe to analyze.
struct no_fringe_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A run directory is missing cells; message lists the gaps.
struct partial_data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadrature grid does not cover the convolution kernel support.
struct coverage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Least-squares fit could not be performed on the given samples.
struct fit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wigrec
