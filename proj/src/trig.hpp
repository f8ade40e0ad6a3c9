#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace mdm::detail {

// sin(pi x), cos(pi x) with exact results at multiples of 1/2.
inline void sincospi(double x, double& s, double& c) {
  const double r = x - 2.0 * std::nearbyint(0.5 * x);  // [-1, 1]
  const double q = std::nearbyint(2.0 * r);             // {-2..2}
  const double y = r - 0.5 * q;                          // [-1/4, 1/4]
  const double sy = std::sin(std::numbers::pi * y);
  const double cy = std::cos(std::numbers::pi * y);
  switch (static_cast<int>(q) & 3) {
    case 0: s = sy; c = cy; break;
    case 1: s = cy; c = -sy; break;
    case 2: s = -sy; c = -cy; break;
    default: s = -cy; c = sy; break;
  }
}

// e^{-2 pi i x}
inline std::complex<double> expm2pi(double x) {
  double s, c;
  sincospi(2.0 * x, s, c);
  return {c, -s};
}

// Plain complex product; skips the NaN/Inf recovery of the library operator.
inline std::complex<double> cmul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace mdm::detail
