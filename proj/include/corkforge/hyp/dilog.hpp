#pragma once

#include <cmath>
#include <complex>

#include "corkforge/common.hpp"

// Bloch-Wigner dilogarithm D(z) = Im Li2(z) + arg(1-z) log|z|.
// D is real-analytic on C \ {0,1}, vanishes on the real axis, and D(z) is the
// signed volume of the ideal tetrahedron with cross-ratio z.  Evaluation:
// reduce |z|<=1 by inversion, Re z<=1/2 by reflection, then either the plain
// power series (small |z|) or the Bernoulli series in u = -log(1-z), which
// converges like (|u|/2pi)^k and |u| <= 1.26 on the reduced domain.

namespace corkforge::hyp {

namespace detail {

// B_{2m} / (2m+1)! for m = 1..22
inline constexpr double li2_bern[] = {
    0.027777777777777777778,    -0.00027777777777777777778,  4.7241118669690098262e-6,
    -9.1857730746619635509e-8,  1.8978869988970999072e-9,    -4.0647616451442255268e-11,
    8.9216910204564525552e-13,  -1.9939295860721075687e-14,  4.5189800296199181917e-16,
    -1.0356517612181247014e-17, 2.3952186210261867457e-19,   -5.5817858743250093363e-21,
    1.3091507554183212858e-22,  -3.0874198024267402932e-24,  7.3159756527022034204e-26,
    -1.7408456572340007410e-27, 4.1576356446138997196e-29,   -9.9621484882846221032e-31,
    2.3940344248961653005e-32,  -5.7683473553673900843e-34,  1.3931794796470079778e-35,
    -3.3721219654850894705e-37,
};

inline constexpr double pi_sq_over_6 = 1.6449340668482264365;

// Plain power series, |z| <= 1/2.
inline std::complex<double> li2_series(std::complex<double> z) {
  std::complex<double> sum = z, term = z;
  for (int k = 2; k < 60; ++k) {
    term *= z;
    std::complex<double> add = term / static_cast<double>(k * k);
    sum += add;
    if (std::abs(add) < 1e-22 * std::abs(sum)) break;
  }
  return sum;
}

// Bernoulli series in u = -log(1-z); needs |u| well below 2pi.
inline std::complex<double> li2_log_series(std::complex<double> z) {
  std::complex<double> u = -std::log(1.0 - z);
  std::complex<double> u2 = u * u;
  std::complex<double> sum = u - 0.25 * u2;
  std::complex<double> p = u * u2;
  for (double c : li2_bern) {
    std::complex<double> add = c * p;
    sum += add;
    if (std::abs(add) < 1e-22 * std::abs(sum)) break;
    p *= u2;
  }
  return sum;
}

// Principal-branch Li2 for Im z != 0 (callers handle the real axis).
inline std::complex<double> li2(std::complex<double> z) {
  std::complex<double> shift = 0.0;
  double sign = 1.0;
  if (std::abs(z) > 1.0) {
    // Li2(z) = -Li2(1/z) - pi^2/6 - log^2(-z)/2, valid off [0,inf)
    std::complex<double> lz = std::log(-z);
    shift = -pi_sq_over_6 - 0.5 * lz * lz;
    sign = -1.0;
    z = 1.0 / z;
  }
  if (z.real() > 0.5) {
    // Li2(z) = pi^2/6 - log z log(1-z) - Li2(1-z)
    std::complex<double> refl = pi_sq_over_6 - std::log(z) * std::log(1.0 - z);
    std::complex<double> inner =
        (std::abs(1.0 - z) <= 0.5) ? li2_series(1.0 - z) : li2_log_series(1.0 - z);
    return shift + sign * (refl - inner);
  }
  std::complex<double> inner = (std::abs(z) <= 0.5) ? li2_series(z) : li2_log_series(z);
  return shift + sign * inner;
}

}  // namespace detail

inline double bloch_wigner(std::complex<double> z) {
  if (z.imag() == 0.0) return 0.0;
  require(!(z == std::complex<double>(0.0) || z == std::complex<double>(1.0)),
          "bloch_wigner at a degenerate cross-ratio");
  std::complex<double> l2 = detail::li2(z);
  return l2.imag() + std::arg(1.0 - z) * std::log(std::abs(z));
}

}  // namespace corkforge::hyp
