#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "corkforge/common.hpp"
#include "corkforge/hyp/equations.hpp"

// Complex length of the core geodesic of a filled cusp.  With filling slope
// (p,q), pick (r,s) with p*s - q*r = 1; the core holonomy is the peripheral
// curve r*m + s*l and its log-holonomy r*H(m) + s*H(l) is the complex length
// up to sign and full turns of the rotational part.  Normalized to Re > 0 and
// Im in (-pi, pi].  A different (r,s) shifts the value by multiples of
// p*H(m) + q*H(l) = 2*pi*i, so the normalized result is well defined.

namespace corkforge::hyp {

struct CoreGeodesicInfo {
  int cusp = 0;
  std::complex<double> complex_length{0.0, 0.0};
  double real_length = 0.0;
};

namespace detail {

inline i64 fdiv(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// g, x, y with a*x + b*y = g = gcd(a,b) > 0 (floor-division recursion)
inline std::array<i64, 3> ext_gcd(i64 a, i64 b) {
  if (b == 0) return a > 0 ? std::array<i64, 3>{a, 1, 0} : std::array<i64, 3>{-a, -1, 0};
  i64 q = fdiv(a, b);
  auto [g, x, y] = ext_gcd(b, sub_ck(a, mul_ck(q, b)));
  return {g, y, sub_ck(x, mul_ck(q, y))};
}

}  // namespace detail

inline CoreGeodesicInfo core_length(const IdealTriangulation& tri, const FillingSlopes& fill,
                                    const std::vector<std::complex<double>>& shapes, int cusp) {
  require(cusp >= 0 && cusp < static_cast<int>(tri.cusps.size()),
          cat("core_length: cusp ", cusp, " out of range"));
  require(fill.slopes.size() == tri.cusps.size(), "core_length: slope count mismatch");
  require(static_cast<bool>(fill.slopes[cusp]),
          cat("core_length: cusp ", cusp, " is unfilled"));
  auto [p, q] = *fill.slopes[cusp];
  auto [g, x, y] = detail::ext_gcd(p, q);
  require(g == 1, cat("core_length: slope (", p, ",", q, ") not primitive"));
  i64 r = -y, s = x;
  require(sub_ck(mul_ck(p, s), mul_ck(q, r)) == 1, "core_length: complement construction");

  const Cusp& cu = tri.cusps[cusp];
  SysRow mrow{cu.meridian.a, cu.meridian.d, RowTarget::Zero};
  SysRow lrow{cu.longitude.a, cu.longitude.d, RowTarget::Zero};
  std::complex<double> u = row_value(mrow, shapes);
  std::complex<double> v = row_value(lrow, shapes);
  std::complex<double> L =
      static_cast<double>(r) * u + static_cast<double>(s) * v;
  if (L.real() < 0.0) L = -L;
  double im = std::remainder(L.imag(), 2.0 * 3.14159265358979323846);
  if (im <= -3.14159265358979323846) im += 2.0 * 3.14159265358979323846;
  CoreGeodesicInfo info;
  info.cusp = cusp;
  info.complex_length = {L.real(), im};
  info.real_length = L.real();
  require(std::isfinite(info.real_length), "core_length: non-finite holonomy");
  require(info.real_length > 0.0,
          cat("core_length: degenerate core (Re = ", info.real_length, ")"));
  return info;
}

}  // namespace corkforge::hyp
