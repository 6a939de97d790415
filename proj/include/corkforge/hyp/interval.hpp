#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "corkforge/common.hpp"

// Real and complex interval arithmetic for the certification paths.  Directed
// rounding is emulated by widening every result one ulp outward (the true
// value of a correctly rounded-to-nearest operation lies strictly within one
// ulp of the result), so no floating-point environment flag is ever touched:
// per-operation control, trivially safe under concurrency.  The extra ulp per
// operation is noise against the box radii used here.  sqrt is IEEE
// correctly rounded, so the same widening covers it soundly.  No other libm
// function is used in interval code.

namespace corkforge::hyp {

inline double ulp_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double ulp_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

struct RInt {
  double lo = 0.0, hi = 0.0;

  RInt() = default;
  RInt(double v) : lo(v), hi(v) {}
  RInt(double l, double h) : lo(l), hi(h) {}

  static RInt hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

  bool valid() const { return lo <= hi && std::isfinite(lo) && std::isfinite(hi); }
  double mid() const { return 0.5 * (lo + hi); }
  double rad() const { return std::max(ulp_up(hi - mid()), ulp_up(mid() - lo)); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  // strict containment in the interior of o
  bool inside(const RInt& o) const { return o.lo < lo && hi < o.hi; }
};

inline RInt operator-(const RInt& a) { return {-a.hi, -a.lo}; }

inline RInt operator+(const RInt& a, const RInt& b) {
  return {ulp_down(a.lo + b.lo), ulp_up(a.hi + b.hi)};
}

inline RInt operator-(const RInt& a, const RInt& b) {
  return {ulp_down(a.lo - b.hi), ulp_up(a.hi - b.lo)};
}

inline RInt operator*(const RInt& a, const RInt& b) {
  double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {ulp_down(std::min({p1, p2, p3, p4})), ulp_up(std::max({p1, p2, p3, p4}))};
}

inline RInt sqr(const RInt& a) {
  if (a.contains_zero()) {
    double m = std::max(a.hi * a.hi, a.lo * a.lo);
    return {0.0, ulp_up(m)};
  }
  double p1 = a.lo * a.lo, p2 = a.hi * a.hi;
  return {ulp_down(std::min(p1, p2)), ulp_up(std::max(p1, p2))};
}

inline RInt operator/(const RInt& a, const RInt& b) {
  if (b.contains_zero()) fail("interval division by an interval containing zero");
  double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
  return {ulp_down(std::min({p1, p2, p3, p4})), ulp_up(std::max({p1, p2, p3, p4}))};
}

inline RInt sqrt(const RInt& a) {
  require(a.lo >= 0.0, "interval sqrt of a possibly negative interval");
  return {ulp_down(std::sqrt(a.lo)), ulp_up(std::sqrt(a.hi))};
}

inline RInt abs(const RInt& a) {
  if (a.contains_zero()) return {0.0, std::max(-a.lo, a.hi)};
  return a.lo > 0.0 ? a : RInt{-a.hi, -a.lo};
}

// Complex interval box (axis-aligned rectangle).
struct CInt {
  RInt re, im;

  CInt() = default;
  CInt(double r) : re(r), im(0.0) {}
  CInt(double r, double i) : re(r), im(i) {}
  CInt(const RInt& r, const RInt& i) : re(r), im(i) {}
  CInt(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

  bool valid() const { return re.valid() && im.valid(); }
  std::complex<double> mid() const { return {re.mid(), im.mid()}; }
  double rad() const { return std::max(re.rad(), im.rad()); }
  bool inside(const CInt& o) const { return re.inside(o.re) && im.inside(o.im); }
  bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
};

inline CInt operator-(const CInt& a) { return {-a.re, -a.im}; }

inline CInt operator+(const CInt& a, const CInt& b) { return {a.re + b.re, a.im + b.im}; }
inline CInt operator-(const CInt& a, const CInt& b) { return {a.re - b.re, a.im - b.im}; }

inline CInt operator*(const CInt& a, const CInt& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// |a|^2 as a real interval
inline RInt norm(const CInt& a) { return sqr(a.re) + sqr(a.im); }

inline CInt conj(const CInt& a) { return {a.re, -a.im}; }

inline CInt operator/(const CInt& a, const CInt& b) {
  RInt n = norm(b);
  if (n.contains_zero()) fail("interval division by a box containing zero");
  CInt num = a * conj(b);
  return {num.re / n, num.im / n};
}

inline CInt inflate(const CInt& a, double r) {
  return {RInt{ulp_down(a.re.lo - r), ulp_up(a.re.hi + r)},
          RInt{ulp_down(a.im.lo - r), ulp_up(a.im.hi + r)}};
}

// Lower bound on |a| (0 if the box contains 0).
inline double mag_lower(const CInt& a) {
  double r = a.re.contains_zero() ? 0.0 : std::min(std::abs(a.re.lo), std::abs(a.re.hi));
  double i = a.im.contains_zero() ? 0.0 : std::min(std::abs(a.im.lo), std::abs(a.im.hi));
  return ulp_down(std::sqrt(ulp_down(r * r + i * i)));
}

// Upper bound on |a|.
inline double mag_upper(const CInt& a) {
  double r = std::max(std::abs(a.re.lo), std::abs(a.re.hi));
  double i = std::max(std::abs(a.im.lo), std::abs(a.im.hi));
  return ulp_up(std::sqrt(ulp_up(r * r + i * i)));
}

// Integer power with interval soundness; exponent may be negative.
inline CInt ipow(const CInt& z, i64 e) {
  if (e == 0) return {1.0, 0.0};
  bool neg = e < 0;
  std::uint64_t k =
      neg ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
  CInt base = z;
  CInt acc{1.0, 0.0};
  while (k) {
    if (k & 1) acc = acc * base;
    k >>= 1;
    if (k) base = base * base;
  }
  if (neg) return CInt{1.0, 0.0} / acc;
  return acc;
}

}  // namespace corkforge::hyp
