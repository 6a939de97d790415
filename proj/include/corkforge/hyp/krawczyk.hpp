#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "corkforge/common.hpp"
#include "corkforge/hyp/equations.hpp"
#include "corkforge/hyp/interval.hpp"
#include "corkforge/hyp/newton.hpp"

// Rigorous certification of geometric solutions.  The log-form system is
// exponentiated to its rectangular form
//     prod_t z_t^(A-C) (1-z_t)^(C-B)  =  (-1)^(sum C + d)
// (pure arithmetic, no transcendental functions), a Krawczyk step
//     K = y - Y F(y) + (I - Y F'(X)) (X - y)
// is evaluated in interval arithmetic on a box X around the numeric solution,
// and K strictly inside X proves a unique zero of the rectangular system in X.
// Two extras tie that zero back to the log-form system and geometry:
//   - branch pinning: the zero satisfies the log equation mod 2*pi*i; a float
//     evaluation at the midpoint plus an interval bound on the variation of
//     the log-sum over X shows the residual against the intended target is
//     below pi, hence exactly the target.  The only libm assumption is that
//     log/atan2 are accurate to an absolute 1e-3 per call -- used solely for
//     this branch selection, never in the contraction proof.
//   - geometricity: every certified box must lie strictly in Im z > 0.
// Box radius starts at 2^6 times the numeric residual with one retry at 2^10.

namespace corkforge::hyp {

struct Certificate {
  bool verified = false;
  std::vector<CInt> boxes;  // contain the certified solution when verified
  FillingSlopes slopes;
  double residual = 0.0;  // numeric residual the box radius was derived from
  double radius = 0.0;    // initial box half-width used
  std::string diagnostics;
};

namespace detail {

// Gauss-Jordan inverse with partial pivoting; empty result = singular.
inline std::vector<cpx> cinv(std::vector<cpx> a, int n) {
  std::vector<cpx> inv(static_cast<std::size_t>(n) * n, cpx(0.0, 0.0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    if (!(std::abs(a[piv * n + k]) > 1e-300)) return {};
    if (piv != k)
      for (int j = 0; j < n; ++j) {
        std::swap(a[k * n + j], a[piv * n + j]);
        std::swap(inv[k * n + j], inv[piv * n + j]);
      }
    cpx d = a[k * n + k];
    for (int j = 0; j < n; ++j) {
      a[k * n + j] /= d;
      inv[k * n + j] /= d;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      cpx f = a[i * n + k];
      if (f == cpx(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j) {
        a[i * n + j] -= f * a[k * n + j];
        inv[i * n + j] -= f * inv[k * n + j];
      }
    }
  }
  return inv;
}

struct RectRow {
  std::vector<i64> a, b;  // prod z^a (1-z)^b = sign
  double sign = 1.0;
};

inline RectRow rect_row(const SysRow& r, int n) {
  RectRow out;
  out.a.resize(n);
  out.b.resize(n);
  i64 csum = r.d;
  for (int t = 0; t < n; ++t) {
    i64 A = r.a[3 * t], B = r.a[3 * t + 1], C = r.a[3 * t + 2];
    out.a[t] = sub_ck(A, C);
    out.b[t] = sub_ck(C, B);
    csum = add_ck(csum, C);
  }
  out.sign = (((csum % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
  return out;
}

// prod z^a (1-z)^b over the boxes
inline CInt rect_prod(const RectRow& r, const std::vector<CInt>& X) {
  CInt p(1.0, 0.0);
  const CInt one(1.0, 0.0);
  for (std::size_t t = 0; t < X.size(); ++t) {
    if (r.a[t]) p = p * ipow(X[t], r.a[t]);
    if (r.b[t]) p = p * ipow(one - X[t], r.b[t]);
  }
  return p;
}

struct KrawczykOut {
  bool contracted = false;
  std::vector<CInt> K;
  std::string why;
};

inline KrawczykOut krawczyk_step(const std::vector<RectRow>& rows, const std::vector<CInt>& X) {
  const int n = static_cast<int>(X.size());
  const CInt one(1.0, 0.0);
  std::vector<cpx> y(n);
  for (int t = 0; t < n; ++t) y[t] = X[t].mid();
  std::vector<CInt> ybox(n);
  for (int t = 0; t < n; ++t) ybox[t] = CInt(y[t]);

  // F(y) in (thin) interval arithmetic, interval Jacobian over X, float
  // Jacobian at y for the preconditioner
  std::vector<CInt> Fy(n);
  std::vector<CInt> JX(static_cast<std::size_t>(n) * n);
  std::vector<cpx> Jy(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const RectRow& r = rows[i];
    CInt py = rect_prod(r, ybox);
    Fy[i] = py - CInt(r.sign, 0.0);
    CInt pX = rect_prod(r, X);
    for (int t = 0; t < n; ++t) {
      if (r.a[t] == 0 && r.b[t] == 0) {
        JX[i * n + t] = CInt(0.0, 0.0);
        Jy[i * n + t] = 0.0;
        continue;
      }
      CInt fac(0.0, 0.0);
      if (r.a[t]) fac = fac + CInt(static_cast<double>(r.a[t]), 0.0) / X[t];
      if (r.b[t]) fac = fac - CInt(static_cast<double>(r.b[t]), 0.0) / (one - X[t]);
      JX[i * n + t] = pX * fac;
      cpx facy = 0.0;
      if (r.a[t]) facy += static_cast<double>(r.a[t]) / y[t];
      if (r.b[t]) facy -= static_cast<double>(r.b[t]) / (1.0 - y[t]);
      cpx pyv = py.mid();
      Jy[i * n + t] = pyv * facy;
    }
  }
  std::vector<cpx> Y = cinv(std::move(Jy), n);
  if (Y.empty()) return {false, {}, "midpoint jacobian is singular"};

  // K = y - Y F(y) + (I - Y J(X)) (X - y)
  std::vector<CInt> K(n);
  for (int t = 0; t < n; ++t) {
    CInt acc = ybox[t];
    for (int j = 0; j < n; ++j) acc = acc - CInt(Y[t * n + j]) * Fy[j];
    for (int j = 0; j < n; ++j) {
      CInt m(0.0, 0.0);
      for (int k = 0; k < n; ++k) m = m + CInt(Y[t * n + k]) * JX[k * n + j];
      if (t == j) m = CInt(1.0, 0.0) - m;
      else m = -m;
      acc = acc + m * (X[j] - ybox[j]);
    }
    K[t] = acc;
  }
  for (int t = 0; t < n; ++t)
    if (!K[t].inside(X[t]))
      return {false, K, cat("no contraction: K box ", t, " not interior to X")};
  return {true, K, ""};
}

}  // namespace detail

inline Certificate certify_geometric(const IdealTriangulation& tri, const FillingSlopes& fill,
                                     const std::vector<cpx>& shapes) {
  GluingSystem sys = gluing_system(tri, fill);
  require(static_cast<int>(shapes.size()) == sys.n,
          cat("certify: ", shapes.size(), " shapes for ", sys.n, " tets"));
  Certificate cert;
  cert.slopes = fill;
  cert.residual = detail::residual_max(sys, shapes, 1.0);
  if (!std::isfinite(cert.residual)) {
    cert.diagnostics = "non-finite residual at the proposed shapes";
    return cert;
  }

  std::vector<int> idx = square_subsystem(sys);
  std::vector<detail::RectRow> rows;
  for (int i : idx) rows.push_back(detail::rect_row(sys.rows[i], sys.n));

  double base = 64.0 * std::max(cert.residual, 2.220446049250313e-16);
  std::string last = "";
  for (double r : {base, 16.0 * base}) {
    cert.radius = r;
    std::vector<CInt> X(sys.n);
    for (int t = 0; t < sys.n; ++t) X[t] = inflate(CInt(shapes[t]), r);
    detail::KrawczykOut out;
    try {
      out = detail::krawczyk_step(rows, X);
    } catch (const Error& e) {
      last = e.what();  // singular box hit the 0/1 cross-ratio locus
      continue;
    }
    if (!out.contracted) {
      last = out.why;
      continue;
    }
    // geometricity: the certified solution lies in K, which must be strictly
    // above the real axis
    bool geom = true;
    for (const CInt& k : out.K)
      if (!(k.im.lo > 0.0)) geom = false;
    if (!geom) {
      cert.diagnostics = "certified box does not lie in Im z > 0";
      return cert;
    }
    // branch pinning for each selected row (see header comment)
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
      const SysRow& lr = sys.rows[idx[ri]];
      cpx target = row_target(lr);
      std::vector<cpx> y(sys.n);
      for (int t = 0; t < sys.n; ++t) y[t] = out.K[t].mid();
      double eps = std::abs(row_value(lr, y) - target);
      double var = 0.0, coefsum = 0.0;
      const CInt one(1.0, 0.0);
      for (int t = 0; t < sys.n; ++t) {
        i64 A = lr.a[3 * t], B = lr.a[3 * t + 1], C = lr.a[3 * t + 2];
        coefsum += std::abs(static_cast<double>(A)) + std::abs(static_cast<double>(B)) +
                   std::abs(static_cast<double>(C));
        if (!A && !B && !C) continue;
        double rz = mag_lower(out.K[t]);
        double rz1 = mag_lower(one - out.K[t]);
        if (!(rz > 0.0) || !(rz1 > 0.0)) {
          cert.diagnostics = "branch check: box reaches a degenerate cross-ratio";
          return cert;
        }
        double rad = out.K[t].rad() * 1.4142135623730951;
        var += (std::abs(static_cast<double>(A)) / rz +
                std::abs(static_cast<double>(B)) / rz1 +
                std::abs(static_cast<double>(C)) / (rz * rz1)) *
               rad;
      }
      double slack =
          1e-3 * (coefsum + 3.0 * sys.n + std::abs(static_cast<double>(lr.d)) + 8.0);
      if (!(eps + var + slack < 3.14159265358979323846)) {
        cert.diagnostics = cat("branch ambiguity on row ", idx[ri], " (", eps + var + slack,
                               " not below pi)");
        return cert;
      }
    }
    cert.verified = true;
    cert.boxes = out.K;
    cert.diagnostics = "";
    return cert;
  }
  cert.diagnostics = last.empty() ? "no contraction" : last;
  return cert;
}

}  // namespace corkforge::hyp
