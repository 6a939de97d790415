#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "corkforge/common.hpp"
#include "corkforge/hyp/dilog.hpp"
#include "corkforge/hyp/equations.hpp"

// Numerical shape solver.  Newton on the log-form gluing system in
// complex<double>, least squares over all rows (edge rows are dependent),
// residual measured in max norm.  Filled systems are reached by continuation:
// the filling targets ramp 0 -> 2*pi*i in adaptive steps starting from the
// complete-target solution, which keeps every intermediate step inside the
// geometric branch.  Deterministic throughout.

namespace corkforge::hyp {

using cpx = std::complex<double>;

struct ShapeVector {
  std::vector<cpx> z;
  double residual = 0.0;
  int iterations = 0;
};

struct SolveOptions {
  double tol = 1e-12;
  int max_iter = 100;
  std::vector<cpx> start;  // empty: all tets start at exp(i*pi/3)
};

inline double volume(const std::vector<cpx>& z) {
  double v = 0.0;
  for (const cpx& s : z) v += bloch_wigner(s);
  return v;
}

namespace detail {

// min ||A x - b||_2 by Householder QR; A is m x n row-major, m >= n.
inline std::vector<cpx> lstsq(std::vector<cpx> A, std::vector<cpx> b, int m, int n) {
  require(m >= n, "least squares needs at least as many rows as unknowns");
  double scale = 1e-300;
  for (const cpx& a : A) scale = std::max(scale, std::abs(a));
  for (int k = 0; k < n; ++k) {
    double colnorm2 = 0.0;
    for (int i = k; i < m; ++i) colnorm2 += std::norm(A[i * n + k]);
    double colnorm = std::sqrt(colnorm2);
    if (!(colnorm > 1e-14 * scale)) fail("jacobian numerically singular");
    cpx akk = A[k * n + k];
    double aa = std::abs(akk);
    cpx phase = aa > 0.0 ? akk / aa : cpx(1.0, 0.0);
    cpx alpha = -phase * colnorm;
    std::vector<cpx> v(m - k);
    v[0] = akk - alpha;
    for (int i = k + 1; i < m; ++i) v[i - k] = A[i * n + k];
    double vnorm2 = 0.0;
    for (const cpx& w : v) vnorm2 += std::norm(w);
    if (vnorm2 > 0.0) {
      for (int j = k; j < n; ++j) {
        cpx s = 0.0;
        for (int i = k; i < m; ++i) s += std::conj(v[i - k]) * A[i * n + j];
        s *= 2.0 / vnorm2;
        for (int i = k; i < m; ++i) A[i * n + j] -= s * v[i - k];
      }
      cpx s = 0.0;
      for (int i = k; i < m; ++i) s += std::conj(v[i - k]) * b[i];
      s *= 2.0 / vnorm2;
      for (int i = k; i < m; ++i) b[i] -= s * v[i - k];
    }
  }
  std::vector<cpx> x(n);
  for (int k = n - 1; k >= 0; --k) {
    cpx s = b[k];
    for (int j = k + 1; j < n; ++j) s -= A[k * n + j] * x[j];
    cpx rkk = A[k * n + k];
    if (!(std::abs(rkk) > 1e-14 * scale)) fail("jacobian numerically singular");
    x[k] = s / rkk;
  }
  return x;
}

// Target of row i with the filling rows ramped to theta.
inline cpx ramped_target(const GluingSystem& sys, int i, double theta) {
  const cpx two_pi_i(0.0, 2.0 * 3.14159265358979323846);
  if (i < sys.edge_count) return two_pi_i;
  if (sys.rows[i].target == RowTarget::Zero) return cpx(0.0, 0.0);
  return theta * two_pi_i;
}

inline double residual_max(const GluingSystem& sys, const std::vector<cpx>& z, double theta) {
  double r = 0.0;
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    double d = std::abs(row_value(sys.rows[i], z) - ramped_target(sys, static_cast<int>(i), theta));
    if (!(d <= r)) r = d;  // NaN propagates to the caller as a non-finite r
  }
  return r;
}

struct NewtonOut {
  std::vector<cpx> z;
  double residual = 0.0;
  int iterations = 0;
  bool ok = false;
};

inline NewtonOut newton_at(const GluingSystem& sys, double theta, std::vector<cpx> z, double tol,
                           int max_iter) {
  const int m = static_cast<int>(sys.rows.size()), n = sys.n;
  double res = residual_max(sys, z, theta);
  for (int iter = 0; iter < max_iter; ++iter) {
    if (!std::isfinite(res)) return {z, res, iter, false};
    if (res < tol) return {z, res, iter, true};
    std::vector<cpx> A(static_cast<std::size_t>(m) * n), F(m);
    for (int i = 0; i < m; ++i) {
      F[i] = ramped_target(sys, i, theta) - row_value(sys.rows[i], z);
      for (int t = 0; t < n; ++t) A[i * n + t] = row_deriv(sys.rows[i], z, t);
    }
    std::vector<cpx> dz = lstsq(std::move(A), std::move(F), m, n);
    double lam = 1.0;
    bool moved = false;
    for (int h = 0; h < 40; ++h) {
      std::vector<cpx> z2(z);
      for (int t = 0; t < n; ++t) z2[t] += lam * dz[t];
      double r2 = residual_max(sys, z2, theta);
      if (r2 < res) {
        z = std::move(z2);
        res = r2;
        moved = true;
        break;
      }
      lam *= 0.5;
    }
    if (!moved) return {z, res, iter, false};  // stalled
  }
  return {z, res, max_iter, res < tol};
}

}  // namespace detail

inline ShapeVector solve_shapes(const GluingSystem& sys, const SolveOptions& opts = {}) {
  require(sys.n >= 1, "empty gluing system");
  std::vector<cpx> z0 = opts.start;
  if (z0.empty()) z0.assign(sys.n, std::polar(1.0, 3.14159265358979323846 / 3.0));
  require(static_cast<int>(z0.size()) == sys.n,
          cat("start has ", z0.size(), " shapes, system has ", sys.n));

  bool filled = false;
  for (std::size_t k = sys.edge_count; k < sys.rows.size(); ++k)
    if (sys.rows[k].target == RowTarget::TwoPiI) filled = true;

  if (!filled) {
    auto out = detail::newton_at(sys, 1.0, z0, opts.tol, opts.max_iter);
    if (!out.ok)
      fail(cat("Newton did not converge (residual ", out.residual, " after ", out.iterations,
               " iterations)"));
    return {out.z, out.residual, out.iterations};
  }

  // continuation: solve with filling targets at 0, then ramp to 2*pi*i
  auto base = detail::newton_at(sys, 0.0, z0, opts.tol, opts.max_iter);
  if (!base.ok)
    fail(cat("Newton did not converge at the complete targets (residual ", base.residual, ")"));
  std::vector<cpx> z = base.z;
  int total_iters = base.iterations;
  double theta = 0.0, step = 0.125;
  while (theta < 1.0) {
    double t2 = std::min(1.0, theta + step);
    auto out = detail::newton_at(sys, t2, z, opts.tol, opts.max_iter);
    if (out.ok) {
      theta = t2;
      z = out.z;
      total_iters += out.iterations;
      step = std::min(0.25, 2.0 * step);
    } else {
      step *= 0.5;
      if (step < 1.0 / 4096.0)
        fail(cat("filling continuation stalled at theta=", theta, " (residual ", out.residual,
                 ")"));
    }
  }
  double res = detail::residual_max(sys, z, 1.0);
  return {z, res, total_iters};
}

}  // namespace corkforge::hyp
