#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "corkforge/common.hpp"

namespace corkforge {

namespace detail {

// nearest-integer quotient: |a - q*b| <= |b|/2
inline i64 div_nearest(i64 a, i64 b) {
  i64 q = a / b;
  i64 r = a % b;
  if (r != 0 && 2 * abs_ck(r) > abs_ck(b)) q += ((r > 0) == (b > 0)) ? 1 : -1;
  return q;
}

}  // namespace detail

// Diagonal of the Smith normal form.  Entries come back nonnegative with
// d1 | d2 | ... | dk, padded with zeros to min(rows, cols).
inline std::vector<i64> smith_diagonal(IMat m) {
  const int R = m.rows, C = m.cols;
  const int N = std::min(R, C);
  std::vector<i64> diag;
  int t = 0;
  while (t < N) {
    // smallest nonzero entry of the working submatrix becomes the pivot
    int pr = -1, pc = -1;
    i64 best = 0;
    for (int i = t; i < R; ++i)
      for (int j = t; j < C; ++j) {
        i64 v = abs_ck(m.at(i, j));
        if (v != 0 && (pr < 0 || v < best)) {
          pr = i; pc = j; best = v;
        }
      }
    if (pr < 0) break;  // submatrix is all zero
    swap_rows(m, t, pr);
    swap_cols(m, t, pc);

    bool again = true;
    while (again) {
      again = false;
      for (int i = t + 1; i < R; ++i) {
        i64 v = m.at(i, t);
        if (v == 0) continue;
        row_axpy(m, i, t, -detail::div_nearest(v, m.at(t, t)));
        if (m.at(i, t) != 0) {  // strictly smaller residue: promote it
          swap_rows(m, i, t);
          again = true;
        }
      }
      for (int j = t + 1; j < C; ++j) {
        i64 v = m.at(t, j);
        if (v == 0) continue;
        col_axpy(m, j, t, -detail::div_nearest(v, m.at(t, t)));
        if (m.at(t, j) != 0) {
          swap_cols(m, j, t);
          again = true;
        }
      }
    }

    // pivot must divide the rest of the submatrix, else fold the offending
    // row in and redo this step with a smaller pivot
    i64 p = m.at(t, t);
    bool divides = true;
    for (int i = t + 1; i < R && divides; ++i)
      for (int j = t + 1; j < C; ++j)
        if (m.at(i, j) % p != 0) {
          row_axpy(m, t, i, 1);
          divides = false;
          break;
        }
    if (!divides) continue;

    diag.push_back(abs_ck(p));
    ++t;
  }
  while (static_cast<int>(diag.size()) < N) diag.push_back(0);
  return diag;
}

struct AbelianGroup {
  std::vector<i64> torsion;  // each > 1, divisibility order
  int rank = 0;              // free rank

  bool trivial() const { return torsion.empty() && rank == 0; }
  bool operator==(const AbelianGroup&) const = default;

  std::string str() const {
    if (trivial()) return "0";
    std::string s;
    if (rank == 1) s = "Z";
    else if (rank > 1) s = cat("Z^", rank);
    for (i64 d : torsion) {
      if (!s.empty()) s += " + ";
      s += cat("Z/", d);
    }
    return s;
  }
};

// Cokernel of Z^rows -> Z^cols where each row of m is a relation among the
// column generators.
inline AbelianGroup cokernel(const IMat& m) {
  auto diag = smith_diagonal(m);
  AbelianGroup g;
  int nonzero = 0;
  for (i64 d : diag) {
    if (d != 0) ++nonzero;
    if (d > 1) g.torsion.push_back(d);
  }
  g.rank = m.cols - nonzero;
  return g;
}

// Fraction-free determinant (Bareiss).  Intermediates are minors of m and are
// carried in 128 bits; anything bigger than that is out of scope here.
inline i64 det_bareiss(const IMat& m) {
  require(m.rows == m.cols, "det of non-square matrix");
  const int n = m.rows;
  if (n == 0) return 1;
  using big = __int128;
  std::vector<big> a(m.a.begin(), m.a.end());
  auto at = [&](int i, int j) -> big& { return a[static_cast<size_t>(i) * n + j]; };

  big prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  big d = at(n - 1, n - 1);
  if (sign < 0) d = -d;
  if (d > big(INT64_MAX) || d < big(INT64_MIN)) fail("determinant overflow");
  return static_cast<i64>(d);
}

}  // namespace corkforge
