#pragma once

#include <complex>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "corkforge/common.hpp"
#include "corkforge/hyp/tri.hpp"

// Gluing / completeness / filling equations in log form.  A row with
// coefficients (A_t, B_t, C_t) and integer d stands for
//   sum_t A_t log z_t + B_t log z'_t + C_t log z''_t + d*i*pi  =  target,
// principal logs, z' = 1/(1-z), z'' = (z-1)/z.  Edge rows target 2*pi*i,
// completeness rows target 0, Dehn filling rows p*m + q*l target 2*pi*i.

namespace corkforge::hyp {

struct FillingSlopes {
  // one entry per cusp: nullopt = complete, else coprime (p, q) meaning the
  // curve p*meridian + q*longitude bounds a disk after filling
  std::vector<std::optional<std::pair<i64, i64>>> slopes;

  bool operator==(const FillingSlopes&) const = default;

  static FillingSlopes all_complete(std::size_t cusps) {
    FillingSlopes f;
    f.slopes.assign(cusps, std::nullopt);
    return f;
  }

  static FillingSlopes uniform(std::size_t cusps, i64 p, i64 q) {
    FillingSlopes f;
    f.slopes.assign(cusps, std::pair<i64, i64>{p, q});
    return f;
  }
};

enum class RowTarget { Zero, TwoPiI };

struct SysRow {
  std::vector<i64> a;  // 3 per tet: A, B, C
  i64 d = 0;
  RowTarget target = RowTarget::TwoPiI;
};

struct GluingSystem {
  int n = 0;                 // tetrahedra / unknowns
  std::vector<SysRow> rows;  // edge rows first, then cusp rows
  int edge_count = 0;        // rows[0..edge_count) are edge rows
  std::vector<int> row_cusp;  // owning cusp of rows[edge_count + k]
};

inline void validate_slopes(const IdealTriangulation& tri, const FillingSlopes& fill) {
  require(fill.slopes.size() == tri.cusps.size(),
          cat("filling slopes for ", fill.slopes.size(), " cusps, triangulation has ",
              tri.cusps.size()));
  for (std::size_t c = 0; c < fill.slopes.size(); ++c) {
    if (!fill.slopes[c]) continue;
    auto [p, q] = *fill.slopes[c];
    require(p != 0 || q != 0, cat("cusp ", c, ": slope (0,0) is not a filling"));
    i64 g = std::gcd(p, q);
    require(g == 1, cat("cusp ", c, ": slope (", p, ",", q, ") not coprime"));
  }
}

inline SysRow combine_peripheral(const CurveRow& m, const CurveRow& l, i64 p, i64 q) {
  SysRow r;
  r.a.resize(m.a.size());
  for (std::size_t j = 0; j < m.a.size(); ++j)
    r.a[j] = add_ck(mul_ck(p, m.a[j]), mul_ck(q, l.a[j]));
  r.d = add_ck(mul_ck(p, m.d), mul_ck(q, l.d));
  return r;
}

inline GluingSystem gluing_system(const IdealTriangulation& tri, const FillingSlopes& fill) {
  validate(tri);
  validate_slopes(tri, fill);
  GluingSystem sys;
  sys.n = tri.n;
  for (auto& e : edge_rows(tri)) {
    SysRow r;
    r.a = e;
    r.d = 0;
    r.target = RowTarget::TwoPiI;
    sys.rows.push_back(std::move(r));
  }
  sys.edge_count = static_cast<int>(sys.rows.size());
  for (std::size_t c = 0; c < tri.cusps.size(); ++c) {
    const Cusp& cu = tri.cusps[c];
    if (!fill.slopes[c]) {
      SysRow m{cu.meridian.a, cu.meridian.d, RowTarget::Zero};
      SysRow l{cu.longitude.a, cu.longitude.d, RowTarget::Zero};
      sys.rows.push_back(std::move(m));
      sys.rows.push_back(std::move(l));
      sys.row_cusp.push_back(static_cast<int>(c));
      sys.row_cusp.push_back(static_cast<int>(c));
    } else {
      auto [p, q] = *fill.slopes[c];
      SysRow r = combine_peripheral(cu.meridian, cu.longitude, p, q);
      r.target = RowTarget::TwoPiI;
      sys.rows.push_back(std::move(r));
      sys.row_cusp.push_back(static_cast<int>(c));
    }
  }
  return sys;
}

namespace detail {

// Exact rank of an integer matrix (fraction-free Bareiss, checked arithmetic).
inline int int_rank(std::vector<std::vector<i64>> m) {
  if (m.empty()) return 0;
  std::size_t cols = m[0].size();
  i64 prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    for (std::size_t i = row + 1; i < m.size(); ++i) {
      for (std::size_t j = col + 1; j < cols; ++j)
        m[i][j] = (sub_ck(mul_ck(m[row][col], m[i][j]), mul_ck(m[i][col], m[row][j]))) / prev;
      m[i][col] = 0;
    }
    prev = m[row][col];
    ++row;
  }
  return static_cast<int>(row);
}

}  // namespace detail

// Indices of a square subsystem: edge rows chosen greedily by exact rank,
// then every cusp row except the longitude of each complete cusp (one row per
// cusp).  Rank is measured in the reduced coordinates (A-C, B-C): the raw
// integer rows hide the dependency coming from log z + log z' + log z'' =
// i*pi, which is affine rather than linear.  The certification path runs on
// this subsystem.
inline std::vector<int> square_subsystem(const GluingSystem& sys) {
  auto reduced = [&](const std::vector<i64>& a) {
    std::vector<i64> r(2 * static_cast<std::size_t>(sys.n));
    for (int t = 0; t < sys.n; ++t) {
      r[2 * t] = sub_ck(a[3 * t], a[3 * t + 2]);
      r[2 * t + 1] = sub_ck(a[3 * t + 1], a[3 * t + 2]);
    }
    return r;
  };
  std::vector<int> picked;
  std::vector<std::vector<i64>> basis;
  int rank = 0;
  for (int i = 0; i < sys.edge_count; ++i) {
    basis.push_back(reduced(sys.rows[i].a));
    int r = detail::int_rank(basis);
    if (r > rank) {
      rank = r;
      picked.push_back(i);
    } else {
      basis.pop_back();
    }
  }
  int prev_cusp = -1;
  for (std::size_t k = 0; k < sys.row_cusp.size(); ++k) {
    int i = sys.edge_count + static_cast<int>(k);
    if (sys.row_cusp[k] == prev_cusp) continue;  // skip the longitude row
    prev_cusp = sys.row_cusp[k];
    picked.push_back(i);
    basis.push_back(reduced(sys.rows[i].a));
  }
  require(static_cast<int>(picked.size()) == sys.n,
          cat("square subsystem has ", picked.size(), " rows for ", sys.n, " unknowns"));
  require(detail::int_rank(basis) == sys.n, "selected subsystem is singular");
  return picked;
}

// ---- numeric evaluation (plain doubles; the certified path re-derives its
// own interval version) ----

inline std::complex<double> row_value(const SysRow& row,
                                      const std::vector<std::complex<double>>& z) {
  const std::complex<double> ip(0.0, 3.14159265358979323846);
  std::complex<double> s = static_cast<double>(row.d) * ip;
  for (std::size_t t = 0; t < z.size(); ++t) {
    i64 A = row.a[3 * t], B = row.a[3 * t + 1], C = row.a[3 * t + 2];
    if (A) s += static_cast<double>(A) * std::log(z[t]);
    if (B) s += static_cast<double>(B) * std::log(1.0 / (1.0 - z[t]));
    if (C) s += static_cast<double>(C) * std::log((z[t] - 1.0) / z[t]);
  }
  return s;
}

// d(row_value)/dz_t
inline std::complex<double> row_deriv(const SysRow& row,
                                      const std::vector<std::complex<double>>& z, int t) {
  i64 A = row.a[3 * t], B = row.a[3 * t + 1], C = row.a[3 * t + 2];
  std::complex<double> s = 0.0;
  if (A) s += static_cast<double>(A) / z[t];
  if (B) s += static_cast<double>(B) / (1.0 - z[t]);
  if (C) s += static_cast<double>(C) / (z[t] * (z[t] - 1.0));
  return s;
}

inline std::complex<double> row_target(const SysRow& row) {
  return row.target == RowTarget::TwoPiI
             ? std::complex<double>(0.0, 2.0 * 3.14159265358979323846)
             : std::complex<double>(0.0, 0.0);
}

}  // namespace corkforge::hyp
