#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "corkforge/common.hpp"

// Ideal triangulations with peripheral curve data, in the hyptri/1 text
// format.  Corner pairs index the three shape logs: {0,1}/{2,3} -> 0,
// {0,2}/{1,3} -> 1, {0,3}/{1,2} -> 2.  A peripheral row is a length-3n
// integer vector plus a single i*pi coefficient d absorbing the frame-flip
// parity picked up while the curve transits link triangles (odd d is normal).

namespace corkforge::hyp {

using Perm4 = std::array<int, 4>;

inline int pair_col(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == 0) return b - 1;  // {0,1} -> 0, {0,2} -> 1, {0,3} -> 2
  return 5 - a - b;          // {1,2} -> 2, {1,3} -> 1, {2,3} -> 0
}

inline bool perm_odd(const Perm4& p) {
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 1;
}

inline Perm4 perm_inverse(const Perm4& p) {
  Perm4 q{};
  for (int i = 0; i < 4; ++i) q[p[i]] = i;
  return q;
}

struct Gluing {
  int tet = -1;
  Perm4 perm{};
  bool operator==(const Gluing&) const = default;
};

// One peripheral curve: coefficient row over (tet, corner-pair) plus the
// i*pi term.
struct CurveRow {
  std::vector<i64> a;  // length 3n
  i64 d = 0;
  bool operator==(const CurveRow&) const = default;
};

struct Cusp {
  CurveRow meridian;
  CurveRow longitude;
  bool operator==(const Cusp&) const = default;
};

struct IdealTriangulation {
  int n = 0;
  std::vector<std::array<Gluing, 4>> glue;  // [tet][face]
  std::vector<Cusp> cusps;

  bool operator==(const IdealTriangulation&) const = default;
};

namespace detail {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace detail

// Cusps = vertex classes, as sorted lists of (tet, vertex).
inline std::vector<std::vector<std::pair<int, int>>> vertex_classes(
    const IdealTriangulation& tri) {
  detail::UnionFind uf(4 * tri.n);
  for (int t = 0; t < tri.n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.glue[t][f];
      for (int v = 0; v < 4; ++v)
        if (v != f) uf.unite(4 * t + v, 4 * g.tet + g.perm[v]);
    }
  std::map<int, std::vector<std::pair<int, int>>> cls;
  for (int t = 0; t < tri.n; ++t)
    for (int v = 0; v < 4; ++v) cls[uf.find(4 * t + v)].push_back({t, v});
  std::vector<std::vector<std::pair<int, int>>> out;
  for (auto& [root, members] : cls) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

// Edge classes, as sorted lists of (tet, corner a, corner b) with a < b.
inline std::vector<std::vector<std::array<int, 3>>> edge_classes(
    const IdealTriangulation& tri) {
  auto eid = [&](int t, int a, int b) {
    if (a > b) std::swap(a, b);
    int k = a == 0 ? b - 1 : a + b;  // {0,1}{0,2}{0,3}{1,2}{1,3}{2,3} -> 0..5
    return 6 * t + k;
  };
  detail::UnionFind uf(6 * tri.n);
  for (int t = 0; t < tri.n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.glue[t][f];
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          if (a != f && b != f)
            uf.unite(eid(t, a, b), eid(g.tet, g.perm[a], g.perm[b]));
    }
  std::map<int, std::vector<std::array<int, 3>>> cls;
  for (int t = 0; t < tri.n; ++t)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        cls[uf.find(eid(t, a, b))].push_back({t, a, b});
  std::vector<std::vector<std::array<int, 3>>> out;
  for (auto& [root, members] : cls) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

// One angle-sum row per edge class (target 2*pi*i each).
inline std::vector<std::vector<i64>> edge_rows(const IdealTriangulation& tri) {
  auto classes = edge_classes(tri);
  std::vector<std::vector<i64>> rows;
  for (const auto& cls : classes) {
    std::vector<i64> row(3 * static_cast<size_t>(tri.n), 0);
    for (const auto& [t, a, b] : cls) row[3 * t + pair_col(a, b)] += 1;
    rows.push_back(std::move(row));
  }
  return rows;
}

// Face pairs (t,f) <-> (t2,f2), each listed once with the lexicographically
// smaller side first.
inline std::vector<std::array<int, 4>> face_pairs(const IdealTriangulation& tri) {
  std::vector<std::array<int, 4>> out;
  for (int t = 0; t < tri.n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.glue[t][f];
      int f2 = g.perm[f];
      if (std::make_pair(t, f) <= std::make_pair(g.tet, f2))
        out.push_back({t, f, g.tet, f2});
    }
  return out;
}

// Neumann-Zagier symplectic pairing on reduced coordinates (A-C, B-C).
inline i64 nz_pairing(const std::vector<i64>& r1, const std::vector<i64>& r2,
                      int n) {
  i64 s = 0;
  for (int t = 0; t < n; ++t) {
    i64 x1 = r1[3 * t] - r1[3 * t + 2], x2 = r1[3 * t + 1] - r1[3 * t + 2];
    i64 y1 = r2[3 * t] - r2[3 * t + 2], y2 = r2[3 * t + 1] - r2[3 * t + 2];
    s = add_ck(s, sub_ck(mul_ck(x1, y2), mul_ck(x2, y1)));
  }
  return s;
}

// Structural validation.  Parse calls this; callers constructing
// triangulations programmatically should too.
inline void validate(const IdealTriangulation& tri) {
  require(tri.n >= 1, "triangulation: need at least one tetrahedron");
  require(static_cast<int>(tri.glue.size()) == tri.n, "triangulation: gluing table size");
  for (int t = 0; t < tri.n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.glue[t][f];
      require(g.tet >= 0 && g.tet < tri.n,
              cat("tet ", t, " face ", f, ": glued tet ", g.tet, " out of range"));
      Perm4 sorted = g.perm;
      std::sort(sorted.begin(), sorted.end());
      require(sorted == Perm4{0, 1, 2, 3},
              cat("tet ", t, " face ", f, ": perm is not a permutation"));
      require(perm_odd(g.perm),
              cat("tet ", t, " face ", f,
                  ": even corner permutation (orientation-reversing gluing)"));
      int f2 = g.perm[f];
      require(!(g.tet == t && f2 == f),
              cat("tet ", t, " face ", f, ": face glued to itself"));
      const Gluing& back = tri.glue[g.tet][f2];
      require(back.tet == t && back.perm == perm_inverse(g.perm),
              cat("tet ", t, " face ", f, ": gluing not involutive"));
    }
  // connectivity
  {
    detail::UnionFind uf(tri.n);
    for (int t = 0; t < tri.n; ++t)
      for (int f = 0; f < 4; ++f) uf.unite(t, tri.glue[t][f].tet);
    for (int t = 1; t < tri.n; ++t)
      require(uf.find(t) == uf.find(0), "triangulation: not connected");
  }
  // cusped 3-manifold Euler count: #edge classes == #tets
  require(static_cast<int>(edge_classes(tri).size()) == tri.n,
          cat("triangulation: ", edge_classes(tri).size(), " edge classes for ",
              tri.n, " tets (every edge class must close up; want equal counts)"));
  auto vcls = vertex_classes(tri);
  require(tri.cusps.size() == vcls.size(),
          cat("triangulation: ", tri.cusps.size(), " cusp blocks for ",
              vcls.size(), " vertex classes"));
  auto erows = edge_rows(tri);
  for (size_t c = 0; c < tri.cusps.size(); ++c) {
    const Cusp& cu = tri.cusps[c];
    require(cu.meridian.a.size() == 3 * static_cast<size_t>(tri.n) &&
                cu.longitude.a.size() == 3 * static_cast<size_t>(tri.n),
            cat("cusp ", c, ": peripheral row length"));
    for (size_t e = 0; e < erows.size(); ++e) {
      require(nz_pairing(cu.meridian.a, erows[e], tri.n) == 0,
              cat("cusp ", c, " meridian: nonzero boundary against edge class ", e));
      require(nz_pairing(cu.longitude.a, erows[e], tri.n) == 0,
              cat("cusp ", c, " longitude: nonzero boundary against edge class ", e));
    }
    i64 pr = nz_pairing(cu.meridian.a, cu.longitude.a, tri.n);
    require(pr == 2,
            cat("cusp ", c, ": meridian/longitude pairing ", pr,
                " (want +2: intersection number one, meridian first)"));
    // peripheral support must lie on this cusp's link triangles
    std::set<int> tets;
    for (auto [t, v] : vcls[c]) tets.insert(t);
    for (int t = 0; t < tri.n; ++t)
      if (!tets.count(t))
        for (int k = 0; k < 3; ++k)
          require(cu.meridian.a[3 * t + k] == 0 && cu.longitude.a[3 * t + k] == 0,
                  cat("cusp ", c, ": peripheral weight on tet ", t,
                      " which does not meet the cusp"));
  }
}

// --- text format ----------------------------------------------------------

inline std::string perm_str(const Perm4& p) {
  std::string s;
  for (int i = 0; i < 4; ++i) s += static_cast<char>('0' + p[i]);
  return s;
}

inline std::string serialize(const IdealTriangulation& tri) {
  std::ostringstream o;
  o << "hyptri/1 " << tri.n << "\n\n";
  for (int t = 0; t < tri.n; ++t) {
    o << "tet " << t << "\n";
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.glue[t][f];
      o << "face " << f << " -> tet " << g.tet << " face " << g.perm[f]
        << " perm " << perm_str(g.perm) << "\n";
    }
    o << "\n";
  }
  for (size_t c = 0; c < tri.cusps.size(); ++c) {
    for (int which = 0; which < 2; ++which) {
      const CurveRow& r = which ? tri.cusps[c].longitude : tri.cusps[c].meridian;
      o << "cusp " << c << (which ? " longitude" : " meridian") << "\n";
      for (int t = 0; t < tri.n; ++t)
        o << r.a[3 * t] << " " << r.a[3 * t + 1] << " " << r.a[3 * t + 2] << " "
          << (t == 0 ? r.d : 0) << "\n";
    }
    if (c + 1 < tri.cusps.size()) o << "\n";
  }
  return std::move(o).str();
}

namespace detail {

struct Tok {
  int line;
  std::string text;
};

inline std::vector<Tok> tokenize(const std::string& text) {
  std::vector<Tok> toks;
  int ln = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    size_t b = line.find_first_not_of(" \t\r");
    size_t e = line.find_last_not_of(" \t\r");
    if (b != std::string::npos) toks.push_back({ln, line.substr(b, e - b + 1)});
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return toks;
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline i64 to_int(const std::string& w, int line, const char* what) {
  try {
    size_t used = 0;
    i64 v = std::stoll(w, &used);
    require(used == w.size(), "");
    return v;
  } catch (...) {
    fail(cat("line ", line, ": bad ", what, " '", w, "'"));
  }
}

}  // namespace detail

inline IdealTriangulation parse_triangulation(const std::string& text) {
  using detail::to_int;
  auto toks = detail::tokenize(text);
  size_t i = 0;
  auto need = [&](const char* what) -> const detail::Tok& {
    if (i >= toks.size()) fail(cat("unexpected end of file: expected ", what));
    return toks[i];
  };
  {
    const auto& tk = need("hyptri/1 header");
    auto w = detail::words(tk.text);
    require(w.size() == 2 && w[0] == "hyptri/1",
            cat("line ", tk.line, ": expected 'hyptri/1 <tets>'"));
    IdealTriangulation tri;
    tri.n = static_cast<int>(to_int(w[1], tk.line, "tet count"));
    require(tri.n >= 1 && tri.n <= 1000, cat("line ", tk.line, ": tet count out of range"));
    ++i;
    tri.glue.resize(tri.n);
    for (int t = 0; t < tri.n; ++t) {
      const auto& h = need("tet header");
      require(h.text == cat("tet ", t), cat("line ", h.line, ": expected 'tet ", t, "'"));
      ++i;
      for (int f = 0; f < 4; ++f) {
        const auto& tk2 = need("face gluing line");
        auto fw = detail::words(tk2.text);
        require(fw.size() == 9 && fw[0] == "face" && fw[2] == "->" && fw[3] == "tet" &&
                    fw[5] == "face" && fw[7] == "perm",
                cat("line ", tk2.line, ": expected 'face k -> tet t face f perm abcd'"));
        require(to_int(fw[1], tk2.line, "face index") == f,
                cat("line ", tk2.line, ": face lines must appear in order 0..3"));
        Gluing g;
        g.tet = static_cast<int>(to_int(fw[4], tk2.line, "target tet"));
        i64 f2 = to_int(fw[6], tk2.line, "target face");
        require(fw[8].size() == 4, cat("line ", tk2.line, ": perm must be 4 digits"));
        for (int k = 0; k < 4; ++k) {
          char c = fw[8][static_cast<size_t>(k)];
          require(c >= '0' && c <= '3', cat("line ", tk2.line, ": perm digit '", c, "'"));
          g.perm[k] = c - '0';
        }
        require(g.perm[f] == f2,
                cat("line ", tk2.line, ": perm sends face ", f, " to ", g.perm[f],
                    " but the line names face ", f2));
        tri.glue[t][f] = g;
        ++i;
      }
    }
    // cusp count is determined by the gluings; read that many blocks
    require(static_cast<int>(tri.glue.size()) == tri.n, "internal");
    size_t ncusp = vertex_classes(tri).size();
    for (size_t c = 0; c < ncusp; ++c) {
      Cusp cu;
      for (int which = 0; which < 2; ++which) {
        const char* kind = which ? "longitude" : "meridian";
        const auto& h = need("cusp header");
        require(h.text == cat("cusp ", c, " ", kind),
                cat("line ", h.line, ": expected 'cusp ", c, " ", kind, "'"));
        ++i;
        CurveRow r;
        r.a.assign(3 * static_cast<size_t>(tri.n), 0);
        for (int t = 0; t < tri.n; ++t) {
          const auto& tk2 = need("peripheral weight row");
          auto fw = detail::words(tk2.text);
          require(fw.size() == 4,
                  cat("line ", tk2.line, ": expected 4 integers (A B C D)"));
          for (int k = 0; k < 3; ++k)
            r.a[3 * t + k] = to_int(fw[k], tk2.line, "peripheral weight");
          r.d += to_int(fw[3], tk2.line, "peripheral weight");
          ++i;
        }
        (which ? cu.longitude : cu.meridian) = r;
      }
      tri.cusps.push_back(cu);
    }
    if (i != toks.size()) fail(cat("line ", toks[i].line, ": trailing content"));
    validate(tri);
    return tri;
  }
}

}  // namespace corkforge::hyp
