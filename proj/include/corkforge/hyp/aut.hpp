#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "corkforge/common.hpp"
#include "corkforge/hyp/tri.hpp"

// Combinatorial symmetries.  A map is determined by the image of tet 0 (a
// target tet plus a corner permutation); it extends across face gluings by
// tau = glue'[t'][sigma(f)].perm o sigma o glue[t][f].perm^-1, and the
// triangulation is connected, so search is: try all n*24 seeds, propagate,
// keep the consistent ones.  Corner permutations of a single map share one
// parity (gluing perms are odd, and odd o sigma o odd preserves parity);
// even = orientation-preserving.  For a triangulation certified canonical,
// these maps are exactly the isometries of the underlying manifold.

namespace corkforge::hyp {

struct TetMap {
  int tet = -1;
  Perm4 perm{};
  bool operator==(const TetMap&) const = default;
};

struct Isomorphism {
  std::vector<TetMap> map;  // image of each tet
  bool reverses = false;    // orientation-reversing?
  bool operator==(const Isomorphism&) const = default;
};

namespace detail {

// (f after g)[i] = f[g[i]]
inline Perm4 perm_compose(const Perm4& f, const Perm4& g) {
  Perm4 r{};
  for (int i = 0; i < 4; ++i) r[i] = f[g[i]];
  return r;
}

inline std::optional<std::vector<TetMap>> extend_map(const IdealTriangulation& a,
                                                     const IdealTriangulation& b, int t0,
                                                     const Perm4& sigma) {
  std::vector<TetMap> img(a.n, TetMap{});
  std::vector<bool> known(a.n, false);
  img[0] = {t0, sigma};
  known[0] = true;
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int t = queue[qi];
    const TetMap& m = img[t];
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = a.glue[t][f];
      const Gluing& g2 = b.glue[m.tet][m.perm[f]];
      TetMap want{g2.tet, perm_compose(g2.perm, perm_compose(m.perm, perm_inverse(g.perm)))};
      if (!known[g.tet]) {
        img[g.tet] = want;
        known[g.tet] = true;
        queue.push_back(g.tet);
      } else if (!(img[g.tet] == want)) {
        return std::nullopt;
      }
    }
  }
  return img;
}

}  // namespace detail

inline std::vector<Isomorphism> isomorphisms(const IdealTriangulation& a,
                                             const IdealTriangulation& b) {
  validate(a);
  validate(b);
  std::vector<Isomorphism> out;
  if (a.n != b.n) return out;
  Perm4 sigma{0, 1, 2, 3};
  do {
    for (int t0 = 0; t0 < b.n; ++t0) {
      auto img = detail::extend_map(a, b, t0, sigma);
      if (!img) continue;
      Isomorphism iso;
      iso.map = std::move(*img);
      iso.reverses = perm_odd(sigma);
      for (const TetMap& m : iso.map)
        require(perm_odd(m.perm) == iso.reverses, "isomorphism with mixed corner parity");
      out.push_back(std::move(iso));
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

struct IsometryGroup {
  std::vector<Isomorphism> elements;      // elements[0] is the identity
  std::vector<std::vector<int>> table;    // table[i][j] = index of elements[i] o elements[j]

  int order() const { return static_cast<int>(elements.size()); }
  bool has_orientation_reversing() const {
    for (const Isomorphism& e : elements)
      if (e.reverses) return true;
    return false;
  }
};

inline IsometryGroup automorphisms(const IdealTriangulation& tri) {
  IsometryGroup grp;
  grp.elements = isomorphisms(tri, tri);
  // put the identity first
  for (std::size_t i = 0; i < grp.elements.size(); ++i) {
    bool ident = !grp.elements[i].reverses;
    for (int t = 0; ident && t < tri.n; ++t)
      if (!(grp.elements[i].map[t] == TetMap{t, Perm4{0, 1, 2, 3}})) ident = false;
    if (ident) {
      std::swap(grp.elements[0], grp.elements[i]);
      break;
    }
  }
  const int k = grp.order();
  require(k >= 1, "automorphism search lost the identity");
  auto compose = [&](const Isomorphism& f, const Isomorphism& g) {
    Isomorphism h;
    h.map.resize(tri.n);
    for (int t = 0; t < tri.n; ++t) {
      const TetMap& gm = g.map[t];
      const TetMap& fm = f.map[gm.tet];
      h.map[t] = {fm.tet, detail::perm_compose(fm.perm, gm.perm)};
    }
    h.reverses = f.reverses != g.reverses;
    return h;
  };
  grp.table.assign(k, std::vector<int>(k, -1));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Isomorphism h = compose(grp.elements[i], grp.elements[j]);
      for (int m = 0; m < k; ++m)
        if (grp.elements[m] == h) {
          grp.table[i][j] = m;
          break;
        }
      require(grp.table[i][j] >= 0, "automorphisms not closed under composition");
    }
  for (int i = 0; i < k; ++i) {
    require(grp.table[0][i] == i && grp.table[i][0] == i, "identity law failed");
    bool has_inv = false;
    for (int j = 0; j < k; ++j) has_inv = has_inv || grp.table[i][j] == 0;
    require(has_inv, "automorphism without inverse");
    for (int j = 0; j < k; ++j)
      require(grp.elements[grp.table[i][j]].reverses ==
                  (grp.elements[i].reverses != grp.elements[j].reverses),
              "orientation is not a homomorphism");
  }
  return grp;
}

}  // namespace corkforge::hyp
