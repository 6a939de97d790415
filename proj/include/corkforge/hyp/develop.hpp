#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "corkforge/common.hpp"
#include "corkforge/hyp/tri.hpp"

// Affine development of the cusp cross-sections.  Each vertex (t,v) of the
// triangulation carries a link triangle; gluing across the three sides gives
// the link torus of the cusp.  Developing along a spanning tree places every
// link triangle of a cusp in one plane with a single common similarity class,
// so sizes of different triangles of the same cusp are directly comparable --
// exactly what the tilt computation needs.  Templated on the scalar: runs on
// complex<double> for numerics and on interval boxes for certified verdicts.
//
// Model tet has vertices (0, oo, z, 1); link triangle corner positions follow
// that placement, keyed by the far vertex of the incident edge.

namespace corkforge::hyp {

template <class C>
std::array<C, 4> link_positions(int v, const C& z) {
  // entry [v] is unused
  std::array<C, 4> p{C(0.0), C(0.0), C(0.0), C(0.0)};
  const C one(1.0);
  switch (v) {
    case 0:
      p[1] = C(0.0);
      p[2] = one / z;
      p[3] = one;
      break;
    case 1:
      p[0] = C(0.0);
      p[2] = z;
      p[3] = one;
      break;
    case 2:
      p[0] = -(one / z);
      p[1] = C(0.0);
      p[3] = one / (one - z);
      break;
    default:
      p[0] = -one;
      p[1] = C(0.0);
      p[2] = one / (z - one);
      break;
  }
  return p;
}

template <class C>
struct DevNode {
  int t = -1, v = -1;
  std::array<C, 4> pos{};  // developed corners, keyed by far vertex; [v] unused
};

namespace detail {

// Developed corners of the link triangle reached from (t,v) across side f.
template <class C>
std::array<C, 4> cross_develop(const IdealTriangulation& tri, const std::vector<C>& zs,
                               const std::array<C, 4>& devpos, int t, int v, int f, int& t2_out,
                               int& v2_out) {
  const Gluing& g = tri.glue[t][f];
  int t2 = g.tet, v2 = g.perm[v];
  int w1 = -1, w2 = -1;
  for (int w = 0; w < 4; ++w)
    if (w != v && w != f) (w1 < 0 ? w1 : w2) = w;
  std::array<C, 4> model = link_positions(v2, zs[t2]);
  C x1 = model[g.perm[w1]], x2 = model[g.perm[w2]];
  C y1 = devpos[w1], y2 = devpos[w2];
  C al = (y1 - y2) / (x1 - x2);
  C be = y1 - al * x1;
  std::array<C, 4> out{};
  for (int u = 0; u < 4; ++u)
    if (u != v2) out[u] = al * model[u] + be;
  t2_out = t2;
  v2_out = v2;
  return out;
}

}  // namespace detail

// One development per cusp, nodes in vertex_classes order.
template <class C>
std::vector<std::vector<DevNode<C>>> develop_cusps(const IdealTriangulation& tri,
                                                   const std::vector<C>& zs) {
  require(static_cast<int>(zs.size()) == tri.n, "develop_cusps: shape count");
  std::vector<std::vector<DevNode<C>>> out;
  for (const auto& cls : vertex_classes(tri)) {
    std::map<std::pair<int, int>, std::array<C, 4>> dev;
    std::vector<std::pair<int, int>> order{cls[0]};
    dev[cls[0]] = link_positions(cls[0].second, zs[cls[0].first]);
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      auto [t, v] = order[qi];
      for (int f = 0; f < 4; ++f) {
        if (f == v) continue;
        int t2, v2;
        std::array<C, 4> pos = detail::cross_develop(tri, zs, dev[{t, v}], t, v, f, t2, v2);
        if (!dev.count({t2, v2})) {
          dev[{t2, v2}] = pos;
          order.push_back({t2, v2});
        }
      }
    }
    require(dev.size() == cls.size(), "develop_cusps: cusp link is not connected");
    std::vector<DevNode<C>> nodes;
    for (const auto& [tv, pos] : dev) nodes.push_back({tv.first, tv.second, pos});
    out.push_back(std::move(nodes));
  }
  return out;
}

}  // namespace corkforge::hyp
