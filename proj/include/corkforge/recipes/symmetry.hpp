#pragma once

#include <map>
#include <string>
#include <utility>

#include "corkforge/kirby/diagram.hpp"

// Diagram symmetries.  Two kinds:
//
//  * rotation_about_vertical_axis: rotating the page by 180 degrees about an
//    in-page vertical line.  On planar data this reflects the layout and
//    flips the sheet, so the strand that was on top comes out underneath at
//    every crossing while crossing signs survive (the move is orientation-
//    preserving in the ambient 3-sphere).  Framings, twist parameters and
//    disk-passage signs are untouched.
//  * mirror: reflecting through the plane of the page.  Over/under swap again
//    but this time signs, framings, twist parameters and passage signs all
//    negate; the result presents the oppositely oriented manifold.
//
// A DiagramSymmetry carries the object correspondence: a permutation of
// component ids and one of arc ids.  Crossings need no separate table -- the
// serializer orders them by their arc labels, so their images are determined
// by the arc map together with the over/under exchange.

namespace corkforge::recipes {

using namespace corkforge::kirby;

enum class SymmetryKind { RotationAboutVerticalAxis, Mirror };

inline const char* symmetry_kind_name(SymmetryKind k) {
  return k == SymmetryKind::Mirror ? "mirror" : "rotation_about_vertical_axis";
}

inline SymmetryKind parse_symmetry_kind(const std::string& s) {
  if (s == "mirror") return SymmetryKind::Mirror;
  if (s == "rotation_about_vertical_axis") return SymmetryKind::RotationAboutVerticalAxis;
  fail(cat("unknown symmetry kind: ", s));
}

struct DiagramSymmetry {
  SymmetryKind kind = SymmetryKind::RotationAboutVerticalAxis;
  int order = 2;
  std::map<std::string, std::string> component_map;  // total on components
  std::map<std::string, std::string> arc_map;        // total on arcs
};

namespace detail {

inline const std::string& mapped(const std::map<std::string, std::string>& m,
                                 const std::string& key, const char* what) {
  auto it = m.find(key);
  if (it == m.end()) fail(cat("symmetry: no image for ", what, " ", key));
  return it->second;
}

}  // namespace detail

// Transport a diagram along a symmetry.  With identity maps this is the bare
// rotation/mirror move; with the exchange maps of a symmetric double it is
// the automorphism whose fixed-ness certifies the symmetry.
inline HandleDiagram apply_symmetry(const HandleDiagram& d, const DiagramSymmetry& F) {
  const bool mir = F.kind == SymmetryKind::Mirror;
  auto cm = [&](const std::string& id) -> const std::string& {
    return detail::mapped(F.component_map, id, "component");
  };
  auto am = [&](const std::string& a) -> const std::string& {
    return detail::mapped(F.arc_map, a, "arc");
  };

  HandleDiagram out;
  for (auto& c : d.components) {
    Component nc;
    nc.id = cm(c.id);
    nc.role = c.role;
    nc.framing = (mir && c.role == Role::TwoHandle) ? -c.framing : c.framing;
    for (auto& a : c.arcs) nc.arcs.push_back(am(a));
    out.components.push_back(std::move(nc));
  }
  for (auto& x : d.crossings) {
    // the strand underneath surfaces on top
    Crossing nx;
    nx.over_in = am(x.under_in);
    nx.over_out = am(x.under_out);
    nx.under_in = am(x.over_in);
    nx.under_out = am(x.over_out);
    nx.sign = mir ? -x.sign : x.sign;
    out.crossings.push_back(std::move(nx));
  }
  for (auto& [key, list] : d.passages) {
    std::vector<PassageEntry> nl;
    for (auto& e : list) nl.push_back({cm(e.component), mir ? -e.sign : e.sign});
    out.passages[cm(key)] = std::move(nl);
  }
  for (auto& t : d.twist_regions) {
    TwistRegion nt = t;
    nt.arc1 = am(t.arc1);
    nt.arc2 = am(t.arc2);
    if (mir) nt.parameter = TwistParam{-t.parameter.a, -t.parameter.b};
    out.twist_regions.push_back(std::move(nt));
  }
  return out;
}

inline DiagramSymmetry identity_symmetry(const HandleDiagram& d, SymmetryKind kind) {
  DiagramSymmetry F;
  F.kind = kind;
  F.order = 2;
  for (auto& c : d.components) {
    F.component_map[c.id] = c.id;
    for (auto& a : c.arcs) F.arc_map[a] = a;
  }
  return F;
}

// The bare 180-degree rotation or mirror of a single diagram.  Ids are kept,
// so applying the move twice restores the original bytes.
inline std::pair<HandleDiagram, DiagramSymmetry> rotate_mirror(const HandleDiagram& d,
                                                               SymmetryKind kind) {
  require_valid(d);
  DiagramSymmetry F = identity_symmetry(d, kind);
  return {apply_symmetry(d, F), std::move(F)};
}

}  // namespace corkforge::recipes
