#pragma once

#include <string>
#include <vector>

#include "corkforge/kirby/diagram.hpp"
#include "corkforge/smith.hpp"

namespace corkforge::kirby {

struct LinkingData {
  std::vector<std::string> index;  // non-marked components, canonical order
  IMat m;                          // symmetric; diag = framing (2-handles) / 0 (dotted)
  int pos(const std::string& id) const {
    for (size_t i = 0; i < index.size(); ++i)
      if (index[i] == id) return static_cast<int>(i);
    fail(cat("component not in linking index: ", id));
  }
};

// Twists of a strand pair on one component only move its writhe, never a
// linking number, so self-twist templates are fine here; a pending twist
// between two different components is not.
inline void require_linkable(const HandleDiagram& d) {
  for (auto& t : d.twist_regions) {
    std::string o1, o2;
    for (auto& c : d.components)
      for (auto& a : c.arcs) {
        if (a == t.arc1) o1 = c.id;
        if (a == t.arc2) o2 = c.id;
      }
    if (o1.empty() || o2.empty()) fail(cat("twist region ", t.id, " references unknown arcs"));
    if (o1 != o2)
      fail(cat("twist region ", t.id, " joins ", o1, " and ", o2,
               "; instantiate the family before computing linking data"));
  }
}

// Linking matrix over the non-marked components.  Off-diagonal entries are
// half the signed crossing sum (odd sums are rejected as corrupt data).
inline LinkingData linking_matrix(const HandleDiagram& d) {
  require_linkable(d);
  Walks w = build_walks(d);
  LinkingData ld;
  std::vector<const Component*> comps;
  for (auto& c : d.components)
    if (c.role != Role::Marked) comps.push_back(&c);
  std::sort(comps.begin(), comps.end(), [](const Component* a, const Component* b) {
    return std::pair(role_rank(a->role), a->id) < std::pair(role_rank(b->role), b->id);
  });
  for (auto* c : comps) ld.index.push_back(c->id);
  const int n = static_cast<int>(comps.size());
  ld.m = IMat(n, n);
  for (int i = 0; i < n; ++i) {
    ld.m.at(i, i) = comps[i]->role == Role::TwoHandle ? comps[i]->framing : 0;
    for (int j = i + 1; j < n; ++j) {
      i64 s = crossing_sign_sum(d, w, comps[i]->id, comps[j]->id);
      if (s % 2 != 0)
        fail(cat("odd signed crossing sum between ", comps[i]->id, " and ", comps[j]->id));
      ld.m.at(i, j) = ld.m.at(j, i) = s / 2;
    }
  }
  return ld;
}

// H_1 of the boundary: cokernel of the full linking matrix.
inline AbelianGroup boundary_h1(const HandleDiagram& d) {
  return cokernel(linking_matrix(d).m);
}

// Submatrix rows = 2-handles, cols = dotted components; its cokernel must
// agree with the abelianized fundamental group of the 4-manifold.
inline IMat two_handle_by_dotted(const LinkingData& ld, const HandleDiagram& d) {
  std::vector<int> rows, cols;
  for (size_t i = 0; i < ld.index.size(); ++i) {
    Role r = d.get(ld.index[i]).role;
    if (r == Role::TwoHandle) rows.push_back(static_cast<int>(i));
    if (r == Role::Dotted) cols.push_back(static_cast<int>(i));
  }
  IMat m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) m.at(static_cast<int>(r), static_cast<int>(c)) = ld.m.at(rows[r], cols[c]);
  return m;
}

inline bool is_homology_sphere_boundary(const HandleDiagram& d) {
  auto ld = linking_matrix(d);
  if (ld.m.rows == 0) return true;  // empty diagram bounds S^3
  i64 det = det_bareiss(ld.m);
  return det == 1 || det == -1;
}

}  // namespace corkforge::kirby
