#pragma once

#include <map>
#include <string>
#include <vector>

#include "corkforge/kirby/linking.hpp"

// Fundamental group of the 4-manifold from a handle diagram.
//
// Scheme: Wirtinger generators for every non-marked component (marked curves
// are decorations on the boundary; they are skipped entirely, and a strand
// running under a marked curve does not break a generator run). Relators:
//   (i)  one conjugation relation per crossing between non-marked strands,
//   (ii) one meridian generator per 2-handle set to 1 (forget that component
//        from the ambient complement),
//   (iii) one longitude word per 2-handle: traverse the component, record the
//        over-strand generator with the crossing sign at each undercrossing.
// The framing exponent on (iii) is dropped: the meridian is already dead.

namespace corkforge::kirby {

struct GroupPresentation {
  std::vector<std::string> names;          // generator names
  std::vector<std::vector<int>> relators;  // letters: +-(index+1)

  int rank() const { return static_cast<int>(names.size()); }
};

inline AbelianGroup abelianization(const GroupPresentation& p) {
  IMat m(static_cast<int>(p.relators.size()), p.rank());
  for (size_t r = 0; r < p.relators.size(); ++r)
    for (int letter : p.relators[r]) {
      int g = std::abs(letter) - 1;
      m.at(static_cast<int>(r), g) = add_ck(m.at(static_cast<int>(r), g), letter > 0 ? 1 : -1);
    }
  return cokernel(m);
}

namespace detail {

struct RunIndex {
  // per component: walk positions (sorted) of genuine undercrossings
  std::map<std::string, std::vector<int>> breaks;
  std::map<std::string, int> runs;      // number of runs (>= 1)
  std::map<std::string, int> gen_base;  // first global generator index

  int run_of(const std::string& comp, int pos) const {
    auto& b = breaks.at(comp);
    if (b.empty()) return 0;
    int cnt = 0;
    for (int p : b)
      if (p < pos) ++cnt;
    return cnt % static_cast<int>(b.size());
  }
  int gen(const std::string& comp, int run) const { return gen_base.at(comp) + run; }
};

}  // namespace detail

inline GroupPresentation pi1_presentation(const HandleDiagram& d) {
  require_concrete(d);
  require_valid(d);
  Walks w = build_walks(d);

  std::vector<const Component*> comps;
  for (auto& c : d.components)
    if (c.role != Role::Marked) comps.push_back(&c);
  std::sort(comps.begin(), comps.end(), [](const Component* a, const Component* b) {
    return std::pair(role_rank(a->role), a->id) < std::pair(role_rank(b->role), b->id);
  });

  auto marked = [&](const std::string& id) { return d.get(id).role == Role::Marked; };
  auto genuine = [&](int ci) {
    return !marked(over_component(w, d, ci)) && !marked(under_component(w, d, ci));
  };

  // walk position of each crossing slot, per strand
  std::map<std::pair<int, bool>, std::pair<std::string, int>> slot;  // (crossing, over?) -> (comp, pos)
  for (auto& [cid, steps] : w.steps)
    for (size_t q = 0; q < steps.size(); ++q)
      slot[{steps[q].crossing, steps[q].over}] = {cid, static_cast<int>(q)};

  detail::RunIndex ri;
  GroupPresentation p;
  for (auto* c : comps) {
    auto& steps = w.steps.at(c->id);
    std::vector<int> br;
    for (size_t q = 0; q < steps.size(); ++q)
      if (!steps[q].over && genuine(steps[q].crossing)) br.push_back(static_cast<int>(q));
    int runs = br.empty() ? 1 : static_cast<int>(br.size());
    ri.breaks[c->id] = std::move(br);
    ri.runs[c->id] = runs;
    ri.gen_base[c->id] = p.rank();
    for (int r = 0; r < runs; ++r) p.names.push_back(cat(c->id, ".g", r));
  }

  // (i) crossing relations: out = over^e * in * over^-e
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    if (!genuine(static_cast<int>(ci))) continue;
    auto [oc, opos] = slot.at({static_cast<int>(ci), true});
    auto [uc, upos] = slot.at({static_cast<int>(ci), false});
    int o = ri.gen(oc, ri.run_of(oc, opos)) + 1;
    int a = ri.gen(uc, ri.run_of(uc, upos)) + 1;
    int b = ri.gen(uc, (ri.run_of(uc, upos) + 1) % ri.runs.at(uc)) + 1;
    int e = d.crossings[ci].sign;
    p.relators.push_back({-b, e > 0 ? o : -o, a, e > 0 ? -o : o});
  }

  // (ii) meridian kill + (iii) longitude word, per 2-handle
  for (auto* c : comps) {
    if (c->role != Role::TwoHandle) continue;
    p.relators.push_back({ri.gen(c->id, 0) + 1});
    std::vector<int> ell;
    auto& steps = w.steps.at(c->id);
    for (size_t q = 0; q < steps.size(); ++q) {
      if (steps[q].over || !genuine(steps[q].crossing)) continue;
      auto [oc, opos] = slot.at({steps[q].crossing, true});
      int o = ri.gen(oc, ri.run_of(oc, opos)) + 1;
      ell.push_back(d.crossings[steps[q].crossing].sign > 0 ? o : -o);
    }
    if (!ell.empty()) p.relators.push_back(std::move(ell));
  }

  // cross-check: abelianization must match the linking-matrix presentation
  auto ld = linking_matrix(d);
  AbelianGroup from_lk = cokernel(two_handle_by_dotted(ld, d));
  AbelianGroup from_p = abelianization(p);
  if (!(from_lk == from_p))
    fail(cat("pi1 abelianization mismatch: presentation gives ", from_p.str(),
             ", linking matrix gives ", from_lk.str()));
  return p;
}

}  // namespace corkforge::kirby
