#pragma once

#include <random>

#include "corkforge/kirby/build.hpp"
#include "corkforge/kirby/diagram.hpp"

// Valid-by-construction random diagrams.  Components are assembled from
// whole events (disk passages, clasps, kinks, meridian wraps), each of which
// keeps the net passage bookkeeping consistent, so every output passes
// validate_diagram by design — the property tests then hammer the algebra.

namespace corkforge::testsupport {

using namespace corkforge::kirby;

struct RandomDiagram {
  HandleDiagram d;
  std::vector<std::string> dotted, handles, keyed;  // keyed = has a passage list
};

inline RandomDiagram random_diagram_impl(std::mt19937_64& rng, bool force_pair) {
  auto pick = [&](i64 lo, i64 hi) {
    return lo + static_cast<i64>(rng() % static_cast<unsigned long>(hi - lo + 1));
  };
  auto sign = [&]() { return rng() % 2 ? 1 : -1; };

  RandomDiagram out;
  DiagramBuilder b;
  struct Comp {
    std::string id;
    Role role;
    i64 framing;
    bool keyed;
    std::vector<std::vector<WalkStep>> events;
  };
  std::vector<Comp> comps;

  const int nd = static_cast<int>(pick(0, 2));
  const int nh = static_cast<int>(pick(1, 3));
  for (int i = 0; i < nd; ++i) comps.push_back({cat("d", i), Role::Dotted, 0, true, {}});
  size_t cu_idx = comps.size();
  if (force_pair) comps.push_back({"cu", Role::Dotted, 0, true, {}});
  for (int i = 0; i < nh; ++i) {
    // roughly half the handles are 0-framed carriers
    bool carrier = pick(0, 1) == 0;
    comps.push_back({cat("h", i), Role::TwoHandle, carrier ? 0 : pick(-3, 3), carrier, {}});
  }

  // disk passages through each keyed component
  for (size_t u = 0; u < comps.size(); ++u) {
    if (!comps[u].keyed) continue;
    const int n = static_cast<int>(pick(0, 3));
    for (int k = 0; k < n; ++k) {
      // passer: any other component; through a dotted disk only non-dotted
      std::vector<size_t> cands;
      for (size_t w = 0; w < comps.size(); ++w) {
        if (w == u) continue;
        if (comps[u].role == Role::Dotted && comps[w].role == Role::Dotted) continue;
        cands.push_back(w);
      }
      if (cands.empty()) continue;
      size_t w = cands[static_cast<size_t>(pick(0, static_cast<i64>(cands.size()) - 1))];
      int s = sign();
      int enter = b.crossing(s), exit = b.crossing(s);
      comps[w].events.push_back({{enter, true}, {exit, false}});
      comps[u].events.push_back({{enter, false}, {exit, true}});
      b.passage(comps[u].id, comps[w].id, s);
      // net bookkeeping is symmetric when the passer is keyed too
      if (comps[w].keyed) b.passage(comps[w].id, comps[u].id, s);
    }
  }

  // the cancelling partner enters after the passage loop, so nothing else can
  // thread through cu more than the single crossing pair below makes it
  if (force_pair) {
    comps.push_back({"cv", Role::TwoHandle, pick(-2, 2), false, {}});
    int s = sign();
    int enter = b.crossing(s), exit = b.crossing(s);
    comps.back().events.push_back({{enter, true}, {exit, false}});
    comps[cu_idx].events.push_back({{enter, false}, {exit, true}});
    b.passage("cu", "cv", s);
  }

  // clasps and kinks between/on unkeyed 2-handles
  std::vector<size_t> loose;
  for (size_t i = 0; i < comps.size(); ++i)
    if (comps[i].role == Role::TwoHandle && !comps[i].keyed) loose.push_back(i);
  if (loose.size() >= 2) {
    const int n = static_cast<int>(pick(0, 2));
    for (int k = 0; k < n; ++k) {
      size_t a = loose[static_cast<size_t>(pick(0, static_cast<i64>(loose.size()) - 1))];
      size_t c = loose[static_cast<size_t>(pick(0, static_cast<i64>(loose.size()) - 1))];
      if (a == c) continue;
      int s = sign();
      int x = b.crossing(s), y = b.crossing(s);
      comps[a].events.push_back({{x, true}, {y, false}});
      comps[c].events.push_back({{x, false}, {y, true}});
    }
  }
  for (size_t i : loose) {
    const int n = static_cast<int>(pick(0, 2));
    for (int k = 0; k < n; ++k) {
      int c = b.crossing(sign());
      comps[i].events.push_back({{c, true}, {c, false}});
    }
  }

  // maybe a marked meridian wrapping a keyed component
  std::vector<size_t> keyed_idx;
  for (size_t i = 0; i < comps.size(); ++i)
    if (comps[i].keyed) keyed_idx.push_back(i);
  if (!keyed_idx.empty() && pick(0, 1) == 0) {
    size_t u = keyed_idx[static_cast<size_t>(pick(0, static_cast<i64>(keyed_idx.size()) - 1))];
    Comp m{cat("m", 0), Role::Marked, 0, false, {}};
    int enter = b.crossing(1), exit = b.crossing(1);
    m.events.push_back({{enter, true}, {exit, false}});
    comps[u].events.push_back({{enter, false}, {exit, true}});
    b.passage(comps[u].id, m.id, 1);
    comps.push_back(std::move(m));
  }

  for (auto& c : comps) {
    std::shuffle(c.events.begin(), c.events.end(), rng);
    std::vector<WalkStep> walk;
    for (auto& e : c.events) walk.insert(walk.end(), e.begin(), e.end());
    b.component(c.id, c.role, c.framing, std::move(walk));
    if (c.keyed) b.passages(c.id);
    if (c.role == Role::Dotted) out.dotted.push_back(c.id);
    if (c.role == Role::TwoHandle) out.handles.push_back(c.id);
    if (c.keyed) out.keyed.push_back(c.id);
  }
  out.d = b.build();
  return out;
}

inline RandomDiagram random_diagram(std::mt19937_64& rng) {
  return random_diagram_impl(rng, false);
}

// As random_diagram, plus a dotted component "cu" whose disk a fresh 2-handle
// "cv" threads exactly once — so detect_cancel_and_reduce always has at least
// one eligible pair, with random other strands through cu getting rerouted.
inline RandomDiagram random_cancellable(std::mt19937_64& rng) {
  return random_diagram_impl(rng, true);
}

}  // namespace corkforge::testsupport
