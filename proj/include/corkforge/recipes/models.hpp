#pragma once

#include "corkforge/kirby/build.hpp"
#include "corkforge/recipes/double.hpp"
#include "corkforge/recipes/family.hpp"

// Bundled model diagrams.  cork_base is the one-1-handle/one-2-handle
// Mazur-type piece everything else is assembled from: the 2-handle runs
// through the carving disk three times (net once), the marked curve mu is the
// meridian of the dotted circle.  W is its symmetric double with a single
// axis clasp; the W_n family adds a 2n-twist box on two strands of h.  The
// JSON files under assets are exactly these, serialized; tools/make_diagrams
// regenerates them.

namespace corkforge::recipes {

using namespace corkforge::kirby;

inline HandleDiagram cork_base() {
  DiagramBuilder b;
  // j/h crossings: three passes of h through j's disk, signs + + -
  int c0 = b.crossing(1), c1 = b.crossing(1);
  int c2 = b.crossing(1), c3 = b.crossing(1);
  int c4 = b.crossing(-1), c5 = b.crossing(-1);
  // mu wraps j
  int c6 = b.crossing(1), c7 = b.crossing(1);
  b.component("j", Role::Dotted, 0,
              {{c0, false},
               {c1, true},
               {c2, false},
               {c3, true},
               {c4, false},
               {c5, true},
               {c6, false},
               {c7, true}});
  b.component("h", Role::TwoHandle, 0,
              {{c0, true}, {c1, false}, {c2, true}, {c3, false}, {c4, true}, {c5, false}});
  b.component("mu", Role::Marked, 0, {{c6, true}, {c7, false}});
  b.passage("j", "h", 1);
  b.passage("j", "h", 1);
  b.passage("j", "h", -1);
  b.passage("j", "mu", 1);
  b.passage("h", "j", 1);
  return b.build();
}

inline ReasonablyNiceCertificate cork_certificate() {
  ReasonablyNiceCertificate c;
  c.base = "cork-base";
  c.mu = "mu";
  c.not_slice_assumed = true;
  c.citation = "Akbulut, J. Differential Geom. 33 (1991) 335-356";
  return c;
}

// W: the double with one positive axis clasp hooking h through its image
inline std::pair<HandleDiagram, DiagramSymmetry> w_double() {
  TangleModification mod;
  mod.clasps.push_back({"h.a5", 1});
  return symmetric_double(cork_base(), cork_certificate(), mod);
}

// W_n: 2n symbolic full twists on the antiparallel strand pair of h that
// flanks the carving disk.  The box sits on the unprimed half only; the
// primed half stays clean so the role swap is available at every n.
inline TwistFamily wn_family() {
  HandleDiagram W = w_double().first;
  W.twist_regions.push_back({"box", "h.a1", "h.a3", TwistParam{2, 0}, true});
  require_valid(W);
  return family_from_diagram(std::move(W));
}

inline DiagramSymmetry wn_symmetry() { return w_double().second; }

// the slide of h across hp recorded in the W_n discussion (framing drops to -2)
inline BandSpec wn_slide_band() {
  BandSpec b;
  b.slider = "h";
  b.over = "hp";
  b.slider_arc = "h.a0";
  b.over_arc = "hp.a0";
  b.sign = -1;
  return b;
}

}  // namespace corkforge::recipes
