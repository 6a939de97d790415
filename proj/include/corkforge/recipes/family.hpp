#pragma once

#include <string>

#include "corkforge/kirby/diagram.hpp"
#include "corkforge/kirby/moves.hpp"

// Twist families: a template diagram whose twist regions carry linear forms
// in one integer parameter.  Instantiating at n replaces each region by the
// concrete full twists its form evaluates to; n = 0 leaves the template with
// the regions emptied out.  Family files are ordinary diagram files whose
// twist_regions carry symbolic parameters.

namespace corkforge::recipes {

struct TwistFamily {
  HandleDiagram tmpl;
  std::string parameter = "n";
};

inline TwistFamily family_from_diagram(HandleDiagram d) {
  require_valid(d);
  return {std::move(d), "n"};
}

inline TwistFamily parse_family(const std::string& text) {
  return family_from_diagram(parse_diagram(text));
}

inline std::string serialize_family(const TwistFamily& f) { return serialize_diagram(f.tmpl); }

inline HandleDiagram instantiate_family(const TwistFamily& fam, i64 n) {
  HandleDiagram out = materialize_twists(fam.tmpl, n);
  require_valid(out);
  return out;
}

}  // namespace corkforge::recipes
