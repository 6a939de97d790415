#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corkforge/kirby/linking.hpp"
#include "corkforge/kirby/moves.hpp"
#include "corkforge/kirby/pi1.hpp"
#include "corkforge/kirby/tietze.hpp"
#include "corkforge/recipes/symmetry.hpp"
#include "corkforge/smith.hpp"

// The symmetric-doubling recipe.  Take a Mazur-type base C, rotate a copy of
// it through the vertical axis, and reattach the two halves with a symmetric
// tangle modification between 2-handle strands.  The output is contractible
// by construction and carries an exchange involution F; the partner manifold
// W' with the same boundary comes from swapping the roles of the primed
// 1-/2-handle pair.
//
// The modification vocabulary is deliberately small:
//  * an axis clasp hooks an arc of a 2-handle of C through the matching arc
//    of the rotated copy (two crossings straddling the axis, one strand on
//    top at each, both with the clasp's sign);
//  * a twist pair inserts k concrete full twists between two 2-handle arcs
//    of C and the rotated copy of the same twists on the primed side.
// Nothing may touch a dotted circle's arcs or disk, so no new 1-handle /
// 2-handle linking can appear.

namespace corkforge::recipes {

struct ClaspMod {
  std::string arc;  // arc of a 2-handle of the base; the clasp runs to its primed image
  int sign = 1;
};

struct TwistMod {
  std::string arc1, arc2;  // arcs of 2-handles of the base
  i64 k = 1;               // full twists, sign = handedness
  bool antiparallel = true;
};

struct TangleModification {
  std::vector<ClaspMod> clasps;
  std::vector<TwistMod> twists;
  bool empty() const { return clasps.empty() && twists.empty(); }
};

inline nlohmann::json tangle_mod_to_json(const TangleModification& m) {
  nlohmann::json j;
  j["version"] = "tangle-mod/1";
  j["clasps"] = nlohmann::json::array();
  for (auto& c : m.clasps) j["clasps"].push_back({{"arc", c.arc}, {"sign", c.sign}});
  j["twists"] = nlohmann::json::array();
  for (auto& t : m.twists)
    j["twists"].push_back({{"arcs", {t.arc1, t.arc2}},
                           {"k", t.k},
                           {"align", t.antiparallel ? "antiparallel" : "parallel"}});
  return j;
}

inline TangleModification tangle_mod_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("tangle mod: not a JSON object");
  kirby::detail::check_keys(j, {"version", "clasps", "twists"}, "tangle mod");
  if (!j.contains("version") || j.at("version") != "tangle-mod/1")
    fail("tangle mod: missing or unsupported version (want tangle-mod/1)");
  TangleModification m;
  const nlohmann::json jc = j.value("clasps", nlohmann::json::array());
  const nlohmann::json jt = j.value("twists", nlohmann::json::array());
  for (const auto& e : jc) {
    kirby::detail::check_keys(e, {"arc", "sign"}, "clasp");
    m.clasps.push_back({e.at("arc").get<std::string>(), e.at("sign").get<int>()});
  }
  for (const auto& e : jt) {
    kirby::detail::check_keys(e, {"arcs", "k", "align"}, "twist");
    auto arcs = e.at("arcs").get<std::vector<std::string>>();
    if (arcs.size() != 2) fail("tangle mod: twist needs exactly 2 arcs");
    std::string align = e.value("align", "antiparallel");
    if (align != "antiparallel" && align != "parallel") fail(cat("tangle mod: bad align ", align));
    m.twists.push_back({arcs[0], arcs[1], e.at("k").get<i64>(), align == "antiparallel"});
  }
  return m;
}

// Sliceness facts are imported, never computed.  The certificate records the
// assumption that the marked meridian mu bounds no smooth disk in the base.
struct ReasonablyNiceCertificate {
  std::string base;  // label of the base diagram
  std::string mu;    // id of the marked meridian
  bool not_slice_assumed = false;
  std::string citation;
};

inline nlohmann::json cert_to_json(const ReasonablyNiceCertificate& c) {
  return {{"version", "slice-cert/1"},
          {"base", c.base},
          {"mu", c.mu},
          {"not_slice_assumed", c.not_slice_assumed},
          {"citation", c.citation}};
}

inline ReasonablyNiceCertificate cert_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("cert: not a JSON object");
  kirby::detail::check_keys(j, {"version", "base", "mu", "not_slice_assumed", "citation"}, "cert");
  if (!j.contains("version") || j.at("version") != "slice-cert/1")
    fail("cert: missing or unsupported version (want slice-cert/1)");
  ReasonablyNiceCertificate c;
  c.base = j.at("base").get<std::string>();
  c.mu = j.at("mu").get<std::string>();
  c.not_slice_assumed = j.at("not_slice_assumed").get<bool>();
  c.citation = j.value("citation", "");
  return c;
}

namespace detail {

inline std::string prime_id(const std::string& id) { return id + "p"; }

inline std::string prime_arc(const std::string& owner, const std::string& arc) {
  const std::string pre = owner + ".";
  if (arc.rfind(pre, 0) != 0)
    fail(cat("double: arc ", arc, " does not follow the <component>.<label> convention"));
  return prime_id(owner) + arc.substr(owner.size());
}

// mu must be the marked meridian of the unique dotted component
inline void check_certificate_shape(const HandleDiagram& c, const ReasonablyNiceCertificate& cert) {
  const Component* dot = nullptr;
  for (auto& comp : c.components)
    if (comp.role == Role::Dotted) {
      require(dot == nullptr, "double: base has more than one dotted circle");
      dot = &comp;
    }
  require(dot != nullptr, "double: base has no dotted circle");
  const Component* mu = c.find(cert.mu);
  if (!mu || mu->role != Role::Marked) fail(cat("double: certificate meridian ", cert.mu,
                                                " is not a marked curve of the base"));
  int entries = 0;
  for (auto& e : c.passages.at(dot->id))
    if (e.component == cert.mu) ++entries;
  require(entries == 1, "double: mu does not thread the dotted disk exactly once");
  Walks w = build_walks(c);
  int hits = 0;
  for (size_t ci = 0; ci < c.crossings.size(); ++ci) {
    auto oc = over_component(w, c, static_cast<int>(ci));
    auto uc = under_component(w, c, static_cast<int>(ci));
    if (oc == cert.mu || uc == cert.mu) {
      ++hits;
      require(oc == dot->id || uc == dot->id, "double: mu crosses something besides the dotted circle");
    }
  }
  require(hits == 2, "double: mu is not a meridian (needs exactly two crossings)");
}

}  // namespace detail

inline std::pair<HandleDiagram, DiagramSymmetry> symmetric_double(
    const HandleDiagram& c, const ReasonablyNiceCertificate& cert, const TangleModification& mod) {
  require_valid(c);
  require_concrete(c);
  if (!detect_cancel_and_reduce(c).is_mazur_type) fail("double: base does not reduce to Mazur type");
  detail::check_certificate_shape(c, cert);

  // the two halves: the base and its renamed rotation
  DiagramSymmetry to_prime;
  to_prime.kind = SymmetryKind::RotationAboutVerticalAxis;
  for (auto& comp : c.components) {
    const std::string p = detail::prime_id(comp.id);
    if (c.find(p)) fail(cat("double: component id ", p, " already taken"));
    to_prime.component_map[comp.id] = p;
    for (auto& a : comp.arcs) to_prime.arc_map[a] = detail::prime_arc(comp.id, a);
  }
  HandleDiagram primed = apply_symmetry(c, to_prime);

  HandleDiagram W;
  W.components = c.components;
  W.components.insert(W.components.end(), primed.components.begin(), primed.components.end());
  W.crossings = c.crossings;
  W.crossings.insert(W.crossings.end(), primed.crossings.begin(), primed.crossings.end());
  W.passages = c.passages;
  for (auto& [k, v] : primed.passages) W.passages[k] = v;
  require_valid(W);

  // splice the modification
  Walks ww = build_walks(W);
  std::set<std::string> used_arcs;
  auto claim_arc = [&](const std::string& a) {
    const std::string& owner = ww.owner(a);
    if (W.get(owner).role != Role::TwoHandle)
      fail(cat("double: modification touches ", a, ", which is not on a 2-handle"));
    if (owner.size() > 1 && owner.back() == 'p' && c.find(owner.substr(0, owner.size() - 1)))
      fail(cat("double: modification names primed arc ", a, "; specify the base side"));
    if (!used_arcs.insert(a).second) fail(cat("double: modification reuses arc ", a));
    return owner;
  };

  WalkEditor ed(W);
  struct PendingEntries {
    std::string key, comp;
    int sign, copies;
  };
  std::vector<PendingEntries> entries;
  for (auto& cl : mod.clasps) {
    if (cl.sign != 1 && cl.sign != -1) fail("double: clasp sign must be +-1");
    const std::string A = claim_arc(cl.arc);
    const std::string Ap = detail::prime_id(A);
    const std::string ap = detail::prime_arc(A, cl.arc);
    used_arcs.insert(ap);
    const int x1 = ed.add_crossing(cl.sign), x2 = ed.add_crossing(cl.sign);
    ed.insert_after(A, kirby::detail::arc_index(W.get(A), cl.arc), {{x1, true}, {x2, false}});
    ed.insert_after(Ap, kirby::detail::arc_index(W.get(Ap), ap), {{x1, false}, {x2, true}});
    if (W.passages.count(A)) {
      entries.push_back({A, Ap, cl.sign, 1});
      entries.push_back({Ap, A, cl.sign, 1});
    }
  }
  for (auto& tw : mod.twists) {
    if (tw.k == 0) fail("double: twist with k = 0 is empty");
    const std::string O1 = claim_arc(tw.arc1);
    const std::string O2 = claim_arc(tw.arc2);
    const std::string p1 = detail::prime_arc(O1, tw.arc1), p2 = detail::prime_arc(O2, tw.arc2);
    used_arcs.insert(p1);
    used_arcs.insert(p2);
    const i64 m = 2 * (tw.k < 0 ? -tw.k : tw.k);
    const int sg = tw.k > 0 ? 1 : -1;
    std::vector<WalkStep> s1, s2, s1p, s2p;
    for (i64 i = 0; i < m; ++i) {
      const int y = ed.add_crossing(sg);
      s1.push_back({y, i % 2 == 0});
      s2.push_back({y, i % 2 != 0});
    }
    for (i64 i = 0; i < m; ++i) {
      const int z = ed.add_crossing(sg);  // rotated copy: same signs, sheets flipped
      s1p.push_back({z, i % 2 != 0});
      s2p.push_back({z, i % 2 == 0});
    }
    if (tw.antiparallel) {
      std::reverse(s2.begin(), s2.end());
      std::reverse(s2p.begin(), s2p.end());
    }
    ed.insert_after(O1, kirby::detail::arc_index(W.get(O1), tw.arc1), s1);
    ed.insert_after(O2, kirby::detail::arc_index(W.get(O2), tw.arc2), s2);
    ed.insert_after(detail::prime_id(O1), kirby::detail::arc_index(W.get(detail::prime_id(O1)), p1),
                    s1p);
    ed.insert_after(detail::prime_id(O2), kirby::detail::arc_index(W.get(detail::prime_id(O2)), p2),
                    s2p);
    if (O1 != O2) {
      const int copies = static_cast<int>(tw.k < 0 ? -tw.k : tw.k);
      if (W.passages.count(O1)) entries.push_back({O1, O2, sg, copies});
      if (W.passages.count(O2)) entries.push_back({O2, O1, sg, copies});
      if (W.passages.count(detail::prime_id(O1)))
        entries.push_back({detail::prime_id(O1), detail::prime_id(O2), sg, copies});
      if (W.passages.count(detail::prime_id(O2)))
        entries.push_back({detail::prime_id(O2), detail::prime_id(O1), sg, copies});
    }
  }
  W = ed.apply();
  for (auto& e : entries)
    for (int i = 0; i < e.copies; ++i) W.passages.at(e.key).push_back({e.comp, e.sign});
  {
    auto rep = validate_diagram(W);
    if (!rep.ok()) fail(cat("double: spliced diagram is invalid:\n", rep.str()));
  }

  // the exchange involution: swap primes, suffix for suffix
  DiagramSymmetry F;
  F.kind = SymmetryKind::RotationAboutVerticalAxis;
  Walks wf = build_walks(W);
  for (auto& comp : c.components) {
    F.component_map[comp.id] = detail::prime_id(comp.id);
    F.component_map[detail::prime_id(comp.id)] = comp.id;
  }
  for (auto& [arc, owner] : wf.arc_owner) {
    const bool is_primed = !c.find(owner);
    const std::string base = is_primed ? owner.substr(0, owner.size() - 1) : owner;
    const std::string partner = is_primed ? base : detail::prime_id(base);
    const std::string image = partner + arc.substr(owner.size());
    F.arc_map[arc] = image;
  }
  for (auto& [arc, image] : F.arc_map)
    if (!wf.arc_owner.count(image)) fail(cat("double: asymmetric splice, no partner for ", arc));

  // contractibility and symmetry are postconditions, not hopes
  if (!same_diagram(apply_symmetry(W, F), W)) fail("double: output is not F-symmetric");
  if (!same_diagram(apply_symmetry(apply_symmetry(W, F), F), W))
    fail("double: F is not an involution");
  auto ld = linking_matrix(W);
  if (abs_ck(det_bareiss(ld.m)) != 1) fail("double: boundary linking determinant is not a unit");
  auto pres = pi1_presentation(W);
  auto tz = tietze_simplify(pres);
  if (!tz.trivial) fail("double: pi1 did not trivialize within budget");
  return {std::move(W), std::move(F)};
}

// The partner manifold: swap the roles of the primed 1-/2-handle pair.
inline HandleDiagram derive_partner(const HandleDiagram& w) {
  require_valid(w);
  std::string dotted_p, framed_p;
  for (auto& comp : w.components) {
    if (comp.id.size() < 2 || comp.id.back() != 'p') continue;
    if (!w.find(comp.id.substr(0, comp.id.size() - 1))) continue;
    if (comp.role == Role::Dotted) {
      if (!dotted_p.empty()) fail("derive_partner: ambiguous primed dotted circle");
      dotted_p = comp.id;
    } else if (comp.role == Role::TwoHandle && comp.framing == 0 && w.passages.count(comp.id)) {
      if (!framed_p.empty()) fail("derive_partner: ambiguous primed 0-framed 2-handle");
      framed_p = comp.id;
    }
  }
  if (dotted_p.empty() || framed_p.empty())
    fail("derive_partner: no labeled primed pair (j', h') to swap");
  HandleDiagram out = role_swap(w, dotted_p, framed_p);
  if (serialize_surgery(boundary_surgery(out)) != serialize_surgery(boundary_surgery(w)))
    fail("derive_partner: boundary surgery diagram changed");
  auto ld = linking_matrix(out);
  if (abs_ck(det_bareiss(ld.m)) != 1) fail("derive_partner: boundary linking determinant is not a unit");
  auto tz = tietze_simplify(pi1_presentation(out));
  if (!tz.trivial) fail("derive_partner: pi1 did not trivialize within budget");
  return out;
}

}  // namespace corkforge::recipes
