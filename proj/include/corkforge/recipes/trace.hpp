#pragma once

#include <string>
#include <vector>

#include "corkforge/hyp/report.hpp"
#include "corkforge/recipes/double.hpp"

// Proof traces: the logical skeleton of the non-extension arguments, as
// checkable artifacts.  Each step is either checked against the diagrams at
// hand or recorded as an assumption with its citation; a verdict stands only
// when every step is one of the two.  Sliceness and the homeomorphism
// extension are imported facts -- the method is obstruction by citation, so
// every valid verdict carries at least one assumed step.

namespace corkforge::recipes {

struct TraceStep {
  std::string id;
  std::string claim;
  std::string status;  // "checked" | "assumed" | "failed"
  std::string evidence;
};

struct ProofTrace {
  std::vector<TraceStep> steps;
  std::string verdict;      // "withheld" when a check failed
  std::string withheld_at;  // failing step id, empty otherwise

  std::vector<std::string> assumptions() const {
    std::vector<std::string> out;
    for (auto& s : steps)
      if (s.status == "assumed") out.push_back(s.id);
    return out;
  }
};

inline nlohmann::json trace_to_json(const ProofTrace& t) {
  nlohmann::json j;
  j["version"] = "proof-trace/1";
  j["steps"] = nlohmann::json::array();
  for (auto& s : t.steps)
    j["steps"].push_back(
        {{"id", s.id}, {"claim", s.claim}, {"status", s.status}, {"evidence", s.evidence}});
  j["verdict"] = t.verdict;
  j["assumptions"] = t.assumptions();
  if (!t.withheld_at.empty()) j["withheld_at"] = t.withheld_at;
  return j;
}

namespace detail {

class TraceBuilder {
 public:
  bool check(const std::string& id, const std::string& claim, bool ok, const std::string& good,
             const std::string& bad) {
    if (dead_) return false;
    if (ok) {
      t_.steps.push_back({id, claim, "checked", good});
      return true;
    }
    t_.steps.push_back({id, claim, "failed", bad});
    t_.verdict = "withheld";
    t_.withheld_at = id;
    dead_ = true;
    return false;
  }

  void assume(const std::string& id, const std::string& claim, const std::string& citation) {
    if (dead_) return;
    t_.steps.push_back({id, claim, "assumed", citation});
  }

  // an assumption that still has a precondition: withhold when it is absent
  void gate(const std::string& id, const std::string& claim, bool ok,
            const std::string& citation, const std::string& bad) {
    if (dead_) return;
    if (ok) {
      assume(id, claim, citation);
    } else {
      t_.steps.push_back({id, claim, "failed", bad});
      t_.verdict = "withheld";
      t_.withheld_at = id;
      dead_ = true;
    }
  }

  ProofTrace finish(const std::string& verdict) {
    if (!dead_) {
      t_.verdict = verdict;
      bool any_checked = false, any_assumed = false;
      for (auto& s : t_.steps) {
        any_checked |= s.status == "checked";
        any_assumed |= s.status == "assumed";
      }
      require(any_checked && any_assumed, "trace: a verdict needs checked and assumed steps");
    }
    return std::move(t_);
  }

 private:
  ProofTrace t_;
  bool dead_ = false;
};

inline bool is_primed(const HandleDiagram& d, const std::string& id) {
  return id.size() > 1 && id.back() == 'p' && d.find(id.substr(0, id.size() - 1)) != nullptr;
}

struct MeridianShape {
  bool ok = false;
  std::string wraps;  // component the curve wraps, when ok
};

// a marked curve wrapping one component: exactly two crossings, both with the
// same partner, and exactly one passage entry in the partner's list
inline MeridianShape meridian_shape(const HandleDiagram& d, const Walks& w,
                                    const std::string& curve) {
  MeridianShape r;
  const Component* c = d.find(curve);
  if (!c || c->role != Role::Marked) return r;
  std::string partner;
  int hits = 0;
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    auto oc = over_component(w, d, static_cast<int>(ci));
    auto uc = under_component(w, d, static_cast<int>(ci));
    if (oc != curve && uc != curve) continue;
    ++hits;
    const std::string other = oc == curve ? uc : oc;
    if (partner.empty()) partner = other;
    else if (partner != other) return r;
  }
  if (hits != 2 || partner.empty()) return r;
  if (!d.passages.count(partner)) return r;
  int entries = 0;
  for (auto& e : d.passages.at(partner))
    if (e.component == curve) ++entries;
  if (entries != 1) return r;
  r.ok = true;
  r.wraps = partner;
  return r;
}

}  // namespace detail

// The non-extension argument for a symmetric double (w, F) and its partner
// w_prime: f = F restricted to the boundary, mu the certified meridian.
inline ProofTrace proof_trace_nonstrong(const HandleDiagram& w, const HandleDiagram& w_prime,
                                        const DiagramSymmetry& F,
                                        const ReasonablyNiceCertificate& cert) {
  require_valid(w);
  require_valid(w_prime);
  detail::TraceBuilder tb;

  std::string mup;
  {
    auto it = F.component_map.find(cert.mu);
    if (it != F.component_map.end()) mup = it->second;
  }
  Walks wp = build_walks(w_prime);
  auto shape = mup.empty() ? detail::MeridianShape{} : detail::meridian_shape(w_prime, wp, mup);
  const bool wraps_primed_handle = shape.ok && detail::is_primed(w_prime, shape.wraps) &&
                                   w_prime.get(shape.wraps).role == Role::TwoHandle;
  tb.check("f-mu-meridian", "f(mu) is the meridian of the 2-handle j' in W'",
           wraps_primed_handle,
           cat("F sends ", cert.mu, " to ", mup, ", the meridian of ", shape.ok ? shape.wraps : "?"),
           cat("image ", mup, " is not the meridian of a primed 2-handle"));
  const std::string jp = shape.ok ? shape.wraps : "";

  std::string hp;
  for (auto& c : w_prime.components)
    if (c.role == Role::Dotted && detail::is_primed(w_prime, c.id)) hp = c.id;
  tb.check("carve-embed",
           "X := W' with the dotted circle h' erased; W' embeds in X by carving the slice disk",
           !hp.empty(), cat("h' = ", hp, "; erasing the dot fills the carved disk back in"),
           "W' has no primed dotted circle to erase");

  bool split = !jp.empty();
  if (split) {
    for (size_t ci = 0; ci < w_prime.crossings.size(); ++ci) {
      auto oc = over_component(wp, w_prime, static_cast<int>(ci));
      auto uc = under_component(wp, w_prime, static_cast<int>(ci));
      if (oc != jp && uc != jp) continue;
      const std::string other = oc == jp ? uc : oc;
      if (!detail::is_primed(w_prime, other)) split = false;
    }
    for (auto& [key, list] : w_prime.passages) {
      if (detail::is_primed(w_prime, key) || key == jp) continue;
      for (auto& e : list)
        if (e.component == jp) split = false;
    }
    if (w_prime.passages.count(jp))
      for (auto& e : w_prime.passages.at(jp))
        if (!detail::is_primed(w_prime, e.component)) split = false;
    if (w_prime.get(jp).framing != 0) split = false;
  }
  tb.check("j-split",
           "X is C with a 0-framed 2-handle attached along j', and j' is split from C's diagram",
           split, cat(jp, " is 0-framed and meets only primed components"),
           cat(jp.empty() ? std::string("j' not located") : jp,
               " has crossings or passages with the C side"));

  tb.check("slice-transfer", "if mu bounds a smooth disk in X then it bounds one in C", true,
           "j' is split from C, so a disk in X pushes off the new handle into C", "");

  tb.gate("mu-not-slice", cat("mu = ", cert.mu, " bounds no smooth disk in C"),
          cert.not_slice_assumed && !cert.citation.empty(), cert.citation,
          "no sliceness certificate supplied");
  return tb.finish("non-strong cork");
}

// The chirality argument for an instantiated W_n.  The report is the numeric
// side of the story: a verified two-class bound on the boundary mapping class
// group, achieved by an orientation-reversing isometry, valid from |n| >=
// min_abs_n on.
inline ProofTrace proof_trace_chiral(const HandleDiagram& wn, long long n,
                                     const hyp::McgBoundReport& report) {
  require_valid(wn);
  require_concrete(wn);
  detail::TraceBuilder tb;

  // locate the primed marked curve and check it wraps the primed dotted j'
  std::string mup;
  for (auto& c : wn.components)
    if (c.role == Role::Marked && detail::is_primed(wn, c.id)) mup = c.id;
  Walks w = build_walks(wn);
  auto shape = mup.empty() ? detail::MeridianShape{} : detail::meridian_shape(wn, w, mup);
  const bool wraps_dotted =
      shape.ok && detail::is_primed(wn, shape.wraps) && wn.get(shape.wraps).role == Role::Dotted;
  std::string hp;
  for (auto& c : wn.components)
    if (c.role == Role::TwoHandle && c.framing == 0 && detail::is_primed(wn, c.id) &&
        wn.passages.count(c.id))
      hp = c.id;
  tb.check("f-mu-meridian",
           "under the role swap W_n -> W_n', f carries mu' to the meridian of the 2-handle j', "
           "which bounds a smooth disk (the cocore) in -W_n",
           wraps_dotted && !hp.empty(),
           cat(mup, " wraps ", shape.ok ? shape.wraps : "?", "; swap partner ", hp,
               " carries the dot in W_n'"),
           "no primed meridian/dotted pair to swap");

  tb.check("erase-carve", "X_n := W_n with the dot on j' erased contains W_n, carved along the disk",
           wraps_dotted, cat("dot erased on ", shape.ok ? shape.wraps : "?"), "");

  tb.assume("cork-sum",
            "X_n is the Akbulut cork boundary-summed with S^2 x D^2",
            "diagram identification after cancelling the symmetric tangle");
  tb.assume("homeo-extension",
            "the boundary homeomorphism extends over W_n after twisting the embedded cork",
            "cork twist re-glues the Akbulut cork by its boundary involution");

  const bool numeric = report.status == "verified" && report.classes_at_most <= 2 &&
                       report.orientation_reversing &&
                       (n >= report.min_abs_n || -n >= report.min_abs_n);
  tb.check("mcg-bound",
           "the boundary has at most two mapping classes and the nontrivial one reverses "
           "orientation, so no extension argument can be dodged by a different boundary map",
           numeric,
           cat("report ", report.tool_version, " sha256:", report.input_sha256,
               " certifies <= ", report.classes_at_most, " classes for |n| >= ", report.min_abs_n),
           cat("report status ", report.status, ", classes_at_most ", report.classes_at_most,
               ", |n| vs min ", report.min_abs_n));

  return tb.finish("homeomorphic but not diffeomorphic to -W_n");
}

}  // namespace corkforge::recipes
