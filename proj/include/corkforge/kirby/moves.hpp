#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corkforge/kirby/pi1.hpp"

// Diagram surgery: role swaps, handle slides, twist-region materialization,
// and 1-/2-handle cancellation.  Everything here edits walks and re-emits
// arcs; arc ids of untouched pieces are preserved, split arcs keep their id
// on the piece that still ends at the original downstream crossing, and
// merged arcs keep the upstream id.

namespace corkforge::kirby {

// ---------------------------------------------------------------------------
// walk editor

class WalkEditor {
 public:
  explicit WalkEditor(const HandleDiagram& d) : base_(d), w_(build_walks(d)) {
    for (auto& x : d.crossings) signs_.push_back(x.sign);
    for (auto& c : d.components)
      for (auto& a : c.arcs) used_.insert(a);
    for (auto& [cid, steps] : w_.steps)
      for (size_t p = 0; p < steps.size(); ++p)
        slot_[{steps[p].crossing, steps[p].over}] = {cid, static_cast<int>(p)};
  }

  int add_crossing(int sign) {
    signs_.push_back(sign);
    return static_cast<int>(signs_.size()) - 1;
  }

  const std::vector<WalkStep>& walk(const std::string& comp) const { return w_.steps.at(comp); }
  int sign_of(int crossing) const { return signs_.at(static_cast<size_t>(crossing)); }

  // (crossing, over?) -> (component, walk position)
  std::pair<std::string, int> slot(int crossing, bool over) const {
    auto it = slot_.find({crossing, over});
    if (it == slot_.end()) fail(cat("no slot for crossing ", crossing));
    return it->second;
  }

  // queue steps to go right after walk position `after` (-1 = into the single
  // arc of a crossingless component); call order is preserved per position
  void insert_after(const std::string& comp, int after, std::vector<WalkStep> steps) {
    const auto& wk = w_.steps.at(comp);
    if (wk.empty()) require(after == -1, cat("insert into empty walk of ", comp, " needs -1"));
    else require(after >= 0 && after < static_cast<int>(wk.size()),
                 cat("bad insert position for ", comp));
    pending_.push_back({comp, after, std::move(steps)});
  }

  HandleDiagram apply() {
    std::map<std::string, std::map<int, std::vector<WalkStep>>> ins;
    for (auto& p : pending_)
      for (auto& s : p.steps) ins[p.comp][p.after].push_back(s);

    std::map<std::string, std::vector<WalkStep>> walks;
    std::map<std::string, std::vector<std::string>> arcs;
    for (auto& c : base_.components) {
      const auto& wk = w_.steps.at(c.id);
      auto cit = ins.find(c.id);
      if (cit == ins.end()) {
        walks[c.id] = wk;
        arcs[c.id] = c.arcs;
        continue;
      }
      std::vector<WalkStep> nw;
      std::vector<std::string> na;
      auto splice = [&](const std::string& host_arc, const std::vector<WalkStep>& steps) {
        guard_region(host_arc);
        for (size_t k = 0; k < steps.size(); ++k) {
          nw.push_back(steps[k]);
          na.push_back(k + 1 == steps.size() ? host_arc : fresh(host_arc));
        }
      };
      if (wk.empty()) {
        auto it = cit->second.find(-1);
        require(it != cit->second.end() && cit->second.size() == 1,
                cat("bad insert positions for crossingless ", c.id));
        splice(c.arcs[0], it->second);
      } else {
        for (size_t i = 0; i < wk.size(); ++i) {
          nw.push_back(wk[i]);
          auto it = cit->second.find(static_cast<int>(i));
          if (it == cit->second.end()) {
            na.push_back(c.arcs[i]);
          } else {
            // pieces: fresh after the host step and after each inserted step
            // except the last, which reconnects to the original arc id
            guard_region(c.arcs[i]);
            for (size_t k = 0; k < it->second.size(); ++k) {
              na.push_back(fresh(c.arcs[i]));
              nw.push_back(it->second[k]);
            }
            na.push_back(c.arcs[i]);
          }
        }
      }
      walks[c.id] = std::move(nw);
      arcs[c.id] = std::move(na);
    }
    return emit(walks, arcs, {}, base_.passages, base_.twist_regions);
  }

  HandleDiagram apply_delete(const std::set<std::string>& victims) {
    require(pending_.empty(), "mixed insert/delete edit");
    std::vector<char> dead(signs_.size(), 0);
    for (size_t ci = 0; ci < signs_.size(); ++ci) {
      auto [oc, op] = slot(static_cast<int>(ci), true);
      auto [uc, up] = slot(static_cast<int>(ci), false);
      if (victims.count(oc) || victims.count(uc)) dead[ci] = 1;
    }
    std::map<std::string, std::vector<WalkStep>> walks;
    std::map<std::string, std::vector<std::string>> arcs;
    std::map<std::string, std::string> arc_rename;
    for (auto& c : base_.components) {
      if (victims.count(c.id)) continue;
      const auto& wk = w_.steps.at(c.id);
      std::vector<int> kept;
      for (size_t i = 0; i < wk.size(); ++i)
        if (!dead[wk[i].crossing]) kept.push_back(static_cast<int>(i));
      if (kept.size() == wk.size()) {
        walks[c.id] = wk;
        arcs[c.id] = c.arcs;
        continue;
      }
      std::vector<WalkStep> nw;
      std::vector<std::string> na;
      if (kept.empty()) {
        // merged down to a crossingless loop
        na.push_back(c.arcs[0]);
        for (size_t i = 1; i < c.arcs.size(); ++i) arc_rename[c.arcs[i]] = c.arcs[0];
      } else {
        for (size_t k = 0; k < kept.size(); ++k) {
          nw.push_back(wk[kept[k]]);
          // arcs kept[k] .. kept[k+1]-1 merge; the first one survives
          na.push_back(c.arcs[kept[k]]);
          int stop = (k + 1 < kept.size()) ? kept[k + 1] : static_cast<int>(wk.size());
          for (int i = kept[k] + 1; i < stop; ++i) arc_rename[c.arcs[i]] = c.arcs[kept[k]];
          if (k + 1 == kept.size())
            for (int i = 0; i < kept[0]; ++i) arc_rename[c.arcs[i]] = c.arcs[kept.back()];
        }
      }
      walks[c.id] = std::move(nw);
      arcs[c.id] = std::move(na);
    }

    auto passages = base_.passages;
    for (auto& v : victims) passages.erase(v);
    for (auto& [key, list] : passages)
      std::erase_if(list, [&](const PassageEntry& e) { return victims.count(e.component) > 0; });

    std::vector<TwistRegion> regions;
    for (auto t : base_.twist_regions) {
      auto owner1 = w_.arc_owner.at(t.arc1), owner2 = w_.arc_owner.at(t.arc2);
      if (victims.count(owner1) || victims.count(owner2)) continue;  // dies with its component
      if (arc_rename.count(t.arc1)) t.arc1 = arc_rename[t.arc1];
      if (arc_rename.count(t.arc2)) t.arc2 = arc_rename[t.arc2];
      require(t.arc1 != t.arc2, cat("twist region ", t.id, " collapsed by cancellation"));
      regions.push_back(std::move(t));
    }

    // renumber surviving crossings
    std::vector<int> remap(signs_.size(), -1);
    std::vector<int> nsigns;
    for (size_t ci = 0; ci < signs_.size(); ++ci)
      if (!dead[ci]) {
        remap[ci] = static_cast<int>(nsigns.size());
        nsigns.push_back(signs_[ci]);
      }
    for (auto& [cid, wk] : walks)
      for (auto& s : wk) s.crossing = remap[s.crossing];
    signs_ = std::move(nsigns);
    return emit(walks, arcs, victims, passages, regions);
  }

 private:
  struct Ins {
    std::string comp;
    int after;
    std::vector<WalkStep> steps;
  };

  void guard_region(const std::string& arc) const {
    for (auto& t : base_.twist_regions)
      if (t.arc1 == arc || t.arc2 == arc)
        refuse(cat("edit would cut twist region ", t.id, " on arc ", arc));
  }

  std::string fresh(const std::string& base) {
    for (int k = 1;; ++k) {
      std::string cand = cat(base, "#", k);
      if (used_.insert(cand).second) return cand;
    }
  }

  HandleDiagram emit(const std::map<std::string, std::vector<WalkStep>>& walks,
                     const std::map<std::string, std::vector<std::string>>& arcs,
                     const std::set<std::string>& skip,
                     std::map<std::string, std::vector<PassageEntry>> passages,
                     std::vector<TwistRegion> regions) const {
    struct Slot {
      std::string in, out;
    };
    std::vector<Slot> over(signs_.size()), under(signs_.size());
    HandleDiagram out;
    for (auto& c : base_.components) {
      if (skip.count(c.id)) continue;
      Component nc;
      nc.id = c.id;
      nc.role = c.role;
      nc.framing = c.framing;
      nc.arcs = arcs.at(c.id);
      const auto& wk = walks.at(c.id);
      const size_t k = wk.size();
      for (size_t i = 0; i < k; ++i) {
        Slot& s = (wk[i].over ? over : under)[wk[i].crossing];
        require(s.in.empty(), cat("crossing ", wk[i].crossing, " slot used twice"));
        s.in = nc.arcs[(i + k - 1) % k];
        s.out = nc.arcs[i];
      }
      out.components.push_back(std::move(nc));
    }
    for (size_t ci = 0; ci < signs_.size(); ++ci) {
      require(!over[ci].in.empty() && !under[ci].in.empty(),
              cat("crossing ", ci, " lost a strand"));
      out.crossings.push_back(
          {over[ci].in, over[ci].out, under[ci].in, under[ci].out, signs_[ci]});
    }
    out.passages = std::move(passages);
    out.twist_regions = std::move(regions);
    return out;
  }

  HandleDiagram base_;
  Walks w_;
  std::vector<int> signs_;
  std::vector<Ins> pending_;
  std::set<std::string> used_;
  std::map<std::pair<int, bool>, std::pair<std::string, int>> slot_;
};

// ---------------------------------------------------------------------------
// role swap

inline HandleDiagram role_swap(const HandleDiagram& d, const std::string& dotted_id,
                               const std::string& framed_id) {
  require_valid(d);
  HandleDiagram out = d;
  Component* dc = out.find(dotted_id);
  Component* fc = out.find(framed_id);
  if (!dc || dc->role != Role::Dotted) fail(cat("role_swap: ", dotted_id, " is not dotted"));
  if (!fc || fc->role != Role::TwoHandle) fail(cat("role_swap: ", framed_id, " is not a 2-handle"));
  if (fc->framing != 0) fail(cat("role_swap: ", framed_id, " has framing ", fc->framing));
  if (!out.passages.count(framed_id))
    fail(cat("role_swap: ", framed_id, " carries no disk-passage data"));
  dc->role = Role::TwoHandle;
  dc->framing = 0;
  fc->role = Role::Dotted;
  fc->framing = 0;
  auto rep = validate_diagram(out);
  if (!rep.ok())
    fail(cat("role_swap: ", framed_id, " violates the dotted-circle convention after the swap:\n",
             rep.str()));
  if (d.twist_regions.empty()) {
    if (serialize_surgery(boundary_surgery(out)) != serialize_surgery(boundary_surgery(d)))
      fail("role_swap: boundary surgery diagram changed");
  }
  return out;
}

// ---------------------------------------------------------------------------
// handle slides

struct BandCrossing {
  std::string arc;
  bool band_over = true;
};

// Combinatorial band from an arc of the slider to an arc of the over
// component.  band_crossings lists the arcs the band runs across (its two
// edges produce one +1 and one -1 crossing there, so the net linking
// contribution of the band itself is zero).  sign is the parallel
// orientation: +1 band-sums with an aligned push-off of `over`, -1 with a
// reversed one.
struct BandSpec {
  std::string slider, over;
  std::string slider_arc, over_arc;
  int sign = 1;
  std::vector<BandCrossing> band_crossings;
};

inline nlohmann::json band_to_json(const BandSpec& b) {
  nlohmann::json j;
  j["version"] = "band/1";
  j["slider"] = b.slider;
  j["over"] = b.over;
  j["slider_arc"] = b.slider_arc;
  j["over_arc"] = b.over_arc;
  j["sign"] = b.sign;
  j["band_crossings"] = nlohmann::json::array();
  for (auto& bc : b.band_crossings)
    j["band_crossings"].push_back({{"arc", bc.arc}, {"band_over", bc.band_over}});
  return j;
}

inline BandSpec band_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("version") || j.at("version") != "band/1")
    fail("band: missing or unsupported version (want band/1)");
  detail::check_keys(
      j, {"version", "slider", "over", "slider_arc", "over_arc", "sign", "band_crossings"},
      "band");
  BandSpec b;
  b.slider = j.at("slider").get<std::string>();
  b.over = j.at("over").get<std::string>();
  b.slider_arc = j.at("slider_arc").get<std::string>();
  b.over_arc = j.at("over_arc").get<std::string>();
  b.sign = j.at("sign").get<int>();
  for (auto& jc : j.value("band_crossings", nlohmann::json::array())) {
    detail::check_keys(jc, {"arc", "band_over"}, "band crossing");
    b.band_crossings.push_back({jc.at("arc").get<std::string>(), jc.at("band_over").get<bool>()});
  }
  return b;
}

inline std::string serialize_band(const BandSpec& b) { return band_to_json(b).dump(2) + "\n"; }
inline BandSpec parse_band(const std::string& text) {
  try {
    return band_from_json(nlohmann::json::parse(text));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(cat("band: JSON parse error: ", e.what()));
  }
}

namespace detail {

inline int arc_index(const Component& c, const std::string& arc) {
  for (size_t i = 0; i < c.arcs.size(); ++i)
    if (c.arcs[i] == arc) return static_cast<int>(i);
  fail(cat("arc ", arc, " not on component ", c.id));
}

// Band-sum `slider` with a framing-parallel push-off of `over`.  Shared core
// for 2-handle slides (framed_slider) and the marked-curve reroutes used by
// cancellation (which copy the curve but carry no framing).
inline HandleDiagram slide_core(const HandleDiagram& d, const BandSpec& b, bool framed_slider) {
  require_valid(d);
  if (b.slider == b.over) fail("slide: slider == over");
  const Component& S = d.get(b.slider);
  const Component& O = d.get(b.over);
  if (O.role != Role::TwoHandle) fail(cat("slide: over component ", b.over, " is not a 2-handle"));
  if (framed_slider && S.role != Role::TwoHandle)
    fail(cat("slide: slider ", b.slider, " is not a 2-handle"));
  if (b.sign != 1 && b.sign != -1) fail("slide: band sign must be +-1");
  for (auto& t : d.twist_regions)
    for (auto* a : {&t.arc1, &t.arc2})
      if (std::find(O.arcs.begin(), O.arcs.end(), *a) != O.arcs.end())
        refuse(cat("slide: over component ", b.over, " carries twist region ", t.id));

  WalkEditor ed(d);
  const auto ow = ed.walk(b.over);
  const int L = static_cast<int>(ow.size());
  const int eps = b.sign;
  const int o_idx = arc_index(O, b.over_arc);
  const int s_idx = arc_index(S, b.slider_arc);

  // self-crossings of `over`, and its writhe
  std::set<int> self;
  i64 writhe = 0;
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    auto [oc, op] = ed.slot(static_cast<int>(ci), true);
    auto [uc, up] = ed.slot(static_cast<int>(ci), false);
    if (oc == b.over && uc == b.over) {
      self.insert(static_cast<int>(ci));
      writhe = add_ck(writhe, d.crossings[ci].sign);
    }
  }

  Walks w0 = build_walks(d);
  const i64 lk_so_2 = crossing_sign_sum(d, w0, b.slider, b.over);
  if (lk_so_2 % 2 != 0) fail("slide: odd crossing sum");

  std::vector<WalkStep> copy_steps;
  std::map<int, std::array<int, 3>> trip;  // self-crossing -> (c1, c2, c3)
  for (int r = 0; r < L; ++r) {
    const int p = eps > 0 ? (o_idx + 1 + r) % L : ((o_idx - r) % L + L) % L;
    const WalkStep st = ow[static_cast<size_t>(p)];
    const int c = st.crossing;
    std::vector<WalkStep> region;
    if (self.count(c)) {
      // four strand segments in the region: orig over / orig under, and the
      // copy's own pair; three new crossings per original self-crossing
      auto it = trip.find(c);
      if (it == trip.end()) {
        int sg = ed.sign_of(c);
        it = trip.emplace(c, std::array<int, 3>{ed.add_crossing(eps * sg),
                                                ed.add_crossing(eps * sg),
                                                ed.add_crossing(sg)})
                 .first;
      }
      auto [c1, c2, c3] = it->second;
      if (st.over) {
        region = {{c2, true}, {c3, true}};
        ed.insert_after(b.over, p, {{c1, true}});
      } else {
        region = {{c3, false}, {c1, false}};
        ed.insert_after(b.over, p, {{c2, false}});
      }
    } else {
      int cc = ed.add_crossing(eps * ed.sign_of(c));
      region = {{cc, st.over}};
      auto [xc, xp] = ed.slot(c, !st.over);
      ed.insert_after(xc, xp, {{cc, !st.over}});
    }
    if (eps < 0) std::reverse(region.begin(), region.end());
    copy_steps.insert(copy_steps.end(), region.begin(), region.end());
  }

  // clasp correction so the push-off realizes the framing, not the writhe
  const i64 t = framed_slider ? mul_ck(eps, sub_ck(O.framing, writhe)) : 0;
  for (i64 u = 0; u < (t < 0 ? -t : t); ++u) {
    const int sg = t > 0 ? 1 : -1;
    int k1 = ed.add_crossing(sg), k2 = ed.add_crossing(sg);
    copy_steps.push_back({k1, true});
    copy_steps.push_back({k2, false});
    ed.insert_after(b.over, L == 0 ? -1 : o_idx, {{k1, false}, {k2, true}});
  }

  std::vector<WalkStep> head, tail;
  for (auto& bc : b.band_crossings) {
    const Component* owner = nullptr;
    int ai = -1;
    for (auto& c : d.components)
      for (size_t i = 0; i < c.arcs.size(); ++i)
        if (c.arcs[i] == bc.arc) {
          owner = &c;
          ai = static_cast<int>(i);
        }
    if (!owner) fail(cat("slide: band crosses unknown arc ", bc.arc));
    int oc = ed.add_crossing(1), ic = ed.add_crossing(-1);
    head.push_back({oc, bc.band_over});
    tail.insert(tail.begin(), {ic, bc.band_over});
    ed.insert_after(owner->id, ed.walk(owner->id).empty() ? -1 : ai,
                    {{oc, !bc.band_over}, {ic, !bc.band_over}});
  }

  std::vector<WalkStep> detour = std::move(head);
  detour.insert(detour.end(), copy_steps.begin(), copy_steps.end());
  detour.insert(detour.end(), tail.begin(), tail.end());
  // over a crossingless 0-framed unknot the push-off contributes nothing
  if (!detour.empty())
    ed.insert_after(b.slider, ed.walk(b.slider).empty() ? -1 : s_idx, detour);

  HandleDiagram out = ed.apply();

  i64 new_framing = S.framing;
  if (framed_slider) {
    new_framing = add_ck(add_ck(S.framing, O.framing), mul_ck(2 * eps, lk_so_2 / 2));
    out.find(b.slider)->framing = new_framing;
  }

  // passage bookkeeping: the push-off threads every disk `over` threads
  const bool over_has_carrier = d.passages.count(b.over) > 0;
  for (auto& [key, list] : out.passages) {
    if (key == b.slider) continue;
    std::vector<PassageEntry> nl;
    for (auto& e : list) {
      nl.push_back(e);
      if (e.component == b.over) nl.push_back({b.slider, eps * e.sign});
    }
    list = std::move(nl);
  }
  if (d.passages.count(b.slider)) {
    bool self_S = false, cross_SO = false, entry_S = false;
    for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
      auto oc = over_component(w0, d, static_cast<int>(ci));
      auto uc = under_component(w0, d, static_cast<int>(ci));
      if (oc == b.slider && uc == b.slider) self_S = true;
      if ((oc == b.slider && uc == b.over) || (oc == b.over && uc == b.slider)) cross_SO = true;
    }
    if (over_has_carrier)
      for (auto& e : d.passages.at(b.over))
        if (e.component == b.slider) entry_S = true;
    if (framed_slider && over_has_carrier && new_framing == 0 && self.empty() && !cross_SO &&
        !self_S && !entry_S) {
      auto& mine = out.passages.at(b.slider);
      for (auto& e : d.passages.at(b.over)) mine.push_back({e.component, eps * e.sign});
    } else {
      out.passages.erase(b.slider);
    }
  }

  auto rep = validate_diagram(out);
  if (!rep.ok()) fail(cat("slide: produced an invalid diagram:\n", rep.str()));

  // the linking matrix must be exactly the row/column operation's result
  auto ld0 = linking_matrix(d);
  auto ld1 = linking_matrix(out);
  IMat expect = ld0.m;
  if (framed_slider) {
    const int si = ld0.pos(b.slider), oi = ld0.pos(b.over);
    for (int j = 0; j < expect.cols; ++j)
      if (j != si) expect.at(si, j) = add_ck(expect.at(si, j), mul_ck(eps, ld0.m.at(oi, j)));
    for (int i = 0; i < expect.rows; ++i)
      if (i != si) expect.at(i, si) = add_ck(expect.at(i, si), mul_ck(eps, ld0.m.at(i, oi)));
    expect.at(si, si) = new_framing;
  }
  if (!(ld1.m == expect)) fail("slide: linking matrix mismatch against the row operation");
  return out;
}

}  // namespace detail

inline HandleDiagram handle_slide(const HandleDiagram& d, const BandSpec& band) {
  return detail::slide_core(d, band, true);
}

// ---------------------------------------------------------------------------
// twist materialization

inline HandleDiagram materialize_twists(const HandleDiagram& d, i64 n) {
  HandleDiagram cur = d;
  while (!cur.twist_regions.empty()) {
    TwistRegion t = cur.twist_regions.front();
    cur.twist_regions.erase(cur.twist_regions.begin());
    const i64 k = t.parameter.eval(n);
    if (k == 0) continue;
    Walks w = build_walks(cur);
    const std::string own1 = w.owner(t.arc1), own2 = w.owner(t.arc2);
    WalkEditor ed(cur);
    const i64 m = 2 * (k < 0 ? -k : k);
    const int sg = k > 0 ? 1 : -1;
    std::vector<WalkStep> s1, s2;
    for (i64 i = 0; i < m; ++i) {
      int c = ed.add_crossing(sg);
      s1.push_back({c, i % 2 == 0});
      s2.push_back({c, i % 2 != 0});
    }
    if (t.antiparallel) std::reverse(s2.begin(), s2.end());
    const Component& c1 = cur.get(own1);
    const Component& c2 = cur.get(own2);
    int a1 = detail::arc_index(c1, t.arc1), a2 = detail::arc_index(c2, t.arc2);
    ed.insert_after(own1, ed.walk(own1).empty() ? -1 : a1, s1);
    ed.insert_after(own2, ed.walk(own2).empty() ? -1 : a2, s2);
    cur = ed.apply();
  }
  auto rep = validate_diagram(cur);
  if (!rep.ok()) fail(cat("materialize: produced an invalid diagram:\n", rep.str()));
  return cur;
}

// ---------------------------------------------------------------------------
// cancellation

struct CancelRecord {
  std::string dotted, two_handle;
  std::vector<std::pair<std::string, int>> slides;  // rerouted 2-handles (comp, parallel sign)
  std::vector<std::string> dragged;                 // rerouted marked curves
};

struct ReduceResult {
  HandleDiagram diagram;
  std::vector<CancelRecord> cancelled;
  bool is_mazur_type = false;
};

namespace detail {

inline std::string pick_band_arc(const HandleDiagram& d, const Component& c) {
  for (auto& a : c.arcs) {
    bool taken = false;
    for (auto& t : d.twist_regions)
      if (t.arc1 == a || t.arc2 == a) taken = true;
    if (!taken) return a;
  }
  refuse(cat("no band-attachable arc on ", c.id));
}

// One cancellation of (Dotted u, TwoHandle v): reroute every other strand
// threading u's disk across v, then delete the pair.
inline std::pair<HandleDiagram, CancelRecord> apply_cancel(const HandleDiagram& d0,
                                                           const std::string& u,
                                                           const std::string& v) {
  CancelRecord rec{u, v, {}, {}};
  HandleDiagram cur = d0;
  int tau = 0;
  std::vector<PassageEntry> others;
  for (auto& e : d0.passages.at(u)) {
    if (e.component == v) tau = e.sign;
    else others.push_back(e);
  }
  require(tau != 0, "cancel: pair entry vanished");
  for (auto& e : others) {
    const int rho = -e.sign * tau;
    BandSpec band;
    band.slider = e.component;
    band.over = v;
    band.slider_arc = pick_band_arc(cur, cur.get(e.component));
    band.over_arc = pick_band_arc(cur, cur.get(v));
    band.sign = rho;
    const Role role = cur.get(e.component).role;
    if (role == Role::TwoHandle) {
      cur = slide_core(cur, band, true);
      rec.slides.push_back({e.component, rho});
    } else if (role == Role::Marked) {
      cur = slide_core(cur, band, false);
      rec.dragged.push_back(e.component);
    } else {
      fail(cat("cancel: dotted strand ", e.component, " through a dotted disk"));
    }
  }
  WalkEditor ed(cur);
  return {ed.apply_delete({u, v}), rec};
}

}  // namespace detail

inline ReduceResult detect_cancel_and_reduce(const HandleDiagram& d0) {
  require_valid(d0);
  auto ld0 = linking_matrix(d0);
  const i64 det0 = abs_ck(det_bareiss(ld0.m));
  const AbelianGroup sub0 = cokernel(two_handle_by_dotted(ld0, d0));

  ReduceResult res;
  res.diagram = d0;
  for (;;) {
    // canonical scan: dotted components by id, candidate partners by id
    std::vector<std::string> dotted;
    for (auto& c : res.diagram.components)
      if (c.role == Role::Dotted) dotted.push_back(c.id);
    std::sort(dotted.begin(), dotted.end());

    bool fired = false;
    for (auto& u : dotted) {
      std::map<std::string, int> count;
      for (auto& e : res.diagram.passages.at(u)) ++count[e.component];
      std::vector<std::string> cands;
      for (auto& [comp, c] : count)
        if (c == 1 && res.diagram.get(comp).role == Role::TwoHandle) cands.push_back(comp);
      for (auto& v : cands) {
        std::optional<std::pair<HandleDiagram, CancelRecord>> got;
        try {
          got = detail::apply_cancel(res.diagram, u, v);
        } catch (const Refused&) {
          continue;  // pair blocked (e.g. twist region in the way); try the next
        }
        auto& [next, rec] = *got;
        auto rep = validate_diagram(next);
        if (!rep.ok()) fail(cat("cancel: invalid result:\n", rep.str()));
        auto ld = linking_matrix(next);
        if (abs_ck(det_bareiss(ld.m)) != det0)
          fail("cancel: |det| of the linking matrix changed");
        if (!(cokernel(two_handle_by_dotted(ld, next)) == sub0))
          fail("cancel: pi1 abelianization changed");
        res.diagram = std::move(next);
        res.cancelled.push_back(std::move(rec));
        fired = true;
        break;
      }
      if (fired) break;
    }
    if (!fired) break;
  }

  if (res.diagram.twist_regions.empty()) pi1_presentation(res.diagram);  // internal cross-check

  int nd = 0, nh = 0;
  for (auto& c : res.diagram.components) {
    if (c.role == Role::Dotted) ++nd;
    if (c.role == Role::TwoHandle) ++nh;
  }
  res.is_mazur_type = (nd == 1 && nh == 1);
  return res;
}

}  // namespace corkforge::kirby
