#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "corkforge/common.hpp"

// Handle diagrams: planar link diagrams with per-component roles.
//
// Conventions baked into this model (see README for the full list):
//  * Dotted components are round unknotted circles: no self-crossings, no
//    crossings with other dotted components, and an explicit ordered list of
//    disk passages.  The net signed passage count must reproduce the linking
//    number computed from crossings.
//  * A 0-framed unknotted 2-handle may carry a passage list of its own
//    ("carrier" data); that is what makes it eligible for a role swap.
//  * Arcs are the edges of the 4-valent diagram graph.  A component is a
//    cyclic arc sequence; consecutive arcs meet at exactly one crossing,
//    either as (over_in, over_out) or as (under_in, under_out).
//  * Twist regions are symbolic placeholders; a diagram carrying any twist
//    region is a template and must be instantiated before the algebraic
//    operations will touch it.

namespace corkforge::kirby {

enum class Role { Dotted, TwoHandle, Marked };

inline int role_rank(Role r) {
  switch (r) {
    case Role::Dotted: return 0;
    case Role::TwoHandle: return 1;
    case Role::Marked: return 2;
  }
  return 3;
}

inline const char* role_name(Role r) {
  switch (r) {
    case Role::Dotted: return "dotted";
    case Role::TwoHandle: return "two_handle";
    case Role::Marked: return "marked";
  }
  return "?";
}

inline Role parse_role(const std::string& s) {
  if (s == "dotted") return Role::Dotted;
  if (s == "two_handle") return Role::TwoHandle;
  if (s == "marked") return Role::Marked;
  fail(cat("unknown role: ", s));
}

struct PassageEntry {
  std::string component;
  int sign = 1;  // +1 / -1
  bool operator==(const PassageEntry&) const = default;
};

// Linear twist parameter a*n + b; symbolic iff a != 0.
struct TwistParam {
  i64 a = 0;
  i64 b = 0;

  bool symbolic() const { return a != 0; }
  i64 eval(i64 n) const { return add_ck(mul_ck(a, n), b); }

  std::string form() const {
    if (a == 0) return cat(b);
    std::string s;
    if (a == 1) s = "n";
    else if (a == -1) s = "-n";
    else s = cat(a, "*n");
    if (b > 0) s += cat("+", b);
    else if (b < 0) s += cat(b);
    return s;
  }

  static TwistParam parse_form(const std::string& s) {
    // integer | [k*]n[+-m] with optional leading sign on k
    size_t pos = s.find('n');
    TwistParam t;
    auto to_int = [&](const std::string& x) -> i64 {
      size_t used = 0;
      i64 v = 0;
      try {
        v = std::stoll(x, &used);
      } catch (...) {
        fail(cat("bad twist parameter: ", s));
      }
      if (used != x.size()) fail(cat("bad twist parameter: ", s));
      return v;
    };
    if (pos == std::string::npos) {
      t.b = to_int(s);
      return t;
    }
    std::string head = s.substr(0, pos), tail = s.substr(pos + 1);
    if (head.empty()) t.a = 1;
    else if (head == "-") t.a = -1;
    else {
      if (head.back() != '*') fail(cat("bad twist parameter: ", s));
      t.a = to_int(head.substr(0, head.size() - 1));
      if (t.a == 0) fail(cat("bad twist parameter: ", s));
    }
    if (!tail.empty()) {
      if (tail[0] != '+' && tail[0] != '-') fail(cat("bad twist parameter: ", s));
      t.b = to_int(tail[0] == '+' ? tail.substr(1) : tail);
    }
    return t;
  }
};

struct TwistRegion {
  std::string id;
  std::string arc1, arc2;
  TwistParam parameter;
  bool antiparallel = true;  // relative orientation of the two strands
  bool operator==(const TwistRegion&) const = default;
};

struct Component {
  std::string id;
  Role role = Role::TwoHandle;
  i64 framing = 0;                // meaningful for TwoHandle only
  std::vector<std::string> arcs;  // cyclic
};

struct Crossing {
  std::string over_in, over_out, under_in, under_out;
  int sign = 1;
};

struct HandleDiagram {
  std::vector<Component> components;
  std::vector<Crossing> crossings;
  // passage lists: required for every Dotted component, optional carrier data
  // for 0-framed 2-handles (role-swap eligibility)
  std::map<std::string, std::vector<PassageEntry>> passages;
  std::vector<TwistRegion> twist_regions;

  const Component* find(const std::string& id) const {
    for (auto& c : components)
      if (c.id == id) return &c;
    return nullptr;
  }
  Component* find(const std::string& id) {
    for (auto& c : components)
      if (c.id == id) return &c;
    return nullptr;
  }
  const Component& get(const std::string& id) const {
    auto* c = find(id);
    if (!c) fail(cat("no component: ", id));
    return *c;
  }
};

// ---------------------------------------------------------------------------
// walks

struct WalkStep {
  int crossing = -1;
  bool over = false;
  bool operator==(const WalkStep&) const = default;
};

struct Walks {
  // per component id, in cyclic arc order; empty for crossingless loops
  std::map<std::string, std::vector<WalkStep>> steps;
  std::map<std::string, std::string> arc_owner;

  const std::string& owner(const std::string& arc) const {
    auto it = arc_owner.find(arc);
    if (it == arc_owner.end()) fail(cat("unknown arc: ", arc));
    return it->second;
  }
};

struct ValidationIssue {
  std::string code;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string str() const {
    if (ok()) return "valid";
    std::string s;
    for (auto& i : issues) s += cat(i.code, ": ", i.detail, "\n");
    return s;
  }
};

namespace detail {

// Reconstruct walks from arc data.  On structural damage, records issues and
// returns nullopt; with issues == nullptr it throws instead.
inline std::optional<Walks> try_build_walks(const HandleDiagram& d,
                                            std::vector<ValidationIssue>* issues) {
  auto bad = [&](std::string code, std::string detail) -> std::optional<Walks> {
    if (!issues) fail(cat(code, ": ", detail));
    issues->push_back({std::move(code), std::move(detail)});
    return std::nullopt;
  };

  Walks w;
  for (auto& c : d.components) {
    if (c.arcs.empty()) return bad("empty-component", c.id);
    for (auto& a : c.arcs) {
      if (!w.arc_owner.emplace(a, c.id).second)
        return bad("duplicate-arc", cat(a, " appears twice"));
    }
  }
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    auto& x = d.crossings[ci];
    for (auto* a : {&x.over_in, &x.over_out, &x.under_in, &x.under_out})
      if (!w.arc_owner.count(*a))
        return bad("unknown-arc", cat("crossing ", ci, " references ", *a));
    if (x.sign != 1 && x.sign != -1)
      return bad("bad-sign", cat("crossing ", ci));
    if (w.arc_owner.at(x.over_in) != w.arc_owner.at(x.over_out) ||
        w.arc_owner.at(x.under_in) != w.arc_owner.at(x.under_out))
      return bad("mismatched-strand", cat("crossing ", ci, " joins arcs of different components"));
  }

  // adjacency lookup: (in_arc, out_arc) -> candidate (crossing, over?)
  std::multimap<std::pair<std::string, std::string>, WalkStep> adj;
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    auto& x = d.crossings[ci];
    adj.insert({{x.over_in, x.over_out}, {static_cast<int>(ci), true}});
    adj.insert({{x.under_in, x.under_out}, {static_cast<int>(ci), false}});
  }

  std::vector<int> over_used(d.crossings.size(), 0), under_used(d.crossings.size(), 0);
  for (auto& c : d.components) {
    auto& walk = w.steps[c.id];
    const size_t k = c.arcs.size();
    bool loose = false;
    if (k == 1) {
      // a single arc either closes a crossingless loop or threads crossings
      loose = adj.count({c.arcs[0], c.arcs[0]}) == 0;
    }
    if (loose) continue;
    for (size_t i = 0; i < k; ++i) {
      const std::string& prev = c.arcs[(i + k - 1) % k];
      const std::string& cur = c.arcs[i];
      auto [lo, hi] = adj.equal_range({prev, cur});
      std::vector<WalkStep> cands;
      for (auto it = lo; it != hi; ++it) {
        auto& used = it->second.over ? over_used : under_used;
        if (!used[it->second.crossing]) cands.push_back(it->second);
      }
      if (cands.size() != 1)
        return bad("arc-adjacency",
                   cat(c.id, ": arcs ", prev, " -> ", cur, " have ",
                       cands.size(), " unused crossing joints (need 1)"));
      walk.push_back(cands[0]);
      (cands[0].over ? over_used : under_used)[cands[0].crossing] = 1;
    }
  }
  for (size_t ci = 0; ci < d.crossings.size(); ++ci)
    if (!over_used[ci] || !under_used[ci])
      return bad("orphan-crossing", cat("crossing ", ci, " not traversed by its components"));
  return w;
}

}  // namespace detail

inline Walks build_walks(const HandleDiagram& d) {
  return *detail::try_build_walks(d, nullptr);
}

// component of the over / under strand of a crossing
inline std::string over_component(const Walks& w, const HandleDiagram& d, int ci) {
  return w.owner(d.crossings[ci].over_in);
}
inline std::string under_component(const Walks& w, const HandleDiagram& d, int ci) {
  return w.owner(d.crossings[ci].under_in);
}

// signed crossing sum between two distinct components
inline i64 crossing_sign_sum(const HandleDiagram& d, const Walks& w,
                             const std::string& a, const std::string& b) {
  i64 s = 0;
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    auto po = over_component(w, d, static_cast<int>(ci));
    auto pu = under_component(w, d, static_cast<int>(ci));
    if ((po == a && pu == b) || (po == b && pu == a)) s = add_ck(s, d.crossings[ci].sign);
  }
  return s;
}

// ---------------------------------------------------------------------------
// validation

inline ValidationReport validate_diagram(const HandleDiagram& d) {
  ValidationReport rep;
  auto issue = [&](const std::string& code, const std::string& detail) {
    rep.issues.push_back({code, detail});
  };

  std::set<std::string> ids;
  for (auto& c : d.components)
    if (!ids.insert(c.id).second) issue("duplicate-component", c.id);

  for (auto& c : d.components) {
    if (c.role != Role::TwoHandle && c.framing != 0)
      issue("framing-on-non-2-handle", c.id);
  }

  auto wopt = detail::try_build_walks(d, &rep.issues);
  if (!wopt) return rep;  // structure too broken for the semantic checks
  const Walks& w = *wopt;

  // role rules at crossings
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    auto po = over_component(w, d, static_cast<int>(ci));
    auto pu = under_component(w, d, static_cast<int>(ci));
    const Role ro = d.get(po).role, ru = d.get(pu).role;
    if (po == pu && ro == Role::Dotted)
      issue("dotted-self-crossing", cat(po, " at crossing ", ci));
    if (po != pu && ro == Role::Dotted && ru == Role::Dotted)
      issue("dotted-dotted-crossing", cat(po, "/", pu, " at crossing ", ci));
  }

  // passage lists
  for (auto& c : d.components)
    if (c.role == Role::Dotted && !d.passages.count(c.id))
      issue("missing-passages", c.id);
  for (auto& [key, list] : d.passages) {
    auto* kc = d.find(key);
    if (!kc) {
      issue("passages-unknown-component", key);
      continue;
    }
    if (kc->role == Role::Marked) issue("passages-on-marked", key);
    if (kc->role == Role::TwoHandle && kc->framing != 0)
      issue("carrier-framing", cat(key, " carries passages but has framing ", kc->framing));
    std::map<std::string, i64> net;
    for (auto& p : list) {
      auto* pc = d.find(p.component);
      if (!pc) {
        issue("passage-unknown-component", cat(key, " <- ", p.component));
        continue;
      }
      if (p.component == key) issue("passage-self", key);
      if (p.sign != 1 && p.sign != -1) issue("passage-sign", cat(key, " <- ", p.component));
      if (kc->role == Role::Dotted && pc->role == Role::Dotted)
        issue("dotted-through-dotted", cat(key, " <- ", p.component));
      net[p.component] += p.sign;
    }
    // net passage sums must reproduce crossing linking numbers
    for (auto& other : d.components) {
      if (other.id == key) continue;
      i64 sum = crossing_sign_sum(d, w, key, other.id);
      if (sum % 2 != 0) {
        issue("odd-crossing-sum", cat(key, "/", other.id));
        continue;
      }
      i64 want = sum / 2;
      i64 got = net.count(other.id) ? net[other.id] : 0;
      if (got != want)
        issue("passage-linking-mismatch",
              cat(key, "/", other.id, ": passages give ", got, ", crossings give ", want));
    }
  }

  // twist regions
  std::set<std::string> tids;
  for (auto& t : d.twist_regions) {
    if (!tids.insert(t.id).second) issue("duplicate-twist-region", t.id);
    if (t.arc1 == t.arc2) issue("twist-region-same-arc", t.id);
    std::vector<std::string> owners;
    for (auto* a : {&t.arc1, &t.arc2}) {
      auto it = w.arc_owner.find(*a);
      if (it == w.arc_owner.end()) {
        issue("twist-region-unknown-arc", cat(t.id, ": ", *a));
      } else {
        owners.push_back(it->second);
        if (d.get(it->second).role != Role::TwoHandle)
          issue("twist-region-role", cat(t.id, ": ", *a, " is not on a 2-handle"));
      }
    }
    // a twist between two different components shifts their linking number,
    // which a passage list cannot track symbolically
    if (owners.size() == 2 && owners[0] != owners[1])
      for (auto& o : owners)
        if (d.passages.count(o))
          issue("twist-region-on-carrier", cat(t.id, ": ", o, " carries disk passages"));
  }

  return rep;
}

inline void require_valid(const HandleDiagram& d) {
  auto rep = validate_diagram(d);
  if (!rep.ok()) fail(cat("invalid diagram:\n", rep.str()));
}

// Most algebraic operations refuse templates: twist regions must have been
// instantiated away first.
inline void require_concrete(const HandleDiagram& d) {
  if (!d.twist_regions.empty())
    fail(cat("diagram has ", d.twist_regions.size(),
             " uninstantiated twist region(s); instantiate the family first"));
}

// ---------------------------------------------------------------------------
// serialization (canonical)

inline nlohmann::json diagram_to_json(const HandleDiagram& d) {
  HandleDiagram c = d;
  std::sort(c.components.begin(), c.components.end(),
            [](const Component& a, const Component& b) {
              return std::pair(role_rank(a.role), a.id) < std::pair(role_rank(b.role), b.id);
            });
  std::sort(c.crossings.begin(), c.crossings.end(), [](const Crossing& a, const Crossing& b) {
    return std::tie(a.over_in, a.over_out, a.under_in, a.under_out, a.sign) <
           std::tie(b.over_in, b.over_out, b.under_in, b.under_out, b.sign);
  });
  std::sort(c.twist_regions.begin(), c.twist_regions.end(),
            [](const TwistRegion& a, const TwistRegion& b) { return a.id < b.id; });

  nlohmann::json j;
  j["version"] = "kirby-diagram/1";
  j["components"] = nlohmann::json::array();
  for (auto& comp : c.components) {
    nlohmann::json jc;
    jc["id"] = comp.id;
    jc["role"] = role_name(comp.role);
    if (comp.role == Role::TwoHandle) jc["framing"] = comp.framing;
    jc["arcs"] = comp.arcs;
    j["components"].push_back(jc);
  }
  j["crossings"] = nlohmann::json::array();
  for (auto& x : c.crossings) {
    j["crossings"].push_back({{"over_in", x.over_in},
                              {"over_out", x.over_out},
                              {"under_in", x.under_in},
                              {"under_out", x.under_out},
                              {"sign", x.sign}});
  }
  j["passages"] = nlohmann::json::object();
  for (auto& [key, list] : c.passages) {
    auto arr = nlohmann::json::array();
    for (auto& p : list) arr.push_back({{"component", p.component}, {"sign", p.sign}});
    j["passages"][key] = arr;
  }
  j["twist_regions"] = nlohmann::json::array();
  for (auto& t : c.twist_regions) {
    nlohmann::json jt;
    jt["id"] = t.id;
    jt["arcs"] = {t.arc1, t.arc2};
    if (t.parameter.symbolic()) jt["parameter"] = t.parameter.form();
    else jt["parameter"] = t.parameter.b;
    jt["align"] = t.antiparallel ? "antiparallel" : "parallel";
    j["twist_regions"].push_back(jt);
  }
  return j;
}

inline std::string serialize_diagram(const HandleDiagram& d) {
  return diagram_to_json(d).dump(2) + "\n";
}

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(cat("unexpected key '", it.key(), "' in ", where));
}

}  // namespace detail

inline HandleDiagram diagram_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("diagram: not a JSON object");
  detail::check_keys(j, {"version", "components", "crossings", "passages", "twist_regions"},
                     "diagram");
  if (!j.contains("version") || j.at("version") != "kirby-diagram/1")
    fail("diagram: missing or unsupported version (want kirby-diagram/1)");
  HandleDiagram d;
  // j.value(...) returns a temporary; bind it to a local before iterating.
  const nlohmann::json jcomps = j.value("components", nlohmann::json::array());
  const nlohmann::json jxs = j.value("crossings", nlohmann::json::array());
  const nlohmann::json jpass = j.value("passages", nlohmann::json::object());
  const nlohmann::json jtwists = j.value("twist_regions", nlohmann::json::array());
  for (const auto& jc : jcomps) {
    detail::check_keys(jc, {"id", "role", "framing", "arcs"}, "component");
    Component c;
    c.id = jc.at("id").get<std::string>();
    c.role = parse_role(jc.at("role").get<std::string>());
    if (jc.contains("framing")) {
      if (c.role != Role::TwoHandle) fail(cat("framing on non-2-handle component ", c.id));
      c.framing = jc.at("framing").get<i64>();
    }
    c.arcs = jc.at("arcs").get<std::vector<std::string>>();
    d.components.push_back(std::move(c));
  }
  for (const auto& jx : jxs) {
    detail::check_keys(jx, {"over_in", "over_out", "under_in", "under_out", "sign"}, "crossing");
    Crossing x;
    x.over_in = jx.at("over_in").get<std::string>();
    x.over_out = jx.at("over_out").get<std::string>();
    x.under_in = jx.at("under_in").get<std::string>();
    x.under_out = jx.at("under_out").get<std::string>();
    x.sign = jx.at("sign").get<int>();
    d.crossings.push_back(std::move(x));
  }
  for (const auto& [key, arr] : jpass.items()) {
    std::vector<PassageEntry> list;
    for (const auto& jp : arr) {
      detail::check_keys(jp, {"component", "sign"}, "passage");
      list.push_back({jp.at("component").get<std::string>(), jp.at("sign").get<int>()});
    }
    d.passages[key] = std::move(list);
  }
  for (const auto& jt : jtwists) {
    detail::check_keys(jt, {"id", "arcs", "parameter", "align"}, "twist_region");
    TwistRegion t;
    t.id = jt.at("id").get<std::string>();
    auto arcs = jt.at("arcs").get<std::vector<std::string>>();
    if (arcs.size() != 2) fail(cat("twist region ", t.id, ": need exactly 2 arcs"));
    t.arc1 = arcs[0];
    t.arc2 = arcs[1];
    if (jt.at("parameter").is_number_integer())
      t.parameter = TwistParam{0, jt.at("parameter").get<i64>()};
    else
      t.parameter = TwistParam::parse_form(jt.at("parameter").get<std::string>());
    std::string align = jt.value("align", "antiparallel");
    if (align != "antiparallel" && align != "parallel")
      fail(cat("twist region ", t.id, ": bad align ", align));
    t.antiparallel = (align == "antiparallel");
    d.twist_regions.push_back(std::move(t));
  }
  return d;
}

inline HandleDiagram parse_diagram(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(cat("diagram: JSON parse error: ", e.what()));
  }
  return diagram_from_json(j);
}

inline bool same_diagram(const HandleDiagram& a, const HandleDiagram& b) {
  return serialize_diagram(a) == serialize_diagram(b);
}

// ---------------------------------------------------------------------------
// boundary surgery diagrams

struct SurgeryComponent {
  std::string id;
  bool marked = false;
  i64 p = 0, q = 1;  // coefficient p/q; meaningless when marked
  std::vector<std::string> arcs;
};

struct SurgeryDiagram {
  std::vector<SurgeryComponent> components;
  std::vector<Crossing> crossings;
};

inline SurgeryDiagram boundary_surgery(const HandleDiagram& d) {
  require_concrete(d);
  require_valid(d);
  SurgeryDiagram s;
  for (auto& c : d.components) {
    SurgeryComponent sc;
    sc.id = c.id;
    sc.arcs = c.arcs;
    if (c.role == Role::Marked) {
      sc.marked = true;
    } else {
      sc.p = (c.role == Role::Dotted) ? 0 : c.framing;
      sc.q = 1;
    }
    s.components.push_back(std::move(sc));
  }
  s.crossings = d.crossings;
  return s;
}

inline std::string serialize_surgery(const SurgeryDiagram& sd) {
  SurgeryDiagram c = sd;
  std::sort(c.components.begin(), c.components.end(),
            [](const SurgeryComponent& a, const SurgeryComponent& b) {
              return std::pair(a.marked ? 1 : 0, a.id) < std::pair(b.marked ? 1 : 0, b.id);
            });
  std::sort(c.crossings.begin(), c.crossings.end(), [](const Crossing& a, const Crossing& b) {
    return std::tie(a.over_in, a.over_out, a.under_in, a.under_out, a.sign) <
           std::tie(b.over_in, b.over_out, b.under_in, b.under_out, b.sign);
  });
  nlohmann::json j;
  j["version"] = "surgery-diagram/1";
  j["components"] = nlohmann::json::array();
  for (auto& comp : c.components) {
    nlohmann::json jc;
    jc["id"] = comp.id;
    if (comp.marked) {
      jc["marked"] = true;
    } else {
      jc["coefficient"] = {{"p", comp.p}, {"q", comp.q}};
    }
    jc["arcs"] = comp.arcs;
    j["components"].push_back(jc);
  }
  j["crossings"] = nlohmann::json::array();
  for (auto& x : c.crossings) {
    j["crossings"].push_back({{"over_in", x.over_in},
                              {"over_out", x.over_out},
                              {"under_in", x.under_in},
                              {"under_out", x.under_out},
                              {"sign", x.sign}});
  }
  return j.dump(2) + "\n";
}

}  // namespace corkforge::kirby
