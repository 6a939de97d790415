#pragma once

#include <string>
#include <vector>

#include "corkforge/kirby/diagram.hpp"

// Walk-level diagram construction.  Callers declare crossings (getting back
// ids) and then give each component its cyclic walk as (crossing, over?)
// steps; arcs are emitted as "<component>.a<i>" where arc i follows step i.

namespace corkforge::kirby {

class DiagramBuilder {
 public:
  int crossing(int sign) {
    signs_.push_back(sign);
    return static_cast<int>(signs_.size()) - 1;
  }

  DiagramBuilder& component(const std::string& id, Role role, i64 framing,
                            std::vector<WalkStep> walk) {
    comps_.push_back({id, role, framing, std::move(walk)});
    return *this;
  }

  DiagramBuilder& passage(const std::string& key, const std::string& comp, int sign) {
    d_.passages[key].push_back({comp, sign});
    return *this;
  }

  DiagramBuilder& passages(const std::string& key) {
    d_.passages[key];  // ensure (possibly empty) list exists
    return *this;
  }

  DiagramBuilder& twist(const std::string& id, const std::string& arc1, const std::string& arc2,
                        TwistParam param, bool antiparallel = true) {
    d_.twist_regions.push_back({id, arc1, arc2, param, antiparallel});
    return *this;
  }

  HandleDiagram build() const {
    HandleDiagram d = d_;
    struct Slot { std::string in, out; };
    std::vector<Slot> over(signs_.size()), under(signs_.size());
    for (auto& c : comps_) {
      Component comp;
      comp.id = c.id;
      comp.role = c.role;
      comp.framing = c.framing;
      const size_t k = c.walk.size();
      if (k == 0) {
        comp.arcs = {cat(c.id, ".a0")};
      } else {
        for (size_t i = 0; i < k; ++i) comp.arcs.push_back(cat(c.id, ".a", i));
        for (size_t i = 0; i < k; ++i) {
          const WalkStep& s = c.walk[i];
          require(s.crossing >= 0 && s.crossing < static_cast<int>(signs_.size()),
                  cat("builder: bad crossing id in ", c.id));
          Slot& slot = (s.over ? over : under)[s.crossing];
          require(slot.in.empty(), cat("builder: crossing ", s.crossing, " slot used twice"));
          slot.in = comp.arcs[(i + k - 1) % k];
          slot.out = comp.arcs[i];
        }
      }
      d.components.push_back(std::move(comp));
    }
    for (size_t ci = 0; ci < signs_.size(); ++ci) {
      require(!over[ci].in.empty() && !under[ci].in.empty(),
              cat("builder: crossing ", ci, " has an empty slot"));
      d.crossings.push_back({over[ci].in, over[ci].out, under[ci].in, under[ci].out,
                             signs_[ci]});
    }
    return d;
  }

 private:
  struct Comp {
    std::string id;
    Role role;
    i64 framing;
    std::vector<WalkStep> walk;
  };
  std::vector<int> signs_;
  std::vector<Comp> comps_;
  HandleDiagram d_;  // passages / twist regions accumulate here
};

}  // namespace corkforge::kirby
