#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "corkforge/kirby/pi1.hpp"

// Tietze simplification.  Certify-or-inconclusive: triviality of a finite
// presentation is semidecidable, so running out of budget only means "don't
// know".  Every transformation preserves the group; the abelianization is
// recomputed at the end and checked against the input as a tripwire.

namespace corkforge::kirby {

struct TietzeResult {
  GroupPresentation pres;
  bool trivial = false;
  bool budget_exhausted = false;
  i64 steps = 0;
  AbelianGroup ab;
};

namespace detail {

inline void free_reduce(std::vector<int>& w) {
  std::vector<int> out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x) out.pop_back();
    else out.push_back(x);
  }
  w = std::move(out);
}

inline void cyclic_reduce(std::vector<int>& w) {
  free_reduce(w);
  while (w.size() >= 2 && w.front() == -w.back()) {
    w.erase(w.begin());
    w.pop_back();
    free_reduce(w);
  }
}

inline std::vector<int> inverse_word(const std::vector<int>& w) {
  std::vector<int> r(w.rbegin(), w.rend());
  for (int& x : r) x = -x;
  return r;
}

// least cyclic rotation over the word and its inverse: canonical representative
inline std::vector<int> canonical_cyclic(const std::vector<int>& w) {
  if (w.empty()) return w;
  std::vector<int> best;
  for (auto base : {w, inverse_word(w)}) {
    for (size_t i = 0; i < base.size(); ++i) {
      std::vector<int> rot(base.begin() + static_cast<long>(i), base.end());
      rot.insert(rot.end(), base.begin(), base.begin() + static_cast<long>(i));
      if (best.empty() || rot < best) best = rot;
    }
  }
  return best;
}

}  // namespace detail

inline TietzeResult tietze_simplify(GroupPresentation p, i64 budget = 100000) {
  require(budget > 0, "tietze: budget must be positive");
  const AbelianGroup ab0 = abelianization(p);
  TietzeResult res;

  auto tidy = [&]() {
    for (auto& r : p.relators) detail::cyclic_reduce(r);
    std::erase_if(p.relators, [](const std::vector<int>& r) { return r.empty(); });
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> keep;
    for (auto& r : p.relators)
      if (seen.insert(detail::canonical_cyclic(r)).second) keep.push_back(std::move(r));
    p.relators = std::move(keep);
    std::sort(p.relators.begin(), p.relators.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                return a < b;
              });
  };

  // eliminate generator g given relator r where g occurs exactly once
  auto eliminate = [&](size_t ridx, int g) {
    std::vector<int> r = p.relators[ridx];
    size_t pos = 0;
    while (std::abs(r[pos]) != g) ++pos;
    std::vector<int> rot(r.begin() + static_cast<long>(pos), r.end());
    rot.insert(rot.end(), r.begin(), r.begin() + static_cast<long>(pos));
    // rot = g^s . w  =>  g^s = w^-1
    int s = rot[0] > 0 ? 1 : -1;
    std::vector<int> w(rot.begin() + 1, rot.end());
    std::vector<int> rep = detail::inverse_word(w);  // value of g^s
    if (s < 0) rep = detail::inverse_word(rep);      // value of g
    std::vector<int> rep_inv = detail::inverse_word(rep);

    p.relators.erase(p.relators.begin() + static_cast<long>(ridx));
    for (auto& t : p.relators) {
      std::vector<int> out;
      for (int x : t) {
        if (x == g) out.insert(out.end(), rep.begin(), rep.end());
        else if (x == -g) out.insert(out.end(), rep_inv.begin(), rep_inv.end());
        else out.push_back(x);
      }
      t = std::move(out);
    }
    // renumber: drop generator g
    p.names.erase(p.names.begin() + (g - 1));
    for (auto& t : p.relators)
      for (int& x : t) {
        int a = std::abs(x);
        if (a > g) x = (x > 0) ? x - 1 : x + 1;
      }
  };

  // replace a long cyclic chunk of another relator: if s = u.v with |u| > |v|,
  // any occurrence of u inside r can become v^-1
  auto shorten_with = [&](std::vector<int>& r, const std::vector<int>& s) -> bool {
    const size_t n = r.size(), m = s.size();
    if (m < 2 || n < m / 2 + 1) return false;
    for (auto base : {s, detail::inverse_word(s)}) {
      for (size_t rot = 0; rot < m; ++rot) {
        std::vector<int> sr(base.begin() + static_cast<long>(rot), base.end());
        sr.insert(sr.end(), base.begin(), base.begin() + static_cast<long>(rot));
        // match prefixes of sr against linear windows of r
        for (size_t start = 0; start < n; ++start) {
          size_t len = 0;
          while (len < m && start + len < n && r[start + len] == sr[len]) ++len;
          if (2 * len > m) {
            std::vector<int> tail(sr.begin() + static_cast<long>(len), sr.end());
            std::vector<int> rep = detail::inverse_word(tail);
            std::vector<int> out(r.begin(), r.begin() + static_cast<long>(start));
            out.insert(out.end(), rep.begin(), rep.end());
            out.insert(out.end(), r.begin() + static_cast<long>(start + len), r.end());
            detail::free_reduce(out);
            if (out.size() < n) {
              r = std::move(out);
              return true;
            }
          }
        }
      }
    }
    return false;
  };

  tidy();
  bool more = true;
  while (more && res.steps < budget) {
    more = false;

    // pass 1: generator eliminations (cheapest wins first)
    bool elim = true;
    while (elim && res.steps < budget) {
      elim = false;
      size_t best_r = 0;
      int best_g = 0;
      for (size_t i = 0; i < p.relators.size() && !best_g; ++i) {
        std::map<int, int> cnt;
        for (int x : p.relators[i]) ++cnt[std::abs(x)];
        for (auto& [g, c] : cnt)
          if (c == 1) {
            best_r = i;
            best_g = g;
            break;
          }
      }
      if (best_g) {
        eliminate(best_r, best_g);
        tidy();
        ++res.steps;
        elim = more = true;
      }
    }

    // pass 2: shorten relators against each other
    for (size_t i = 0; i < p.relators.size() && res.steps < budget; ++i) {
      for (size_t j = 0; j < p.relators.size(); ++j) {
        if (i == j) continue;
        if (p.relators[j].size() > p.relators[i].size()) continue;
        if (shorten_with(p.relators[i], p.relators[j])) {
          tidy();
          ++res.steps;
          more = true;
          i = p.relators.size();  // restart outer scan
          break;
        }
      }
    }
  }
  res.budget_exhausted = more && res.steps >= budget;

  res.trivial = p.names.empty();
  if (res.trivial) p.relators.clear();
  res.ab = abelianization(p);
  if (!(res.ab == ab0))
    fail(cat("tietze: abelianization drifted from ", ab0.str(), " to ", res.ab.str()));
  res.pres = std::move(p);
  return res;
}

}  // namespace corkforge::kirby
