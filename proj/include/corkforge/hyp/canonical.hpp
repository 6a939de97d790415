#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "corkforge/common.hpp"
#include "corkforge/hyp/develop.hpp"
#include "corkforge/hyp/interval.hpp"
#include "corkforge/hyp/krawczyk.hpp"

// Certified canonical-decomposition check (tilt criterion).  For each vertex
// cross-section take the circumradius rho of its developed link triangle,
// normalized so every cusp cross-section has unit area; the tilt of face f in
// tet t is
//     tilt(t,f) = rho(t,f) - sum_{v != f} rho(t,v) * cos(dihedral at edge {f,v})
// and the decomposition dual to the triangulation is canonical iff every face
// pair has tilt(t,f) + tilt(t2,f2) < 0.  All quantities here are built from
// certificate boxes with interval arithmetic (+,-,*,/ and correctly rounded
// sqrt only), so a "canonical" / "not_canonical" verdict is rigorous; sums
// whose sign the intervals cannot pin (a transparent face, e.g. a flat
// bipyramid subdivision) come back "indeterminate".

namespace corkforge::hyp {

enum class Canonicity { canonical, not_canonical, indeterminate };

struct CanonicalReport {
  Canonicity verdict = Canonicity::indeterminate;
  // per face pair (t,f,t2,f2) in face_pairs order: certified tilt-sum bounds
  std::vector<std::array<int, 4>> pairs;
  std::vector<RInt> tilt_sums;
  std::string detail;
};

inline const char* to_string(Canonicity c) {
  switch (c) {
    case Canonicity::canonical: return "canonical";
    case Canonicity::not_canonical: return "not_canonical";
    default: return "indeterminate";
  }
}

inline CanonicalReport canonical_verify(const IdealTriangulation& tri, const Certificate& cert) {
  require(cert.verified, "canonical_verify needs a verified certificate");
  for (const auto& s : cert.slopes.slopes)
    require(!s, "canonical_verify needs the complete (unfilled) structure");
  require(static_cast<int>(cert.boxes.size()) == tri.n, "canonical_verify: box count");

  CanonicalReport rep;
  std::vector<CInt> zs = cert.boxes;

  // cusp of each vertex
  auto vcls = vertex_classes(tri);
  std::map<std::pair<int, int>, int> cusp_of;
  for (std::size_t c = 0; c < vcls.size(); ++c)
    for (auto& tv : vcls[c]) cusp_of[tv] = static_cast<int>(c);

  // developed link triangles; per-cusp area for the normalization
  auto devs = develop_cusps(tri, zs);
  std::vector<RInt> inv_scale(vcls.size());  // 1/sqrt(area) per cusp
  std::map<std::pair<int, int>, RInt> rho;
  try {
    for (std::size_t c = 0; c < devs.size(); ++c) {
      RInt area(0.0);
      std::vector<RInt> signed_areas;
      for (const DevNode<CInt>& nd : devs[c]) {
        std::array<CInt, 3> cr;
        int k = 0;
        for (int u = 0; u < 4; ++u)
          if (u != nd.v) cr[k++] = nd.pos[u];
        CInt ab = cr[1] - cr[0], ac = cr[2] - cr[0];
        RInt twice = ab.re * ac.im - ab.im * ac.re;  // signed, orientation varies
        RInt tri_area = abs(twice) * RInt(0.5);
        if (!(twice.lo > 0.0) && !(twice.hi < 0.0)) {
          rep.verdict = Canonicity::indeterminate;
          rep.detail = cat("link triangle at tet ", nd.t, " vertex ", nd.v,
                           " has unresolvable orientation");
          return rep;
        }
        area = area + tri_area;
      }
      if (!(area.lo > 0.0)) {
        rep.verdict = Canonicity::indeterminate;
        rep.detail = cat("cusp ", c, " area not certifiably positive");
        return rep;
      }
      inv_scale[c] = RInt(1.0) / sqrt(area);
      for (const DevNode<CInt>& nd : devs[c]) {
        std::array<CInt, 3> cr;
        int k = 0;
        for (int u = 0; u < 4; ++u)
          if (u != nd.v) cr[k++] = nd.pos[u];
        CInt ab = cr[1] - cr[0], bc = cr[2] - cr[1], ca = cr[0] - cr[2];
        RInt la = sqrt(norm(ab)), lb = sqrt(norm(bc)), lc = sqrt(norm(ca));
        RInt twice = abs(ab.re * (-ca.im) - ab.im * (-ca.re));  // 2*area again
        RInt R = la * lb * lc / (twice * RInt(2.0));
        rho[{nd.t, nd.v}] = R * inv_scale[c];
      }
    }

    // shape parameters and pairwise face angles
    auto tilt = [&](int t, int f) -> RInt {
      const CInt one(1.0);
      std::array<CInt, 3> par{zs[t], one / (one - zs[t]), (zs[t] - one) / zs[t]};
      RInt s = rho.at({t, f});
      for (int v = 0; v < 4; ++v) {
        if (v == f) continue;
        const CInt& p = par[pair_col(f, v)];
        RInt cosang = p.re / sqrt(norm(p));
        s = s - rho.at({t, v}) * cosang;
      }
      return s;
    };

    for (const auto& fp : face_pairs(tri)) {
      RInt s = tilt(fp[0], fp[1]) + tilt(fp[2], fp[3]);
      rep.pairs.push_back(fp);
      rep.tilt_sums.push_back(s);
    }
  } catch (const Error& e) {
    rep.verdict = Canonicity::indeterminate;
    rep.detail = cat("interval evaluation broke down: ", e.what());
    return rep;
  }

  bool all_neg = true, any_pos = false;
  for (const RInt& s : rep.tilt_sums) {
    if (!(s.hi < 0.0)) all_neg = false;
    if (s.lo > 0.0) any_pos = true;
  }
  if (any_pos) {
    rep.verdict = Canonicity::not_canonical;
    rep.detail = "a face pair has certifiably positive tilt sum";
  } else if (all_neg) {
    rep.verdict = Canonicity::canonical;
    rep.detail = "";
  } else {
    rep.verdict = Canonicity::indeterminate;
    rep.detail = "some tilt sums straddle zero at this precision";
  }
  return rep;
}

}  // namespace corkforge::hyp
