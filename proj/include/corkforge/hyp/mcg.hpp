#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "corkforge/common.hpp"
#include "corkforge/hyp/aut.hpp"
#include "corkforge/hyp/canonical.hpp"
#include "corkforge/hyp/corelen.hpp"
#include "corkforge/hyp/krawczyk.hpp"
#include "corkforge/hyp/newton.hpp"
#include "corkforge/hyp/report.hpp"

// The mapping-class bound pipeline.  For an exterior X and a family of
// filling slopes indexed by n, the chain is
//   certify the complete structure  ->  Aut(X)  ->  canonical_verify
//   ->  per-n: solve, certify, core geodesic lengths.
// When the triangulation is certified canonical, Aut(X) = Isom(X) exactly
// (the canonical decomposition is an isometry invariant and here it is dual
// to the triangulation itself); otherwise |Aut| is only a lower bound for
// |Isom| and the report degrades to "partial" with the gap stated.  The
// passage from Isom of the filled manifold to Isom of the exterior treats
// the core geodesic as shortest, which is asymptotically true in n but
// assumed, not certified; the computed core lengths are recorded as
// evidence.  Any certification failure truncates the sweep with diagnostics.

namespace corkforge::hyp {

// Slope for cusp c at parameter n: (p, qa*n + qb).
struct FillingFamily {
  std::vector<std::array<i64, 3>> pqq;

  static FillingFamily uniform(std::size_t cusps, i64 p, i64 qa, i64 qb = 0) {
    FillingFamily f;
    f.pqq.assign(cusps, {p, qa, qb});
    return f;
  }

  FillingSlopes at(i64 n) const {
    FillingSlopes s;
    for (const auto& [p, qa, qb] : pqq)
      s.slopes.push_back(std::pair<i64, i64>{p, add_ck(mul_ck(qa, n), qb)});
    return s;
  }
};

struct McgBoundOptions {
  i64 n_lo = 5, n_hi = 20;
  double tol = 1e-12;
  int jobs = 1;
};

inline McgBoundReport mcg_bound_report(const IdealTriangulation& exterior,
                                       const FillingFamily& family, const McgBoundOptions& opts,
                                       const std::string& input_sha256) {
  require(opts.n_lo <= opts.n_hi, cat("bad n range ", opts.n_lo, "..", opts.n_hi));
  require(opts.jobs >= 1, "jobs must be positive");
  require(family.pqq.size() == exterior.cusps.size(),
          cat("filling family covers ", family.pqq.size(), " cusps, exterior has ",
              exterior.cusps.size()));
  McgBoundReport rep;
  rep.input_sha256 = input_sha256;
  rep.tolerance = opts.tol;
  rep.n_lo = opts.n_lo;
  rep.n_hi = opts.n_hi;

  FillingSlopes complete = FillingSlopes::all_complete(exterior.cusps.size());
  SolveOptions sopt;
  sopt.tol = opts.tol;

  // complete structure
  ShapeVector sol;
  try {
    sol = solve_shapes(gluing_system(exterior, complete), sopt);
  } catch (const Error& e) {
    rep.status = "failed";
    rep.diagnostics = cat("complete structure: ", e.what());
    return rep;
  }
  Certificate cert = certify_geometric(exterior, complete, sol.z);
  if (!cert.verified) {
    rep.status = "failed";
    rep.diagnostics = cat("complete structure not certified: ", cert.diagnostics);
    return rep;
  }
  rep.complete_volume = volume(sol.z);

  // symmetries and canonicity
  IsometryGroup aut = automorphisms(exterior);
  rep.aut_order = aut.order();
  for (const Isomorphism& e : aut.elements) rep.aut_reversing += e.reverses ? 1 : 0;
  rep.orientation_reversing = aut.has_orientation_reversing();
  CanonicalReport can = canonical_verify(exterior, cert);
  rep.canonicity = to_string(can.verdict);
  rep.classes_at_most = aut.order();

  bool canonical_ok = can.verdict == Canonicity::canonical;
  rep.assumptions.push_back(
      "mostow-rigidity: for a closed (or finite-volume) hyperbolic 3-manifold the mapping "
      "class group is the isometry group, so counting isometries bounds mapping classes");
  if (canonical_ok) {
    rep.assumptions.push_back(
        "canonical-cells: the tilt criterion certifies this triangulation as the canonical "
        "decomposition of the exterior, hence Isom(exterior) = Aut(triangulation), order " +
        std::to_string(aut.order()));
  } else {
    rep.assumptions.push_back(cat(
        "canonicity-gap: canonical_verify returned '", rep.canonicity, "', so |Aut| = ",
        aut.order(), " is only a lower bound for |Isom(exterior)| and classes_at_most is not "
        "certified as an upper bound"));
  }

  // per-n sweep (independent solves; deterministic regardless of jobs)
  const i64 count = opts.n_hi - opts.n_lo + 1;
  std::vector<McgSweepRow> rows(static_cast<std::size_t>(count));
  std::vector<std::string> errors(static_cast<std::size_t>(count));
  std::atomic<i64> next{0};
  auto worker = [&]() {
    for (;;) {
      i64 k = next.fetch_add(1);
      if (k >= count) return;
      i64 n = opts.n_lo + k;
      McgSweepRow row;
      row.n = n;
      try {
        FillingSlopes slopes = family.at(n);
        GluingSystem sys = gluing_system(exterior, slopes);
        ShapeVector s = solve_shapes(sys, sopt);
        row.volume = volume(s.z);
        row.residual = s.residual;
        Certificate c = certify_geometric(exterior, slopes, s.z);
        row.certified = c.verified;
        if (!c.verified) {
          errors[static_cast<std::size_t>(k)] = cat("n=", n, ": ", c.diagnostics);
        } else {
          for (std::size_t cu = 0; cu < slopes.slopes.size(); ++cu)
            if (slopes.slopes[cu])
              row.core_lengths.push_back(
                  core_length(exterior, slopes, s.z, static_cast<int>(cu)).real_length);
          if (!(row.volume < rep.complete_volume))
            errors[static_cast<std::size_t>(k)] =
                cat("n=", n, ": filled volume does not drop below the complete volume");
        }
      } catch (const Error& e) {
        row.certified = false;
        errors[static_cast<std::size_t>(k)] = cat("n=", n, ": ", e.what());
      }
      rows[static_cast<std::size_t>(k)] = std::move(row);
    }
  };
  int jobs = static_cast<int>(std::min<i64>(opts.jobs, count));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // truncate at the first failure
  i64 good = 0;
  std::string first_error;
  for (i64 k = 0; k < count; ++k) {
    if (!errors[static_cast<std::size_t>(k)].empty() || !rows[static_cast<std::size_t>(k)].certified) {
      first_error = errors[static_cast<std::size_t>(k)];
      if (first_error.empty())
        first_error = cat("n=", opts.n_lo + k, ": not certified");
      break;
    }
    ++good;
  }
  rep.sweep.assign(rows.begin(), rows.begin() + good);

  double min_core = 0.0;
  bool have_core = false;
  for (const McgSweepRow& r : rep.sweep)
    for (double L : r.core_lengths) {
      if (!have_core || L < min_core) min_core = L;
      have_core = true;
    }
  if (have_core) {
    rep.assumptions.push_back(cat(
        "shortest-geodesic: isometries of the filled manifold are assumed to preserve the "
        "filling core (true once the core is the unique shortest geodesic, which holds for "
        "deep fillings); the shortest computed core length over the certified range is ",
        min_core, ", recorded as evidence, not proof"));
  }

  if (good > 0) {
    i64 lo = rep.sweep.front().n, hi = rep.sweep.back().n;
    rep.min_abs_n = std::min(std::abs(lo), std::abs(hi));
    if (lo <= 0 && hi >= 0) rep.min_abs_n = 0;
  }

  if (good == count && canonical_ok) {
    rep.status = "verified";
  } else if (good == 0) {
    rep.status = "failed";
    rep.diagnostics = first_error.empty() ? "no filling certified" : first_error;
  } else {
    rep.status = "partial";
    if (!first_error.empty())
      rep.diagnostics = cat("sweep truncated: ", first_error);
    else if (!canonical_ok)
      rep.diagnostics = "canonicity not certified; classes_at_most is a lower-bound order";
  }
  return rep;
}

}  // namespace corkforge::hyp
