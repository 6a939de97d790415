#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "corkforge/kirby/linking.hpp"
#include "corkforge/kirby/moves.hpp"
#include "corkforge/kirby/pi1.hpp"
#include "corkforge/kirby/tietze.hpp"
#include "corkforge/recipes/models.hpp"
#include "corkforge/recipes/trace.hpp"

using namespace corkforge;
using namespace corkforge::kirby;
using namespace corkforge::recipes;
using Catch::Matchers::ContainsSubstring;

static std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(CORKFORGE_ASSET_DIR) + "/" + rel, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static int plus_count(const HandleDiagram& d) {
  int k = 0;
  for (auto& x : d.crossings)
    if (x.sign > 0) ++k;
  return k;
}

TEST_CASE("rotation about the vertical axis is an involution", "[recipes]") {
  HandleDiagram c = cork_base();
  auto [r, F] = rotate_mirror(c, SymmetryKind::RotationAboutVerticalAxis);

  // over and under exchange; signs, framings, passages stay
  REQUIRE(r.crossings.size() == c.crossings.size());
  CHECK(plus_count(r) == plus_count(c));
  CHECK(r.passages == c.passages);
  CHECK_FALSE(same_diagram(r, c));  // the cork is not amphichiral-looking on the nose

  CHECK(serialize_diagram(apply_symmetry(r, F)) == serialize_diagram(c));
  CHECK(F.order == 2);
  CHECK(F.component_map.at("h") == "h");
}

TEST_CASE("mirror negates every oriented datum", "[recipes]") {
  DiagramBuilder b;
  int c0 = b.crossing(1), c1 = b.crossing(1), c2 = b.crossing(-1);
  b.component("k", Role::TwoHandle, 3, {{c0, true}, {c0, false}, {c1, true}, {c1, false},
                                        {c2, true}, {c2, false}});
  b.component("e", Role::TwoHandle, 0, {});
  b.twist("t", "k.a1", "k.a3", TwistParam{1, 2}, true);
  HandleDiagram d = b.build();

  auto [m, F] = rotate_mirror(d, SymmetryKind::Mirror);
  CHECK(m.get("k").framing == -3);
  CHECK(plus_count(m) == 1);
  CHECK(m.twist_regions[0].parameter.a == -1);
  CHECK(m.twist_regions[0].parameter.b == -2);
  CHECK(serialize_diagram(apply_symmetry(m, F)) == serialize_diagram(d));

  HandleDiagram cm = rotate_mirror(cork_base(), SymmetryKind::Mirror).first;
  CHECK(cm.passages.at("j") ==
        std::vector<PassageEntry>{{"h", -1}, {"h", -1}, {"h", 1}, {"mu", -1}});
  CHECK(plus_count(cm) == 2);
}

TEST_CASE("mod and certificate files round-trip", "[recipes]") {
  TangleModification m;
  m.clasps.push_back({"h.a5", -1});
  m.twists.push_back({"h.a0", "h.a2", -2, false});
  auto j = tangle_mod_to_json(m);
  TangleModification m2 = tangle_mod_from_json(j);
  CHECK(tangle_mod_to_json(m2) == j);
  CHECK_THROWS_WITH(tangle_mod_from_json(nlohmann::json{{"version", "tangle-mod/2"}}),
                    ContainsSubstring("version"));

  auto cj = cert_to_json(cork_certificate());
  CHECK(cert_to_json(cert_from_json(cj)) == cj);
  CHECK(cert_from_json(cj).not_slice_assumed);
}

TEST_CASE("the plain double carries the exchange involution", "[recipes]") {
  auto [W, F] = symmetric_double(cork_base(), cork_certificate(), {});

  REQUIRE(W.components.size() == 6);
  CHECK(W.crossings.size() == 16);
  CHECK(W.get("jp").role == Role::Dotted);
  CHECK(W.get("hp").role == Role::TwoHandle);
  REQUIRE(W.passages.count("hp"));
  CHECK(W.passages.at("hp") == std::vector<PassageEntry>{{"jp", 1}});

  CHECK(F.component_map.at("j") == "jp");
  CHECK(F.component_map.at("mup") == "mu");
  CHECK(F.arc_map.at("h.a4") == "hp.a4");
  CHECK(serialize_diagram(apply_symmetry(W, F)) == serialize_diagram(W));

  auto lk = linking_matrix(W);
  CHECK(abs_ck(det_bareiss(lk.m)) == 1);
  CHECK(lk.m.at(lk.pos("h"), lk.pos("hp")) == 0);
  CHECK(lk.m.at(lk.pos("j"), lk.pos("h")) == 1);
}

TEST_CASE("five modifications, five contractible doubles", "[recipes]") {
  TangleModification m1;  // plain
  TangleModification m2;
  m2.clasps.push_back({"h.a5", 1});
  TangleModification m3;
  m3.clasps.push_back({"h.a2", -1});
  TangleModification m4;
  m4.clasps.push_back({"h.a5", 1});
  m4.clasps.push_back({"h.a1", 1});
  TangleModification m5;
  m5.twists.push_back({"h.a0", "h.a2", 1, true});

  std::set<std::string> seen;
  for (auto& mod : {m1, m2, m3, m4, m5}) {
    auto [W, F] = symmetric_double(cork_base(), cork_certificate(), mod);
    CHECK(abs_ck(det_bareiss(linking_matrix(W).m)) == 1);
    auto tz = tietze_simplify(pi1_presentation(W));
    CHECK(tz.trivial);
    auto text = serialize_diagram(W);
    CHECK(serialize_diagram(parse_diagram(text)) == text);
    CHECK(seen.insert(text).second);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("modification vocabulary is fenced in", "[recipes]") {
  auto c = cork_base();
  auto cert = cork_certificate();
  TangleModification bad;

  bad.clasps = {{"j.a0", 1}};
  CHECK_THROWS_WITH(symmetric_double(c, cert, bad), ContainsSubstring("not on a 2-handle"));
  bad.clasps = {{"mu.a0", 1}};
  CHECK_THROWS_WITH(symmetric_double(c, cert, bad), ContainsSubstring("not on a 2-handle"));
  bad.clasps = {{"hp.a0", 1}};
  CHECK_THROWS_WITH(symmetric_double(c, cert, bad), ContainsSubstring("base side"));
  bad.clasps = {{"h.a5", 1}, {"h.a5", -1}};
  CHECK_THROWS_WITH(symmetric_double(c, cert, bad), ContainsSubstring("reuses"));
  bad.clasps = {{"h.a5", 2}};
  CHECK_THROWS_WITH(symmetric_double(c, cert, bad), ContainsSubstring("+-1"));
  bad.clasps.clear();
  bad.twists = {{"h.a0", "h.a2", 0, true}};
  CHECK_THROWS_WITH(symmetric_double(c, cert, bad), ContainsSubstring("k = 0"));

  DiagramBuilder b;  // no dotted circle at all
  int c0 = b.crossing(1), c1 = b.crossing(1);
  b.component("h1", Role::TwoHandle, 0, {{c0, true}, {c1, false}});
  b.component("h2", Role::TwoHandle, 0, {{c0, false}, {c1, true}});
  b.component("m", Role::Marked, 0, {});
  ReasonablyNiceCertificate cc = cert;
  cc.mu = "m";
  CHECK_THROWS_WITH(symmetric_double(b.build(), cc, {}), ContainsSubstring("Mazur"));
}

TEST_CASE("partner swap preserves the boundary and undoes itself", "[recipes]") {
  auto [W, F] = symmetric_double(cork_base(), cork_certificate(), {});
  HandleDiagram Wp = derive_partner(W);

  CHECK(Wp.get("jp").role == Role::TwoHandle);
  CHECK(Wp.get("jp").framing == 0);
  CHECK(Wp.get("hp").role == Role::Dotted);
  CHECK(serialize_surgery(boundary_surgery(Wp)) == serialize_surgery(boundary_surgery(W)));
  CHECK(serialize_diagram(derive_partner(Wp)) == serialize_diagram(W));

  CHECK_THROWS_WITH(derive_partner(cork_base()), ContainsSubstring("primed pair"));
}

TEST_CASE("the non-extension trace checks its chain", "[recipes]") {
  auto [W, F] = symmetric_double(cork_base(), cork_certificate(), {});
  HandleDiagram Wp = derive_partner(W);

  ProofTrace t = proof_trace_nonstrong(W, Wp, F, cork_certificate());
  REQUIRE(t.steps.size() == 5);
  CHECK(t.steps[0].id == "f-mu-meridian");
  CHECK(t.steps[1].id == "carve-embed");
  CHECK(t.steps[2].id == "j-split");
  CHECK(t.steps[3].id == "slice-transfer");
  CHECK(t.steps[4].id == "mu-not-slice");
  CHECK(t.verdict == "non-strong cork");
  CHECK(t.assumptions() == std::vector<std::string>{"mu-not-slice"});
  auto j = trace_to_json(t);
  CHECK(j.at("version") == "proof-trace/1");
  CHECK(j.at("steps").size() == 5);

  SECTION("no certificate, no verdict") {
    ReasonablyNiceCertificate none = cork_certificate();
    none.not_slice_assumed = false;
    ProofTrace w = proof_trace_nonstrong(W, Wp, F, none);
    CHECK(w.verdict == "withheld");
    CHECK(w.withheld_at == "mu-not-slice");
  }

  SECTION("j' entangled with the base side fails the split step") {
    BandSpec band{"jp", "h", "jp.a0", "h.a0", 1, {}};
    HandleDiagram badp = handle_slide(Wp, band);
    ProofTrace w = proof_trace_nonstrong(W, badp, F, cork_certificate());
    CHECK(w.verdict == "withheld");
    CHECK(w.withheld_at == "j-split");
  }

  SECTION("the clasped double traces the same argument") {
    TangleModification mod;
    mod.clasps.push_back({"h.a5", 1});
    auto [W2, F2] = symmetric_double(cork_base(), cork_certificate(), mod);
    ProofTrace t2 = proof_trace_nonstrong(W2, derive_partner(W2), F2, cork_certificate());
    CHECK(t2.verdict == "non-strong cork");
    CHECK(t2.assumptions().size() == 1);
  }
}

TEST_CASE("the twist family instantiates cleanly", "[recipes]") {
  TwistFamily fam = wn_family();
  REQUIRE(fam.tmpl.twist_regions.size() == 1);
  CHECK(fam.tmpl.twist_regions[0].parameter.form() == "2*n");
  CHECK(fam.tmpl.crossings.size() == 18);
  CHECK(validate_diagram(fam.tmpl).ok());

  auto text = serialize_family(fam);
  CHECK(serialize_family(parse_family(text)) == text);

  HandleDiagram w0 = instantiate_family(fam, 0);
  CHECK(w0.twist_regions.empty());
  CHECK(w0.crossings.size() == 18);

  for (i64 n : {i64{1}, i64{2}, i64{-1}, i64{-3}}) {
    HandleDiagram wn = instantiate_family(fam, n);
    CHECK(wn.crossings.size() == 18 + 4 * static_cast<size_t>(n < 0 ? -n : n));
    CHECK(validate_diagram(wn).ok());
    CHECK(abs_ck(det_bareiss(linking_matrix(wn).m)) == 1);  // integer homology spheres throughout
  }

  // n and -n: the box crossings flip, nothing else moves
  CHECK(plus_count(instantiate_family(fam, 1)) == 18);
  CHECK(plus_count(instantiate_family(fam, -1)) == 14);
}

TEST_CASE("role swap commutes with instantiation", "[recipes]") {
  TwistFamily fam = wn_family();
  HandleDiagram swapped_tmpl = role_swap(fam.tmpl, "jp", "hp");
  TwistFamily fam_swapped = family_from_diagram(swapped_tmpl);
  for (i64 n : {i64{2}, i64{-1}}) {
    CHECK(serialize_diagram(role_swap(instantiate_family(fam, n), "jp", "hp")) ==
          serialize_diagram(instantiate_family(fam_swapped, n)));
  }
}

TEST_CASE("one side of the family reduces, the other does not", "[recipes]") {
  TwistFamily fam = wn_family();

  // W_n: both dotted disks see three strands of their 2-handle; nothing cancels
  auto direct = detect_cancel_and_reduce(fam.tmpl);
  CHECK(direct.cancelled.empty());
  CHECK_FALSE(direct.is_mazur_type);

  // W_n': the primed pair is a cancelling pair.  On the template the box
  // blocks the (hp, h) clasp route, so the reduction runs over jp instead.
  HandleDiagram swapped = role_swap(fam.tmpl, "jp", "hp");
  auto red = detect_cancel_and_reduce(swapped);
  REQUIRE(red.cancelled.size() == 1);
  CHECK(red.cancelled[0].dotted == "hp");
  CHECK(red.cancelled[0].two_handle == "jp");
  CHECK(red.is_mazur_type);
  REQUIRE(red.diagram.twist_regions.size() == 1);  // the box survives on h
  CHECK(red.diagram.twist_regions[0].arc1 == "h.a1");

  // on an instance the box is concrete and the clasp pair cancels directly
  HandleDiagram inst = role_swap(instantiate_family(fam, 2), "jp", "hp");
  auto redi = detect_cancel_and_reduce(inst);
  REQUIRE(redi.cancelled.size() == 1);
  CHECK(redi.cancelled[0].dotted == "hp");
  CHECK(redi.cancelled[0].two_handle == "h");
  CHECK(redi.is_mazur_type);
}

TEST_CASE("the recorded slide does not open a cancellation in W_n", "[recipes]") {
  TwistFamily fam = wn_family();
  HandleDiagram slid = handle_slide(fam.tmpl, wn_slide_band());
  CHECK(slid.get("h").framing == -2);
  CHECK(validate_diagram(slid).ok());
  auto red = detect_cancel_and_reduce(slid);
  CHECK(red.cancelled.empty());
  CHECK_FALSE(red.is_mazur_type);

  HandleDiagram slid2 = handle_slide(instantiate_family(fam, 2), wn_slide_band());
  auto red2 = detect_cancel_and_reduce(slid2);
  CHECK(red2.cancelled.empty());
  CHECK_FALSE(red2.is_mazur_type);
}

TEST_CASE("bundled assets match the in-code models", "[recipes]") {
  CHECK(slurp("diagrams/cork_base.json") == serialize_diagram(cork_base()));
  CHECK(slurp("diagrams/w_double.json") == serialize_diagram(w_double().first));
  CHECK(slurp("diagrams/wn_family.json") == serialize_family(wn_family()));
  CHECK(slurp("bands/wn_slide.json") == serialize_band(wn_slide_band()));
  CHECK(slurp("certs/cork.json") == cert_to_json(cork_certificate()).dump(2) + "\n");
}

TEST_CASE("the chirality trace leans on the verified bound", "[recipes]") {
  TwistFamily fam = wn_family();
  HandleDiagram w3 = instantiate_family(fam, 3);

  hyp::McgBoundReport rep;
  rep.status = "verified";
  rep.classes_at_most = 2;
  rep.orientation_reversing = true;
  rep.min_abs_n = 3;
  rep.input_sha256 = "0";
  rep.tolerance = 1e-10;

  ProofTrace t = proof_trace_chiral(w3, 3, rep);
  CHECK(t.verdict == "homeomorphic but not diffeomorphic to -W_n");
  CHECK(t.assumptions() == std::vector<std::string>{"cork-sum", "homeo-extension"});
  CHECK(t.steps.back().id == "mcg-bound");
  CHECK(t.steps.back().status == "checked");

  SECTION("three isometry classes do not pin the boundary map") {
    hyp::McgBoundReport loose = rep;
    loose.classes_at_most = 3;
    CHECK(proof_trace_chiral(w3, 3, loose).verdict == "withheld");
  }
  SECTION("n below the certified range") {
    HandleDiagram w1 = instantiate_family(fam, 1);
    CHECK(proof_trace_chiral(w1, 1, rep).withheld_at == "mcg-bound");
  }
  SECTION("an inconclusive report proves nothing") {
    hyp::McgBoundReport shaky = rep;
    shaky.status = "inconclusive";
    CHECK(proof_trace_chiral(w3, 3, shaky).verdict == "withheld");
  }
  SECTION("report files round-trip") {
    auto j = hyp::mcg_report_to_json(rep);
    CHECK(hyp::mcg_report_to_json(hyp::mcg_report_from_json(j)) == j);
  }
}
