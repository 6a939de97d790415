#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "corkforge/kirby/build.hpp"
#include "corkforge/kirby/linking.hpp"
#include "corkforge/kirby/moves.hpp"
#include "corkforge/kirby/pi1.hpp"
#include "corkforge/recipes/models.hpp"
#include "support/random_diagrams.hpp"

using namespace corkforge;
using namespace corkforge::kirby;
using Catch::Matchers::ContainsSubstring;

static IMat mat(int r, int c, std::vector<i64> v) {
  IMat m(r, c);
  m.a = std::move(v);
  return m;
}

// two 0-framed unknots clasped into a Hopf link
static HandleDiagram hopf_handles() {
  DiagramBuilder b;
  int c0 = b.crossing(1), c1 = b.crossing(1);
  b.component("h1", Role::TwoHandle, 0, {{c0, true}, {c1, false}});
  b.component("h2", Role::TwoHandle, 0, {{c0, false}, {c1, true}});
  return b.build();
}

TEST_CASE("handle slide over a Hopf partner", "[moves]") {
  HandleDiagram d = hopf_handles();
  REQUIRE(linking_matrix(d).m == mat(2, 2, {0, 1, 1, 0}));

  BandSpec band{"h1", "h2", "h1.a0", "h2.a0", 1, {}};
  HandleDiagram s = handle_slide(d, band);

  CHECK(s.get("h1").framing == 2);  // 0 + 0 + 2*lk
  CHECK(linking_matrix(s).m == mat(2, 2, {2, 1, 1, 0}));
  CHECK(s.crossings.size() == 4);  // the two clasp crossings plus the copied pair
  CHECK(abs_ck(det_bareiss(linking_matrix(s).m)) == 1);

  SECTION("sliding back with the opposite band restores the matrix") {
    BandSpec back{"h1", "h2", "h1.a0", "h2.a0", -1, {}};
    HandleDiagram t = handle_slide(s, back);
    CHECK(t.get("h1").framing == 0);
    CHECK(linking_matrix(t).m == mat(2, 2, {0, 1, 1, 0}));
    CHECK(t.crossings.size() == 6);  // kinks accumulate; only the algebra returns
  }

  SECTION("slid diagrams serialize stably") {
    auto text = serialize_diagram(s);
    CHECK(serialize_diagram(parse_diagram(text)) == text);
  }
}

TEST_CASE("slide refuses an over component inside a twist region", "[moves]") {
  DiagramBuilder b;
  int c0 = b.crossing(1), c1 = b.crossing(1), c2 = b.crossing(1);
  b.component("h1", Role::TwoHandle, 0, {{c1, true}, {c2, false}});
  b.component("h2", Role::TwoHandle, 0, {{c0, true}, {c0, false}, {c1, false}, {c2, true}});
  b.twist("t0", "h2.a0", "h2.a1", TwistParam{1, 0});
  HandleDiagram d = b.build();
  REQUIRE(validate_diagram(d).ok());
  BandSpec band{"h1", "h2", "h1.a0", "h2.a2", 1, {}};
  CHECK_THROWS_AS(handle_slide(d, band), Refused);
}

TEST_CASE("band serialization round-trips", "[moves]") {
  BandSpec b{"h1", "h2", "h1.a0", "h2.a1", -1, {{"h3.a0", true}, {"h1.a2", false}}};
  auto text = serialize_band(b);
  auto b2 = parse_band(text);
  CHECK(serialize_band(b2) == text);
  CHECK(b2.slider == "h1");
  CHECK(b2.band_crossings.size() == 2);
  CHECK_THROWS_WITH(parse_band("{\"version\":\"band/2\"}"), ContainsSubstring("band/1"));
  CHECK_THROWS_WITH(
      parse_band("{\"version\":\"band/1\",\"slider\":\"a\",\"over\":\"b\",\"slider_arc\":\"x\","
                 "\"over_arc\":\"y\",\"sign\":1,\"band_crossings\":[],\"extra\":0}"),
      ContainsSubstring("unexpected key"));
}

TEST_CASE("role swap on the cork is a byte-level involution", "[moves]") {
  HandleDiagram d = recipes::cork_base();
  HandleDiagram s = role_swap(d, "j", "h");
  CHECK(s.get("j").role == Role::TwoHandle);
  CHECK(s.get("h").role == Role::Dotted);
  CHECK(serialize_surgery(boundary_surgery(s)) == serialize_surgery(boundary_surgery(d)));

  HandleDiagram back = role_swap(s, "h", "j");
  CHECK(serialize_diagram(back) == serialize_diagram(d));
}

TEST_CASE("role swap preconditions", "[moves]") {
  DiagramBuilder b;
  int c0 = b.crossing(1), c1 = b.crossing(1);
  b.component("u", Role::Dotted, 0, {{c0, false}, {c1, true}});
  b.component("v", Role::TwoHandle, 3, {{c0, true}, {c1, false}});
  b.passage("u", "v", 1);
  HandleDiagram d = b.build();
  REQUIRE(validate_diagram(d).ok());
  CHECK_THROWS_WITH(role_swap(d, "u", "v"), ContainsSubstring("framing 3"));

  DiagramBuilder b2;
  int x0 = b2.crossing(1), x1 = b2.crossing(1);
  b2.component("u", Role::Dotted, 0, {{x0, false}, {x1, true}});
  b2.component("v", Role::TwoHandle, 0, {{x0, true}, {x1, false}});
  b2.passage("u", "v", 1);
  HandleDiagram d2 = b2.build();
  REQUIRE(validate_diagram(d2).ok());
  CHECK_THROWS_WITH(role_swap(d2, "u", "v"), ContainsSubstring("no disk-passage data"));
}

TEST_CASE("twist materialization", "[moves]") {
  SECTION("self-twists change crossings but not the linking matrix") {
    DiagramBuilder b;
    int c0 = b.crossing(1);
    b.component("h", Role::TwoHandle, 4, {{c0, true}, {c0, false}});
    b.twist("t0", "h.a0", "h.a1", TwistParam::parse_form("2*n-1"));
    HandleDiagram d = b.build();
    REQUIRE(validate_diagram(d).ok());
    // self-twist templates still have well-defined linking data
    CHECK(linking_matrix(d).m == mat(1, 1, {4}));

    HandleDiagram m2 = materialize_twists(d, 2);  // parameter 3
    CHECK(m2.crossings.size() == 1 + 6);
    CHECK(m2.twist_regions.empty());
    CHECK(linking_matrix(m2).m == mat(1, 1, {4}));

    HandleDiagram m0 = materialize_twists(d, 0);  // parameter -1
    CHECK(m0.crossings.size() == 1 + 2);
    CHECK(linking_matrix(m0).m == mat(1, 1, {4}));
  }

  SECTION("a cross-component twist shifts the linking number by the parameter") {
    for (i64 n : {0, 1, 2, 3, -2}) {
      DiagramBuilder b;
      int c0 = b.crossing(1), c1 = b.crossing(1);
      b.component("u", Role::TwoHandle, 0, {{c0, true}, {c1, false}});
      b.component("w", Role::TwoHandle, 1, {{c0, false}, {c1, true}});
      b.twist("t0", "u.a0", "w.a0", TwistParam::parse_form("n"));
      HandleDiagram d = b.build();
      REQUIRE(validate_diagram(d).ok());
      // pending cross-component twists leave the linking matrix undefined
      CHECK_THROWS_WITH(linking_matrix(d), ContainsSubstring("instantiate"));
      HandleDiagram m = materialize_twists(d, n);
      INFO("n = " << n << "\n" << serialize_diagram(m));
      CHECK(linking_matrix(m).m == mat(2, 2, {0, 1 + n, 1 + n, 1}));
      CHECK(m.crossings.size() == 2 + 2 * static_cast<size_t>(n < 0 ? -n : n));
      auto text = serialize_diagram(m);
      CHECK(serialize_diagram(parse_diagram(text)) == text);
    }
  }

  SECTION("regions sharing an arc refuse to materialize") {
    DiagramBuilder b;
    int c0 = b.crossing(1);
    b.component("h", Role::TwoHandle, 0, {{c0, true}, {c0, false}});
    b.twist("t0", "h.a0", "h.a1", TwistParam{0, 1});
    b.twist("t1", "h.a0", "h.a1", TwistParam{0, 2});
    HandleDiagram d = b.build();
    REQUIRE(validate_diagram(d).ok());
    CHECK_THROWS_AS(materialize_twists(d, 0), Refused);
  }
}

TEST_CASE("cancelling a clean Hopf pair empties the diagram", "[moves]") {
  DiagramBuilder b;
  int c0 = b.crossing(1), c1 = b.crossing(1);
  b.component("u", Role::Dotted, 0, {{c0, false}, {c1, true}});
  b.component("v", Role::TwoHandle, -2, {{c0, true}, {c1, false}});
  b.passage("u", "v", 1);
  HandleDiagram d = b.build();
  REQUIRE(validate_diagram(d).ok());

  auto res = detect_cancel_and_reduce(d);
  REQUIRE(res.cancelled.size() == 1);
  CHECK(res.cancelled[0].dotted == "u");
  CHECK(res.cancelled[0].two_handle == "v");
  CHECK(res.cancelled[0].slides.empty());
  CHECK(res.diagram.components.empty());
  CHECK(res.diagram.crossings.empty());
  CHECK_FALSE(res.is_mazur_type);
}

TEST_CASE("cancellation reroutes bystanders over the cancelling handle", "[moves]") {
  DiagramBuilder b;
  int c0 = b.crossing(1), c1 = b.crossing(1);  // v through u's disk
  int c2 = b.crossing(1), c3 = b.crossing(1);  // w through u's disk
  b.component("u", Role::Dotted, 0, {{c0, false}, {c1, true}, {c2, false}, {c3, true}});
  b.component("v", Role::TwoHandle, 0, {{c0, true}, {c1, false}});
  b.component("w", Role::TwoHandle, 5, {{c2, true}, {c3, false}});
  b.passage("u", "v", 1);
  b.passage("u", "w", 1);
  HandleDiagram d = b.build();
  REQUIRE(validate_diagram(d).ok());
  REQUIRE(abs_ck(det_bareiss(linking_matrix(d).m)) == 5);

  auto res = detect_cancel_and_reduce(d);
  REQUIRE(res.cancelled.size() == 1);
  CHECK(res.cancelled[0].dotted == "u");
  CHECK(res.cancelled[0].two_handle == "v");
  REQUIRE(res.cancelled[0].slides.size() == 1);
  CHECK(res.cancelled[0].slides[0] == std::pair<std::string, int>{"w", -1});

  REQUIRE(res.diagram.components.size() == 1);
  CHECK(res.diagram.get("w").framing == 5);
  CHECK(res.diagram.crossings.empty());
  CHECK(linking_matrix(res.diagram).m == mat(1, 1, {5}));
  CHECK_FALSE(res.is_mazur_type);
}

TEST_CASE("the cork base has no cancelling pair and is Mazur-type", "[moves]") {
  HandleDiagram d = recipes::cork_base();
  auto before = serialize_diagram(d);
  auto res = detect_cancel_and_reduce(d);
  CHECK(res.cancelled.empty());
  CHECK(serialize_diagram(res.diagram) == before);
  CHECK(res.is_mazur_type);
}

TEST_CASE("a dotted circle with an empty passage list never cancels", "[moves]") {
  DiagramBuilder b;
  b.component("u", Role::Dotted, 0, {});
  b.component("h", Role::TwoHandle, 3, {});
  b.passages("u");
  HandleDiagram d = b.build();
  REQUIRE(validate_diagram(d).ok());
  auto res = detect_cancel_and_reduce(d);
  CHECK(res.cancelled.empty());
  CHECK(res.diagram.components.size() == 2);
}

TEST_CASE("dragging a marked curve never moves the linking matrix", "[moves]") {
  HandleDiagram d = recipes::cork_base();
  const auto m0 = linking_matrix(d).m;
  BandSpec band{"mu", "h", d.get("mu").arcs[0], d.get("h").arcs[0], 1, {}};
  HandleDiagram s = kirby::detail::slide_core(d, band, false);
  CHECK(validate_diagram(s).ok());
  CHECK(linking_matrix(s).m == m0);
  CHECK(s.get("mu").role == Role::Marked);
  // the dragged copy threads j's disk exactly as h does
  CHECK(abelianization(pi1_presentation(s)).trivial());
  auto text = serialize_diagram(s);
  CHECK(serialize_diagram(parse_diagram(text)) == text);
}

TEST_CASE("random slides preserve the algebra", "[moves][prop]") {
  std::mt19937_64 rng(486120);
  int done = 0;
  for (int it = 0; it < 400 && done < 80; ++it) {
    auto r = testsupport::random_diagram(rng);
    if (r.handles.size() < 2) continue;
    size_t si = rng() % r.handles.size();
    size_t oi = rng() % r.handles.size();
    if (si == oi) continue;
    const std::string slider = r.handles[si], over = r.handles[oi];
    BandSpec band{slider, over, r.d.get(slider).arcs[0], r.d.get(over).arcs[0],
                  rng() % 2 ? 1 : -1, {}};
    INFO("iteration " << it << ", " << slider << " over " << over << " sign " << band.sign
                      << "\n" << serialize_diagram(r.d));

    const auto ab0 = abelianization(pi1_presentation(r.d));
    const i64 det0 = abs_ck(det_bareiss(linking_matrix(r.d).m));

    HandleDiagram s = handle_slide(r.d, band);  // exact matrix asserted inside
    CHECK(validate_diagram(s).ok());
    CHECK(abelianization(pi1_presentation(s)) == ab0);
    CHECK(abs_ck(det_bareiss(linking_matrix(s).m)) == det0);

    auto text = serialize_diagram(s);
    CHECK(serialize_diagram(parse_diagram(text)) == text);
    ++done;
  }
  CHECK(done == 80);
}

TEST_CASE("cancellation preserves boundary homology", "[moves][prop]") {
  std::mt19937_64 rng(917003);
  int fired = 0;
  for (int it = 0; it < 50; ++it) {
    auto r = testsupport::random_cancellable(rng);
    INFO("iteration " << it << "\n" << serialize_diagram(r.d));
    const auto h0 = boundary_h1(r.d);
    const i64 det0 = abs_ck(det_bareiss(linking_matrix(r.d).m));

    auto res = detect_cancel_and_reduce(r.d);
    if (!res.cancelled.empty()) ++fired;
    CHECK(boundary_h1(res.diagram) == h0);
    CHECK(abs_ck(det_bareiss(linking_matrix(res.diagram).m)) == det0);
  }
  CHECK(fired == 50);  // the seeded pair must actually cancel every time
}
