#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "corkforge/kirby/build.hpp"
#include "corkforge/kirby/diagram.hpp"
#include "corkforge/kirby/linking.hpp"
#include "corkforge/kirby/pi1.hpp"
#include "corkforge/kirby/tietze.hpp"
#include "corkforge/recipes/models.hpp"
#include "support/random_diagrams.hpp"

using namespace corkforge;
using namespace corkforge::kirby;

TEST_CASE("twist parameter forms", "[kirby]") {
  CHECK(TwistParam::parse_form("5").form() == "5");
  CHECK(TwistParam::parse_form("-3").form() == "-3");
  CHECK(TwistParam::parse_form("n").form() == "n");
  CHECK(TwistParam::parse_form("-n").form() == "-n");
  CHECK(TwistParam::parse_form("2*n").form() == "2*n");
  CHECK(TwistParam::parse_form("-2*n").form() == "-2*n");
  CHECK(TwistParam::parse_form("2*n+1").form() == "2*n+1");
  CHECK(TwistParam::parse_form("n-3").form() == "n-3");
  CHECK(TwistParam::parse_form("2*n").eval(5) == 10);
  CHECK(TwistParam::parse_form("-n+3").eval(4) == -1);
  CHECK(TwistParam::parse_form("7").eval(99) == 7);
  CHECK_THROWS_AS(TwistParam::parse_form("what"), Error);
  CHECK_THROWS_AS(TwistParam::parse_form("0*n"), Error);
  CHECK_THROWS_AS(TwistParam::parse_form("2n"), Error);
}

TEST_CASE("cork base diagram is valid and serializes stably", "[kirby]") {
  HandleDiagram d = recipes::cork_base();
  auto rep = validate_diagram(d);
  INFO(rep.str());
  REQUIRE(rep.ok());

  std::string s1 = serialize_diagram(d);
  HandleDiagram d2 = parse_diagram(s1);
  REQUIRE(serialize_diagram(d2) == s1);
  REQUIRE(same_diagram(d, d2));
}

TEST_CASE("cork base linking data", "[kirby]") {
  HandleDiagram d = recipes::cork_base();
  auto ld = linking_matrix(d);
  REQUIRE(ld.index == std::vector<std::string>{"j", "h"});
  REQUIRE(ld.m.rows == 2);
  CHECK(ld.m.at(0, 0) == 0);
  CHECK(ld.m.at(0, 1) == 1);
  CHECK(ld.m.at(1, 0) == 1);
  CHECK(ld.m.at(1, 1) == 0);
  CHECK(boundary_h1(d).trivial());
  CHECK(is_homology_sphere_boundary(d));
  CHECK(det_bareiss(ld.m) == -1);
}

TEST_CASE("cork base pi1 trivializes", "[kirby]") {
  HandleDiagram d = recipes::cork_base();
  GroupPresentation p = pi1_presentation(d);
  REQUIRE(p.rank() == 6);  // three runs each for j and h; mu is transparent
  CHECK(abelianization(p).trivial());
  auto res = tietze_simplify(p);
  CHECK(res.trivial);
  CHECK_FALSE(res.budget_exhausted);
}

TEST_CASE("pi1 of a lone dotted unknot is free of rank one", "[kirby]") {
  DiagramBuilder b;
  b.component("u", Role::Dotted, 0, {});
  b.passages("u");
  HandleDiagram d = b.build();
  REQUIRE(validate_diagram(d).ok());
  GroupPresentation p = pi1_presentation(d);
  CHECK(p.rank() == 1);
  CHECK(p.relators.empty());
  AbelianGroup ab = abelianization(p);
  CHECK(ab.rank == 1);
  CHECK(ab.torsion.empty());
}

TEST_CASE("pi1 abelianization tracks the linking submatrix", "[kirby]") {
  // dotted circle with a 2-handle running through twice, same sign: Z/2
  DiagramBuilder b;
  int c0 = b.crossing(1), c1 = b.crossing(1), c2 = b.crossing(1), c3 = b.crossing(1);
  b.component("u", Role::Dotted, 0, {{c0, false}, {c1, true}, {c2, false}, {c3, true}});
  b.component("w", Role::TwoHandle, 1, {{c0, true}, {c1, false}, {c2, true}, {c3, false}});
  b.passage("u", "w", 1);
  b.passage("u", "w", 1);
  HandleDiagram d = b.build();
  REQUIRE(validate_diagram(d).ok());
  GroupPresentation p = pi1_presentation(d);
  AbelianGroup ab = abelianization(p);
  CHECK(ab.rank == 0);
  CHECK(ab.torsion == std::vector<i64>{2});
}

TEST_CASE("validator rejects structural damage", "[kirby]") {
  auto has = [](const ValidationReport& r, const std::string& code) {
    for (auto& i : r.issues)
      if (i.code == code) return true;
    return false;
  };

  SECTION("dotted self-crossing") {
    DiagramBuilder b;
    int c = b.crossing(1);
    b.component("u", Role::Dotted, 0, {{c, true}, {c, false}});
    b.passages("u");
    CHECK(has(validate_diagram(b.build()), "dotted-self-crossing"));
  }
  SECTION("dotted-dotted crossing") {
    DiagramBuilder b;
    int c0 = b.crossing(1), c1 = b.crossing(1);
    b.component("u", Role::Dotted, 0, {{c0, false}, {c1, true}});
    b.component("v", Role::Dotted, 0, {{c0, true}, {c1, false}});
    b.passage("u", "v", 1);
    b.passage("v", "u", 1);
    auto rep = validate_diagram(b.build());
    CHECK(has(rep, "dotted-dotted-crossing"));
    CHECK(has(rep, "dotted-through-dotted"));
  }
  SECTION("passage mismatch") {
    DiagramBuilder b;
    int c0 = b.crossing(1), c1 = b.crossing(1);
    b.component("u", Role::Dotted, 0, {{c0, false}, {c1, true}});
    b.component("w", Role::TwoHandle, 0, {{c0, true}, {c1, false}});
    b.passage("u", "w", -1);  // crossings say +1
    CHECK(has(validate_diagram(b.build()), "passage-linking-mismatch"));
  }
  SECTION("missing passage list") {
    DiagramBuilder b;
    b.component("u", Role::Dotted, 0, {});
    CHECK(has(validate_diagram(b.build()), "missing-passages"));
  }
  SECTION("odd crossing sum") {
    DiagramBuilder b;
    int c0 = b.crossing(1);
    b.component("u", Role::Dotted, 0, {{c0, false}});
    b.component("w", Role::TwoHandle, 0, {{c0, true}});
    b.passages("u");
    CHECK(has(validate_diagram(b.build()), "odd-crossing-sum"));
  }
  SECTION("carrier with framing") {
    DiagramBuilder b;
    b.component("w", Role::TwoHandle, 2, {});
    b.passages("w");
    CHECK(has(validate_diagram(b.build()), "carrier-framing"));
  }
  SECTION("framing on marked component") {
    HandleDiagram d;
    d.components.push_back({"m", Role::Marked, 3, {"m.a0"}});
    CHECK(has(validate_diagram(d), "framing-on-non-2-handle"));
  }
  SECTION("arc claimed twice") {
    HandleDiagram d;
    d.components.push_back({"a", Role::TwoHandle, 0, {"x"}});
    d.components.push_back({"b", Role::TwoHandle, 0, {"x"}});
    CHECK(has(validate_diagram(d), "duplicate-arc"));
  }
}

TEST_CASE("diagram JSON schema is strict", "[kirby]") {
  HandleDiagram d = recipes::cork_base();
  nlohmann::json j = diagram_to_json(d);
  SECTION("unknown top-level key") {
    j["extra"] = 1;
    CHECK_THROWS_AS(diagram_from_json(j), Error);
  }
  SECTION("bad version") {
    j["version"] = "kirby-diagram/2";
    CHECK_THROWS_AS(diagram_from_json(j), Error);
  }
  SECTION("framing on dotted") {
    j["components"][0]["framing"] = 1;  // components[0] is the dotted j
    CHECK_THROWS_AS(diagram_from_json(j), Error);
  }
  SECTION("bad role") {
    j["components"][0]["role"] = "weird";
    CHECK_THROWS_AS(diagram_from_json(j), Error);
  }
}

TEST_CASE("boundary surgery diagram of the cork", "[kirby]") {
  HandleDiagram d = recipes::cork_base();
  SurgeryDiagram s = boundary_surgery(d);
  REQUIRE(s.components.size() == 3);
  std::string text = serialize_surgery(s);
  // j and h both carry coefficient 0/1; mu is marked
  CHECK(text.find("surgery-diagram/1") != std::string::npos);
  auto j = nlohmann::json::parse(text);
  REQUIRE(j.at("components").size() == 3);
  CHECK(j.at("components")[0].at("id") == "h");
  CHECK(j.at("components")[0].at("coefficient").at("p") == 0);
  CHECK(j.at("components")[2].at("id") == "mu");
  CHECK(j.at("components")[2].at("marked") == true);
}

TEST_CASE("tietze reference presentations", "[kirby]") {
  SECTION("<a | a> is trivial") {
    GroupPresentation p;
    p.names = {"a"};
    p.relators = {{1}};
    auto r = tietze_simplify(p);
    CHECK(r.trivial);
  }
  SECTION("<a,b | b, ab> is trivial") {
    GroupPresentation p;
    p.names = {"a", "b"};
    p.relators = {{2}, {1, 2}};
    auto r = tietze_simplify(p);
    CHECK(r.trivial);
  }
  SECTION("<a | a^2> reports its abelianization as the obstruction") {
    GroupPresentation p;
    p.names = {"a"};
    p.relators = {{1, 1}};
    auto r = tietze_simplify(p);
    CHECK_FALSE(r.trivial);
    CHECK(r.ab.torsion == std::vector<i64>{2});
    CHECK(r.ab.rank == 0);
  }
  SECTION("free reduction and duplicate relators") {
    GroupPresentation p;
    p.names = {"a", "b"};
    // first relator free-reduces away; the other two are cyclic rotations
    p.relators = {{1, 2, -2, -1}, {2, 1}, {1, 2}};
    auto r = tietze_simplify(p);
    CHECK_FALSE(r.trivial);  // <a,b | ab> is free of rank one
    CHECK(r.pres.rank() == 1);
    CHECK(r.ab.rank == 1);
    CHECK(r.ab.torsion.empty());
  }
}

TEST_CASE("random diagrams: validity, symmetry, serialization, pi1", "[kirby][prop]") {
  std::mt19937_64 rng(20260822);
  for (int iter = 0; iter < 120; ++iter) {
    auto rd = testsupport::random_diagram(rng);
    INFO("iteration " << iter << "\n" << serialize_diagram(rd.d));
    auto rep = validate_diagram(rd.d);
    INFO(rep.str());
    REQUIRE(rep.ok());

    // canonical serialization round-trips byte-identically
    std::string s = serialize_diagram(rd.d);
    REQUIRE(serialize_diagram(parse_diagram(s)) == s);

    // linking matrix symmetric
    auto ld = linking_matrix(rd.d);
    for (int i = 0; i < ld.m.rows; ++i)
      for (int j = 0; j < ld.m.cols; ++j) REQUIRE(ld.m.at(i, j) == ld.m.at(j, i));

    // pi1's internal abelianization cross-check runs on every diagram
    GroupPresentation p = pi1_presentation(rd.d);
    REQUIRE(abelianization(p) == cokernel(two_handle_by_dotted(ld, rd.d)));

    // boundary surgery serializes
    serialize_surgery(boundary_surgery(rd.d));
  }
}
