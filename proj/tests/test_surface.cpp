#include <catch2/catch_amalgamated.hpp>

#include "hopmdp/surface.hpp"

using namespace hopmdp;

TEST_CASE("hex7 is a flower: center S7 degree 6, ring zones degree 3", "[surface]") {
  Surface s = build_hex7({1, 1, 1, 1, 1, 1, 1});
  REQUIRE(s.zones.size() == 7);
  CHECK(neighbors(s, 7).size() == 6);
  for (int id = 1; id <= 6; ++id) {
    auto nb = neighbors(s, id);
    CHECK(nb.size() == 3);
    CHECK(std::find(nb.begin(), nb.end(), 7) != nb.end());
  }
  // The only adjacency the layout must pin down: S6 touches S7.
  auto nb7 = neighbors(s, 7);
  CHECK(std::find(nb7.begin(), nb7.end(), 6) != nb7.end());
}

TEST_CASE("hex7 weight ratios are preserved", "[surface]") {
  Surface s = build_hex7({1.0, 1.0, 1.0, 1.0, 2.0, 3.0, 7.0});
  CHECK(s.zone(7).weight / s.zone(4).weight == Catch::Approx(7.0));
  CHECK(s.zone(7).label == "S7");
  CHECK(s.zone(4).label == "S4");
}

TEST_CASE("hex7 rejects bad weight lists", "[surface]") {
  CHECK_THROWS_AS(build_hex7({1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_hex7({1, 1, 1, 1, 1, 1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_hex7({1, 1, 1, 1, 1, -2.0, 1}), std::invalid_argument);
}

TEST_CASE("neighbors are sorted, never self, and reject unknown ids", "[surface]") {
  Surface s = build_hex7({1, 1, 1, 1, 1, 1, 1});
  for (const auto& z : s.zones) {
    auto nb = neighbors(s, z.id);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    CHECK(std::find(nb.begin(), nb.end(), z.id) == nb.end());
  }
  CHECK_THROWS_AS(neighbors(s, 99), std::invalid_argument);

  Surface line = make_surface({{0, 1.0, "Z0"}, {1, 1.0, "Z1"}}, {{0, 1}});
  CHECK(neighbors(line, 0) == std::vector<int>{1});
}

TEST_CASE("validate reports structural violations", "[surface]") {
  CHECK(validate(build_hex7({1, 1, 1, 1, 1, 1, 1})).empty());

  Surface self_loop;
  self_loop.zones = {{1, 1.0, "A"}, {2, 1.0, "B"}};
  self_loop.edges = {{1, 1}, {1, 2}, {2, 1}};
  auto bad = validate(self_loop);
  REQUIRE_FALSE(bad.empty());
  CHECK(bad.front().find("self-loop at 1") != std::string::npos);

  Surface disconnected;
  disconnected.zones = {{1, 1.0, "A"}, {2, 1.0, "B"}};
  auto bad2 = validate(disconnected);
  REQUIRE(bad2.size() == 1);
  CHECK(bad2.front() == "disconnected");

  Surface asym;
  asym.zones = {{1, 1.0, "A"}, {2, 1.0, "B"}};
  asym.edges = {{1, 2}};
  auto bad3 = validate(asym);
  REQUIRE_FALSE(bad3.empty());
  CHECK(bad3.front().find("asymmetric") != std::string::npos);

  Surface dup;
  dup.zones = {{1, 1.0, "A"}, {1, 1.0, "B"}};
  dup.edges = {};
  auto bad4 = validate(dup);
  REQUIRE_FALSE(bad4.empty());
  CHECK(bad4.front().find("duplicate") != std::string::npos);
}

TEST_CASE("make_surface symmetrizes and rejects invalid graphs", "[surface]") {
  Surface s = make_surface({{1, 1.0, "A"}, {2, 2.0, "B"}}, {{1, 2}});
  CHECK(validate(s).empty());
  CHECK(neighbors(s, 2) == std::vector<int>{1});

  CHECK_THROWS_AS(make_surface({{1, 1.0, "A"}, {2, 1.0, "B"}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_surface({{1, 0.0, "A"}}, {}), std::invalid_argument);
}

TEST_CASE("surface automorphism: rotating the hex ring is structure-preserving", "[surface]") {
  // Relabeling check used by the model symmetry test: the map i -> i%6+1 on
  // ring zones (center fixed) maps edges to edges.
  Surface s = build_hex7({1, 1, 1, 1, 1, 1, 1});
  auto rot = [](int id) { return id == 7 ? 7 : id % 6 + 1; };
  for (const auto& z : s.zones) {
    auto nb = neighbors(s, z.id);
    std::vector<int> mapped;
    for (int t : nb) mapped.push_back(rot(t));
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == neighbors(s, rot(z.id)));
  }
}
