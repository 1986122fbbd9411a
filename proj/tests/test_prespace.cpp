#include <doctest.h>

#include "fraisse/prespace.hpp"
#include "support.hpp"

using namespace fraisse;
using namespace fraisse::testing;

TEST_CASE("a single symmetric pair gives classes {0,1} and {2}") {
  FiniteStructure s;
  s.sig = reserved_r_signature();
  s.size = 3;
  s.interp.resize(1);
  s.interp[0] = {{0, 1}, {1, 0}};
  auto report = check_prespace(s);
  CHECK(report.symmetric);
  CHECK(report.transitive);
  REQUIRE(report.classes.size() == 2);
  CHECK(report.classes[0] == std::vector<int>{0, 1});
  CHECK(report.classes[1] == std::vector<int>{2});
}

TEST_CASE("the 3-path is not a pre-space") {
  auto report = check_prespace(path_structure(3));
  CHECK(report.symmetric);
  CHECK_FALSE(report.transitive);
  CHECK_FALSE(report.first_failure.empty());
}

TEST_CASE("an empty relation is a pre-space with singleton classes") {
  FiniteStructure s;
  s.sig = reserved_r_signature();
  s.size = 4;
  s.interp.resize(1);
  auto report = check_prespace(s);
  CHECK(report.transitive);
  CHECK(report.classes.size() == 4);
}

TEST_CASE("check_prespace requires the reserved symbol") {
  CHECK_THROWS_AS(check_prespace(empty_signature_structure(3)), Error);
}

TEST_CASE("quotient collapses classes and induces the remaining symbols") {
  auto s = read_structure_file(fixture("prespace3.struct"));
  auto res = quotient_by_reserved(s);
  CHECK(res.projection.table == std::vector<int>{0, 0, 1});
  CHECK(res.quotient.size == 2);
  REQUIRE(res.quotient.sig.symbols.size() == 1);
  CHECK(res.quotient.sig.symbols[0].name == "P");
  CHECK_FALSE(res.quotient.sig.r_reserved);
  // oracle: the induced structure along the projection, with r dropped first
  FiniteStructure stripped;
  stripped.size = s.size;
  stripped.sig.symbols.push_back(s.sig.symbols[1]);
  stripped.interp.push_back(s.interp[1]);
  CHECK(res.quotient == induced_structure(stripped, res.projection));
  CHECK(is_epimorphism(res.projection, stripped, res.quotient));
}

TEST_CASE("an all-singleton relation quotients to an isomorphic copy minus r") {
  FiniteStructure s;
  s.sig = reserved_r_signature();
  s.sig.symbols.push_back({"p", 1, SymbolKind::Direct});
  s.size = 3;
  s.interp.resize(2);
  s.interp[1] = {{0}, {2}};
  auto res = quotient_by_reserved(s);
  CHECK(res.quotient.size == 3);
  CHECK(res.projection.bijective());
  CHECK(res.quotient.interp[0] == s.interp[1]);
}

TEST_CASE("one giant class quotients to a single point") {
  FiniteStructure s;
  s.sig = reserved_r_signature();
  s.size = 3;
  s.interp.resize(1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) s.interp[0].insert({i, j});
  auto res = quotient_by_reserved(s);
  CHECK(res.quotient.size == 1);
}

TEST_CASE("quotients of non-transitive relations point back to the check") {
  CHECK_THROWS_WITH_AS(quotient_by_reserved(path_structure(3)),
                       doctest::Contains("check_prespace"), Error);
}

TEST_CASE("interval levels are exactly paths on the dyadic atoms") {
  auto sys = build_interval_system(5);
  REQUIRE(sys.depth() == 5);
  for (int n = 1; n <= 5; ++n) {
    CHECK(sys.level(n) == path_structure(1 << n));
  }
  CHECK(validate_system(sys).empty());
}

TEST_CASE("depth one has two atoms meeting in the midpoint") {
  auto sys = build_interval_system(1);
  CHECK(sys.level(1).size == 2);
  CHECK(sys.level(1).interp[0].size() == 2);  // one unordered edge, both orientations
}

TEST_CASE("every coarse edge is covered by the straddling fine edge") {
  auto sys = build_interval_system(4);
  for (int n = 1; n < 4; ++n) {
    const auto& bond = sys.bonds[n - 1].map();
    for (int k = 0; k + 1 < sys.level(n).size; ++k) {
      // the edge (2k+1, 2k+2) maps onto (k, k+1)
      CHECK(bond(2 * k + 1) == k);
      CHECK(bond(2 * k + 2) == k + 1);
    }
    CHECK(is_epimorphism(bond, sys.level(n + 1), sys.level(n)));
  }
}

TEST_CASE("cantor levels are edgeless with surjective bonds") {
  auto sys = build_cantor_system(3);
  for (int n = 1; n <= 3; ++n) {
    CHECK(sys.level(n).size == (1 << n));
    CHECK(sys.level(n).interp[0].empty());
  }
  CHECK(validate_system(sys).empty());
}

TEST_CASE("the interval report shows a connected path with mesh halving") {
  auto sys = build_interval_system(5);
  auto report = limit_quotient_report(sys, true);
  REQUIRE(report.levels.size() == 5);
  for (int n = 1; n <= 5; ++n) {
    const auto& stats = report.levels[n - 1];
    CHECK(stats.atoms == (1 << n));
    CHECK(stats.edges == (1 << n) - 1);
    CHECK(stats.components == 1);
    CHECK(stats.max_degree == (n == 1 ? 1 : 2));
  }
  CHECK(report.levels[0].mesh == "1/2");
  CHECK(report.levels[3].mesh == "1/16");
  CHECK(report.levels[4].mesh == "1/32");
}

TEST_CASE("interval threads pair up only across shared dyadic boundaries") {
  auto sys = build_interval_system(5);
  auto report = limit_quotient_report(sys, true);
  CHECK(report.threads == 32);
  CHECK(report.related_pairs == 31);
  CHECK(report.max_limit_class == 2);
  // the pair around the midpoint carries the boundary 1/2
  bool midpoint = false;
  for (const auto& p : report.pairs)
    if (p.first_thread == 15 && p.second_thread == 16) {
      midpoint = true;
      CHECK(p.boundary == "1/2");
    }
  CHECK(midpoint);
}

TEST_CASE("limit relatedness is symmetric by construction and cantor is discrete") {
  auto sys = build_cantor_system(5);
  auto report = limit_quotient_report(sys, false);
  CHECK(report.threads == 32);
  CHECK(report.related_pairs == 0);
  CHECK(report.max_limit_class == 1);
}

TEST_CASE("interval provenance records the refinement identities") {
  auto sys = build_interval_system(2);
  bool refines = false, meet = false;
  for (const auto& line : sys.provenance) {
    if (line.find("refines atom") != std::string::npos) refines = true;
    if (line.find("regular-closed meet") != std::string::npos) meet = true;
  }
  CHECK(refines);
  CHECK(meet);
}
