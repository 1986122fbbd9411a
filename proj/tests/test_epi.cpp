#include <doctest.h>

#include <set>

#include "fraisse/epi.hpp"
#include "fraisse/structure.hpp"
#include "support.hpp"

using namespace fraisse;
using namespace fraisse::testing;

TEST_CASE("the identity is an epimorphism on every corpus structure") {
  for (const auto& s : corpus())
    CHECK(is_epimorphism(SurjectiveMap::identity(s.size), s, s));
}

TEST_CASE("with an empty signature every surjection is an epimorphism") {
  auto a = empty_signature_structure(3), b = empty_signature_structure(2);
  auto epis = enumerate_epimorphisms(a, b);
  CHECK(epis.size() == 6);
  CHECK(epis == naive_epimorphisms(a, b));
}

TEST_CASE("path collapses verified against the definitional oracle") {
  auto p3 = path_structure(3), p2 = path_structure(2);
  SurjectiveMap fold{3, 2, {0, 0, 1}};
  SurjectiveMap zigzag{3, 2, {0, 1, 0}};
  CHECK(is_epimorphism(fold, p3, p2));
  CHECK(is_epimorphism(zigzag, p3, p2));
  for (const auto& f : naive_epimorphisms(p3, p2))
    CHECK(is_epimorphism(f, p3, p2));
  CHECK(enumerate_epimorphisms(p3, p2).size() == 6);
}

TEST_CASE("signature and size mismatches are rejected") {
  auto p3 = path_structure(3);
  auto e3 = empty_signature_structure(3);
  CHECK_THROWS_AS(is_epimorphism(SurjectiveMap::identity(3), p3, e3), Error);
  CHECK_THROWS_AS(is_epimorphism(SurjectiveMap::identity(2), p3, p3), Error);
}

TEST_CASE("optimized enumeration equals the naive filter on the corpus") {
  auto structures = corpus();
  for (const auto& a : structures) {
    for (const auto& b : structures) {
      if (a.sig != b.sig || b.size > a.size || a.size > 4) continue;
      CHECK(enumerate_epimorphisms(a, b) == naive_epimorphisms(a, b));
    }
  }
}

TEST_CASE("onto a point there is at most one epimorphism") {
  auto p4 = path_structure(4), p1 = path_structure(1);
  auto epis = enumerate_epimorphisms(p4, p1);
  REQUIRE(epis.size() == 1);
  CHECK(epis[0].table == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("path automorphisms are the identity and the end swap") {
  auto p3 = path_structure(3);
  auto group = automorphism_group(p3);
  REQUIRE(group.size() == 2);
  CHECK(group[0].map().table == std::vector<int>{0, 1, 2});
  CHECK(group[1].map().table == std::vector<int>{2, 1, 0});
}

TEST_CASE("the 4-cycle has the dihedral automorphism group of order 8") {
  CHECK(automorphism_group(cycle_structure(4)).size() == 8);
}

TEST_CASE("with no constraints the automorphisms are all permutations") {
  CHECK(automorphism_group(empty_signature_structure(3)).size() == 6);
  CHECK(automorphism_group(empty_signature_structure(4)).size() == 24);
}

TEST_CASE("automorphism groups satisfy the group axioms") {
  for (const auto& s : corpus()) {
    if (s.size > 4) continue;
    auto group = automorphism_group(s);
    std::set<std::vector<int>> tables;
    for (const auto& e : group) tables.insert(e.map().table);
    CHECK(tables.count(SurjectiveMap::identity(s.size).table));
    for (const auto& e : group) {
      CHECK(tables.count(e.map().inverse().table));
      for (const auto& f : group)
        CHECK(tables.count(compose(e.map(), f.map()).table));
    }
  }
}

TEST_CASE("find_isomorphism distinguishes the 3-path from the 3-cycle") {
  CHECK_FALSE(find_isomorphism(path_structure(3), cycle_structure(3)));
}

TEST_CASE("find_isomorphism inverts cleanly on a relabeled path") {
  auto p3 = path_structure(3);
  auto moved = relabel(p3, {1, 2, 0});
  auto iso = find_isomorphism(p3, moved);
  REQUIRE(iso);
  CHECK(is_epimorphism(iso->map().inverse(), moved, p3));
  auto self = find_isomorphism(p3, p3);
  REQUIRE(self);
  CHECK(self->map().table == SurjectiveMap::identity(3).table);
}

TEST_CASE("induced structure: identity and a path collapse") {
  auto p3 = path_structure(3);
  CHECK(induced_structure(p3, SurjectiveMap::identity(3)) == p3);
  SurjectiveMap fold{3, 2, {0, 0, 1}};
  CHECK(induced_structure(p3, fold) == path_structure(2));
}

TEST_CASE("induced structure pulls dual interpretations back exactly") {
  FiniteStructure k;
  k.sig.symbols.push_back({"P", 2, SymbolKind::Dual});
  k.size = 4;
  k.interp.resize(1);
  for (const auto& t : enumerate_surjective_labelings(4, 2)) k.interp[0].insert(t);
  REQUIRE(k.interp[0].size() == 14);
  for (const auto& table : enumerate_surjective_labelings(4, 2)) {
    SurjectiveMap f{4, 2, table};
    auto target = induced_structure(k, f);
    for (const auto& beta : enumerate_surjective_labelings(2, 2)) {
      bool expected = k.interp[0].count(pull_labeling(beta, f)) > 0;
      CHECK(expected == (target.interp[0].count(beta) > 0));
    }
    CHECK(is_epimorphism(f, k, target));
  }
}

TEST_CASE("induced structure is the unique one making the map an epimorphism") {
  auto p4 = path_structure(4);
  SurjectiveMap f{4, 3, {0, 0, 1, 2}};
  auto target = induced_structure(p4, f);
  REQUIRE(is_epimorphism(f, p4, target));
  // flipping any single off-diagonal pair breaks the epimorphism
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      auto mutant = target;
      Tuple t{a, b};
      if (mutant.interp[0].count(t))
        mutant.interp[0].erase(t);
      else
        mutant.interp[0].insert(t);
      CHECK_FALSE(is_epimorphism(f, p4, mutant));
    }
  }
}

TEST_CASE("epimorphisms compose on the corpus") {
  auto structures = corpus();
  for (const auto& a : structures) {
    if (a.size > 4) continue;
    for (const auto& b : structures) {
      if (b.sig != a.sig || b.size > a.size || b.size < 2) continue;
      for (const auto& c : structures) {
        if (c.sig != a.sig || c.size > b.size) continue;
        auto ab = enumerate_epimorphisms(a, b);
        auto bc = enumerate_epimorphisms(b, c);
        for (const auto& f : ab)
          for (const auto& g : bc)
            CHECK(is_epimorphism(compose(g, f), a, c));
      }
    }
  }
}

TEST_CASE("common refinement of a map with itself reproduces the target") {
  auto p4 = path_structure(4);
  SurjectiveMap fm{4, 2, {0, 0, 1, 1}};
  auto a = induced_structure(p4, fm);
  auto f = make_epimorphism(fm, p4, a);
  auto ref = common_refinement(p4, f, f);
  CHECK(ref.refined == a);
  CHECK(ref.h.map() == fm);
  CHECK(ref.refined.size == 2);
}

TEST_CASE("transverse fibers refine into singleton blocks") {
  auto k = empty_signature_structure(4);
  SurjectiveMap fm{4, 2, {0, 0, 1, 1}};
  SurjectiveMap gm{4, 2, {0, 1, 0, 1}};
  auto f = make_epimorphism(fm, k, induced_structure(k, fm));
  auto g = make_epimorphism(gm, k, induced_structure(k, gm));
  auto ref = common_refinement(k, f, g);
  CHECK(ref.refined.size == 4);
  CHECK(ref.h.map().bijective());
  CHECK(compose(ref.factor_f.map(), ref.h.map()) == fm);
  CHECK(compose(ref.factor_g.map(), ref.h.map()) == gm);
}

TEST_CASE("refinement block count is bounded by the fiber product") {
  SplitMix64 rng{7};
  for (int trial = 0; trial < 40; ++trial) {
    int size = 2 + static_cast<int>(rng.below(5));
    auto k = random_structure(rng, size, trial % 2 == 0);
    auto fm = random_surjection(rng, size, 1 + static_cast<int>(rng.below(size)));
    auto gm = random_surjection(rng, size, 1 + static_cast<int>(rng.below(size)));
    auto f = make_epimorphism(fm, k, induced_structure(k, fm));
    auto g = make_epimorphism(gm, k, induced_structure(k, gm));
    auto ref = common_refinement(k, f, g);
    CHECK(compose(ref.factor_f.map(), ref.h.map()) == fm);
    CHECK(compose(ref.factor_g.map(), ref.h.map()) == gm);
    CHECK(ref.refined.size <= fm.target_size * gm.target_size);
  }
}

TEST_CASE("constrained search respects the allowed sets") {
  auto p4 = path_structure(4), p2 = path_structure(2);
  AllowedSets allow(4);
  allow[0] = {0};
  allow[1] = {0, 1};
  allow[2] = {0, 1};
  allow[3] = {1};
  for (const auto& f : enumerate_epimorphisms(p4, p2, allow)) {
    CHECK(f.table[0] == 0);
    CHECK(f.table[3] == 1);
  }
  auto first = find_epimorphism(p4, p2, allow);
  REQUIRE(first);
  CHECK(*first == enumerate_epimorphisms(p4, p2, allow).front());
}
