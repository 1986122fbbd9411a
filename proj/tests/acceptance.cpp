// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances and corpus sizes in code.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "fraisse/cli.hpp"
#include "fraisse/epi.hpp"
#include "fraisse/fraisse_class.hpp"
#include "fraisse/limit.hpp"
#include "fraisse/prespace.hpp"
#include "fraisse/report.hpp"
#include "fraisse/rng.hpp"
#include "fraisse/structure.hpp"
#include "fraisse/transforms.hpp"
#include "support.hpp"

using namespace fraisse;
using namespace fraisse::testing;

namespace {

struct Criterion {
  std::string name;
  double limit_seconds;  // 0 = no limit
  std::function<bool(std::string&)> run;
};

bool maps_equal(const std::vector<SurjectiveMap>& a, const std::vector<SurjectiveMap>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].table != b[i].table) return false;
  return true;
}

// ---------------------------------------------------------------------------
// 1. optimized enumeration == naive definitional filter
// ---------------------------------------------------------------------------
bool criterion_epi_oracle(std::string& detail) {
  long pairs = 0;
  SplitMix64 rng{0xACCE11ull};
  for (int trial = 0; trial < 200; ++trial) {
    int size_a = 1 + static_cast<int>(rng.below(4));   // <= 4
    int size_b = 1 + static_cast<int>(rng.below(3));   // <= 3
    Signature sig = trial % 3 == 0 ? reserved_r_signature() : random_signature(rng);
    auto a = random_fill(rng, sig, size_a);
    auto b = random_fill(rng, sig, size_b);
    ++pairs;
    if (!maps_equal(enumerate_epimorphisms(a, b), naive_epimorphisms(a, b))) {
      detail = "disagreement on random pair " + std::to_string(trial);
      return false;
    }
  }
  // all bundled fixtures against each other (shared signatures only)
  std::vector<FiniteStructure> fixtures;
  for (const char* name : {"path01.struct", "path02.struct", "path03.struct",
                           "path04.struct", "cycle3.struct", "cycle4.struct",
                           "empty2.struct", "empty3.struct", "dualfull4.struct",
                           "prespace3.struct"})
    fixtures.push_back(read_structure_file(fixture(name)));
  for (const auto& a : fixtures) {
    for (const auto& b : fixtures) {
      if (a.sig != b.sig || a.size > 4 || b.size > 3) continue;
      ++pairs;
      if (!maps_equal(enumerate_epimorphisms(a, b), naive_epimorphisms(a, b))) {
        detail = "disagreement on a bundled fixture pair";
        return false;
      }
    }
  }
  detail = std::to_string(pairs) + " pairs agreed";
  return pairs >= 200;
}

// ---------------------------------------------------------------------------
// 2. factoring through the common refinement, exactly
// ---------------------------------------------------------------------------
bool criterion_factoring(std::string& detail) {
  SplitMix64 rng{0xFAC704ull};
  for (int trial = 0; trial < 100; ++trial) {
    int size = 2 + static_cast<int>(rng.below(5));  // <= 6
    auto k = random_structure(rng, size, trial % 2 == 0);
    auto fm = random_surjection(rng, size, 1 + static_cast<int>(rng.below(size)));
    auto gm = random_surjection(rng, size, 1 + static_cast<int>(rng.below(size)));
    auto f = make_epimorphism(fm, k, induced_structure(k, fm));
    auto g = make_epimorphism(gm, k, induced_structure(k, gm));
    auto ref = common_refinement(k, f, g);
    if (compose(ref.factor_f.map(), ref.h.map()) != fm ||
        compose(ref.factor_g.map(), ref.h.map()) != gm) {
      detail = "factoring equality failed on trial " + std::to_string(trial);
      return false;
    }
    if (ref.refined.size > fm.target_size * gm.target_size) {
      detail = "block bound violated on trial " + std::to_string(trial);
      return false;
    }
  }
  detail = "100 random triples factored exactly";
  return true;
}

// ---------------------------------------------------------------------------
// 3. orbit structures recover every subgroup exactly
// ---------------------------------------------------------------------------
std::vector<PermutationGroup> all_subgroups(int degree) {
  std::vector<int> identity(degree);
  for (int i = 0; i < degree; ++i) identity[i] = i;
  auto full = PermutationGroup::generate(
      degree, {[&] {
                 std::vector<int> t(identity);
                 std::swap(t[0], t[1]);
                 return t;
               }(),
               [&] {
                 std::vector<int> c(degree);
                 for (int i = 0; i < degree; ++i) c[i] = (i + 1) % degree;
                 return c;
               }()});
  std::set<std::vector<std::vector<int>>> seen;
  std::vector<PermutationGroup> out;
  std::vector<std::vector<std::vector<int>>> frontier;
  auto trivial = PermutationGroup::make(degree, {identity});
  seen.insert(trivial.elements);
  out.push_back(trivial);
  frontier.push_back(trivial.elements);
  while (!frontier.empty()) {
    std::vector<std::vector<std::vector<int>>> next;
    for (const auto& base : frontier) {
      for (const auto& g : full.elements) {
        auto gens = base;
        gens.push_back(g);
        auto grown = PermutationGroup::generate(degree, gens);
        if (seen.insert(grown.elements).second) {
          out.push_back(grown);
          next.push_back(grown.elements);
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

bool criterion_orbit_exactness(std::string& detail) {
  auto subgroups4 = all_subgroups(4);
  if (subgroups4.size() != 30) {
    detail = "expected 30 subgroups of the symmetric group on 4 points, got " +
             std::to_string(subgroups4.size());
    return false;
  }
  long checked = 0;
  for (const auto& g : subgroups4) {
    auto orbit = verify_orbit_structure(g, 4);
    auto hom = verify_orbit_homogeneity(g);
    if (!orbit.exact || !hom.holds) {
      detail = "failure on a subgroup of order " + std::to_string(g.elements.size());
      return false;
    }
    ++checked;
  }
  // five named subgroups on 5 points
  std::vector<std::vector<std::vector<int>>> gens5 = {
      {},                                          // trivial
      {{1, 0, 2, 3, 4}},                           // order 2
      {{1, 2, 3, 4, 0}},                           // cyclic of order 5
      {{1, 2, 3, 4, 0}, {4, 3, 2, 1, 0}},          // dihedral of order 10
      {{1, 2, 3, 4, 0}, {1, 0, 2, 3, 4}},          // full symmetric group
      {{1, 2, 0, 3, 4}, {0, 1, 2, 4, 3}},          // order 6 product
  };
  for (const auto& gens : gens5) {
    std::vector<int> identity{0, 1, 2, 3, 4};
    auto base = gens;
    base.push_back(identity);
    auto g = PermutationGroup::generate(5, base);
    auto orbit = verify_orbit_structure(g, 5);
    auto hom = verify_orbit_homogeneity(g);
    if (!orbit.exact || !hom.holds) {
      detail = "failure on a degree-5 subgroup of order " +
               std::to_string(g.elements.size());
      return false;
    }
    ++checked;
  }
  detail = std::to_string(checked) + " subgroups recovered exactly";
  return true;
}

// ---------------------------------------------------------------------------
// 4. dualization preserves automorphism sets
// ---------------------------------------------------------------------------
bool criterion_dualization(std::string& detail) {
  SplitMix64 rng{0xD0A1ull};
  int done = 0;
  int guard = 0;
  while (done < 50 && ++guard < 4000) {
    int size = 3 + static_cast<int>(rng.below(3));  // 3..5
    auto m = random_structure(rng, size, false);
    std::string symbol;
    for (const auto& d : m.sig.symbols)
      if (d.kind == SymbolKind::Direct && d.arity <= 3 && d.arity < size) {
        symbol = d.name;
        break;
      }
    if (symbol.empty()) continue;
    if (!verify_dualization(m, symbol).groups_equal) {
      detail = "automorphism set changed for a structure of size " + std::to_string(size);
      return false;
    }
    ++done;
  }
  detail = std::to_string(done) + " structures preserved their automorphisms";
  return done >= 50;
}

// ---------------------------------------------------------------------------
// 5. generic sequences certify and intertwine
// ---------------------------------------------------------------------------
StructureClass bundled_paths() { return load_class(fixture("paths.class")); }

bool criterion_generic_sequences(std::string& detail) {
  auto cls = bundled_paths();
  const int depth = 6, task_bound = 3;
  const std::uint64_t seeds[2] = {20250810ull, 987654321ull};

  InverseSystem systems[2];
  for (int i = 0; i < 2; ++i) {
    systems[i] = build_generic_sequence(cls, depth, task_bound, seeds[i]);
    if (systems[i].depth() != depth) {
      detail = "seed " + std::to_string(seeds[i]) + " stopped early";
      return false;
    }
    if (!validate_system(systems[i]).empty()) {
      detail = "invalid system for seed " + std::to_string(seeds[i]);
      return false;
    }
    auto cert = certify_extension(systems[i], cls, task_bound);
    // tasks anchored at the top two levels have little or no room to stretch
    // and can be legitimately open at finite depth; everything below must be
    // fulfilled
    if (!cert.fulfilled_up_to_anchor(depth - 2)) {
      detail = "unfulfilled task below the top anchors for seed " +
               std::to_string(seeds[i]);
      return false;
    }
    for (const auto& rec : systems[i].log) {
      if (rec.kind != DischargeRecord::Kind::Task) continue;
      SurjectiveMap pulled =
          compose(rec.task.from_level, systems[i].projection(rec.new_level, rec.task.level));
      if (compose(rec.task.onto_a, rec.lift) != pulled) {
        detail = "provenance discharge does not re-verify";
        return false;
      }
    }
  }

  BackAndForthAnchor anchor{cls.members.front(),
                            *find_epimorphism(systems[0].level(1), cls.members.front()),
                            *find_epimorphism(systems[1].level(1), cls.members.front())};
  auto res = back_and_forth(systems[0], systems[1], cls, 5, anchor);
  if (!res.completed) {
    detail = "back and forth stuck: " + res.stuck;
    return false;
  }
  for (std::size_t n = 1; n < res.tower.size(); ++n) {
    auto lhs_f = compose(res.tower_bonds[n - 1], res.from_first[n].map);
    auto rhs_f = compose(res.from_first[n - 1].map,
                         systems[0].projection(res.from_first[n].level,
                                               res.from_first[n - 1].level));
    auto lhs_g = compose(res.tower_bonds[n - 1], res.from_second[n].map);
    auto rhs_g = compose(res.from_second[n - 1].map,
                         systems[1].projection(res.from_second[n].level,
                                               res.from_second[n - 1].level));
    if (lhs_f != rhs_f || lhs_g != rhs_g) {
      detail = "commuting equality failed at step " + std::to_string(n);
      return false;
    }
  }
  detail = "both seeds certified; back and forth completed to depth 5";
  return true;
}

// ---------------------------------------------------------------------------
// 6. interval demo
// ---------------------------------------------------------------------------
bool criterion_interval(std::string& detail) {
  for (int depth = 1; depth <= 7; ++depth) {
    auto sys = build_interval_system(depth);
    for (int n = 1; n <= depth; ++n) {
      if (sys.level(n) != path_structure(1 << n)) {
        detail = "level " + std::to_string(n) + " is not the expected path";
        return false;
      }
    }
    for (std::size_t i = 0; i < sys.bonds.size(); ++i)
      if (!is_epimorphism(sys.bonds[i].map(), sys.levels[i + 1], sys.levels[i])) {
        detail = "bond " + std::to_string(i + 1) + " failed";
        return false;
      }
    auto report = limit_quotient_report(sys, true);
    for (int n = 1; n <= depth; ++n) {
      const auto& stats = report.levels[n - 1];
      std::string mesh = dyadic_text(1, n);
      if (stats.atoms != (1 << n) || stats.edges != (1 << n) - 1 ||
          stats.components != 1 || stats.mesh != mesh) {
        detail = "level stats wrong at depth " + std::to_string(depth);
        return false;
      }
    }
    if (report.max_limit_class > 2) {
      detail = "limit class of size " + std::to_string(report.max_limit_class);
      return false;
    }
    if (report.related_pairs != (1 << depth) - 1) {
      detail = "expected one boundary pair per interior dyadic";
      return false;
    }
  }
  detail = "depths 1..7 exact";
  return true;
}

// ---------------------------------------------------------------------------
// 7. cantor demo
// ---------------------------------------------------------------------------
bool criterion_cantor(std::string& detail) {
  for (int depth = 1; depth <= 7; ++depth) {
    auto sys = build_cantor_system(depth);
    auto report = limit_quotient_report(sys, false);
    for (const auto& stats : report.levels)
      if (stats.edges != 0) {
        detail = "unexpected edge";
        return false;
      }
    if (report.related_pairs != 0 || report.max_limit_class != 1) {
      detail = "limit classes are not singletons";
      return false;
    }
  }
  detail = "depths 1..7 exact";
  return true;
}

// ---------------------------------------------------------------------------
// 8. CLI determinism
// ---------------------------------------------------------------------------
bool criterion_determinism(std::string& detail) {
  std::vector<std::vector<std::string>> invocations = {
      {"validate", fixture("path04.struct")},
      {"epis", fixture("empty3.struct"), fixture("empty2.struct")},
      {"epis", fixture("path04.struct"), fixture("path02.struct")},
      {"induce", fixture("path03.struct"), fixture("fold32.map")},
      {"refine", fixture("path04.struct"), fixture("fold42a.map"), fixture("fold42b.map")},
      {"iso", fixture("path03.struct"), fixture("cycle3.struct")},
      {"aut", fixture("cycle4.struct")},
      {"canon", fixture("cycle4.struct")},
      {"check-class", fixture("paths4.class")},
      {"build-limit", fixture("paths.class"), "--depth", "5", "--task-bound", "3",
       "--seed", "20250810"},
      {"dualize", fixture("path03.struct"), "r"},
      {"orbits", fixture("c4.group")},
      {"verify-orbits", fixture("klein4.group")},
      {"quotient", fixture("prespace3.struct")},
      {"demo-interval", "--depth", "6"},
      {"demo-cantor", "--depth", "6"},
  };
  for (const auto& args : invocations) {
    std::ostringstream out1, err1, out2, err2;
    int c1 = cli::run(args, out1, err1);
    int c2 = cli::run(args, out2, err2);
    if (c1 != c2 || out1.str() != out2.str()) {
      detail = "nondeterministic output from subcommand " + args[0];
      return false;
    }
  }
  detail = std::to_string(invocations.size()) + " invocations byte-identical";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1 epimorphism oracle equivalence", 60.0, criterion_epi_oracle},
      {"2 factoring through refinements", 0.0, criterion_factoring},
      {"3 orbit structure exactness", 300.0, criterion_orbit_exactness},
      {"4 dualization preserves automorphisms", 0.0, criterion_dualization},
      {"5 generic sequence homogeneity shadow", 0.0, criterion_generic_sequences},
      {"6 interval system", 30.0, criterion_interval},
      {"7 cantor system", 0.0, criterion_cantor},
      {"8 cli determinism", 0.0, criterion_determinism},
  };

  int failures = 0;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.limit_seconds > 0 && seconds > c.limit_seconds) {
      ok = false;
      detail += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) +
                " s budget)";
    }
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << " " << c.name << " [" << std::fixed;
    line.precision(2);
    line << seconds << " s] " << detail;
    std::cout << line.str() << "\n";
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
