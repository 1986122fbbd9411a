#pragma once

// Two structure transformations with exact automorphism accounting:
//
//  * dualize: encodes a direct symbol s of arity n by dual symbols R_s_f, one
//    per surjection f: n -> k (0 < k <= n), of arity k+1. A labeling with
//    blocks D_0..D_k satisfies R_s_f iff some s-tuple puts its i-th entry in
//    D_{f(i)} for every i; the last block is slack. On domains with more than
//    n points this loses nothing: the automorphism set is unchanged.
//
//  * orbit_structure: the purely dual structure whose symbols are the orbits
//    of a permutation group acting on surjective labelings by e -> e o g^-1;
//    at full arity its automorphism set is exactly the group.

#include <string>
#include <vector>

#include "fraisse/epi.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

struct PermutationGroup {
  int degree = 0;
  std::vector<std::vector<int>> elements;  // image lists, identity included

  // Validates closure under composition and inverse.
  static PermutationGroup make(int degree, std::vector<std::vector<int>> elements);
  // Closure of the generators.
  static PermutationGroup generate(int degree, const std::vector<std::vector<int>>& gens);

  bool contains(const std::vector<int>& perm) const;
};

// Group file: `degree <n>`, then image lists one per line (must be closed),
// or a `generators` line followed by generator image lists.
PermutationGroup load_group(const std::string& path);
PermutationGroup parse_group(const std::string& text);

// Symbol name for the encoding of s under the surjection f: R_<s>_<k>_<digits>.
std::string dualized_symbol_name(const std::string& s, const Tuple& f);

FiniteStructure dualize(const FiniteStructure& m, const std::string& symbol);

struct DualizationReport {
  bool groups_equal = false;
  long group_size_before = 0;
  long group_size_after = 0;
};

// Compares the automorphism sets of m and dualize(m, symbol) element-wise.
DualizationReport verify_dualization(const FiniteStructure& m, const std::string& symbol);

// Purely dual structure on {0..degree-1} with one symbol O_<arity>_<index>
// per orbit, arities 2..max_arity, orbits indexed by lexicographically least
// member. With max_arity below the degree the automorphism set may strictly
// contain the group; such runs are inexact by construction.
FiniteStructure orbit_structure(const PermutationGroup& g, int max_arity);

struct OrbitReport {
  bool exact = false;          // automorphism set equals the group
  bool full_arity = false;     // max_arity == degree
  long group_size = 0;
  long automorphism_count = 0;
  std::vector<long> orbits_per_arity;  // index 0 <-> arity 2
};

OrbitReport verify_orbit_structure(const PermutationGroup& g, int max_arity);

struct HomogeneityReport {
  bool holds = false;
  long surjections_checked = 0;
  long structure_classes = 0;  // buckets of equal induced structure
  std::string violation;       // first offending pair, empty when holds
};

// For every pair of surjections from the domain inducing the same structure
// on the orbit structure at full arity, some group element carries one to
// the other.
HomogeneityReport verify_orbit_homogeneity(const PermutationGroup& g);

}  // namespace fraisse
