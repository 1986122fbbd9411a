#pragma once

// Epimorphism calculus over finite structures.
//
// A surjection f : A -> B is an epimorphism when, for every direct symbol,
// the injective images of the source tuples are exactly the target tuples,
// and, for every dual symbol, a target labeling belongs to the interpretation
// iff its pullback along f does.

#include <memory>
#include <optional>
#include <vector>

#include "fraisse/structure.hpp"

namespace fraisse {

class Epimorphism {
 public:
  Epimorphism() = default;
  Epimorphism(SurjectiveMap map, std::shared_ptr<const FiniteStructure> source,
              std::shared_ptr<const FiniteStructure> target)
      : map_(std::move(map)), source_(std::move(source)), target_(std::move(target)) {}

  const SurjectiveMap& map() const { return map_; }
  const FiniteStructure& source() const { return *source_; }
  const FiniteStructure& target() const { return *target_; }
  std::shared_ptr<const FiniteStructure> source_ptr() const { return source_; }
  std::shared_ptr<const FiniteStructure> target_ptr() const { return target_; }

 private:
  SurjectiveMap map_;
  std::shared_ptr<const FiniteStructure> source_;
  std::shared_ptr<const FiniteStructure> target_;
};

// Throws unless f is an epimorphism from A to B.
Epimorphism make_epimorphism(const SurjectiveMap& f, const FiniteStructure& A,
                             const FiniteStructure& B);

bool is_epimorphism(const SurjectiveMap& f, const FiniteStructure& A,
                    const FiniteStructure& B);

// Per-point candidate restriction for searches: when nonempty, table[i] must
// be drawn from allowed[i] (each list sorted ascending).
using AllowedSets = std::vector<std::vector<int>>;

// All epimorphisms A -> B in lexicographic order of the map table.
// Backtracking with forward pruning; the naive definitional filter is kept
// as an oracle in the test suite and both must agree everywhere.
std::vector<SurjectiveMap> enumerate_epimorphisms(const FiniteStructure& A,
                                                  const FiniteStructure& B,
                                                  const AllowedSets& allowed = {});

// Lexicographically least epimorphism, or nullopt.
std::optional<SurjectiveMap> find_epimorphism(const FiniteStructure& A,
                                              const FiniteStructure& B,
                                              const AllowedSets& allowed = {});

// The unique structure on the target of f that makes f an epimorphism.
FiniteStructure induced_structure(const FiniteStructure& K, const SurjectiveMap& f);

// Lexicographically least bijective epimorphism, or nullopt.
std::optional<Epimorphism> find_isomorphism(const FiniteStructure& A,
                                            const FiniteStructure& B);

// All bijective epimorphisms A -> A; a group under composition.
std::vector<Epimorphism> automorphism_group(const FiniteStructure& A);

// Common refinement of two epimorphisms from the same source: the domain is
// the nonempty fiber intersections f^-1(a) n g^-1(b), ordered by (a, b), and
// both f and g factor through the block projection exactly.
struct Refinement {
  FiniteStructure refined;
  Epimorphism h;         // K -> refined
  Epimorphism factor_f;  // refined -> A, factor_f o h = f
  Epimorphism factor_g;  // refined -> B, factor_g o h = g
};

Refinement common_refinement(const FiniteStructure& K, const Epimorphism& f,
                             const Epimorphism& g);

}  // namespace fraisse
