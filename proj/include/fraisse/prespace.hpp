#pragma once

// The reserved binary symbol r: pre-space checks (symmetry is structural,
// transitivity makes the implicit-diagonal relation an equivalence), the
// quotient by the r-classes, and two concrete inverse systems of r-graphs:
// dyadic interval levels (paths on 2^n atoms, bonds forget the last bit) and
// Cantor levels (edgeless, same bonds).

#include <optional>
#include <string>
#include <vector>

#include "fraisse/limit.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

struct PrespaceReport {
  bool symmetric = false;
  bool transitive = false;
  std::vector<std::vector<int>> classes;  // sorted by least member; only when transitive
  std::string first_failure;              // e.g. the missing transitive pair
};

PrespaceReport check_prespace(const FiniteStructure& s);

struct QuotientResult {
  FiniteStructure quotient;  // reserved symbol dropped from the signature
  SurjectiveMap projection;  // point -> class index
};

// Requires a transitive r; classes become points, all other symbols are
// interpreted by the structure induced along the projection.
QuotientResult quotient_by_reserved(const FiniteStructure& s);

// Level n: one atom per dyadic interval [k/2^n, (k+1)/2^n], r-edges exactly
// between atoms sharing an endpoint; a path on 2^n vertices. Bonds drop the
// last bit. The provenance log records the regular-closed identities behind
// the edge set.
InverseSystem build_interval_system(int depth);

// Level n: 2^n cylinders, no r-edges; bonds drop the last bit.
InverseSystem build_cantor_system(int depth);

struct LevelStats {
  int atoms = 0;
  int edges = 0;          // unordered r-edges
  int components = 0;
  int max_degree = 0;
  std::string mesh;       // exact dyadic, only for dyadic reports
};

struct LimitPair {
  int first_thread = 0;
  int second_thread = 0;
  std::string boundary;  // shared dyadic boundary, only for dyadic reports
};

struct LimitQuotientReport {
  std::vector<LevelStats> levels;
  long threads = 0;
  long related_pairs = 0;   // unordered pairs related at every level
  int max_limit_class = 1;  // largest set of pairwise related threads
  std::vector<LimitPair> pairs;
};

// Per-level connectivity stats plus the relation on threads that are
// r-or-equal at every recorded level. That relation is adjacency at finite
// depth and need not be transitive; limit classes are its maximal sets of
// pairwise related threads.
LimitQuotientReport limit_quotient_report(const InverseSystem& sys, bool dyadic_mesh);

}  // namespace fraisse
