#pragma once

// Finite relational structures with direct and dual semantics.
//
// A structure lives on the domain {0..size-1}. A direct symbol of arity n is
// interpreted by a set of injective n-tuples of domain points. A dual symbol
// of arity n is interpreted by a set of surjective labelings domain -> {0..n-1}
// (equivalently: ordered partitions of the domain into n nonempty blocks).
//
// The reserved binary symbol "r" is direct, always symmetric, and its diagonal
// is implicit: (a,a) is never stored, and every operation that reasons about
// r (transitivity, quotients) treats the diagonal as present.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraisse {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text; `line` is 1-based, 0 when unknown.
struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& msg)
      : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// A witness search ran out of room before reaching a verdict.
struct BoundedSearchError : Error {
  explicit BoundedSearchError(const std::string& msg) : Error(msg) {}
};

enum class SymbolKind { Direct, Dual };

struct SymbolDecl {
  std::string name;
  int arity = 1;
  SymbolKind kind = SymbolKind::Direct;

  friend auto operator<=>(const SymbolDecl&, const SymbolDecl&) = default;
};

inline constexpr const char* kReservedSymbol = "r";

struct Signature {
  std::vector<SymbolDecl> symbols;
  bool r_reserved = false;

  std::optional<int> index_of(const std::string& name) const;
  // Index of the reserved symbol; requires r_reserved.
  int reserved_index() const;

  friend auto operator<=>(const Signature&, const Signature&) = default;
};

// Entry list of a direct tuple, or full labeling of a dual tuple.
using Tuple = std::vector<int>;
using Interp = std::set<Tuple>;

bool is_injective_tuple(const Tuple& t);
bool is_surjective_labeling(const Tuple& labeling, int arity);

struct FiniteStructure {
  Signature sig;
  int size = 1;
  std::vector<Interp> interp;  // parallel to sig.symbols

  const Interp& interp_of(const std::string& name) const;

  friend auto operator<=>(const FiniteStructure&, const FiniteStructure&) = default;
};

// Total surjection {0..source_size-1} -> {0..target_size-1}.
struct SurjectiveMap {
  int source_size = 0;
  int target_size = 0;
  std::vector<int> table;

  int operator()(int i) const { return table.at(i); }
  bool surjective() const;
  bool bijective() const { return source_size == target_size && surjective(); }

  static SurjectiveMap identity(int n);
  SurjectiveMap inverse() const;  // requires bijective()

  friend auto operator<=>(const SurjectiveMap&, const SurjectiveMap&) = default;
};

// outer(inner(x)); requires inner.target_size == outer.source_size.
SurjectiveMap compose(const SurjectiveMap& outer, const SurjectiveMap& inner);

// Entry-wise image f(t[0]), f(t[1]), ... of a direct tuple.
Tuple apply_to_tuple(const SurjectiveMap& f, const Tuple& t);

// Pullback labeling o f of a dual tuple along f.
Tuple pull_labeling(const Tuple& labeling, const SurjectiveMap& f);

struct Violation {
  std::string symbol;  // empty for structure-level problems
  std::string message;
};

// Empty result iff every type invariant holds. Violations are data, not errors.
std::vector<Violation> validate_structure(const FiniteStructure& s);

void require_valid(const FiniteStructure& s);  // throws Error listing violations

// The isomorphic copy of s obtained under the domain bijection perm
// (point i becomes perm[i]). Dual labelings move by precomposition with
// the inverse, so the result is isomorphic to s by construction.
FiniteStructure relabel(const FiniteStructure& s, const std::vector<int>& perm);

inline constexpr int kDefaultCanonicalBound = 10;

// Minimum of relabel(s, perm) over all domain bijections, so two structures
// have equal canonical forms iff they are isomorphic. Brute force; refuses
// domains larger than `bound`.
FiniteStructure canonical_form(const FiniteStructure& s, int bound = kDefaultCanonicalBound);

// Text format, round-trips bit-exactly after canonical field ordering.
// See the repository README for the grammar.
FiniteStructure parse_structure(const std::string& text);
std::string serialize_structure(const FiniteStructure& s);

FiniteStructure read_structure_file(const std::string& path);
void write_structure_file(const FiniteStructure& s, const std::string& path);

// All surjective labelings {0..points-1} -> {0..labels-1} in lexicographic
// order; empty when labels > points. Doubles as the list of surjection
// tables points -> labels.
std::vector<Tuple> enumerate_surjective_labelings(int points, int labels);

// All injective tuples of the given arity over {0..points-1}, lexicographic.
std::vector<Tuple> enumerate_injective_tuples(int points, int arity);

// Common building blocks used by tests, fixtures and the demo systems.
Signature reserved_r_signature();
FiniteStructure path_structure(int n);   // r-edges between consecutive points
FiniteStructure cycle_structure(int n);  // r-edges around a cycle, n >= 3
FiniteStructure empty_signature_structure(int n);

}  // namespace fraisse
