#pragma once

// Test-only helpers. The naive epimorphism oracle follows the definition
// letter by letter, independently of the engine's image-set shortcut and of
// the backtracking enumerator, and stays deliberately unoptimized.

#include <string>
#include <vector>

#include "fraisse/epi.hpp"
#include "fraisse/rng.hpp"
#include "fraisse/structure.hpp"

namespace fraisse::testing {

inline std::string fixture(const std::string& name) {
  return std::string(FRAISSE_FIXTURE_DIR) + "/" + name;
}

inline bool naive_is_epimorphism(const SurjectiveMap& f, const FiniteStructure& a,
                                 const FiniteStructure& b) {
  if (!f.surjective()) return false;
  for (std::size_t k = 0; k < a.sig.symbols.size(); ++k) {
    const auto& decl = a.sig.symbols[k];
    if (decl.kind == SymbolKind::Direct) {
      for (const auto& beta : enumerate_injective_tuples(b.size, decl.arity)) {
        bool in_target = b.interp[k].count(beta) > 0;
        bool has_preimage = false;
        for (const auto& alpha : a.interp[k])
          if (apply_to_tuple(f, alpha) == beta) {
            has_preimage = true;
            break;
          }
        if (in_target != has_preimage) return false;
      }
    } else {
      for (const auto& beta : enumerate_surjective_labelings(b.size, decl.arity)) {
        bool in_target = b.interp[k].count(beta) > 0;
        bool pulled = a.interp[k].count(pull_labeling(beta, f)) > 0;
        if (in_target != pulled) return false;
      }
    }
  }
  return true;
}

// Every map table A -> B, filtered by surjectivity and the naive check,
// in lexicographic order.
inline std::vector<SurjectiveMap> naive_epimorphisms(const FiniteStructure& a,
                                                     const FiniteStructure& b) {
  std::vector<SurjectiveMap> out;
  std::vector<int> table(a.size, 0);
  while (true) {
    SurjectiveMap f{a.size, b.size, table};
    if (f.surjective() && naive_is_epimorphism(f, a, b)) out.push_back(f);
    int pos = a.size - 1;
    while (pos >= 0 && table[pos] == b.size - 1) table[pos--] = 0;
    if (pos < 0) break;
    ++table[pos];
  }
  return out;
}

// Fills a structure over the given signature, keeping each candidate tuple
// with probability ~1/3; the reserved symbol is symmetrized.
inline FiniteStructure random_fill(SplitMix64& rng, const Signature& sig, int size) {
  FiniteStructure s;
  s.sig = sig;
  s.size = size;
  s.interp.resize(sig.symbols.size());
  for (std::size_t k = 0; k < sig.symbols.size(); ++k) {
    const auto& d = sig.symbols[k];
    if (sig.r_reserved && d.name == kReservedSymbol) {
      for (int i = 0; i < size; ++i)
        for (int j = i + 1; j < size; ++j)
          if (rng.below(3) == 0) {
            s.interp[k].insert({i, j});
            s.interp[k].insert({j, i});
          }
    } else if (d.kind == SymbolKind::Direct) {
      for (const auto& t : enumerate_injective_tuples(size, d.arity))
        if (rng.below(3) == 0) s.interp[k].insert(t);
    } else {
      for (const auto& t : enumerate_surjective_labelings(size, d.arity))
        if (rng.below(3) == 0) s.interp[k].insert(t);
    }
  }
  return s;
}

// Seeded random signature with up to two symbols of small arity.
inline Signature random_signature(SplitMix64& rng) {
  Signature sig;
  int symbols = 1 + static_cast<int>(rng.below(2));
  for (int k = 0; k < symbols; ++k) {
    bool direct = rng.below(2) == 0;
    int arity = 1 + static_cast<int>(rng.below(3));
    sig.symbols.push_back({std::string(1, direct ? 'p' : 'P') + std::to_string(k),
                           arity, direct ? SymbolKind::Direct : SymbolKind::Dual});
  }
  return sig;
}

inline FiniteStructure random_structure(SplitMix64& rng, int size, bool with_reserved) {
  return random_fill(rng, with_reserved ? reserved_r_signature() : random_signature(rng),
                     size);
}

// Seeded random surjection onto a target of the given size.
inline SurjectiveMap random_surjection(SplitMix64& rng, int source, int target) {
  while (true) {
    std::vector<int> table(source);
    for (auto& v : table) v = static_cast<int>(rng.below(target));
    SurjectiveMap f{source, target, table};
    if (f.surjective()) return f;
  }
}

// A fixed mix of small structures exercising both kinds of symbols.
inline std::vector<FiniteStructure> corpus() {
  std::vector<FiniteStructure> out;
  for (int n = 1; n <= 3; ++n) out.push_back(empty_signature_structure(n));
  for (int n = 1; n <= 4; ++n) out.push_back(path_structure(n));
  out.push_back(cycle_structure(3));
  out.push_back(cycle_structure(4));
  SplitMix64 rng{20250810};
  for (int size = 2; size <= 4; ++size)
    for (int i = 0; i < 3; ++i) out.push_back(random_structure(rng, size, false));
  return out;
}

}  // namespace fraisse::testing
