#include "fraisse/epi.hpp"

#include <algorithm>

namespace fraisse {

namespace {

void check_compatible(const FiniteStructure& A, const FiniteStructure& B) {
  if (A.sig != B.sig) throw Error("structures have different signatures");
}

void check_sizes(const SurjectiveMap& f, const FiniteStructure& A,
                 const FiniteStructure& B) {
  if (f.source_size != A.size || f.target_size != B.size)
    throw Error("map sizes do not match the structures");
}

}  // namespace

bool is_epimorphism(const SurjectiveMap& f, const FiniteStructure& A,
                    const FiniteStructure& B) {
  check_compatible(A, B);
  check_sizes(f, A, B);
  if (!f.surjective()) return false;

  for (std::size_t k = 0; k < A.sig.symbols.size(); ++k) {
    const auto& decl = A.sig.symbols[k];
    if (decl.kind == SymbolKind::Direct) {
      Interp image;
      for (const auto& alpha : A.interp[k]) {
        Tuple beta = apply_to_tuple(f, alpha);
        if (is_injective_tuple(beta)) image.insert(std::move(beta));
      }
      if (image != B.interp[k]) return false;
    } else {
      for (const auto& beta : enumerate_surjective_labelings(B.size, decl.arity)) {
        const bool in_target = B.interp[k].count(beta) > 0;
        const bool pulled = A.interp[k].count(pull_labeling(beta, f)) > 0;
        if (in_target != pulled) return false;
      }
    }
  }
  return true;
}

Epimorphism make_epimorphism(const SurjectiveMap& f, const FiniteStructure& A,
                             const FiniteStructure& B) {
  if (!is_epimorphism(f, A, B)) throw Error("map is not an epimorphism");
  return Epimorphism(f, std::make_shared<FiniteStructure>(A),
                     std::make_shared<FiniteStructure>(B));
}

namespace {

// Shared state of the backtracking search over partial map tables.
struct Search {
  const FiniteStructure& A;
  const FiniteStructure& B;
  const AllowedSets& allowed;
  bool first_only = false;

  std::vector<int> table;          // -1 for unassigned
  std::vector<int> uses;           // per target value
  int unused_targets = 0;
  std::vector<SurjectiveMap> out;

  // direct tuples grouped by the largest source index they mention, so each
  // can be checked exactly once, at the step that completes it
  struct PendingTuple {
    int symbol;
    const Tuple* tuple;
  };
  std::vector<std::vector<PendingTuple>> complete_at;

  Search(const FiniteStructure& a, const FiniteStructure& b, const AllowedSets& al)
      : A(a), B(b), allowed(al), table(a.size, -1), uses(b.size, 0),
        unused_targets(b.size), complete_at(a.size) {
    for (std::size_t k = 0; k < A.sig.symbols.size(); ++k) {
      if (A.sig.symbols[k].kind != SymbolKind::Direct) continue;
      for (const auto& t : A.interp[k]) {
        int last = *std::max_element(t.begin(), t.end());
        complete_at[last].push_back({static_cast<int>(k), &t});
      }
    }
  }

  bool direct_ok(int pos) const {
    for (const auto& p : complete_at[pos]) {
      Tuple image;
      image.reserve(p.tuple->size());
      for (int v : *p.tuple) image.push_back(table[v]);
      if (is_injective_tuple(image) && !B.interp[p.symbol].count(image)) return false;
    }
    return true;
  }

  // For every labeling required in the target, some source labeling must
  // still be able to realize its pullback on the assigned prefix.
  bool dual_feasible(int assigned_upto) const {
    for (std::size_t k = 0; k < A.sig.symbols.size(); ++k) {
      const auto& decl = A.sig.symbols[k];
      if (decl.kind != SymbolKind::Dual) continue;
      if (A.interp[k].size() > 64) continue;  // scan cost outweighs the cut
      for (const auto& beta : B.interp[k]) {
        if (static_cast<int>(beta.size()) != B.size) continue;
        bool feasible = false;
        for (const auto& e : A.interp[k]) {
          bool agrees = true;
          for (int x = 0; x <= assigned_upto && agrees; ++x)
            agrees = e[x] == beta[table[x]];
          if (agrees) {
            feasible = true;
            break;
          }
        }
        if (!feasible) return false;
      }
    }
    return true;
  }

  bool run(int pos) {
    if (pos == A.size) {
      SurjectiveMap f{A.size, B.size, table};
      if (is_epimorphism(f, A, B)) {
        out.push_back(std::move(f));
        return first_only;
      }
      return false;
    }
    const int remaining = A.size - pos;
    for (int v = 0; v < B.size; ++v) {
      if (!allowed.empty()) {
        const auto& cand = allowed[pos];
        if (!std::binary_search(cand.begin(), cand.end(), v)) continue;
      }
      table[pos] = v;
      ++uses[v];
      if (uses[v] == 1) --unused_targets;
      if (unused_targets <= remaining - 1 && direct_ok(pos) && dual_feasible(pos)) {
        if (run(pos + 1)) return true;
      }
      if (uses[v] == 1) ++unused_targets;
      --uses[v];
      table[pos] = -1;
    }
    return false;
  }
};

}  // namespace

std::vector<SurjectiveMap> enumerate_epimorphisms(const FiniteStructure& A,
                                                  const FiniteStructure& B,
                                                  const AllowedSets& allowed) {
  check_compatible(A, B);
  if (!allowed.empty() && static_cast<int>(allowed.size()) != A.size)
    throw Error("allowed sets must cover the whole source domain");
  if (B.size > A.size) return {};
  Search search(A, B, allowed);
  search.run(0);
  return std::move(search.out);
}

std::optional<SurjectiveMap> find_epimorphism(const FiniteStructure& A,
                                              const FiniteStructure& B,
                                              const AllowedSets& allowed) {
  check_compatible(A, B);
  if (!allowed.empty() && static_cast<int>(allowed.size()) != A.size)
    throw Error("allowed sets must cover the whole source domain");
  if (B.size > A.size) return std::nullopt;
  Search search(A, B, allowed);
  search.first_only = true;
  search.run(0);
  if (search.out.empty()) return std::nullopt;
  return search.out.front();
}

FiniteStructure induced_structure(const FiniteStructure& K, const SurjectiveMap& f) {
  if (f.source_size != K.size) throw Error("map source does not match the structure");
  if (!f.surjective()) throw Error("induced_structure needs a surjective map");

  FiniteStructure out;
  out.sig = K.sig;
  out.size = f.target_size;
  out.interp.resize(K.interp.size());
  for (std::size_t k = 0; k < K.sig.symbols.size(); ++k) {
    const auto& decl = K.sig.symbols[k];
    if (decl.kind == SymbolKind::Direct) {
      for (const auto& alpha : K.interp[k]) {
        Tuple beta = apply_to_tuple(f, alpha);
        if (is_injective_tuple(beta)) out.interp[k].insert(std::move(beta));
      }
    } else {
      for (const auto& beta : enumerate_surjective_labelings(out.size, decl.arity))
        if (K.interp[k].count(pull_labeling(beta, f))) out.interp[k].insert(beta);
    }
  }
  return out;
}

std::optional<Epimorphism> find_isomorphism(const FiniteStructure& A,
                                            const FiniteStructure& B) {
  check_compatible(A, B);
  if (A.size != B.size) return std::nullopt;
  auto f = find_epimorphism(A, B);
  if (!f) return std::nullopt;
  return make_epimorphism(*f, A, B);
}

std::vector<Epimorphism> automorphism_group(const FiniteStructure& A) {
  auto shared = std::make_shared<FiniteStructure>(A);
  std::vector<Epimorphism> out;
  for (auto& f : enumerate_epimorphisms(A, A))
    out.emplace_back(std::move(f), shared, shared);
  return out;
}

Refinement common_refinement(const FiniteStructure& K, const Epimorphism& f,
                             const Epimorphism& g) {
  if (f.source() != K || g.source() != K)
    throw Error("common_refinement: maps must share the source K");

  const int na = f.map().target_size;
  const int nb = g.map().target_size;

  // blocks are the nonempty fiber intersections, ordered by (a, b)
  std::map<std::pair<int, int>, int> block_index;
  std::vector<int> proj(K.size, -1);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b)
      for (int x = 0; x < K.size; ++x)
        if (f.map()(x) == a && g.map()(x) == b && !block_index.count({a, b}))
          block_index.insert({{a, b}, static_cast<int>(block_index.size())});
  for (int x = 0; x < K.size; ++x)
    proj[x] = block_index.at({f.map()(x), g.map()(x)});

  SurjectiveMap h{K.size, static_cast<int>(block_index.size()), proj};
  FiniteStructure refined = induced_structure(K, h);

  SurjectiveMap to_a{h.target_size, na, std::vector<int>(block_index.size())};
  SurjectiveMap to_b{h.target_size, nb, std::vector<int>(block_index.size())};
  for (const auto& [key, idx] : block_index) {
    to_a.table[idx] = key.first;
    to_b.table[idx] = key.second;
  }

  Refinement out;
  auto shared_k = std::make_shared<FiniteStructure>(K);
  auto shared_r = std::make_shared<FiniteStructure>(refined);
  out.refined = refined;
  out.h = Epimorphism(h, shared_k, shared_r);
  out.factor_f = Epimorphism(to_a, shared_r, f.target_ptr());
  out.factor_g = Epimorphism(to_b, shared_r, g.target_ptr());

  // the factor maps are epimorphisms whenever f and g are; re-check to fail
  // loudly on malformed inputs
  if (!is_epimorphism(to_a, refined, f.target()) ||
      !is_epimorphism(to_b, refined, g.target()))
    throw Error("common_refinement: inputs were not epimorphisms");
  if (compose(to_a, h) != f.map() || compose(to_b, h) != g.map())
    throw Error("common_refinement: factoring equalities failed");
  return out;
}

}  // namespace fraisse
