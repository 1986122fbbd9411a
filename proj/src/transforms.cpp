#include "fraisse/transforms.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace fraisse {

namespace {

std::vector<int> compose_perm(const std::vector<int>& outer, const std::vector<int>& inner) {
  std::vector<int> out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

std::vector<int> invert_perm(const std::vector<int>& p) {
  std::vector<int> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
  return out;
}

bool is_permutation(const std::vector<int>& p, int degree) {
  if (static_cast<int>(p.size()) != degree) return false;
  std::vector<bool> hit(degree, false);
  for (int v : p) {
    if (v < 0 || v >= degree || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

}  // namespace

PermutationGroup PermutationGroup::make(int degree, std::vector<std::vector<int>> elements) {
  if (degree < 1) throw Error("group degree must be positive");
  std::set<std::vector<int>> set;
  for (const auto& p : elements) {
    if (!is_permutation(p, degree)) throw Error("element is not a permutation");
    set.insert(p);
  }
  std::vector<int> identity(degree);
  std::iota(identity.begin(), identity.end(), 0);
  if (!set.count(identity)) throw Error("group must contain the identity");
  for (const auto& p : set) {
    if (!set.count(invert_perm(p))) throw Error("group not closed under inverse");
    for (const auto& q : set)
      if (!set.count(compose_perm(p, q))) throw Error("group not closed under composition");
  }
  PermutationGroup g;
  g.degree = degree;
  g.elements.assign(set.begin(), set.end());
  return g;
}

PermutationGroup PermutationGroup::generate(int degree,
                                            const std::vector<std::vector<int>>& gens) {
  if (degree < 1) throw Error("group degree must be positive");
  for (const auto& p : gens)
    if (!is_permutation(p, degree)) throw Error("generator is not a permutation");
  std::vector<int> identity(degree);
  std::iota(identity.begin(), identity.end(), 0);
  std::set<std::vector<int>> closed{identity};
  std::vector<std::vector<int>> frontier{identity};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        auto q = compose_perm(g, p);
        if (closed.insert(q).second) next.push_back(std::move(q));
      }
    frontier = std::move(next);
  }
  PermutationGroup g;
  g.degree = degree;
  g.elements.assign(closed.begin(), closed.end());
  return g;
}

bool PermutationGroup::contains(const std::vector<int>& perm) const {
  return std::binary_search(elements.begin(), elements.end(), perm);
}

PermutationGroup parse_group(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  std::optional<int> degree;
  bool generator_mode = false;
  std::vector<std::vector<int>> perms;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "degree") {
      if (degree) throw ParseError(number, "duplicate degree line");
      int v;
      if (!(ls >> v) || v < 1) throw ParseError(number, "expected 'degree <n>'");
      degree = v;
    } else if (first == "generators") {
      generator_mode = true;
    } else {
      if (!degree) throw ParseError(number, "degree must come first");
      std::vector<int> p;
      try {
        p.push_back(std::stoi(first));
      } catch (const std::exception&) {
        throw ParseError(number, "expected a permutation image list");
      }
      int v;
      while (ls >> v) p.push_back(v);
      if (!is_permutation(p, *degree))
        throw ParseError(number, "line is not a permutation of degree " +
                                     std::to_string(*degree));
      perms.push_back(std::move(p));
    }
  }
  if (!degree) throw Error("group file must declare a degree");
  if (generator_mode) return PermutationGroup::generate(*degree, perms);
  return PermutationGroup::make(*degree, perms);
}

PermutationGroup load_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open group file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_group(buf.str());
}

std::string dualized_symbol_name(const std::string& s, const Tuple& f) {
  const int k = f.empty() ? 0 : *std::max_element(f.begin(), f.end()) + 1;
  std::string name = "R_" + s + "_" + std::to_string(k) + "_";
  for (int v : f) name += std::to_string(v);
  return name;
}

FiniteStructure dualize(const FiniteStructure& m, const std::string& symbol) {
  auto idx = m.sig.index_of(symbol);
  if (!idx) throw Error("no such symbol: " + symbol);
  const auto& decl = m.sig.symbols[*idx];
  if (decl.kind != SymbolKind::Direct) throw Error("symbol is not direct: " + symbol);
  const int n = decl.arity;
  const auto& tuples = m.interp[*idx];

  FiniteStructure out;
  out.size = m.size;
  out.sig.r_reserved = m.sig.r_reserved && symbol != kReservedSymbol;
  for (std::size_t k = 0; k < m.sig.symbols.size(); ++k) {
    if (static_cast<int>(k) == *idx) continue;
    out.sig.symbols.push_back(m.sig.symbols[k]);
    out.interp.push_back(m.interp[k]);
  }

  for (int k = 1; k <= n; ++k) {
    for (const auto& f : enumerate_surjective_labelings(n, k)) {
      out.sig.symbols.push_back({dualized_symbol_name(symbol, f), k + 1, SymbolKind::Dual});
      Interp interp;
      for (const auto& labeling : enumerate_surjective_labelings(m.size, k + 1)) {
        bool holds = false;
        for (const auto& t : tuples) {
          bool fits = true;
          for (int i = 0; i < n && fits; ++i) fits = labeling[t[i]] == f[i];
          if (fits) {
            holds = true;
            break;
          }
        }
        if (holds) interp.insert(labeling);
      }
      out.interp.push_back(std::move(interp));
    }
  }
  return out;
}

DualizationReport verify_dualization(const FiniteStructure& m, const std::string& symbol) {
  auto before = automorphism_group(m);
  auto after = automorphism_group(dualize(m, symbol));
  std::set<std::vector<int>> sb, sa;
  for (const auto& e : before) sb.insert(e.map().table);
  for (const auto& e : after) sa.insert(e.map().table);
  DualizationReport report;
  report.group_size_before = static_cast<long>(sb.size());
  report.group_size_after = static_cast<long>(sa.size());
  report.groups_equal = sb == sa;
  return report;
}

FiniteStructure orbit_structure(const PermutationGroup& g, int max_arity) {
  if (g.degree < 2) throw Error("orbit_structure needs degree >= 2");
  if (max_arity < 2 || max_arity > g.degree)
    throw Error("max_arity must lie in [2, degree]");

  FiniteStructure out;
  out.size = g.degree;
  for (int arity = 2; arity <= max_arity; ++arity) {
    auto labelings = enumerate_surjective_labelings(g.degree, arity);
    std::set<Tuple> assigned;
    int index = 0;
    for (const auto& seed : labelings) {  // lexicographic, so seeds are orbit minima
      if (assigned.count(seed)) continue;
      Interp orbit;
      for (const auto& perm : g.elements) {
        // the action e -> e o g^-1 lands e o g for g running over the group
        Tuple moved(seed.size());
        for (int x = 0; x < g.degree; ++x) moved[x] = seed[perm[x]];
        orbit.insert(std::move(moved));
      }
      for (const auto& e : orbit) assigned.insert(e);
      out.sig.symbols.push_back(
          {"O_" + std::to_string(arity) + "_" + std::to_string(index), arity,
           SymbolKind::Dual});
      out.interp.push_back(std::move(orbit));
      ++index;
    }
  }
  return out;
}

OrbitReport verify_orbit_structure(const PermutationGroup& g, int max_arity) {
  OrbitReport report;
  report.full_arity = max_arity == g.degree;
  report.group_size = static_cast<long>(g.elements.size());
  FiniteStructure k = orbit_structure(g, max_arity);
  for (int arity = 2; arity <= max_arity; ++arity) {
    long count = 0;
    for (const auto& d : k.sig.symbols)
      if (d.arity == arity) ++count;
    report.orbits_per_arity.push_back(count);
  }
  std::set<std::vector<int>> aut;
  for (const auto& e : automorphism_group(k)) aut.insert(e.map().table);
  report.automorphism_count = static_cast<long>(aut.size());
  std::set<std::vector<int>> grp(g.elements.begin(), g.elements.end());
  report.exact = aut == grp;
  return report;
}

HomogeneityReport verify_orbit_homogeneity(const PermutationGroup& g) {
  HomogeneityReport report;
  report.holds = true;
  FiniteStructure k = orbit_structure(g, g.degree);

  for (int m = 1; m <= g.degree; ++m) {
    auto surjections = enumerate_surjective_labelings(g.degree, m);
    report.surjections_checked += static_cast<long>(surjections.size());

    // orbit id per labeling under e -> e o g^-1
    std::map<Tuple, int> orbit_of;
    int next_orbit = 0;
    for (const auto& seed : surjections) {
      if (orbit_of.count(seed)) continue;
      for (const auto& perm : g.elements) {
        Tuple moved(seed.size());
        for (int x = 0; x < g.degree; ++x) moved[x] = seed[perm[x]];
        orbit_of.emplace(std::move(moved), next_orbit);
      }
      ++next_orbit;
    }

    // bucket by induced structure; equal buckets must be single orbits
    std::map<std::string, std::pair<Tuple, int>> buckets;  // key -> (rep, orbit)
    for (const auto& f : surjections) {
      SurjectiveMap map{g.degree, m, f};
      std::string key = serialize_structure(induced_structure(k, map));
      auto [it, fresh] = buckets.emplace(key, std::make_pair(f, orbit_of.at(f)));
      if (fresh) continue;
      if (it->second.second != orbit_of.at(f)) {
        report.holds = false;
        if (report.violation.empty()) {
          std::string a, b;
          for (int v : it->second.first) a += std::to_string(v) + " ";
          for (int v : f) b += std::to_string(v) + " ";
          report.violation = "arity " + std::to_string(m) + ": labelings [" + a +
                             "] and [" + b + "] induce equal structures in different orbits";
        }
      }
    }
    report.structure_classes += static_cast<long>(buckets.size());
  }
  return report;
}

}  // namespace fraisse
