#include "fraisse/prespace.hpp"

#include <algorithm>
#include <map>

#include "fraisse/report.hpp"

namespace fraisse {

namespace {

// Union-find over the implicit-diagonal relation.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::pair<int, int>> off_diagonal_edges(const FiniteStructure& s) {
  const int idx = s.sig.reserved_index();
  std::vector<std::pair<int, int>> out;
  for (const auto& t : s.interp[idx])
    if (t.size() == 2 && t[0] < t[1]) out.push_back({t[0], t[1]});
  return out;
}

}  // namespace

PrespaceReport check_prespace(const FiniteStructure& s) {
  if (!s.sig.r_reserved) throw Error("structure has no reserved symbol r");
  PrespaceReport report;
  const int idx = s.sig.reserved_index();
  const auto& r = s.interp[idx];

  report.symmetric = true;
  for (const auto& t : r)
    if (t.size() == 2 && !r.count({t[1], t[0]})) report.symmetric = false;

  report.transitive = true;
  std::vector<std::vector<bool>> adj(s.size, std::vector<bool>(s.size, false));
  for (int i = 0; i < s.size; ++i) adj[i][i] = true;  // implicit diagonal
  for (const auto& t : r)
    if (t.size() == 2) adj[t[0]][t[1]] = true;
  for (int a = 0; a < s.size && report.transitive; ++a)
    for (int b = 0; b < s.size && report.transitive; ++b)
      for (int c = 0; c < s.size && report.transitive; ++c)
        if (adj[a][b] && adj[b][c] && !adj[a][c]) {
          report.transitive = false;
          report.first_failure = "(" + std::to_string(a) + "," + std::to_string(b) +
                                 ") and (" + std::to_string(b) + "," + std::to_string(c) +
                                 ") without (" + std::to_string(a) + "," +
                                 std::to_string(c) + ")";
        }

  if (report.transitive) {
    UnionFind uf(s.size);
    for (const auto& [a, b] : off_diagonal_edges(s)) uf.unite(a, b);
    std::map<int, std::vector<int>> by_root;
    for (int x = 0; x < s.size; ++x) by_root[uf.find(x)].push_back(x);
    std::vector<std::vector<int>> classes;
    for (auto& [root, members] : by_root) classes.push_back(std::move(members));
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    report.classes = std::move(classes);
  }
  return report;
}

QuotientResult quotient_by_reserved(const FiniteStructure& s) {
  PrespaceReport pre = check_prespace(s);
  if (!pre.transitive)
    throw Error("r is not transitive (" + pre.first_failure +
                "); run check_prespace for the full report");

  std::vector<int> class_of(s.size, -1);
  for (std::size_t c = 0; c < pre.classes.size(); ++c)
    for (int x : pre.classes[c]) class_of[x] = static_cast<int>(c);
  SurjectiveMap proj{s.size, static_cast<int>(pre.classes.size()), class_of};

  // drop r, then interpret the remaining symbols along the projection
  FiniteStructure stripped;
  stripped.size = s.size;
  const int ridx = s.sig.reserved_index();
  for (std::size_t k = 0; k < s.sig.symbols.size(); ++k) {
    if (static_cast<int>(k) == ridx) continue;
    stripped.sig.symbols.push_back(s.sig.symbols[k]);
    stripped.interp.push_back(s.interp[k]);
  }
  return QuotientResult{induced_structure(stripped, proj), proj};
}

namespace {

Epimorphism halving_bond(const FiniteStructure& fine, const FiniteStructure& coarse) {
  SurjectiveMap bond{fine.size, coarse.size, {}};
  bond.table.reserve(fine.size);
  for (int k = 0; k < fine.size; ++k) bond.table.push_back(k / 2);
  return make_epimorphism(bond, fine, coarse);
}

FiniteStructure edgeless_r_structure(int n) {
  FiniteStructure s;
  s.sig = reserved_r_signature();
  s.size = n;
  s.interp.resize(1);
  return s;
}

}  // namespace

InverseSystem build_interval_system(int depth) {
  if (depth < 1) throw Error("depth must be positive");
  InverseSystem sys;
  for (int n = 1; n <= depth; ++n) {
    const int atoms = 1 << n;
    sys.levels.push_back(path_structure(atoms));
    sys.provenance.push_back("level " + std::to_string(n) + ": " + std::to_string(atoms) +
                             " atoms [k/" + std::to_string(atoms) + ", (k+1)/" +
                             std::to_string(atoms) + "], mesh " + dyadic_text(1, n));
    for (int k = 0; k < atoms; ++k) {
      if (n > 1)
        sys.provenance.push_back("  atom " + std::to_string(k) + " = [" +
                                 dyadic_text(k, n) + ", " + dyadic_text(k + 1, n) +
                                 "] refines atom " + std::to_string(k / 2) +
                                 " of level " + std::to_string(n - 1));
      if (k + 1 < atoms)
        sys.provenance.push_back(
            "  atoms " + std::to_string(k) + "," + std::to_string(k + 1) +
            " intersect in the point " + dyadic_text(k + 1, n) +
            "; regular-closed meet closure(int(intersection)) is empty; r-edge kept");
    }
    if (n > 1) sys.bonds.push_back(halving_bond(sys.levels[n - 1], sys.levels[n - 2]));
  }
  return sys;
}

InverseSystem build_cantor_system(int depth) {
  if (depth < 1) throw Error("depth must be positive");
  InverseSystem sys;
  for (int n = 1; n <= depth; ++n) {
    const int atoms = 1 << n;
    sys.levels.push_back(edgeless_r_structure(atoms));
    sys.provenance.push_back("level " + std::to_string(n) + ": " + std::to_string(atoms) +
                             " disjoint cylinders, no r-edges");
    if (n > 1) sys.bonds.push_back(halving_bond(sys.levels[n - 1], sys.levels[n - 2]));
  }
  return sys;
}

namespace {

// Maximum clique via Bron-Kerbosch with pivoting; the graphs here are tiny.
void max_clique_rec(const std::vector<std::vector<bool>>& adj, std::vector<int>& r,
                    std::vector<int> p, std::vector<int> x, int& best) {
  if (p.empty() && x.empty()) {
    best = std::max(best, static_cast<int>(r.size()));
    return;
  }
  int pivot = -1, pivot_count = -1;
  for (int u : p) {
    int c = 0;
    for (int v : p)
      if (adj[u][v]) ++c;
    if (c > pivot_count) pivot_count = c, pivot = u;
  }
  for (int u : x) {
    int c = 0;
    for (int v : p)
      if (adj[u][v]) ++c;
    if (c > pivot_count) pivot_count = c, pivot = u;
  }
  std::vector<int> candidates;
  for (int v : p)
    if (pivot < 0 || !adj[pivot][v]) candidates.push_back(v);
  for (int v : candidates) {
    std::vector<int> np, nx;
    for (int w : p)
      if (adj[v][w]) np.push_back(w);
    for (int w : x)
      if (adj[v][w]) nx.push_back(w);
    r.push_back(v);
    max_clique_rec(adj, r, std::move(np), std::move(nx), best);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

int max_clique(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> p(n), r, x;
  for (int i = 0; i < n; ++i) p[i] = i;
  int best = 0;
  max_clique_rec(adj, r, std::move(p), std::move(x), best);
  return best;
}

}  // namespace

LimitQuotientReport limit_quotient_report(const InverseSystem& sys, bool dyadic_mesh) {
  LimitQuotientReport report;

  for (int n = 1; n <= sys.depth(); ++n) {
    const auto& level = sys.level(n);
    LevelStats stats;
    stats.atoms = level.size;
    auto edges = off_diagonal_edges(level);
    stats.edges = static_cast<int>(edges.size());
    UnionFind uf(level.size);
    std::vector<int> degree(level.size, 0);
    for (const auto& [a, b] : edges) {
      uf.unite(a, b);
      ++degree[a];
      ++degree[b];
    }
    std::set<int> roots;
    for (int x = 0; x < level.size; ++x) roots.insert(uf.find(x));
    stats.components = static_cast<int>(roots.size());
    stats.max_degree = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
    if (dyadic_mesh) stats.mesh = dyadic_text(1, n);
    report.levels.push_back(std::move(stats));
  }

  auto threads = system_threads(sys);
  report.threads = static_cast<long>(threads.size());

  // threads are limit-related when their coordinates are r-or-equal at every
  // recorded level
  std::vector<std::vector<std::vector<bool>>> level_adj;
  for (int n = 1; n <= sys.depth(); ++n) {
    const auto& level = sys.level(n);
    std::vector<std::vector<bool>> adj(level.size, std::vector<bool>(level.size, false));
    for (int i = 0; i < level.size; ++i) adj[i][i] = true;
    for (const auto& [a, b] : off_diagonal_edges(level)) adj[a][b] = adj[b][a] = true;
    level_adj.push_back(std::move(adj));
  }
  const int t = static_cast<int>(threads.size());
  std::vector<std::vector<bool>> related(t, std::vector<bool>(t, false));
  for (int i = 0; i < t; ++i) {
    for (int j = i + 1; j < t; ++j) {
      bool rel = true;
      for (int n = 0; n < sys.depth() && rel; ++n)
        rel = level_adj[n][threads[i].coordinates[n]][threads[j].coordinates[n]];
      if (rel) {
        related[i][j] = related[j][i] = true;
        ++report.related_pairs;
        LimitPair pair{i, j, ""};
        if (dyadic_mesh)
          pair.boundary =
              dyadic_text(std::max(threads[i].coordinates[sys.depth() - 1],
                                   threads[j].coordinates[sys.depth() - 1]),
                          sys.depth());
        report.pairs.push_back(std::move(pair));
      }
    }
  }
  report.max_limit_class = t == 0 ? 0 : std::max(1, max_clique(related));
  return report;
}

}  // namespace fraisse
