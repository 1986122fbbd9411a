#include "fraisse/limit.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fraisse/parallel.hpp"
#include "fraisse/report.hpp"
#include "fraisse/rng.hpp"

namespace fraisse {

SurjectiveMap InverseSystem::projection(int j, int i) const {
  if (i < 1 || j < i || j > depth()) throw Error("projection: bad level pair");
  SurjectiveMap acc = SurjectiveMap::identity(level(j).size);
  for (int k = j - 1; k >= i; --k) acc = compose(bonds[k - 1].map(), acc);
  return acc;
}

std::vector<Violation> validate_system(const InverseSystem& sys) {
  std::vector<Violation> out;
  if (sys.levels.empty()) out.push_back({"", "system has no levels"});
  if (sys.bonds.size() + 1 != sys.levels.size())
    out.push_back({"", "bond count must be depth - 1"});
  for (std::size_t i = 0; i < sys.levels.size(); ++i)
    for (const auto& v : validate_structure(sys.levels[i]))
      out.push_back({v.symbol, "level " + std::to_string(i + 1) + ": " + v.message});
  for (std::size_t i = 0; i + 1 < sys.levels.size() && i < sys.bonds.size(); ++i) {
    const auto& bond = sys.bonds[i];
    if (!is_epimorphism(bond.map(), sys.levels[i + 1], sys.levels[i]))
      out.push_back({"", "bond " + std::to_string(i + 1) + " is not an epimorphism"});
  }
  return out;
}

std::vector<Thread> system_threads(const InverseSystem& sys) {
  std::vector<Thread> out;
  const int d = sys.depth();
  for (int x = 0; x < sys.level(d).size; ++x) {
    Thread t;
    t.coordinates.assign(d, 0);
    t.coordinates[d - 1] = x;
    for (int i = d - 1; i >= 1; --i)
      t.coordinates[i - 1] = sys.bonds[i - 1].map()(t.coordinates[i]);
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::string task_text(const ExtensionTask& t) {
  return "anchor=" + std::to_string(t.level) + " A=" + std::to_string(t.a_member) +
         " B=" + std::to_string(t.b_member) + " f=[" + map_text(t.onto_a) +
         "] g=[" + map_text(t.from_level) + "]";
}

// g factors through the bond pi exactly when it is constant on fibers.
bool factors_through(const SurjectiveMap& g, const SurjectiveMap& pi) {
  std::vector<int> image(pi.target_size, -1);
  for (int x = 0; x < pi.source_size; ++x) {
    int b = pi(x);
    if (image[b] == -1)
      image[b] = g(x);
    else if (image[b] != g(x))
      return false;
  }
  return true;
}

// Lift search: first h from `source` onto members[task.b_member] with
// f o h = pulled g, or nullopt.
std::optional<SurjectiveMap> find_lift(const FiniteStructure& source,
                                       const FiniteStructure& b,
                                       const SurjectiveMap& f,
                                       const SurjectiveMap& pulled_g) {
  AllowedSets allow(source.size);
  for (int x = 0; x < source.size; ++x)
    for (int y = 0; y < b.size; ++y)
      if (f(y) == pulled_g(x)) allow[x].push_back(y);
  return find_epimorphism(source, b, allow);
}

struct TaskSearchResult {
  bool fulfilled = false;
  int at_level = 0;
  SurjectiveMap lift;
};

TaskSearchResult search_task(const InverseSystem& sys, const StructureClass& cls,
                             const ExtensionTask& task) {
  const auto& b = cls.members[task.b_member];
  for (int j = task.level; j <= sys.depth(); ++j) {
    SurjectiveMap pulled = compose(task.from_level, sys.projection(j, task.level));
    if (auto h = find_lift(sys.level(j), b, task.onto_a, pulled))
      return {true, j, *h};
  }
  return {};
}

// All tasks whose g is new at level i (does not factor through the bond), in
// the deterministic order (|A|, |B|, a, b, f, g).
std::vector<ExtensionTask> tasks_new_at_level(const InverseSystem& sys,
                                              const StructureClass& cls,
                                              int task_bound, int i) {
  std::vector<ExtensionTask> out;
  const auto& level = sys.level(i);
  for (std::size_t a = 0; a < cls.members.size(); ++a) {
    if (cls.members[a].size > task_bound) continue;
    for (const auto& g : enumerate_epimorphisms(level, cls.members[a])) {
      if (i > 1 && factors_through(g, sys.bonds[i - 2].map())) continue;
      for (std::size_t b = 0; b < cls.members.size(); ++b) {
        if (cls.members[b].size > task_bound) continue;
        for (const auto& f : enumerate_epimorphisms(cls.members[b], cls.members[a]))
          out.push_back({i, static_cast<int>(a), static_cast<int>(b), f, g});
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](const ExtensionTask& x, const ExtensionTask& y) {
    auto key = [&](const ExtensionTask& t) {
      return std::make_tuple(cls.members[t.a_member].size, cls.members[t.b_member].size,
                             t.a_member, t.b_member, t.onto_a.table, t.from_level.table);
    };
    return key(x) < key(y);
  });
  return out;
}

}  // namespace

InverseSystem build_age_chain(const StructureClass& cls, int depth) {
  if (depth < 1) throw Error("depth must be positive");
  InverseSystem sys;
  sys.levels.push_back(cls.members.front());
  sys.provenance.push_back("level 1: member 0");
  sys.log.push_back({DischargeRecord::Kind::Start, 1, 0, -1, {}, {}, {}});

  const int n = static_cast<int>(cls.members.size());
  for (int step = 1; step < depth; ++step) {
    const int target = step % n;
    const auto& top = sys.levels.back();
    std::optional<int> witness;
    SurjectiveMap onto_member, bond;
    for (int c = 0; c < n; ++c) {
      if (cls.members[c].size > cls.max_size) continue;
      auto om = find_epimorphism(cls.members[c], cls.members[target]);
      if (!om) continue;
      auto ob = find_epimorphism(cls.members[c], top);
      if (!ob) continue;
      witness = c;
      onto_member = *om;
      bond = *ob;
      break;
    }
    if (!witness)
      throw BoundedSearchError("no member of size <= " + std::to_string(cls.max_size) +
                               " epimorphs onto both member " + std::to_string(target) +
                               " and the current top level");
    FiniteStructure prev = top;
    sys.levels.push_back(cls.members[*witness]);
    sys.bonds.push_back(make_epimorphism(bond, sys.levels.back(), prev));
    sys.provenance.push_back("level " + std::to_string(step + 1) + ": jsp member=" +
                             std::to_string(target) + " witness=" + std::to_string(*witness) +
                             " onto_member=[" + map_text(onto_member) + "] bond=[" +
                             map_text(bond) + "]");
    sys.log.push_back({DischargeRecord::Kind::Jsp, step + 1, target, *witness,
                       onto_member, {}, {}});
  }
  return sys;
}

InverseSystem build_generic_sequence(const StructureClass& cls, int depth,
                                     int task_bound, std::uint64_t seed) {
  if (depth < 1) throw Error("depth must be positive");
  if (task_bound < 1) throw Error("task_bound must be positive");

  InverseSystem sys;
  sys.levels.push_back(cls.members.front());
  sys.provenance.push_back("level 1: member 0");
  sys.log.push_back({DischargeRecord::Kind::Start, 1, 0, -1, {}, {}, {}});

  const int n = static_cast<int>(cls.members.size());
  int jsp_cursor = 1 % n;

  struct QueueItem {
    bool is_jsp;
    int member;  // jsp target
    ExtensionTask task;
  };
  std::deque<QueueItem> queue;

  auto enqueue_for_level = [&](int i) {
    queue.push_back({true, jsp_cursor, {}});
    jsp_cursor = (jsp_cursor + 1) % n;
    auto tasks = tasks_new_at_level(sys, cls, task_bound, i);
    // seed-permute within each (|A|, |B|) band
    std::size_t lo = 0;
    while (lo < tasks.size()) {
      std::size_t hi = lo;
      auto band = [&](const ExtensionTask& t) {
        return std::make_pair(cls.members[t.a_member].size, cls.members[t.b_member].size);
      };
      while (hi < tasks.size() && band(tasks[hi]) == band(tasks[lo])) ++hi;
      std::vector<ExtensionTask> chunk(tasks.begin() + lo, tasks.begin() + hi);
      SplitMix64 rng{mix64(seed ^ mix64(static_cast<std::uint64_t>(i)) ^
                           mix64((static_cast<std::uint64_t>(band(tasks[lo]).first) << 32) |
                                 static_cast<std::uint64_t>(band(tasks[lo]).second)))};
      fisher_yates(chunk, rng);
      for (auto& t : chunk) queue.push_back({false, -1, std::move(t)});
      lo = hi;
    }
  };

  auto jsp_satisfied = [&](int member) {
    for (int j = sys.depth(); j >= 1; --j)
      if (find_epimorphism(sys.level(j), cls.members[member])) return true;
    return false;
  };

  enqueue_for_level(1);

  while (sys.depth() < depth) {
    std::optional<QueueItem> item;
    while (!queue.empty()) {
      QueueItem front = queue.front();
      queue.pop_front();
      bool satisfied = front.is_jsp ? jsp_satisfied(front.member)
                                    : search_task(sys, cls, front.task).fulfilled;
      if (!satisfied) {
        item = std::move(front);
        break;
      }
    }
    if (!item) {
      sys.provenance.push_back("queue exhausted at depth " + std::to_string(sys.depth()));
      sys.log.push_back({DischargeRecord::Kind::Exhausted, sys.depth(), -1, -1, {}, {}, {}});
      return sys;
    }

    const int new_level = sys.depth() + 1;
    const auto& top = sys.levels.back();
    if (item->is_jsp) {
      std::optional<int> witness;
      SurjectiveMap onto_member, bond;
      for (int c = 0; c < n; ++c) {
        if (cls.members[c].size > cls.max_size) continue;
        auto om = find_epimorphism(cls.members[c], cls.members[item->member]);
        if (!om) continue;
        auto ob = find_epimorphism(cls.members[c], top);
        if (!ob) continue;
        witness = c;
        onto_member = *om;
        bond = *ob;
        break;
      }
      if (!witness)
        throw BoundedSearchError("stuck jsp item: no member of size <= " +
                                 std::to_string(cls.max_size) + " epimorphs onto member " +
                                 std::to_string(item->member) + " and the top level");
      FiniteStructure prev = top;
      sys.levels.push_back(cls.members[*witness]);
      sys.bonds.push_back(make_epimorphism(bond, sys.levels.back(), prev));
      sys.provenance.push_back("level " + std::to_string(new_level) + ": jsp member=" +
                               std::to_string(item->member) + " witness=" +
                               std::to_string(*witness) + " onto_member=[" +
                               map_text(onto_member) + "] bond=[" + map_text(bond) + "]");
      sys.log.push_back({DischargeRecord::Kind::Jsp, new_level, item->member, *witness,
                         onto_member, {}, {}});
    } else {
      const ExtensionTask& task = item->task;
      SurjectiveMap pulled = compose(task.from_level, sys.projection(sys.depth(), task.level));
      const auto& b = cls.members[task.b_member];
      std::optional<int> witness;
      SurjectiveMap lift, bond;
      for (int d = 0; d < n && !witness; ++d) {
        if (cls.members[d].size > cls.max_size) continue;
        for (const auto& u : enumerate_epimorphisms(cls.members[d], b)) {
          // bond v must satisfy pulled(v(x)) = f(u(x)) pointwise
          AllowedSets allow(cls.members[d].size);
          SurjectiveMap want = compose(task.onto_a, u);
          for (int x = 0; x < cls.members[d].size; ++x)
            for (int y = 0; y < top.size; ++y)
              if (pulled(y) == want(x)) allow[x].push_back(y);
          if (auto v = find_epimorphism(cls.members[d], top, allow)) {
            witness = d;
            lift = u;
            bond = *v;
            break;
          }
        }
      }
      if (!witness)
        throw BoundedSearchError("stuck task (" + task_text(task) +
                                 "): no amalgamation witness of size <= " +
                                 std::to_string(cls.max_size));
      FiniteStructure prev = top;
      sys.levels.push_back(cls.members[*witness]);
      sys.bonds.push_back(make_epimorphism(bond, sys.levels.back(), prev));
      sys.provenance.push_back("level " + std::to_string(new_level) + ": task " +
                               task_text(task) + " witness=" + std::to_string(*witness) +
                               " lift=[" + map_text(lift) + "] bond=[" + map_text(bond) +
                               "]");
      sys.log.push_back({DischargeRecord::Kind::Task, new_level, -1, *witness, {},
                         task, lift});
    }
    enqueue_for_level(new_level);
  }
  return sys;
}

long ExtensionCertificate::fulfilled_count() const {
  long out = 0;
  for (const auto& v : verdicts) out += v.fulfilled ? 1 : 0;
  return out;
}

bool ExtensionCertificate::all_fulfilled() const {
  return fulfilled_count() == static_cast<long>(verdicts.size());
}

bool ExtensionCertificate::fulfilled_up_to_anchor(int max_anchor) const {
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (tasks[i].level <= max_anchor && !verdicts[i].fulfilled) return false;
  return true;
}

ExtensionCertificate certify_extension(const InverseSystem& sys,
                                       const StructureClass& cls, int task_bound,
                                       int jobs) {
  ExtensionCertificate cert;
  cert.depth = sys.depth();
  cert.task_bound = task_bound;
  for (int i = 1; i <= sys.depth(); ++i) {
    auto tasks = tasks_new_at_level(sys, cls, task_bound, i);
    cert.tasks.insert(cert.tasks.end(), tasks.begin(), tasks.end());
  }
  cert.verdicts.assign(cert.tasks.size(), {});
  parallel_for_index(cert.tasks.size(), jobs, [&](std::size_t t) {
    auto res = search_task(sys, cls, cert.tasks[t]);
    cert.verdicts[t] = {res.fulfilled, res.at_level, res.lift};
  });
  return cert;
}

DualEvalReport evaluate_dual_tuple(const InverseSystem& sys, int level,
                                   const Tuple& labeling) {
  if (level < 1 || level > sys.depth()) throw Error("evaluate_dual_tuple: bad level");
  const auto& anchor = sys.level(level);
  if (static_cast<int>(labeling.size()) != anchor.size)
    throw Error("labeling length does not match the level domain");
  const int arity = labeling.empty() ? 0 : *std::max_element(labeling.begin(), labeling.end()) + 1;
  if (!is_surjective_labeling(labeling, arity))
    throw Error("labeling is not surjective onto its label range");

  DualEvalReport out;
  out.anchor = level;
  out.arity = arity;
  for (std::size_t k = 0; k < anchor.sig.symbols.size(); ++k) {
    const auto& decl = anchor.sig.symbols[k];
    if (decl.kind != SymbolKind::Dual || decl.arity != arity) continue;
    DualSymbolVerdict v;
    v.symbol = decl.name;
    v.member_at_anchor = anchor.interp[k].count(labeling) > 0;
    v.stable = true;
    for (int j = level; j <= sys.depth(); ++j) {
      Tuple pulled = pull_labeling(labeling, sys.projection(j, level));
      bool member = sys.level(j).interp[k].count(pulled) > 0;
      v.per_level.push_back(member);
      if (member != v.member_at_anchor) v.stable = false;
    }
    out.symbols.push_back(std::move(v));
  }
  return out;
}

namespace {

bool member_of_class(const StructureClass& cls, const FiniteStructure& s) {
  for (const auto& m : cls.members)
    if (m.size == s.size && find_isomorphism(m, s)) return true;
  return false;
}

}  // namespace

BackAndForthResult back_and_forth(const InverseSystem& sys1,
                                  const InverseSystem& sys2,
                                  const StructureClass& cls, int depth,
                                  const BackAndForthAnchor& anchor) {
  if (!member_of_class(cls, anchor.base))
    throw Error("back_and_forth: anchor structure is not in the class");
  if (!is_epimorphism(anchor.from_first, sys1.level(1), anchor.base) ||
      !is_epimorphism(anchor.from_second, sys2.level(1), anchor.base))
    throw Error("back_and_forth: anchor maps must be epimorphisms from the first levels");

  BackAndForthResult out;
  out.tower.push_back(anchor.base);
  out.from_first.push_back({1, anchor.from_first});
  out.from_second.push_back({1, anchor.from_second});

  for (int n = 1; n <= depth; ++n) {
    const bool advance_first = (n % 2) == 1;
    const InverseSystem& adv = advance_first ? sys1 : sys2;
    const InverseSystem& other = advance_first ? sys2 : sys1;
    auto& adv_maps = advance_first ? out.from_first : out.from_second;
    auto& other_maps = advance_first ? out.from_second : out.from_first;

    const int p = adv_maps.back().level;
    const int q = p + 1;
    if (q > adv.depth()) {
      out.stuck = "step " + std::to_string(n) + ": the " +
                  (advance_first ? "first" : "second") + " system has no level " +
                  std::to_string(q);
      return out;
    }

    // refine the advanced side against its next level projection
    const FiniteStructure& k_level = adv.level(q);
    SurjectiveMap pulled = compose(adv_maps.back().map, adv.projection(q, p));
    Epimorphism f_pulled = make_epimorphism(pulled, k_level, out.tower.back());
    Epimorphism ident =
        make_epimorphism(SurjectiveMap::identity(k_level.size), k_level, k_level);
    Refinement ref = common_refinement(k_level, f_pulled, ident);

    // extension search on the other side
    const int s = other_maps.back().level;
    std::optional<LeveledMap> lifted;
    for (int j = s; j <= other.depth() && !lifted; ++j) {
      SurjectiveMap g_j = compose(other_maps.back().map, other.projection(j, s));
      AllowedSets allow(other.level(j).size);
      for (int x = 0; x < other.level(j).size; ++x)
        for (int y = 0; y < ref.refined.size; ++y)
          if (ref.factor_f.map()(y) == g_j(x)) allow[x].push_back(y);
      if (auto h = find_epimorphism(other.level(j), ref.refined, allow))
        lifted = LeveledMap{j, *h};
    }
    if (!lifted) {
      out.stuck = "step " + std::to_string(n) + ": no lift of the " +
                  (advance_first ? "second" : "first") +
                  " system onto the refined structure within depth";
      return out;
    }

    out.tower.push_back(ref.refined);
    out.tower_bonds.push_back(ref.factor_f.map());
    adv_maps.push_back({q, ref.h.map()});
    other_maps.push_back(*lifted);
  }
  out.completed = true;
  return out;
}

void save_system(const InverseSystem& sys, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (int i = 1; i <= sys.depth(); ++i)
    write_structure_file(sys.level(i),
                         (fs::path(dir) / ("level_" + pad_index(i, 2) + ".struct")).string());
  std::ofstream bonds((fs::path(dir) / "bonds.txt").string());
  if (!bonds) throw Error("cannot write bonds file in " + dir);
  for (const auto& b : sys.bonds) bonds << map_text(b.map()) << "\n";
  std::ofstream log((fs::path(dir) / "provenance.log").string());
  if (!log) throw Error("cannot write provenance log in " + dir);
  for (const auto& line : sys.provenance) log << line << "\n";
}

InverseSystem load_system(const std::string& dir) {
  namespace fs = std::filesystem;
  InverseSystem sys;
  for (int i = 1;; ++i) {
    fs::path p = fs::path(dir) / ("level_" + pad_index(i, 2) + ".struct");
    if (!fs::exists(p)) break;
    sys.levels.push_back(read_structure_file(p.string()));
  }
  if (sys.levels.empty()) throw Error("no level files found in " + dir);

  std::ifstream bonds((fs::path(dir) / "bonds.txt").string());
  if (!bonds) throw Error("cannot open bonds file in " + dir);
  std::string line;
  int i = 0;
  while (std::getline(bonds, line)) {
    std::istringstream ls(line);
    std::vector<int> table;
    int v;
    while (ls >> v) table.push_back(v);
    if (table.empty()) continue;
    if (i + 1 >= static_cast<int>(sys.levels.size()))
      throw Error("bonds file has more lines than bonds");
    SurjectiveMap m{sys.levels[i + 1].size, sys.levels[i].size, table};
    if (static_cast<int>(table.size()) != m.source_size)
      throw Error("bond " + std::to_string(i + 1) + " has wrong length");
    sys.bonds.push_back(make_epimorphism(m, sys.levels[i + 1], sys.levels[i]));
    ++i;
  }
  if (i + 1 != static_cast<int>(sys.levels.size()))
    throw Error("bonds file has fewer lines than bonds");

  std::ifstream log((fs::path(dir) / "provenance.log").string());
  if (log) {
    while (std::getline(log, line))
      if (!line.empty()) sys.provenance.push_back(line);
  }
  return sys;
}

}  // namespace fraisse
