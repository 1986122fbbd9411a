#pragma once

// Finite prefixes of inverse sequences with bonding epimorphisms, the
// generic-sequence construction driven by a fair task queue, bounded-depth
// certification of the extension property, and the back-and-forth procedure
// intertwining two sequences through a common refinement tower.

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "fraisse/epi.hpp"
#include "fraisse/fraisse_class.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

// An extension task anchored at a level: given f onto A from a small member B
// and g from level `level` onto A, ask for a lift h from some level j >= level
// with f o h = g o (bond composition).
struct ExtensionTask {
  int level = 1;    // 1-based anchor; g does not factor through lower levels
  int a_member = 0;
  int b_member = 0;
  SurjectiveMap onto_a;      // f : members[b_member] -> members[a_member]
  SurjectiveMap from_level;  // g : B_level -> members[a_member]
};

struct DischargeRecord {
  enum class Kind { Start, Jsp, Task, Exhausted };
  Kind kind = Kind::Start;
  int new_level = 1;
  int member = -1;            // Start: seed member; Jsp: member made a quotient
  int witness = -1;           // Jsp / Task: member index used as the new level
  SurjectiveMap onto_member;  // Jsp: witness -> members[member]
  ExtensionTask task;         // Task
  SurjectiveMap lift;         // Task: witness -> members[task.b_member]
};

struct InverseSystem {
  std::vector<FiniteStructure> levels;  // levels[0] is B_1
  std::vector<Epimorphism> bonds;       // bonds[i] : levels[i+1] -> levels[i]
  std::vector<std::string> provenance;
  std::vector<DischargeRecord> log;     // structured, in-memory only

  int depth() const { return static_cast<int>(levels.size()); }
  const FiniteStructure& level(int i) const { return levels.at(i - 1); }  // 1-based

  // Bond composition from level j down to level i (identity when j == i).
  SurjectiveMap projection(int j, int i) const;
};

std::vector<Violation> validate_system(const InverseSystem& sys);

struct Thread {
  std::vector<int> coordinates;  // one per level, bond-compatible
};

// All threads of the prefix; each point of the top level determines one.
std::vector<Thread> system_threads(const InverseSystem& sys);

// A chain through the class: the first member at the bottom, and each next
// level a member that epimorphs onto both the next enumerated member
// (cyclically) and the previous level.
InverseSystem build_age_chain(const StructureClass& cls, int depth);

// Extends the chain construction by dovetailed task discharge: a fair queue
// interleaves quotient saturation with extension tasks; each stuck task is
// resolved by an amalgamation witness that becomes the next level. The seed
// permutes task order within (|A|, |B|) bands; see the README for the exact
// generator. May return a shorter prefix when the queue drains.
InverseSystem build_generic_sequence(const StructureClass& cls, int depth,
                                     int task_bound, std::uint64_t seed);

struct TaskVerdict {
  bool fulfilled = false;
  int at_level = 0;    // j with the witnessing lift
  SurjectiveMap lift;  // h : B_j -> members[b_member]
};

struct ExtensionCertificate {
  int depth = 0;
  int task_bound = 0;
  std::vector<ExtensionTask> tasks;  // task id = position
  std::vector<TaskVerdict> verdicts;

  long fulfilled_count() const;
  bool all_fulfilled() const;
  // True when every task anchored at a level <= max_anchor is fulfilled.
  bool fulfilled_up_to_anchor(int max_anchor) const;
};

// Enumerates every task with members of size <= task_bound, each anchored at
// the least level its g factors through, and searches the remaining levels
// for a lift. Tasks anchored near the top of the prefix can be legitimately
// unfulfilled: they have no room left to stretch.
ExtensionCertificate certify_extension(const InverseSystem& sys,
                                       const StructureClass& cls, int task_bound,
                                       int jobs = 0);

struct DualSymbolVerdict {
  std::string symbol;
  bool member_at_anchor = false;
  std::vector<bool> per_level;  // pullback membership at anchor..depth
  bool stable = false;          // every entry equals the anchor verdict
};

struct DualEvalReport {
  int anchor = 1;
  int arity = 0;
  std::vector<DualSymbolVerdict> symbols;
};

// Membership of a dual tuple given at one level, plus pullback stability
// along the recorded bonds (forced whenever the bonds are epimorphisms).
DualEvalReport evaluate_dual_tuple(const InverseSystem& sys, int level,
                                   const Tuple& labeling);

struct LeveledMap {
  int level = 1;      // which system level the map comes from
  SurjectiveMap map;  // onto the tower structure of its step
};

struct BackAndForthAnchor {
  FiniteStructure base;        // A, a member of the class up to isomorphism
  SurjectiveMap from_first;    // epimorphism sys1 level 1 -> A
  SurjectiveMap from_second;   // epimorphism sys2 level 1 -> A
};

struct BackAndForthResult {
  std::vector<FiniteStructure> tower;       // A_0..A_m
  std::vector<SurjectiveMap> tower_bonds;   // rho[n] : tower[n+1] -> tower[n]
  std::vector<LeveledMap> from_first;       // f_n
  std::vector<LeveledMap> from_second;      // g_n
  bool completed = false;
  std::string stuck;  // nonempty when a step could not be completed

  int steps() const { return static_cast<int>(tower.size()) - 1; }
};

// Builds the intertwining tower: odd steps copy the next level of the first
// system into the tower via common refinement with the level projection, even
// steps do the same on the second system; the opposite side follows by an
// extension search through its remaining levels.
BackAndForthResult back_and_forth(const InverseSystem& sys1,
                                  const InverseSystem& sys2,
                                  const StructureClass& cls, int depth,
                                  const BackAndForthAnchor& anchor);

// Directory bundle: level_XX.struct files, bonds.txt (one map table per
// line), provenance.log.
void save_system(const InverseSystem& sys, const std::string& dir);
InverseSystem load_system(const std::string& dir);

}  // namespace fraisse
