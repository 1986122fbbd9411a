#pragma once

// Verification of the class axioms for an explicitly listed finite class:
// hereditary property (HP), joint surjecting property (JSP), and projective
// amalgamation property (PAP). HP is checked exhaustively (every quotient of
// a member); JSP and PAP search witnesses among members up to max_size, so
// their failures may be artifacts of the bound and are flagged as such.

#include <optional>
#include <variant>
#include <vector>

#include "fraisse/epi.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

struct StructureClass {
  std::vector<FiniteStructure> members;  // pairwise non-isomorphic, one signature
  int max_size = 0;                      // witness search bound

  // Deduplicates isomorphic entries (first occurrence wins) and validates.
  static StructureClass make(std::vector<FiniteStructure> members, int max_size);
};

// Manifest file: `max_size <n>` plus `member <relative-path>` lines.
StructureClass load_class(const std::string& manifest_path);

enum class Axiom { HP, JSP, PAP };

struct HpCounterexample {
  int member;           // index into members
  SurjectiveMap onto;   // quotient map from that member
  FiniteStructure induced;
};

struct HpData {
  long quotients_checked = 0;
  std::optional<HpCounterexample> counterexample;
};

struct JspInstance {
  int a, b;
};

struct JspWitness {
  int c;
  SurjectiveMap onto_a, onto_b;
};

struct JspData {
  std::vector<std::pair<JspInstance, JspWitness>> witnesses;
  std::optional<JspInstance> failure;
};

struct PapInstance {
  int a, b, c;
  SurjectiveMap f_a;  // a -> c
  SurjectiveMap f_b;  // b -> c
};

struct PapWitness {
  int d;
  SurjectiveMap g_a;  // d -> a
  SurjectiveMap g_b;  // d -> b
};

struct PapData {
  long instances_checked = 0;
  std::vector<std::pair<PapInstance, PapWitness>> witnesses;
  std::optional<PapInstance> failure;
};

struct AxiomReport {
  Axiom axiom;
  bool holds = false;
  bool bounded = false;  // a failure that may be a search-bound artifact
  std::variant<HpData, JspData, PapData> data;
};

AxiomReport check_hp(const StructureClass& cls);
AxiomReport check_jsp(const StructureClass& cls);
AxiomReport check_pap(const StructureClass& cls);

// One machine-parsable block of `key: value` lines per report.
std::string report_to_text(const AxiomReport& report);

}  // namespace fraisse
