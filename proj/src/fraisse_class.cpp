#include "fraisse/fraisse_class.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fraisse/report.hpp"

namespace fraisse {

StructureClass StructureClass::make(std::vector<FiniteStructure> members, int max_size) {
  if (members.empty()) throw Error("a structure class needs at least one member");
  for (const auto& m : members) {
    require_valid(m);
    if (m.sig != members.front().sig)
      throw Error("class members must share one signature");
  }
  std::vector<FiniteStructure> unique;
  for (auto& m : members) {
    bool dup = false;
    for (const auto& u : unique)
      if (u.size == m.size && find_isomorphism(u, m)) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(std::move(m));
  }
  return StructureClass{std::move(unique), max_size};
}

StructureClass load_class(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error("cannot open class manifest: " + manifest_path);
  const auto dir = std::filesystem::path(manifest_path).parent_path();

  std::vector<FiniteStructure> members;
  std::optional<int> max_size;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "max_size") {
      int v;
      if (!(ls >> v) || v < 1) throw ParseError(number, "expected 'max_size <n>'");
      max_size = v;
    } else if (key == "member") {
      std::string rel;
      if (!(ls >> rel)) throw ParseError(number, "expected 'member <path>'");
      members.push_back(read_structure_file((dir / rel).string()));
    } else {
      throw ParseError(number, "unknown manifest key '" + key + "'");
    }
  }
  if (!max_size) throw Error("class manifest must set max_size");
  return StructureClass::make(std::move(members), *max_size);
}

namespace {

bool isomorphic_to_some_member(const StructureClass& cls, const FiniteStructure& s) {
  for (const auto& m : cls.members)
    if (m.size == s.size && find_isomorphism(m, s)) return true;
  return false;
}

}  // namespace

AxiomReport check_hp(const StructureClass& cls) {
  AxiomReport report{Axiom::HP, true, false, HpData{}};
  auto& data = std::get<HpData>(report.data);
  for (std::size_t i = 0; i < cls.members.size(); ++i) {
    const auto& a = cls.members[i];
    for (int k = 1; k <= a.size; ++k) {
      for (const auto& table : enumerate_surjective_labelings(a.size, k)) {
        SurjectiveMap f{a.size, k, table};
        FiniteStructure induced = induced_structure(a, f);
        ++data.quotients_checked;
        if (!isomorphic_to_some_member(cls, induced)) {
          report.holds = false;
          data.counterexample = HpCounterexample{static_cast<int>(i), f, induced};
          return report;
        }
      }
    }
  }
  return report;
}

AxiomReport check_jsp(const StructureClass& cls) {
  AxiomReport report{Axiom::JSP, true, false, JspData{}};
  auto& data = std::get<JspData>(report.data);
  const int n = static_cast<int>(cls.members.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      std::optional<JspWitness> witness;
      for (int c = 0; c < n && !witness; ++c) {
        if (cls.members[c].size > cls.max_size) continue;
        auto onto_a = find_epimorphism(cls.members[c], cls.members[i]);
        if (!onto_a) continue;
        auto onto_b = find_epimorphism(cls.members[c], cls.members[j]);
        if (!onto_b) continue;
        witness = JspWitness{c, *onto_a, *onto_b};
      }
      if (witness) {
        data.witnesses.push_back({{i, j}, *witness});
      } else {
        report.holds = false;
        report.bounded = true;
        data.failure = JspInstance{i, j};
        return report;
      }
    }
  }
  return report;
}

AxiomReport check_pap(const StructureClass& cls) {
  AxiomReport report{Axiom::PAP, true, false, PapData{}};
  auto& data = std::get<PapData>(report.data);
  const int n = static_cast<int>(cls.members.size());

  // cached epimorphism lists between members
  std::map<std::pair<int, int>, std::vector<SurjectiveMap>> epis;
  auto epis_between = [&](int from, int to) -> const std::vector<SurjectiveMap>& {
    auto key = std::make_pair(from, to);
    auto it = epis.find(key);
    if (it == epis.end())
      it = epis.emplace(key, enumerate_epimorphisms(cls.members[from], cls.members[to]))
               .first;
    return it->second;
  };

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (const auto& fa : epis_between(a, c)) {
          for (const auto& fb : epis_between(b, c)) {
            ++data.instances_checked;
            std::optional<PapWitness> witness;
            for (int d = 0; d < n && !witness; ++d) {
              if (cls.members[d].size > cls.max_size) continue;
              for (const auto& ga : epis_between(d, a)) {
                // g_b must satisfy fb(g_b(x)) = fa(ga(x)) pointwise
                AllowedSets allow(cls.members[d].size);
                SurjectiveMap target = compose(fa, ga);
                for (int x = 0; x < cls.members[d].size; ++x)
                  for (int y = 0; y < cls.members[b].size; ++y)
                    if (fb(y) == target(x)) allow[x].push_back(y);
                auto gb = find_epimorphism(cls.members[d], cls.members[b], allow);
                if (gb) {
                  witness = PapWitness{d, ga, *gb};
                  break;
                }
              }
            }
            if (witness) {
              data.witnesses.push_back({{a, b, c, fa, fb}, *witness});
            } else {
              report.holds = false;
              report.bounded = true;
              data.failure = PapInstance{a, b, c, fa, fb};
              return report;
            }
          }
        }
      }
    }
  }
  return report;
}

std::string report_to_text(const AxiomReport& report) {
  Report out;
  switch (report.axiom) {
    case Axiom::HP: out.add("axiom", "HP"); break;
    case Axiom::JSP: out.add("axiom", "JSP"); break;
    case Axiom::PAP: out.add("axiom", "PAP"); break;
  }
  out.add("holds", report.holds);
  out.add("bounded", report.bounded);

  if (const auto* hp = std::get_if<HpData>(&report.data)) {
    out.add("quotients_checked", hp->quotients_checked);
    if (hp->counterexample) {
      out.add("counterexample_member", hp->counterexample->member);
      out.add("counterexample_map", map_text(hp->counterexample->onto));
    }
  } else if (const auto* jsp = std::get_if<JspData>(&report.data)) {
    out.add("pairs_checked", static_cast<long>(jsp->witnesses.size()) +
                                 (jsp->failure ? 1 : 0));
    if (jsp->failure) {
      out.add("failure_pair", std::to_string(jsp->failure->a) + " " +
                                  std::to_string(jsp->failure->b));
    }
  } else if (const auto* pap = std::get_if<PapData>(&report.data)) {
    out.add("instances_checked", pap->instances_checked);
    if (pap->failure) {
      out.add("failure_members", std::to_string(pap->failure->a) + " " +
                                     std::to_string(pap->failure->b) + " " +
                                     std::to_string(pap->failure->c));
      out.add("failure_map_a", map_text(pap->failure->f_a));
      out.add("failure_map_b", map_text(pap->failure->f_b));
    }
  }
  return out.render();
}

}  // namespace fraisse
