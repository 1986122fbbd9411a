#include "fraisse/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "fraisse/epi.hpp"
#include "fraisse/fraisse_class.hpp"
#include "fraisse/limit.hpp"
#include "fraisse/prespace.hpp"
#include "fraisse/report.hpp"
#include "fraisse/structure.hpp"
#include "fraisse/transforms.hpp"

namespace fraisse::cli {

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBounded = 3;

SurjectiveMap read_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open map file: " + path);
  std::string raw;
  std::vector<int> table;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    int v;
    while (ls >> v) table.push_back(v);
    if (!ls.eof() && ls.fail()) throw ParseError(number, "expected integers");
  }
  if (table.empty()) throw Error("map file is empty: " + path);
  int target = *std::max_element(table.begin(), table.end()) + 1;
  SurjectiveMap m{static_cast<int>(table.size()), target, std::move(table)};
  if (!m.surjective()) throw Error("map file is not surjective: " + path);
  return m;
}

// Structure-producing subcommands print to stdout unless -o is given.
void emit_structure(const FiniteStructure& s, const std::string& out_path,
                    std::ostream& out, const std::string& preamble = "") {
  std::string text = preamble + serialize_structure(s);
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw Error("cannot write " + out_path);
    f << text;
  }
}

void emit_report(const Report& report, const std::string& dir, std::ostream& out) {
  std::string text = report.render();
  out << text;
  if (!dir.empty()) {
    std::ofstream f((std::filesystem::path(dir) / "report.txt").string());
    if (!f) throw Error("cannot write report in " + dir);
    f << text;
  }
}

Report demo_report(const InverseSystem& sys, bool dyadic) {
  Report report;
  auto stats = limit_quotient_report(sys, dyadic);
  const auto& final_level = stats.levels.back();
  report.add("depth", sys.depth());
  report.add("atoms", final_level.atoms);
  report.add("edges", final_level.edges);
  if (dyadic) report.add("mesh", final_level.mesh);
  for (std::size_t n = 0; n < stats.levels.size(); ++n) {
    const auto& s = stats.levels[n];
    std::string p = "level_" + pad_index(static_cast<long>(n) + 1, 2) + "_";
    report.add(p + "atoms", s.atoms);
    report.add(p + "edges", s.edges);
    report.add(p + "components", s.components);
    report.add(p + "max_degree", s.max_degree);
    if (dyadic) report.add(p + "mesh", s.mesh);
  }
  report.add("threads", stats.threads);
  report.add("limit_related_pairs", stats.related_pairs);
  report.add("max_limit_class", stats.max_limit_class);
  for (std::size_t i = 0; i < stats.pairs.size(); ++i) {
    const auto& p = stats.pairs[i];
    std::string v = "threads " + std::to_string(p.first_thread) + "|" +
                    std::to_string(p.second_thread);
    if (!p.boundary.empty()) v += " boundary " + p.boundary;
    report.add("limit_pair_" + pad_index(static_cast<long>(i)), v);
  }
  return report;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite structures with direct and dual relations: epimorphism "
               "calculus, class axioms, inverse sequences, quotients"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "cap internal parallelism (0 = hardware)");

  std::function<int()> action;

  // validate -------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("validate", "check structure invariants");
    auto path = std::make_shared<std::string>();
    cmd->add_option("file", *path, "structure file")->required();
    cmd->callback([&action, path] {
      action = [path] {
        std::ifstream in(*path);
        if (!in) throw Error("cannot open structure file: " + *path);
        std::ostringstream buf;
        buf << in.rdbuf();
        // parse without invariant enforcement is not offered; parse errors
        // exit 2, invariant violations are a verdict
        FiniteStructure s;
        try {
          s = parse_structure(buf.str());
        } catch (const ParseError&) {
          throw;
        } catch (const Error& e) {
          Report report;
          report.add("valid", false);
          report.add("detail", e.what());
          std::cout << report.render();
          return kExitFalse;
        }
        Report report;
        report.add("valid", true);
        report.add("violations", 0);
        std::cout << report.render();
        return kExitTrue;
      };
    });
  }

  // epis -----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("epis", "enumerate all epimorphisms A -> B");
    auto a = std::make_shared<std::string>(), b = std::make_shared<std::string>();
    cmd->add_option("A", *a)->required();
    cmd->add_option("B", *b)->required();
    cmd->callback([&action, a, b] {
      action = [a, b] {
        auto sa = read_structure_file(*a), sb = read_structure_file(*b);
        auto list = enumerate_epimorphisms(sa, sb);
        Report report;
        report.add("count", static_cast<long>(list.size()));
        for (std::size_t i = 0; i < list.size(); ++i)
          report.add("map_" + pad_index(static_cast<long>(i)), map_text(list[i]));
        std::cout << report.render();
        return kExitTrue;
      };
    });
  }

  // induce ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("induce", "structure induced on the target of a map");
    auto k = std::make_shared<std::string>(), m = std::make_shared<std::string>();
    auto o = std::make_shared<std::string>();
    cmd->add_option("K", *k)->required();
    cmd->add_option("map", *m)->required();
    cmd->add_option("-o,--output", *o, "write the structure here instead of stdout");
    cmd->callback([&action, k, m, o] {
      action = [k, m, o] {
        auto s = read_structure_file(*k);
        auto f = read_map_file(*m);
        emit_structure(induced_structure(s, f), *o, std::cout);
        return kExitTrue;
      };
    });
  }

  // refine ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("refine", "common refinement of two epimorphisms");
    auto k = std::make_shared<std::string>(), fm = std::make_shared<std::string>(),
         gm = std::make_shared<std::string>(), o = std::make_shared<std::string>();
    cmd->add_option("K", *k)->required();
    cmd->add_option("f", *fm)->required();
    cmd->add_option("g", *gm)->required();
    cmd->add_option("-o,--output", *o, "directory for refined.struct and the maps");
    cmd->callback([&action, k, fm, gm, o] {
      action = [k, fm, gm, o] {
        auto s = read_structure_file(*k);
        auto fmap = read_map_file(*fm), gmap = read_map_file(*gm);
        auto f = make_epimorphism(fmap, s, induced_structure(s, fmap));
        auto g = make_epimorphism(gmap, s, induced_structure(s, gmap));
        auto ref = common_refinement(s, f, g);
        Report report;
        report.add("blocks", ref.refined.size);
        report.add("h", map_text(ref.h.map()));
        report.add("factor_f", map_text(ref.factor_f.map()));
        report.add("factor_g", map_text(ref.factor_g.map()));
        std::cout << report.render();
        if (!o->empty()) {
          std::filesystem::create_directories(*o);
          write_structure_file(ref.refined,
                               (std::filesystem::path(*o) / "refined.struct").string());
          std::ofstream maps((std::filesystem::path(*o) / "maps.txt").string());
          maps << "h " << map_text(ref.h.map()) << "\n";
          maps << "factor_f " << map_text(ref.factor_f.map()) << "\n";
          maps << "factor_g " << map_text(ref.factor_g.map()) << "\n";
        }
        return kExitTrue;
      };
    });
  }

  // iso ------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("iso", "find an isomorphism A -> B");
    auto a = std::make_shared<std::string>(), b = std::make_shared<std::string>();
    cmd->add_option("A", *a)->required();
    cmd->add_option("B", *b)->required();
    cmd->callback([&action, a, b] {
      action = [a, b] {
        auto iso = find_isomorphism(read_structure_file(*a), read_structure_file(*b));
        Report report;
        report.add("found", static_cast<bool>(iso));
        if (iso) report.add("map", map_text(iso->map()));
        std::cout << report.render();
        return iso ? kExitTrue : kExitFalse;
      };
    });
  }

  // aut ------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("aut", "automorphism group of a structure");
    auto a = std::make_shared<std::string>();
    cmd->add_option("A", *a)->required();
    cmd->callback([&action, a] {
      action = [a] {
        auto group = automorphism_group(read_structure_file(*a));
        Report report;
        report.add("order", static_cast<long>(group.size()));
        for (std::size_t i = 0; i < group.size(); ++i)
          report.add("perm_" + pad_index(static_cast<long>(i)), map_text(group[i].map()));
        std::cout << report.render();
        return kExitTrue;
      };
    });
  }

  // canon ----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("canon", "canonical form under domain relabeling");
    auto a = std::make_shared<std::string>(), o = std::make_shared<std::string>();
    auto bound = std::make_shared<int>(kDefaultCanonicalBound);
    cmd->add_option("A", *a)->required();
    cmd->add_option("--bound", *bound, "largest domain accepted");
    cmd->add_option("-o,--output", *o);
    cmd->callback([&action, a, o, bound] {
      action = [a, o, bound] {
        emit_structure(canonical_form(read_structure_file(*a), *bound), *o, std::cout);
        return kExitTrue;
      };
    });
  }

  // check-class ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("check-class", "HP / JSP / PAP verdicts for a class");
    auto m = std::make_shared<std::string>();
    cmd->add_option("manifest", *m)->required();
    cmd->callback([&action, m] {
      action = [m] {
        auto cls = load_class(*m);
        auto hp = check_hp(cls), jsp = check_jsp(cls), pap = check_pap(cls);
        std::cout << report_to_text(hp) << "\n" << report_to_text(jsp) << "\n"
                  << report_to_text(pap);
        bool proven_failure = (!hp.holds && !hp.bounded) || (!jsp.holds && !jsp.bounded) ||
                              (!pap.holds && !pap.bounded);
        bool bounded_failure = (!hp.holds && hp.bounded) || (!jsp.holds && jsp.bounded) ||
                               (!pap.holds && pap.bounded);
        if (proven_failure) return kExitFalse;
        if (bounded_failure) return kExitBounded;
        return kExitTrue;
      };
    });
  }

  // build-limit ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("build-limit", "build a generic inverse sequence");
    auto m = std::make_shared<std::string>(), o = std::make_shared<std::string>();
    auto depth = std::make_shared<int>(6);
    auto task_bound = std::make_shared<int>(3);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto chain = std::make_shared<bool>(false);
    cmd->add_option("manifest", *m)->required();
    cmd->add_option("--depth", *depth);
    cmd->add_option("--task-bound", *task_bound);
    cmd->add_option("--seed", *seed);
    cmd->add_flag("--chain", *chain, "plain chain without task discharge");
    cmd->add_option("-o,--output", *o, "bundle directory");
    cmd->callback([&action, m, o, depth, task_bound, seed, chain] {
      action = [m, o, depth, task_bound, seed, chain] {
        auto cls = load_class(*m);
        InverseSystem sys = *chain
                                ? build_age_chain(cls, *depth)
                                : build_generic_sequence(cls, *depth, *task_bound, *seed);
        Report report;
        report.add("depth", sys.depth());
        for (int i = 1; i <= sys.depth(); ++i)
          report.add("level_" + pad_index(i, 2) + "_size", sys.level(i).size);
        report.add("status", sys.depth() == *depth ? "complete" : "exhausted");
        std::cout << report.render();
        if (!o->empty()) save_system(sys, *o);
        return kExitTrue;
      };
    });
  }

  // certify --------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("certify", "extension certificate for a bundle");
    auto dir = std::make_shared<std::string>(), m = std::make_shared<std::string>();
    auto task_bound = std::make_shared<int>(3);
    cmd->add_option("bundle", *dir)->required();
    cmd->add_option("manifest", *m)->required();
    cmd->add_option("--task-bound", *task_bound);
    cmd->callback([&action, dir, m, task_bound, &jobs] {
      action = [dir, m, task_bound, &jobs] {
        auto sys = load_system(*dir);
        auto cls = load_class(*m);
        auto cert = certify_extension(sys, cls, *task_bound, jobs);
        Report report;
        report.add("depth", cert.depth);
        report.add("task_bound", cert.task_bound);
        report.add("tasks", static_cast<long>(cert.tasks.size()));
        report.add("fulfilled", cert.fulfilled_count());
        report.add("unfulfilled",
                   static_cast<long>(cert.tasks.size()) - cert.fulfilled_count());
        for (std::size_t t = 0; t < cert.tasks.size(); ++t) {
          const auto& task = cert.tasks[t];
          const auto& v = cert.verdicts[t];
          std::string text = "anchor=" + std::to_string(task.level) + " A=" +
                             std::to_string(task.a_member) + " B=" +
                             std::to_string(task.b_member) + " f=[" +
                             map_text(task.onto_a) + "] g=[" + map_text(task.from_level) +
                             "]";
          text += v.fulfilled ? " fulfilled at=" + std::to_string(v.at_level) + " lift=[" +
                                    map_text(v.lift) + "]"
                              : " unfulfilled within depth";
          report.add("task_" + pad_index(static_cast<long>(t)), text);
        }
        std::cout << report.render();
        return cert.all_fulfilled() ? kExitTrue : kExitFalse;
      };
    });
  }

  // back-and-forth ---------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("back-and-forth",
                                   "intertwine two sequences over a common anchor");
    auto d1 = std::make_shared<std::string>(), d2 = std::make_shared<std::string>(),
         m = std::make_shared<std::string>();
    auto depth = std::make_shared<int>(5);
    cmd->add_option("bundle1", *d1)->required();
    cmd->add_option("bundle2", *d2)->required();
    cmd->add_option("manifest", *m)->required();
    cmd->add_option("--depth", *depth);
    cmd->callback([&action, d1, d2, m, depth] {
      action = [d1, d2, m, depth] {
        auto sys1 = load_system(*d1);
        auto sys2 = load_system(*d2);
        auto cls = load_class(*m);
        // anchor on the first member: both sequences start there
        BackAndForthAnchor anchor;
        anchor.base = cls.members.front();
        auto f = find_epimorphism(sys1.level(1), anchor.base);
        auto g = find_epimorphism(sys2.level(1), anchor.base);
        if (!f || !g)
          throw Error("the first levels do not epimorph onto the first member");
        anchor.from_first = *f;
        anchor.from_second = *g;
        auto res = back_and_forth(sys1, sys2, cls, *depth, anchor);
        Report report;
        report.add("completed", res.completed);
        report.add("steps", res.steps());
        if (!res.stuck.empty()) report.add("stuck", res.stuck);
        for (std::size_t n = 0; n < res.tower.size(); ++n) {
          std::string p = "step_" + pad_index(static_cast<long>(n), 2) + "_";
          report.add(p + "size", res.tower[n].size);
          report.add(p + "f", "level=" + std::to_string(res.from_first[n].level) +
                                  " map=[" + map_text(res.from_first[n].map) + "]");
          report.add(p + "g", "level=" + std::to_string(res.from_second[n].level) +
                                  " map=[" + map_text(res.from_second[n].map) + "]");
          if (n + 1 < res.tower.size())
            report.add(p + "rho", map_text(res.tower_bonds[n]));
        }
        std::cout << report.render();
        return res.completed ? kExitTrue : kExitBounded;
      };
    });
  }

  // dualize ----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("dualize", "replace a direct symbol by its dual encoding");
    auto a = std::make_shared<std::string>(), s = std::make_shared<std::string>(),
         o = std::make_shared<std::string>();
    auto verify = std::make_shared<bool>(false);
    cmd->add_option("M", *a)->required();
    cmd->add_option("symbol", *s)->required();
    cmd->add_option("-o,--output", *o);
    cmd->add_flag("--verify", *verify, "report automorphism preservation instead");
    cmd->callback([&action, a, s, o, verify] {
      action = [a, s, o, verify] {
        auto m = read_structure_file(*a);
        if (*verify) {
          auto rep = verify_dualization(m, *s);
          Report report;
          report.add("aut_preserved", rep.groups_equal);
          report.add("aut_before", rep.group_size_before);
          report.add("aut_after", rep.group_size_after);
          std::cout << report.render();
          return rep.groups_equal ? kExitTrue : kExitFalse;
        }
        emit_structure(dualize(m, *s), *o, std::cout);
        return kExitTrue;
      };
    });
  }

  // orbits -----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("orbits", "orbit structure of a permutation group");
    auto g = std::make_shared<std::string>(), o = std::make_shared<std::string>();
    auto max_arity = std::make_shared<int>(0);
    cmd->add_option("group", *g)->required();
    cmd->add_option("--max-arity", *max_arity, "defaults to the degree");
    cmd->add_option("-o,--output", *o);
    cmd->callback([&action, g, o, max_arity] {
      action = [g, o, max_arity] {
        auto grp = load_group(*g);
        int arity = *max_arity > 0 ? *max_arity : grp.degree;
        emit_structure(orbit_structure(grp, arity), *o, std::cout);
        return kExitTrue;
      };
    });
  }

  // verify-orbits ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("verify-orbits",
                                   "exactness and homogeneity of the orbit structure");
    auto g = std::make_shared<std::string>();
    auto max_arity = std::make_shared<int>(0);
    cmd->add_option("group", *g)->required();
    cmd->add_option("--max-arity", *max_arity, "defaults to the degree");
    cmd->callback([&action, g, max_arity] {
      action = [g, max_arity] {
        auto grp = load_group(*g);
        int arity = *max_arity > 0 ? *max_arity : grp.degree;
        auto orb = verify_orbit_structure(grp, arity);
        Report report;
        report.add("exact", orb.exact);
        report.add("full_arity", orb.full_arity);
        if (!orb.full_arity) report.add("note", "inexact by construction");
        report.add("group_size", orb.group_size);
        report.add("aut_count", orb.automorphism_count);
        for (std::size_t i = 0; i < orb.orbits_per_arity.size(); ++i)
          report.add("orbits_arity_" + std::to_string(i + 2), orb.orbits_per_arity[i]);
        bool ok = orb.exact;
        if (orb.full_arity) {
          auto hom = verify_orbit_homogeneity(grp);
          report.add("homogeneity", hom.holds);
          report.add("surjections_checked", hom.surjections_checked);
          if (!hom.violation.empty()) report.add("violation", hom.violation);
          ok = ok && hom.holds;
        }
        std::cout << report.render();
        return ok ? kExitTrue : kExitFalse;
      };
    });
  }

  // quotient -----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("quotient", "quotient by the reserved symbol r");
    auto a = std::make_shared<std::string>(), o = std::make_shared<std::string>();
    cmd->add_option("M", *a)->required();
    cmd->add_option("-o,--output", *o);
    cmd->callback([&action, a, o] {
      action = [a, o] {
        auto res = quotient_by_reserved(read_structure_file(*a));
        emit_structure(res.quotient, *o, std::cout,
                       "# projection: " + map_text(res.projection) + "\n");
        return kExitTrue;
      };
    });
  }

  // demos ----------------------------------------------------------------
  for (bool dyadic : {true, false}) {
    auto* cmd = app.add_subcommand(dyadic ? "demo-interval" : "demo-cantor",
                                   dyadic ? "dyadic interval levels as an r-graph system"
                                          : "Cantor cylinder levels as an r-graph system");
    auto depth = std::make_shared<int>(4);
    auto o = std::make_shared<std::string>();
    cmd->add_option("--depth", *depth);
    cmd->add_option("-o,--output", *o, "bundle directory (report.txt included)");
    cmd->callback([&action, depth, o, dyadic] {
      action = [depth, o, dyadic] {
        InverseSystem sys =
            dyadic ? build_interval_system(*depth) : build_cantor_system(*depth);
        Report report = demo_report(sys, dyadic);
        if (!o->empty()) save_system(sys, *o);
        emit_report(report, *o, std::cout);
        return kExitTrue;
      };
    });
  }

  // ------------------------------------------------------------------------
  std::vector<const char*> argv;
  argv.push_back("fraisse");
  for (const auto& a : args) argv.push_back(a.c_str());

  // CLI11 wants to write usage text itself; capture and forward
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream buf;
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitTrue;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (!action) {
    err << "error: no subcommand\n";
    return kExitUsage;
  }

  // reports above print to std::cout; redirect it to `out` for the call
  std::streambuf* old = std::cout.rdbuf(out.rdbuf());
  int code;
  try {
    code = action();
  } catch (const ParseError& e) {
    std::cout.rdbuf(old);
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BoundedSearchError& e) {
    std::cout.rdbuf(old);
    err << "inconclusive: " << e.what() << "\n";
    return kExitBounded;
  } catch (const Error& e) {
    std::cout.rdbuf(old);
    std::string what = e.what();
    err << "error: " << what << "\n";
    // verdict-style failures, e.g. a non-transitive r in `quotient`
    if (what.find("not transitive") != std::string::npos) return kExitFalse;
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cout.rdbuf(old);
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::cout.rdbuf(old);
  return code;
}

}  // namespace fraisse::cli
