// comodel-kit command line front end.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "comodel_kit/json_io.hpp"

using namespace ck;
namespace fs = std::filesystem;

namespace {

struct Globals {
  int seed = 0;
  int max_states = 10000;
  int max_objects = 200;
  int max_depth = 6;
  bool dot = false;
};

void diag(const std::string& kind, const std::string& msg) {
  std::cerr << json{{"error", kind}, {"message", msg}}.dump() << "\n";
}

int report_exit(const CheckReport& rep) {
  std::cout << report_to_json(rep).dump() << "\n";
  return rep.ok ? 0 : 1;
}

json value_json(const std::string& v) {
  // numeric outputs read as numbers
  if (!v.empty() &&
      v.find_first_not_of("0123456789-") == std::string::npos &&
      (v[0] != '-' || v.size() > 1))
    return json(std::stol(v));
  return json(v);
}

int cmd_run(const Globals&, const fs::path& comodel_path,
            const std::string& state, const fs::path& term_path) {
  Comodel c = load_comodel(comodel_path);
  Term t = term_from_json(load_json(term_path));
  auto [v, s] = run(c, state, t);
  std::cout << json{{"value", value_json(v)}, {"state", s}}.dump() << "\n";
  return 0;
}

int cmd_check_laws(const Globals& g, const fs::path& comodel_path,
                   const fs::path& category_path, const fs::path& cofunctor_path,
                   const fs::path& container_path, const fs::path& dfa_path) {
  if (!comodel_path.empty()) return report_exit(check_comodel(load_comodel(comodel_path)));
  if (!category_path.empty())
    return report_exit(check_category(category_from_json(load_json(category_path))));
  if (!cofunctor_path.empty())
    return report_exit(cofunctor_check(
        cofunctor_from_json(load_json(cofunctor_path), cofunctor_path.parent_path())));
  if (!container_path.empty())
    return report_exit(
        check_directed_container(container_from_json(load_json(container_path))));
  if (!dfa_path.empty()) return report_exit(check_dfa(dfa_from_json(load_json(dfa_path))));
  (void)g;
  diag("input", "check-laws needs one of --comodel/--category/--cofunctor/--container/--dfa");
  return 2;
}

int cmd_bisim(const fs::path& c1p, const std::string& s1, const fs::path& c2p,
              const std::string& s2) {
  Comodel c1 = load_comodel(c1p), c2 = load_comodel(c2p);
  std::cout << json{{"bisimilar", bisimilar(c1, s1, c2, s2)}}.dump() << "\n";
  return 0;
}

int cmd_minimize(const fs::path& cp) {
  Minimized m = minimize(load_comodel(cp));
  std::cout << json(m.projection).dump() << "\n";
  return 0;
}

int cmd_behave(const fs::path& cp, const std::string& state) {
  Comodel c = load_comodel(cp);
  std::cout << behaviour_to_json(behaviour_of(c, state)).dump() << "\n";
  return 0;
}

int cmd_classify(const Globals& g, const fs::path& theory_path,
                 const fs::path& behaviour_path) {
  Theory th = load_theory(theory_path);
  BehaviourObject beta = behaviour_from_json(load_json(behaviour_path));
  LazyComodel lc = classifying_comodel(th, beta);
  auto states = enumerate_states(lc, g.max_states);
  json out;
  out["universal"] = behaviour_to_json(behaviour_of(lc, lc.universal));
  out["count"] = states.size();
  json bs = json::array();
  for (const auto& s : states) bs.push_back(behaviour_to_json(behaviour_of(lc, s)));
  out["behaviours"] = std::move(bs);
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_behaviour_cat(const Globals& g, const fs::path& theory_path, int bound) {
  Theory th = load_theory(theory_path);
  BehaviourCategory cat = behaviour_category(th);
  if (g.dot) {
    std::cout << behaviour_category_to_dot(cat, g.max_objects, bound);
    return 0;
  }
  auto objs = cat.objects(g.max_objects);
  json out;
  json jo = json::array();
  for (const auto& b : objs) jo.push_back(behaviour_to_json(b));
  out["objects"] = std::move(jo);
  json homs = json::array();
  for (size_t i = 0; i < objs.size(); ++i)
    for (size_t j = 0; j < objs.size(); ++j) {
      auto h = cat.hom(objs[i], objs[j], bound);
      if (!h.empty())
        homs.push_back({{"source", i}, {"target", j}, {"count", h.size()}});
    }
  out["homs"] = std::move(homs);
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_cofunctor(const Globals& g, const fs::path& interp_path, int bound) {
  Interpretation f = load_interpretation(interp_path);
  CofunctorView cf = induced_cofunctor(f);
  BehaviourCategory up = behaviour_category(f.target);
  BehaviourCategory down = behaviour_category(f.source);
  int nobj = std::min(g.max_objects, 12);
  return report_exit(check_cofunctor_view(cf, up, down, nobj, bound));
}

int cmd_presheaf(const fs::path& category_path) {
  SmallCategory B = category_from_json(load_json(category_path));
  CheckReport rep = check_category(B);
  if (!rep.ok) return report_exit(rep);
  return report_exit(presheaf_law_report(B, {"a0", "a1"}));
}

int cmd_dtu(const fs::path& category_path, const fs::path& term_path) {
  SmallCategory B = category_from_json(load_json(category_path));
  if (term_path.empty()) {
    std::cout << theory_to_json(dtu_theory(B)).dump() << "\n";
    return 0;
  }
  Term t = term_from_json(load_json(term_path));
  PresheafMonadElement e = dtu_normal_form(B, t);
  json at = json::object();
  for (const auto& [b, fa] : e.at) at[b] = {{"arrow", fa.first}, {"value", fa.second}};
  std::cout << json{{"normal", std::move(at)},
                    {"term", term_to_json(dtu_embed(B, e))}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_costructure(const Globals& g, const fs::path& container_path,
                    const fs::path& category_path, bool idempotency) {
  if (idempotency) {
    if (category_path.empty()) {
      diag("input", "--idempotency needs --category");
      return 2;
    }
    return report_exit(idempotency_check(category_from_json(load_json(category_path))));
  }
  if (container_path.empty()) {
    diag("input", "costructure needs --container or --category --idempotency");
    return 2;
  }
  DirectedContainer dc = container_from_json(load_json(container_path));
  CheckReport rep = check_directed_container(dc);
  if (!rep.ok) return report_exit(rep);
  SmallCategory B = behaviour_category_of_comonad(dc);
  if (g.dot) {
    std::cout << category_to_dot(B);
    return 0;
  }
  std::cout << category_to_json(B).dump() << "\n";
  return 0;
}

int cmd_cofree(const Globals& g, const fs::path& functor_path, int depth,
               bool graph, const fs::path& coalgebra_path,
               const std::string& state) {
  if (depth > g.max_depth) {
    diag("input", "--depth exceeds --max-depth");
    return 2;
  }
  if (!coalgebra_path.empty()) {
    Coalgebra c = coalgebra_from_json(load_json(coalgebra_path));
    FTree t = unfold(c, state, depth);
    if (g.dot) {
      std::cout << ftree_to_dot(t);
      return 0;
    }
    std::cout << json{{"depth", t.depth}, {"nodes", t.nodes}, {"labels", t.labels}}.dump()
              << "\n";
    return 0;
  }
  if (functor_path.empty()) {
    diag("input", "cofree needs --functor or --coalgebra");
    return 2;
  }
  json fj = load_json(functor_path);
  PolyFunctor F;
  for (const auto& o : fj.at("ops"))
    F.symbols.push_back({o.at("name").get<std::string>(), o.at("arity").get<int>()});
  if (graph) {
    BehaviourGraph bg = behaviour_graph(F, depth);
    json edges = json::array();
    for (const auto& e : bg.edges)
      edges.push_back({{"source", e.source},
                       {"path", e.path},
                       {"target_nodes", e.target.nodes}});
    std::cout << json{{"depth", bg.depth},
                      {"node_count", bg.nodes.size()},
                      {"edges", std::move(edges)}}
                     .dump()
              << "\n";
    return 0;
  }
  auto trees = enumerate_ftrees(F, depth);
  if (g.dot && !trees.empty()) {
    std::cout << ftree_to_dot(trees.front());
    return 0;
  }
  json out = json::array();
  for (const auto& t : trees) out.push_back(t.nodes);
  std::cout << json{{"depth", depth}, {"count", trees.size()}, {"trees", std::move(out)}}.dump()
            << "\n";
  return 0;
}

Magma free_magma() {
  Magma m;
  m.unit = "a";
  m.mult = [](const std::string& x, const std::string& y) {
    return "(" + x + "*" + y + ")";
  };
  return m;
}

int cmd_dyck(int census, const std::string& check, long from, long to,
             const std::string& run_word) {
  if (census >= 0) {
    std::cout << json{{"n", census}, {"count", dyck_census(census)}}.dump() << "\n";
    return 0;
  }
  if (!check.empty()) {
    std::cout << json{{"affine", affine_dyck_check(check, from, to)}}.dump() << "\n";
    return 0;
  }
  if (!run_word.empty()) {
    std::cout << json{{"result", dyck_run_stack(run_word, free_magma())}}.dump() << "\n";
    return 0;
  }
  diag("input", "dyck needs one of --census/--check/--run");
  return 2;
}

int cmd_dfa_derive(const fs::path& dfa_path, const std::string& letter) {
  DFA m = dfa_from_json(load_json(dfa_path));
  CheckReport rep = check_dfa(m);
  if (!rep.ok) {
    std::cout << report_to_json(rep).dump() << "\n";
    return 1;
  }
  std::cout << dfa_to_json(dfa_derivative(m, letter)).dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"algebraic theories, comodels, and their behaviour"};
  app.require_subcommand(1);

  Globals g;
  if (const char* env = std::getenv("COMODEL_KIT_SEED")) g.seed = std::atoi(env);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--max-states", g.max_states, "state enumeration cap");
  app.add_option("--max-objects", g.max_objects, "object enumeration cap");
  app.add_option("--max-depth", g.max_depth, "tree depth cap");
  app.add_flag("--dot", g.dot, "emit DOT instead of JSON");

  fs::path comodel_p, term_p, category_p, cofunctor_p, container_p, dfa_p,
      theory_p, behaviour_p, interp_p, c1_p, c2_p, functor_p, coalgebra_p;
  std::string state, s1, s2, letter, dyck_check, dyck_run_w;
  int bound = 2, depth = 3, census = -1;
  long from = 0, to = 0;
  bool graph = false, idempotency = false;

  auto* run_c = app.add_subcommand("run", "run a term in a comodel");
  run_c->add_option("--comodel", comodel_p)->required();
  run_c->add_option("--state", state)->required();
  run_c->add_option("--term", term_p)->required();

  auto* chk = app.add_subcommand("check-laws", "check equational laws");
  chk->add_option("--comodel", comodel_p);
  chk->add_option("--category", category_p);
  chk->add_option("--cofunctor", cofunctor_p);
  chk->add_option("--container", container_p);
  chk->add_option("--dfa", dfa_p);

  auto* bis = app.add_subcommand("bisim", "decide behavioural equivalence");
  bis->add_option("--c1", c1_p)->required();
  bis->add_option("--s1", s1)->required();
  bis->add_option("--c2", c2_p)->required();
  bis->add_option("--s2", s2)->required();

  auto* mini = app.add_subcommand("minimize", "quotient by bisimilarity");
  mini->add_option("--comodel", comodel_p)->required();

  auto* beh = app.add_subcommand("behave", "behaviour of a state");
  beh->add_option("--comodel", comodel_p)->required();
  beh->add_option("--state", state)->required();

  auto* cls = app.add_subcommand("classify", "classifying comodel of a behaviour");
  cls->add_option("--theory", theory_p)->required();
  cls->add_option("--behaviour", behaviour_p)->required();

  auto* bc = app.add_subcommand("behaviour-cat", "behaviour category of a theory");
  bc->add_option("--theory", theory_p)->required();
  bc->add_option("--bound", bound);

  auto* cof = app.add_subcommand("cofunctor", "induced cofunctor of an interpretation");
  cof->add_option("--interp", interp_p)->required();
  cof->add_option("--bound", bound);

  auto* psh = app.add_subcommand("presheaf", "presheaf (co)monad law suite");
  psh->add_option("--category", category_p)->required();

  auto* dtu = app.add_subcommand("dtu", "update-monad presentation of a category");
  dtu->add_option("--category", category_p)->required();
  dtu->add_option("--term", term_p);

  auto* cos = app.add_subcommand("costructure", "category of a container comonad");
  cos->add_option("--container", container_p);
  cos->add_option("--category", category_p);
  cos->add_flag("--idempotency", idempotency);

  auto* cfr = app.add_subcommand("cofree", "trees over a polynomial functor");
  cfr->add_option("--functor", functor_p);
  cfr->add_option("--depth", depth);
  cfr->add_flag("--graph", graph);
  cfr->add_option("--coalgebra", coalgebra_p);
  cfr->add_option("--state", state);

  auto* dy = app.add_subcommand("dyck", "balanced-word utilities");
  dy->add_option("--census", census);
  dy->add_option("--check", dyck_check);
  dy->add_option("--from", from);
  dy->add_option("--to", to);
  dy->add_option("--run", dyck_run_w);

  auto* dfa = app.add_subcommand("dfa-derive", "language derivative of an automaton");
  dfa->add_option("--dfa", dfa_p)->required();
  dfa->add_option("--letter", letter)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    diag("usage", e.what());
    return 2;
  }

  try {
    if (*run_c) return cmd_run(g, comodel_p, state, term_p);
    if (*chk) return cmd_check_laws(g, comodel_p, category_p, cofunctor_p, container_p, dfa_p);
    if (*bis) return cmd_bisim(c1_p, s1, c2_p, s2);
    if (*mini) return cmd_minimize(comodel_p);
    if (*beh) return cmd_behave(comodel_p, state);
    if (*cls) return cmd_classify(g, theory_p, behaviour_p);
    if (*bc) return cmd_behaviour_cat(g, theory_p, bound);
    if (*cof) return cmd_cofunctor(g, interp_p, bound);
    if (*psh) return cmd_presheaf(category_p);
    if (*dtu) return cmd_dtu(category_p, term_p);
    if (*cos) return cmd_costructure(g, container_p, category_p, idempotency);
    if (*cfr) return cmd_cofree(g, functor_p, depth, graph, coalgebra_p, state);
    if (*dy) return cmd_dyck(census, dyck_check, from, to, dyck_run_w);
    if (*dfa) return cmd_dfa_derive(dfa_p, letter);
  } catch (const law_violation& e) {
    diag("law", e.what());
    return 1;
  } catch (const input_error& e) {
    diag("input", e.what());
    return 2;
  } catch (const json::exception& e) {
    diag("json", e.what());
    return 2;
  } catch (const std::exception& e) {
    diag("input", e.what());
    return 2;
  }
  return 2;
}
