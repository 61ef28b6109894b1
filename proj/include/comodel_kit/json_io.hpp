#ifndef COMODEL_KIT_JSON_IO_HPP
#define COMODEL_KIT_JSON_IO_HPP

// JSON (de)serialization for every value the CLI touches, plus DOT export.

#include <filesystem>
#include <fstream>

#include "behaviour.hpp"
#include "cofree.hpp"
#include "json.hpp"

namespace ck {

using json = nlohmann::json;

struct input_error : std::runtime_error {
  explicit input_error(const std::string& m) : std::runtime_error(m) {}
};

inline json load_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw input_error("cannot open " + p.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw input_error(p.string() + ": " + e.what());
  }
  return j;
}

// ---------------------------------------------------------------------------
// Terms.

inline Term term_from_json(const json& j) {
  if (j.contains("var")) return Term::v(j.at("var").get<std::string>());
  if (!j.contains("op")) throw input_error("term needs \"var\" or \"op\"");
  std::vector<Term> args;
  if (j.contains("args"))
    for (const auto& a : j.at("args")) args.push_back(term_from_json(a));
  return Term::op(j.at("op").get<std::string>(), std::move(args));
}

inline json term_to_json(const Term& t) {
  if (t.var) return json{{"var", t.head}};
  json args = json::array();
  for (const auto& a : t.args) args.push_back(term_to_json(a));
  return json{{"op", t.head}, {"args", std::move(args)}};
}

// ---------------------------------------------------------------------------
// Theories and interpretations.  A theory file either spells out ops and
// equations or names a built-in with its parameters.

inline Theory theory_from_json(const json& j) {
  if (j.contains("builtin")) {
    BuiltinParams p;
    if (j.contains("values")) p.values = j.at("values").get<std::vector<std::string>>();
    if (j.contains("locations"))
      p.locations = j.at("locations").get<std::vector<std::string>>();
    if (j.contains("loc_values"))
      p.loc_values =
          j.at("loc_values").get<std::map<std::string, std::vector<std::string>>>();
    if (j.contains("height_cutoff")) p.height_cutoff = j.at("height_cutoff").get<int>();
    return builtin_theory(j.at("builtin").get<std::string>(), p);
  }
  Theory th;
  for (const auto& o : j.at("ops"))
    th.sig.symbols.push_back(
        {o.at("name").get<std::string>(), o.at("arity").get<int>()});
  if (j.contains("equations"))
    for (const auto& e : j.at("equations"))
      th.equations.push_back({e.at("vars").get<std::vector<std::string>>(),
                              term_from_json(e.at("lhs")),
                              term_from_json(e.at("rhs")),
                              e.value("label", std::string{})});
  return th;
}

inline json theory_to_json(const Theory& th) {
  json ops = json::array(), eqs = json::array();
  for (const auto& s : th.sig.symbols)
    ops.push_back({{"name", s.name}, {"arity", s.arity}});
  for (const auto& e : th.equations) {
    json je{{"vars", e.vars},
            {"lhs", term_to_json(e.lhs)},
            {"rhs", term_to_json(e.rhs)}};
    if (!e.label.empty()) je["label"] = e.label;
    eqs.push_back(std::move(je));
  }
  return json{{"ops", std::move(ops)}, {"equations", std::move(eqs)}};
}

inline Theory load_theory(const std::filesystem::path& p) {
  return theory_from_json(load_json(p));
}

inline Interpretation load_interpretation(const std::filesystem::path& p) {
  json j = load_json(p);
  Interpretation f;
  auto dir = p.parent_path();
  f.source = load_theory(dir / j.at("source").get<std::string>());
  f.target = load_theory(dir / j.at("target").get<std::string>());
  for (const auto& [op, t] : j.at("assign").items())
    f.assign[op] = term_from_json(t);
  return f;
}

// ---------------------------------------------------------------------------
// Comodels.

inline Comodel comodel_from_json(const json& j,
                                 const std::filesystem::path& dir) {
  Comodel c;
  c.theory = load_theory(dir / j.at("theory").get<std::string>());
  c.states = j.at("states").get<std::vector<std::string>>();
  for (const auto& [op, table] : j.at("coops").items()) {
    auto& t = c.coops[op];
    t.resize(c.states.size(), {0, 0});
    for (const auto& [state, cell] : table.items()) {
      int s = c.state_index(state);
      t[s] = {cell.at(0).get<int>(), c.state_index(cell.at(1).get<std::string>())};
    }
  }
  return c;
}

inline Comodel load_comodel(const std::filesystem::path& p) {
  return comodel_from_json(load_json(p), p.parent_path());
}

// ---------------------------------------------------------------------------
// Categories, cofunctors, containers, automata.

inline SmallCategory category_from_json(const json& j) {
  SmallCategory B;
  B.objects = j.at("objects").get<std::vector<std::string>>();
  for (const auto& a : j.at("arrows"))
    B.arrows.push_back({a.at("name").get<std::string>(),
                        a.at("dom").get<std::string>(),
                        a.at("cod").get<std::string>()});
  B.ids = j.at("ids").get<std::map<std::string, std::string>>();
  if (j.contains("comp"))
    for (const auto& [g, row] : j.at("comp").items())
      for (const auto& [f, gf] : row.items())
        B.comp[{g, f}] = gf.get<std::string>();
  return B;
}

inline json category_to_json(const SmallCategory& B) {
  json arrows = json::array();
  for (const auto& a : B.arrows)
    arrows.push_back({{"name", a.name}, {"dom", a.dom}, {"cod", a.cod}});
  json comp = json::object();
  for (const auto& [gf, h] : B.comp) comp[gf.first][gf.second] = h;
  return json{{"objects", B.objects},
              {"arrows", std::move(arrows)},
              {"ids", B.ids},
              {"comp", std::move(comp)}};
}

inline Cofunctor cofunctor_from_json(const json& j,
                                     const std::filesystem::path& dir) {
  Cofunctor F;
  F.src = category_from_json(load_json(dir / j.at("src").get<std::string>()));
  F.dst = category_from_json(load_json(dir / j.at("dst").get<std::string>()));
  F.obmap = j.at("obmap").get<std::map<std::string, std::string>>();
  for (const auto& [b, row] : j.at("hom").items())
    F.hom[b] = row.get<std::map<std::string, std::string>>();
  return F;
}

inline DirectedContainer container_from_json(const json& j) {
  DirectedContainer dc;
  dc.shapes = j.at("shapes").get<std::vector<std::string>>();
  dc.positions =
      j.at("positions").get<std::map<std::string, std::vector<std::string>>>();
  dc.ids = j.at("ids").get<std::map<std::string, std::string>>();
  for (const auto& [b, row] : j.at("cod").items())
    dc.cod[b] = row.get<std::map<std::string, std::string>>();
  for (const auto& [b, row] : j.at("rho").items())
    for (const auto& [f, inner] : row.items())
      dc.rho[b][f] = inner.get<std::map<std::string, std::string>>();
  return dc;
}

inline json container_to_json(const DirectedContainer& dc) {
  json cod = json::object(), rho = json::object();
  for (const auto& [b, row] : dc.cod) cod[b] = row;
  for (const auto& [b, row] : dc.rho)
    for (const auto& [f, inner] : row) rho[b][f] = inner;
  return json{{"shapes", dc.shapes},
              {"positions", dc.positions},
              {"ids", dc.ids},
              {"cod", std::move(cod)},
              {"rho", std::move(rho)}};
}

inline DFA dfa_from_json(const json& j) {
  DFA m;
  m.alphabet = j.at("alphabet").get<std::vector<std::string>>();
  m.states = j.at("states").get<std::vector<std::string>>();
  for (const auto& [s, row] : j.at("trans").items())
    m.trans[s] = row.get<std::map<std::string, std::string>>();
  for (const auto& s : j.at("accept")) m.accept.insert(s.get<std::string>());
  m.start = j.at("start").get<std::string>();
  return m;
}

inline json dfa_to_json(const DFA& m) {
  json trans = json::object();
  for (const auto& [s, row] : m.trans) trans[s] = row;
  return json{{"alphabet", m.alphabet},
              {"states", m.states},
              {"trans", std::move(trans)},
              {"accept", std::vector<std::string>(m.accept.begin(), m.accept.end())},
              {"start", m.start}};
}

inline Coalgebra coalgebra_from_json(const json& j) {
  Coalgebra c;
  for (const auto& o : j.at("functor").at("ops"))
    c.functor.symbols.push_back(
        {o.at("name").get<std::string>(), o.at("arity").get<int>()});
  c.states = j.at("states").get<std::vector<std::string>>();
  for (const auto& [s, row] : j.at("step").items())
    c.step[s] = {row.at("sym").get<std::string>(),
                 row.at("kids").get<std::vector<std::string>>()};
  return c;
}

// ---------------------------------------------------------------------------
// Behaviour objects.

inline json behaviour_to_json(const BehaviourObject& b) {
  using K = BehaviourObject::Kind;
  switch (b.kind) {
    case K::InputStream:
      return {{"kind", "input-stream"}, {"prefix", b.prefix}, {"cycle", b.cycle}};
    case K::OutputPoint:
      return {{"kind", "output-point"}};
    case K::ROValue:
      return {{"kind", "ro-value"}, {"value", b.value}};
    case K::StateValue:
      return {{"kind", "state-value"}, {"value", b.value}};
    case K::RevInputStream:
      return {{"kind", "rev-input-stream"},
              {"prefix", b.prefix},
              {"cycle", b.cycle}};
    case K::StackWord: {
      json j{{"kind", "stack-word"}, {"entries", b.prefix}};
      if (!b.cycle.empty()) j["cycle"] = b.cycle;
      return j;
    }
    case K::DyckHeight:
      if (b.height < 0) return {{"kind", "dyck-height"}, {"height", "inf"}};
      return {{"kind", "dyck-height"}, {"height", b.height}};
    case K::StoreTuple:
      return {{"kind", "store-tuple"}, {"assign", b.tuple}};
    case K::TapeBiStream:
      return {{"kind", "tape"},
              {"left", b.tape_left},
              {"core", b.tape_core},
              {"right", b.tape_right},
              {"base", b.tape_base}};
  }
  throw input_error("unreachable");
}

inline BehaviourObject behaviour_from_json(const json& j) {
  std::string k = j.at("kind").get<std::string>();
  if (k == "input-stream")
    return BehaviourObject::input_stream(
        j.at("prefix").get<std::vector<std::string>>(),
        j.at("cycle").get<std::vector<std::string>>());
  if (k == "output-point") return BehaviourObject::output_point();
  if (k == "ro-value")
    return BehaviourObject::ro_value(j.at("value").get<std::string>());
  if (k == "state-value")
    return BehaviourObject::state_value(j.at("value").get<std::string>());
  if (k == "rev-input-stream")
    return BehaviourObject::rev_input_stream(
        j.at("prefix").get<std::vector<std::string>>(),
        j.at("cycle").get<std::vector<std::string>>());
  if (k == "stack-word")
    return BehaviourObject::stack_word(
        j.at("entries").get<std::vector<std::string>>(),
        j.contains("cycle") ? j.at("cycle").get<std::vector<std::string>>()
                            : std::vector<std::string>{});
  if (k == "dyck-height") {
    if (j.at("height").is_string()) return BehaviourObject::dyck_height(-1);
    return BehaviourObject::dyck_height(j.at("height").get<long>());
  }
  if (k == "store-tuple")
    return BehaviourObject::store_tuple(
        j.at("assign").get<std::map<std::string, std::string>>());
  if (k == "tape")
    return BehaviourObject::tape(j.at("left").get<std::vector<long>>(),
                                 j.at("core").get<std::vector<long>>(),
                                 j.at("right").get<std::vector<long>>(),
                                 j.at("base").get<long>());
  throw input_error("unknown behaviour kind: " + k);
}

inline json report_to_json(const CheckReport& rep) {
  return json{{"ok", rep.ok}, {"failures", rep.failures}};
}

// ---------------------------------------------------------------------------
// DOT.

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

inline std::string category_to_dot(const SmallCategory& B) {
  std::string out = "digraph category {\n";
  for (const auto& o : B.objects)
    out += "  \"" + dot_escape(o) + "\";\n";
  for (const auto& a : B.arrows) {
    if (B.is_id(a.name)) continue;
    out += "  \"" + dot_escape(a.dom) + "\" -> \"" + dot_escape(a.cod) +
           "\" [label=\"" + dot_escape(a.name) + "\"];\n";
  }
  out += "}\n";
  return out;
}

inline std::string behaviour_category_to_dot(const BehaviourCategory& cat,
                                             int max_objects, int bound) {
  auto objs = cat.objects(max_objects);
  auto label = [](const BehaviourObject& b) {
    return behaviour_to_json(b).dump();
  };
  std::string out = "digraph behaviours {\n";
  for (const auto& b : objs) out += "  \"" + dot_escape(label(b)) + "\";\n";
  for (const auto& b1 : objs)
    for (const auto& b2 : objs)
      for (const auto& m : cat.hom(b1, b2, bound)) {
        if (m == cat.id(b1) && b1 == b2) continue;
        std::string el;
        switch (m.kind) {
          case BehaviourMorphism::Kind::Shift:
            el = std::to_string(m.shift);
            break;
          case BehaviourMorphism::Kind::Word:
            for (const auto& w : m.word) el += (el.empty() ? "" : ".") + w;
            break;
          case BehaviourMorphism::Kind::DyckWord:
            el = m.dyck;
            break;
          case BehaviourMorphism::Kind::Unique:
            el = "!";
            break;
        }
        out += "  \"" + dot_escape(label(b1)) + "\" -> \"" +
               dot_escape(label(b2)) + "\" [label=\"" + dot_escape(el) +
               "\"];\n";
      }
  out += "}\n";
  return out;
}

inline std::string ftree_to_dot(const FTree& t) {
  std::string out = "digraph ftree {\n";
  for (const auto& n : t.nodes) {
    std::string lab = path_symbol(n);
    auto it = t.labels.find(n);
    if (it != t.labels.end()) lab += " / " + it->second;
    out += "  \"" + dot_escape(n) + "\" [label=\"" + dot_escape(lab) + "\"];\n";
    auto cut = n.rfind('|');
    if (cut != std::string::npos)
      out += "  \"" + dot_escape(n.substr(0, cut)) + "\" -> \"" +
             dot_escape(n) + "\";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace ck

#endif
