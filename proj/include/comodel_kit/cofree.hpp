#ifndef COMODEL_KIT_COFREE_HPP
#define COMODEL_KIT_COFREE_HPP

// Polynomial endofunctors, depth-truncated trees over them, the behaviour
// graph on such trees, coalgebra unfolding, and deterministic automata with
// language derivatives.
//
// A tree node is identified by its full path from the root, written
// "sym|i:sym|j:sym": the root symbol followed by (edge index, child symbol)
// segments.  Trees are node sets, prefix-closed and child-complete above
// the depth bound.

#include "costructure.hpp"

namespace ck {

struct node_not_found : std::runtime_error {
  explicit node_not_found(const std::string& p)
      : std::runtime_error("no such node: " + p) {}
};

using PolyFunctor = Signature;

struct FTree {
  int depth = 0;
  std::vector<std::string> nodes;              // sorted paths
  std::map<std::string, std::string> labels;   // optional per-node state labels

  bool operator==(const FTree&) const = default;
  bool operator<(const FTree& o) const {
    return std::tie(depth, nodes, labels) < std::tie(o.depth, o.nodes, o.labels);
  }
  bool has(const std::string& p) const {
    return std::binary_search(nodes.begin(), nodes.end(), p);
  }
};

inline int path_depth(const std::string& p) {
  return static_cast<int>(std::count(p.begin(), p.end(), '|'));
}

inline std::string path_symbol(const std::string& p) {
  auto i = p.find_last_of(':');
  return i == std::string::npos ? p : p.substr(i + 1);
}

// P then Q, where Q is a path in the subtree at P (so Q's root symbol is
// the symbol at P)
inline std::string path_concat(const std::string& P, const std::string& Q) {
  auto i = Q.find('|');
  return i == std::string::npos ? P : P + Q.substr(i);
}

inline CheckReport check_ftree(const PolyFunctor& F, const FTree& T) {
  CheckReport rep;
  int roots = 0;
  for (const auto& n : T.nodes) roots += path_depth(n) == 0;
  if (roots != 1) rep.fail("tree must have exactly one root");
  for (const auto& n : T.nodes) {
    auto k = F.arity(path_symbol(n));
    if (!k) {
      rep.fail("unknown symbol at " + n);
      continue;
    }
    int d = path_depth(n);
    if (d > T.depth) rep.fail("node beyond depth bound: " + n);
    // prefix closure
    if (d > 0) {
      auto cut = n.rfind('|');
      if (!T.has(n.substr(0, cut))) rep.fail("parent missing for " + n);
    }
    // child completeness strictly above the bound
    if (d < T.depth) {
      for (int i = 0; i < *k; ++i) {
        int found = 0;
        std::string pre = n + "|" + std::to_string(i) + ":";
        for (const auto& m : T.nodes) found += m.rfind(pre, 0) == 0 &&
                                               path_depth(m) == d + 1;
        if (found != 1)
          rep.fail("child " + std::to_string(i) + " of " + n +
                   " not uniquely present");
      }
    }
  }
  return rep;
}

inline std::vector<FTree> enumerate_ftrees(const PolyFunctor& F, int d,
                                           size_t cap = 100000) {
  if (d < 0) return {};
  std::vector<FTree> prev;  // depth d-1 trees
  if (d > 0) prev = enumerate_ftrees(F, d - 1, cap);
  std::vector<FTree> out;
  for (const auto& s : F.symbols) {
    // choose a depth-(d-1) subtree per child slot
    std::vector<std::vector<int>> picks{{}};
    for (int i = 0; i < s.arity && d > 0; ++i) {
      std::vector<std::vector<int>> nx;
      for (const auto& p : picks)
        for (size_t j = 0; j < prev.size(); ++j) {
          auto p2 = p;
          p2.push_back(static_cast<int>(j));
          nx.push_back(std::move(p2));
        }
      picks = std::move(nx);
      if (picks.size() > cap) throw explosion("tree enumeration exceeds cap");
    }
    if (d > 0 && s.arity > 0 && prev.empty()) continue;
    for (const auto& p : picks) {
      FTree t;
      t.depth = d;
      t.nodes.push_back(s.name);
      for (int i = 0; i < s.arity && d > 0; ++i) {
        std::string root;
        for (const auto& n : prev[p[i]].nodes)
          if (path_depth(n) == 0) root = n;
        std::string stem = s.name + "|" + std::to_string(i) + ":" + root;
        for (const auto& n : prev[p[i]].nodes)
          t.nodes.push_back(path_concat(stem, n));
      }
      std::sort(t.nodes.begin(), t.nodes.end());
      out.push_back(std::move(t));
      if (out.size() > cap) throw explosion("tree enumeration exceeds cap");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline FTree subtree(const FTree& T, const std::string& P) {
  if (!T.has(P)) throw node_not_found(P);
  FTree out;
  out.depth = T.depth - path_depth(P);
  std::string root = path_symbol(P);
  for (const auto& n : T.nodes) {
    if (n != P && n.rfind(P + "|", 0) != 0) continue;
    std::string moved = root + n.substr(P.size());
    auto l = T.labels.find(n);
    if (l != T.labels.end()) out.labels[moved] = l->second;
    out.nodes.push_back(std::move(moved));
  }
  std::sort(out.nodes.begin(), out.nodes.end());
  return out;
}

inline FTree truncate_tree(const FTree& T, int d) {
  FTree out;
  out.depth = d;
  for (const auto& n : T.nodes) {
    if (path_depth(n) > d) continue;
    auto l = T.labels.find(n);
    if (l != T.labels.end()) out.labels[n] = l->second;
    out.nodes.push_back(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The behaviour graph: depth-d trees, one edge per length-1 path.

struct BehaviourGraph {
  int depth = 0;
  std::vector<FTree> nodes;  // depth-d trees, canonical order
  struct Edge {
    int source;         // index into nodes
    std::string path;   // a length-1 path of the source tree
    FTree target;       // its depth-(d-1) subtree
  };
  std::vector<Edge> edges;
};

inline BehaviourGraph behaviour_graph(const PolyFunctor& F, int d,
                                      size_t cap = 100000) {
  BehaviourGraph g;
  g.depth = d;
  g.nodes = enumerate_ftrees(F, d, cap);
  for (size_t i = 0; i < g.nodes.size(); ++i)
    for (const auto& n : g.nodes[i].nodes)
      if (path_depth(n) == 1)
        g.edges.push_back({static_cast<int>(i), n, subtree(g.nodes[i], n)});
  return g;
}

// The container of depth-bounded trees: shapes are trees of depth <= d,
// positions are their nodes, codomain takes subtrees, and transport is
// path concatenation.  Feeding this to behaviour_category_of_comonad gives
// the truncated free category on the behaviour graph.
inline DirectedContainer ftree_container(const PolyFunctor& F, int d,
                                         size_t cap = 100000) {
  std::vector<FTree> shapes;
  for (int k = 0; k <= d; ++k) {
    auto layer = enumerate_ftrees(F, k, cap);
    shapes.insert(shapes.end(), layer.begin(), layer.end());
  }
  auto name_of = [&](const FTree& t) {
    for (size_t i = 0; i < shapes.size(); ++i)
      if (shapes[i] == t) return "T" + std::to_string(i);
    throw node_not_found("shape for subtree");
  };
  DirectedContainer dc;
  for (size_t i = 0; i < shapes.size(); ++i) {
    std::string sn = "T" + std::to_string(i);
    dc.shapes.push_back(sn);
    for (const auto& p : shapes[i].nodes) {
      std::string pos = sn + "#" + p;
      dc.positions[sn].push_back(pos);
      dc.cod[sn][pos] = name_of(subtree(shapes[i], p));
      if (path_depth(p) == 0) dc.ids[sn] = pos;
    }
  }
  for (size_t i = 0; i < shapes.size(); ++i) {
    std::string sn = "T" + std::to_string(i);
    for (const auto& p : shapes[i].nodes) {
      std::string pos = sn + "#" + p;
      const std::string& tn = dc.cod.at(sn).at(pos);
      size_t t = std::stoul(tn.substr(1));
      for (const auto& q : shapes[t].nodes)
        dc.rho[sn][pos][tn + "#" + q] = sn + "#" + path_concat(p, q);
    }
  }
  return dc;
}

// ---------------------------------------------------------------------------
// Coalgebras and unfolding.

struct Coalgebra {
  PolyFunctor functor;
  std::vector<std::string> states;
  // state -> (symbol, one successor per argument position)
  std::map<std::string, std::pair<std::string, std::vector<std::string>>> step;
};

inline FTree unfold(const Coalgebra& c, const std::string& s, int d) {
  FTree t;
  t.depth = d;
  std::function<void(const std::string&, const std::string&, int)> go =
      [&](const std::string& path, const std::string& st, int rem) {
        t.nodes.push_back(path);
        t.labels[path] = st;
        if (rem == 0) return;
        const auto& [sym, kids] = c.step.at(st);
        (void)sym;
        for (size_t i = 0; i < kids.size(); ++i)
          go(path + "|" + std::to_string(i) + ":" + c.step.at(kids[i]).first,
             kids[i], rem - 1);
      };
  go(c.step.at(s).first, s, d);
  std::sort(t.nodes.begin(), t.nodes.end());
  return t;
}

// ---------------------------------------------------------------------------
// Deterministic automata.

struct DFA {
  std::vector<std::string> alphabet, states;
  std::map<std::string, std::map<std::string, std::string>> trans;
  std::set<std::string> accept;
  std::string start;
};

inline CheckReport check_dfa(const DFA& m) {
  CheckReport rep;
  for (const auto& s : m.states)
    for (const auto& e : m.alphabet) {
      auto it = m.trans.find(s);
      if (it == m.trans.end() || !it->second.count(e))
        rep.fail("missing transition (" + s + "," + e + ")");
    }
  if (std::find(m.states.begin(), m.states.end(), m.start) == m.states.end())
    rep.fail("start state unknown");
  return rep;
}

inline bool dfa_accept(const DFA& m, const std::vector<std::string>& word) {
  std::string s = m.start;
  for (const auto& e : word) s = m.trans.at(s).at(e);
  return m.accept.count(s) > 0;
}

inline DFA dfa_derivative(const DFA& m, const std::string& e) {
  DFA out = m;
  out.start = m.trans.at(m.start).at(e);
  return out;
}

// the automaton as a coalgebra for F(X) = 2 * X^E
inline Coalgebra dfa_to_coalgebra(const DFA& m) {
  Coalgebra c;
  c.functor.symbols = {{"acc", static_cast<int>(m.alphabet.size())},
                       {"rej", static_cast<int>(m.alphabet.size())}};
  c.states = m.states;
  for (const auto& s : m.states) {
    std::vector<std::string> kids;
    for (const auto& e : m.alphabet) kids.push_back(m.trans.at(s).at(e));
    c.step[s] = {m.accept.count(s) ? "acc" : "rej", std::move(kids)};
  }
  return c;
}

}  // namespace ck

#endif
