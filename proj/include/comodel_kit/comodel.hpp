#ifndef COMODEL_KIT_COMODEL_HPP
#define COMODEL_KIT_COMODEL_HPP

// Finite comodels as state machines: the run semantics, equation checking,
// homomorphisms, partition-refinement bisimulation and minimization.

#include <deque>
#include <numeric>
#include <sstream>

#include "theory.hpp"

namespace ck {

struct unknown_state : std::runtime_error {
  explicit unknown_state(const std::string& s)
      : std::runtime_error("unknown state: " + s) {}
};
struct theory_mismatch : std::runtime_error {
  theory_mismatch() : std::runtime_error("comodels are over different theories") {}
};

struct Comodel {
  Theory theory;
  std::vector<std::string> states;
  // per symbol, indexed by state: (argument index, next state)
  std::map<std::string, std::vector<std::pair<int, int>>> coops;

  int state_index(const std::string& name) const {
    for (size_t i = 0; i < states.size(); ++i)
      if (states[i] == name) return static_cast<int>(i);
    throw unknown_state(name);
  }
};

struct FiniteAlgebra {
  Theory theory;
  std::vector<std::string> carrier;
  // per symbol, a total table carrier^k -> carrier (key: argument tuple)
  std::map<std::string, std::map<std::vector<int>, int>> ops;
};

struct CheckReport {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
};

// Eq-19 run semantics: variables stop, operations consult the co-operation.
inline std::pair<std::string, int> run(const Comodel& c, int s, const Term& t) {
  const Term* cur = &t;
  for (;;) {
    if (cur->var) return {cur->head, s};
    auto it = c.coops.find(cur->head);
    if (it == c.coops.end()) throw unknown_symbol(cur->head);
    auto [i, s2] = it->second.at(s);
    s = s2;
    cur = &cur->args.at(i);
  }
}

inline std::pair<std::string, std::string> run(const Comodel& c,
                                               const std::string& state,
                                               const Term& t) {
  auto [a, s] = run(c, c.state_index(state), t);
  return {a, c.states.at(s)};
}

inline CheckReport check_comodel(const Comodel& c) {
  CheckReport rep;
  for (const auto& [sym, table] : c.coops) {
    auto k = c.theory.sig.arity(sym);
    if (!k) {
      rep.fail("co-operation for unknown symbol " + sym);
      continue;
    }
    if (table.size() != c.states.size()) rep.fail("partial table for " + sym);
    for (auto [i, s2] : table)
      if (i < 0 || i >= *k || s2 < 0 || s2 >= static_cast<int>(c.states.size()))
        rep.fail("out-of-range entry in table for " + sym);
  }
  for (const auto& s : c.theory.sig.symbols)
    if (!c.coops.count(s.name)) rep.fail("missing co-operation for " + s.name);
  if (!rep.ok) return rep;
  for (size_t e = 0; e < c.theory.equations.size(); ++e) {
    const Equation& eq = c.theory.equations[e];
    for (size_t s = 0; s < c.states.size(); ++s) {
      auto l = run(c, static_cast<int>(s), eq.lhs);
      auto r = run(c, static_cast<int>(s), eq.rhs);
      if (l != r) {
        std::ostringstream os;
        os << "equation " << (eq.label.empty() ? std::to_string(e) : eq.label)
           << " fails at state " << c.states[s] << ": lhs=(" << l.first << ","
           << c.states[l.second] << ") rhs=(" << r.first << ","
           << c.states[r.second] << ")";
        rep.fail(os.str());
      }
    }
  }
  return rep;
}

inline int eval_algebra(const FiniteAlgebra& alg, const Term& t,
                        const std::map<std::string, int>& env) {
  if (t.var) {
    auto it = env.find(t.head);
    if (it == env.end()) throw unknown_variable(t.head);
    return it->second;
  }
  std::vector<int> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(eval_algebra(alg, a, env));
  auto it = alg.ops.find(t.head);
  if (it == alg.ops.end()) throw unknown_symbol(t.head);
  return it->second.at(args);
}

inline CheckReport check_model(const FiniteAlgebra& alg) {
  CheckReport rep;
  int n = static_cast<int>(alg.carrier.size());
  for (size_t e = 0; e < alg.theory.equations.size(); ++e) {
    const Equation& eq = alg.theory.equations[e];
    std::vector<int> env(eq.vars.size(), 0);
    for (;;) {
      std::map<std::string, int> m;
      for (size_t i = 0; i < eq.vars.size(); ++i) m[eq.vars[i]] = env[i];
      int l = eval_algebra(alg, eq.lhs, m);
      int r = eval_algebra(alg, eq.rhs, m);
      if (l != r) {
        std::ostringstream os;
        os << "equation " << (eq.label.empty() ? std::to_string(e) : eq.label)
           << " fails under environment (";
        for (size_t i = 0; i < env.size(); ++i)
          os << (i ? "," : "") << eq.vars[i] << "=" << alg.carrier[env[i]];
        os << "): " << alg.carrier[l] << " != " << alg.carrier[r];
        rep.fail(os.str());
      }
      size_t i = 0;
      while (i < env.size() && ++env[i] == n) env[i++] = 0;
      if (i == env.size()) break;
    }
  }
  return rep;
}

inline bool is_homomorphism(const std::map<std::string, std::string>& h,
                            const Comodel& c1, const Comodel& c2) {
  std::vector<int> hm(c1.states.size());
  for (size_t s = 0; s < c1.states.size(); ++s) {
    auto it = h.find(c1.states[s]);
    if (it == h.end()) return false;
    hm[s] = c2.state_index(it->second);
  }
  for (const auto& [sym, t1] : c1.coops) {
    auto it2 = c2.coops.find(sym);
    if (it2 == c2.coops.end()) return false;
    for (size_t s = 0; s < c1.states.size(); ++s) {
      auto [i, s2] = t1[s];
      auto [j, u2] = it2->second[hm[s]];
      if (i != j || u2 != hm[s2]) return false;
    }
  }
  return true;
}

// Largest bisimulation between the state sets of c1 and c2 (same theory),
// by partition refinement on the disjoint union.  Blocks are identified by
// their minimal member index in the disjoint union (c1 first).
struct StatePartition {
  // block id per disjoint-union index; c1 states come first
  std::vector<int> block;
  size_t split = 0;  // |c1.states|
  int block_of(size_t which, size_t s) const {
    return block[which == 0 ? s : split + s];
  }
};

inline StatePartition largest_bisimulation(const Comodel& c1, const Comodel& c2) {
  if (!(c1.theory.sig == c2.theory.sig)) throw theory_mismatch();
  size_t n1 = c1.states.size(), n = n1 + c2.states.size();
  std::vector<std::string> syms;
  for (const auto& s : c1.theory.sig.symbols) syms.push_back(s.name);
  auto coop = [&](size_t u, const std::string& sym) {
    if (u < n1) {
      auto [i, s2] = c1.coops.at(sym)[u];
      return std::pair<int, size_t>(i, static_cast<size_t>(s2));
    }
    auto [i, s2] = c2.coops.at(sym)[u - n1];
    return std::pair<int, size_t>(i, n1 + static_cast<size_t>(s2));
  };
  std::vector<int> block(n, 0);
  for (;;) {
    // signature of a state: per symbol, (output index, successor block)
    std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> ids;
    std::vector<int> next(n);
    for (size_t u = 0; u < n; ++u) {
      std::vector<std::pair<int, int>> sig;
      for (const auto& sym : syms) {
        auto [i, v] = coop(u, sym);
        sig.emplace_back(i, block[v]);
      }
      auto key = std::make_pair(block[u], std::move(sig));
      auto it = ids.find(key);
      if (it == ids.end())
        it = ids.emplace(std::move(key), static_cast<int>(u)).first;
      next[u] = it->second;
    }
    // canonical ids: minimal member index
    if (next == block) break;
    block = std::move(next);
  }
  // renumber so every block id is its minimal member
  std::map<int, int> mini;
  for (size_t u = 0; u < n; ++u)
    if (!mini.count(block[u])) mini[block[u]] = static_cast<int>(u);
  for (auto& b : block) b = mini[b];
  return {std::move(block), n1};
}

inline bool bisimilar(const Comodel& c1, const std::string& s1,
                      const Comodel& c2, const std::string& s2) {
  auto part = largest_bisimulation(c1, c2);
  return part.block_of(0, c1.state_index(s1)) ==
         part.block_of(1, c2.state_index(s2));
}

struct Minimized {
  Comodel comodel;
  std::map<std::string, std::string> projection;
};

inline Minimized minimize(const Comodel& c) {
  auto part = largest_bisimulation(c, c);
  std::vector<int> reps;  // block id (= minimal member) per new state
  std::map<int, int> newidx;
  for (size_t s = 0; s < c.states.size(); ++s) {
    int b = part.block[s];
    if (!newidx.count(b)) {
      newidx[b] = static_cast<int>(reps.size());
      reps.push_back(b);
    }
  }
  Minimized out;
  out.comodel.theory = c.theory;
  for (int b : reps) out.comodel.states.push_back(c.states[b]);
  for (const auto& [sym, table] : c.coops) {
    auto& nt = out.comodel.coops[sym];
    for (int b : reps) {
      auto [i, s2] = table[b];
      nt.emplace_back(i, newidx[part.block[s2]]);
    }
  }
  for (size_t s = 0; s < c.states.size(); ++s)
    out.projection[c.states[s]] = c.states[part.block[s]];
  return out;
}

// Cosemantics on comodels: reinterpret a target-theory comodel as a
// source-theory comodel by running the translated generator terms.
inline Comodel restrict_along(const Interpretation& f, const Comodel& c) {
  Comodel out;
  out.theory = f.source;
  out.states = c.states;
  for (const auto& sym : f.source.sig.symbols) {
    Term t = Term::op(sym.name, detail::vars_upto(sym.arity));
    Term tf = translate(f, t);
    auto& table = out.coops[sym.name];
    for (size_t s = 0; s < c.states.size(); ++s) {
      auto [a, s2] = run(c, static_cast<int>(s), tf);
      table.emplace_back(std::stoi(a), s2);
    }
  }
  return out;
}

// Semantic interpretation check: all translated source equations must hold
// in every witness comodel of the target theory.
inline CheckReport check_interpretation(const Interpretation& f,
                                        const std::vector<Comodel>& witnesses) {
  CheckReport rep;
  for (size_t w = 0; w < witnesses.size(); ++w) {
    const Comodel& c = witnesses[w];
    for (size_t e = 0; e < f.source.equations.size(); ++e) {
      const Equation& eq = f.source.equations[e];
      Term l = translate(f, eq.lhs), r = translate(f, eq.rhs);
      for (size_t s = 0; s < c.states.size(); ++s) {
        auto lo = run(c, static_cast<int>(s), l);
        auto ro = run(c, static_cast<int>(s), r);
        if (lo != ro) {
          std::ostringstream os;
          os << "witness " << w << ": source equation "
             << (eq.label.empty() ? std::to_string(e) : eq.label)
             << " fails at state " << c.states[s];
          rep.fail(os.str());
        }
      }
    }
  }
  return rep;
}

}  // namespace ck

#endif
