#ifndef COMODEL_KIT_THEORY_HPP
#define COMODEL_KIT_THEORY_HPP

// Signatures, terms, substitution, equational theories and interpretations,
// plus the registry of built-in effect theories (input, output, state, ...).

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ck {

struct unknown_variable : std::runtime_error {
  explicit unknown_variable(const std::string& v)
      : std::runtime_error("unknown variable: " + v) {}
};
struct unknown_symbol : std::runtime_error {
  explicit unknown_symbol(const std::string& s)
      : std::runtime_error("unknown symbol: " + s) {}
};
struct bad_params : std::runtime_error {
  explicit bad_params(const std::string& m) : std::runtime_error(m) {}
};
struct ill_formed_term : std::runtime_error {
  explicit ill_formed_term(const std::string& m) : std::runtime_error(m) {}
};
struct not_builtin : std::runtime_error {
  explicit not_builtin(const std::string& m) : std::runtime_error(m) {}
};
struct explosion : std::runtime_error {
  explicit explosion(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------------------
// Terms: either a variable or an operation applied to one child per arity
// index.  Plain value semantics; terms are small at desk scale.

struct Term {
  bool var = true;
  std::string head;          // variable name or operation symbol
  std::vector<Term> args;    // empty for variables

  static Term v(std::string name) { return Term{true, std::move(name), {}}; }
  static Term op(std::string sym, std::vector<Term> as = {}) {
    return Term{false, std::move(sym), std::move(as)};
  }
  bool operator==(const Term& o) const {
    return var == o.var && head == o.head && args == o.args;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const {
    if (var != o.var) return var && !o.var;
    if (head != o.head) return head < o.head;
    return args < o.args;
  }
};

inline std::string to_string(const Term& t) {
  if (t.var) return t.head;
  std::string s = t.head;
  if (t.args.empty()) return s;
  s += "(";
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ",";
    s += to_string(t.args[i]);
  }
  return s + ")";
}

inline int term_depth(const Term& t) {
  int d = 0;
  for (const auto& a : t.args) d = std::max(d, term_depth(a));
  return t.var ? 0 : d + 1;
}

// ---------------------------------------------------------------------------

struct OpSym {
  std::string name;
  int arity = 0;
  bool operator==(const OpSym&) const = default;
};

struct Signature {
  std::vector<OpSym> symbols;

  std::optional<int> arity(const std::string& name) const {
    for (const auto& s : symbols)
      if (s.name == name) return s.arity;
    return std::nullopt;
  }
  bool operator==(const Signature&) const = default;
};

inline bool well_formed(const Term& t, const Signature& sig,
                        const std::set<std::string>& ctx) {
  if (t.var) return ctx.count(t.head) > 0;
  auto k = sig.arity(t.head);
  if (!k || static_cast<size_t>(*k) != t.args.size()) return false;
  for (const auto& a : t.args)
    if (!well_formed(a, sig, ctx)) return false;
  return true;
}

// Simultaneous substitution; every variable of t must be mapped.
inline Term substitute(const Term& t, const std::map<std::string, Term>& u) {
  if (t.var) {
    auto it = u.find(t.head);
    if (it == u.end()) throw unknown_variable(t.head);
    return it->second;
  }
  std::vector<Term> as;
  as.reserve(t.args.size());
  for (const auto& a : t.args) as.push_back(substitute(a, u));
  return Term::op(t.head, std::move(as));
}

// t >> u : substitute u for every variable of t (sequencing of computations).
inline Term seq(const Term& t, const Term& u) {
  if (t.var) return u;
  std::vector<Term> as;
  as.reserve(t.args.size());
  for (const auto& a : t.args) as.push_back(seq(a, u));
  return Term::op(t.head, std::move(as));
}

struct Equation {
  std::vector<std::string> vars;  // context A
  Term lhs, rhs;
  std::string label;              // diagnostic tag, not semantic
};

struct Theory;
using Normalizer = std::function<Term(const Theory&, const Term&)>;

struct Theory {
  Signature sig;
  std::vector<Equation> equations;

  // Built-in metadata ("" for generic theories).
  std::string builtin;
  std::vector<std::string> values;                               // V
  std::vector<std::string> locations;                            // store L
  std::map<std::string, std::vector<std::string>> loc_values;    // store V_l
  int height_cutoff = -1;                                        // dyck N_max
  Normalizer normalizer;                                         // optional

  int value_index(const std::string& v) const {
    for (size_t i = 0; i < values.size(); ++i)
      if (values[i] == v) return static_cast<int>(i);
    throw bad_params("value not in alphabet: " + v);
  }
  Term normalize(const Term& t) const {
    return normalizer ? normalizer(*this, t) : t;
  }
};

struct Interpretation {
  Theory source, target;
  // per source symbol s of arity k, a target term over variables "0".."k-1"
  std::map<std::string, Term> assign;
};

inline Term translate(const Interpretation& f, const Term& t) {
  if (t.var) return t;
  auto it = f.assign.find(t.head);
  if (it == f.assign.end()) throw unknown_symbol(t.head);
  std::map<std::string, Term> u;
  for (size_t i = 0; i < t.args.size(); ++i)
    u[std::to_string(i)] = translate(f, t.args[i]);
  return substitute(it->second, u);
}

inline Interpretation identity_interpretation(const Theory& th) {
  Interpretation f{th, th, {}};
  for (const auto& s : th.sig.symbols) {
    std::vector<Term> vs;
    for (int i = 0; i < s.arity; ++i) vs.push_back(Term::v(std::to_string(i)));
    f.assign[s.name] = Term::op(s.name, std::move(vs));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Built-in theories.

namespace detail {

inline std::vector<Term> vars_upto(int k) {
  std::vector<Term> vs;
  for (int i = 0; i < k; ++i) vs.push_back(Term::v(std::to_string(i)));
  return vs;
}

// rectangular-band axioms for a k-ary "read" operation
inline void add_ro_axioms(std::vector<Equation>& eqs, const std::string& g,
                          int k, const std::string& tag) {
  // g(\v. x) == x
  eqs.push_back({{"x"}, Term::op(g, std::vector<Term>(k, Term::v("x"))),
                 Term::v("x"), tag + "-discard"});
  // g(\v. g(\w. x_vw)) == g(\v. x_vv)
  std::vector<Term> outer, diag;
  for (int v = 0; v < k; ++v) {
    std::vector<Term> inner;
    for (int w = 0; w < k; ++w)
      inner.push_back(Term::v("x" + std::to_string(v) + "_" + std::to_string(w)));
    outer.push_back(Term::op(g, std::move(inner)));
    diag.push_back(Term::v("x" + std::to_string(v) + "_" + std::to_string(v)));
  }
  std::vector<std::string> ctx;
  for (int v = 0; v < k; ++v)
    for (int w = 0; w < k; ++w)
      ctx.push_back("x" + std::to_string(v) + "_" + std::to_string(w));
  eqs.push_back({ctx, Term::op(g, std::move(outer)), Term::op(g, std::move(diag)),
                 tag + "-copy"});
}

Term state_like_normalize(const Theory& th, const Term& t);
Term store_normalize(const Theory& th, const Term& t);
Term rewrite_normalize(const Theory& th, const Term& t);

}  // namespace detail

inline Theory input_theory(const std::vector<std::string>& V) {
  if (V.empty()) throw bad_params("input theory needs a nonempty alphabet");
  Theory th;
  th.builtin = "input";
  th.values = V;
  th.sig.symbols = {{"read", static_cast<int>(V.size())}};
  return th;
}

inline Theory output_theory(const std::vector<std::string>& V) {
  if (V.empty()) throw bad_params("output theory needs a nonempty alphabet");
  Theory th;
  th.builtin = "output";
  th.values = V;
  for (const auto& v : V) th.sig.symbols.push_back({"write_" + v, 1});
  return th;
}

inline Theory read_only_state_theory(const std::vector<std::string>& V) {
  if (V.empty()) throw bad_params("read-only state needs a nonempty alphabet");
  Theory th;
  th.builtin = "read-only-state";
  th.values = V;
  int k = static_cast<int>(V.size());
  th.sig.symbols = {{"get", k}};
  detail::add_ro_axioms(th.equations, "get", k, "get");
  th.normalizer = detail::state_like_normalize;
  return th;
}

inline Theory state_theory(const std::vector<std::string>& V) {
  if (V.empty()) throw bad_params("state theory needs a nonempty alphabet");
  Theory th;
  th.builtin = "state";
  th.values = V;
  int k = static_cast<int>(V.size());
  th.sig.symbols = {{"get", k}};
  for (const auto& v : V) th.sig.symbols.push_back({"put_" + v, 1});
  // get(\v. put_v(x)) == x
  {
    std::vector<Term> br;
    for (const auto& v : V) br.push_back(Term::op("put_" + v, {Term::v("x")}));
    th.equations.push_back({{"x"}, Term::op("get", std::move(br)), Term::v("x"),
                            "get-put"});
  }
  // put_u(put_v(x)) == put_v(x)
  for (const auto& u : V)
    for (const auto& v : V)
      th.equations.push_back(
          {{"x"},
           Term::op("put_" + u, {Term::op("put_" + v, {Term::v("x")})}),
           Term::op("put_" + v, {Term::v("x")}), "put-put"});
  // put_u(get(\v. x_v)) == put_u(x_u)
  for (int ui = 0; ui < k; ++ui) {
    std::vector<Term> br;
    std::vector<std::string> ctx;
    for (int vi = 0; vi < k; ++vi) {
      br.push_back(Term::v("x" + std::to_string(vi)));
      ctx.push_back("x" + std::to_string(vi));
    }
    th.equations.push_back(
        {ctx, Term::op("put_" + V[ui], {Term::op("get", std::move(br))}),
         Term::op("put_" + V[ui], {Term::v("x" + std::to_string(ui))}),
         "put-get"});
  }
  th.normalizer = detail::state_like_normalize;
  return th;
}

inline Theory reversible_input_theory(const std::vector<std::string>& V) {
  if (V.empty()) throw bad_params("reversible input needs a nonempty alphabet");
  Theory th;
  th.builtin = "reversible-input";
  th.values = V;
  int k = static_cast<int>(V.size());
  th.sig.symbols = {{"read", k}};
  for (const auto& v : V) th.sig.symbols.push_back({"unread_" + v, 1});
  // unread_v(read(x)) == x_v
  for (int vi = 0; vi < k; ++vi) {
    std::vector<Term> br;
    std::vector<std::string> ctx;
    for (int i = 0; i < k; ++i) {
      br.push_back(Term::v("x" + std::to_string(i)));
      ctx.push_back("x" + std::to_string(i));
    }
    th.equations.push_back(
        {ctx, Term::op("unread_" + V[vi], {Term::op("read", std::move(br))}),
         Term::v("x" + std::to_string(vi)), "unread-read"});
  }
  // read(\u. unread_u(x)) == x
  {
    std::vector<Term> br;
    for (const auto& v : V) br.push_back(Term::op("unread_" + v, {Term::v("x")}));
    th.equations.push_back({{"x"}, Term::op("read", std::move(br)), Term::v("x"),
                            "read-unread"});
  }
  th.normalizer = detail::rewrite_normalize;
  return th;
}

inline Theory stack_theory(const std::vector<std::string>& V) {
  if (V.empty()) throw bad_params("stack theory needs a nonempty alphabet");
  Theory th;
  th.builtin = "stack";
  th.values = V;
  int k = static_cast<int>(V.size());
  th.sig.symbols = {{"pop", k + 1}};  // V-ary part + bottom branch
  for (const auto& v : V) th.sig.symbols.push_back({"push_" + v, 1});
  // push_v(pop(x,y)) == x_v
  for (int vi = 0; vi < k; ++vi) {
    std::vector<Term> br;
    std::vector<std::string> ctx;
    for (int i = 0; i < k; ++i) {
      br.push_back(Term::v("x" + std::to_string(i)));
      ctx.push_back("x" + std::to_string(i));
    }
    br.push_back(Term::v("y"));
    ctx.push_back("y");
    th.equations.push_back(
        {ctx, Term::op("push_" + V[vi], {Term::op("pop", std::move(br))}),
         Term::v("x" + std::to_string(vi)), "push-pop"});
  }
  // pop(\v. push_v(x), x) == x
  {
    std::vector<Term> br;
    for (const auto& v : V) br.push_back(Term::op("push_" + v, {Term::v("x")}));
    br.push_back(Term::v("x"));
    th.equations.push_back({{"x"}, Term::op("pop", std::move(br)), Term::v("x"),
                            "pop-push"});
  }
  // pop(x, pop(y, z)) == pop(x, z)
  {
    std::vector<Term> inner, outer_l, outer_r;
    std::vector<std::string> ctx;
    for (int i = 0; i < k; ++i) {
      inner.push_back(Term::v("y" + std::to_string(i)));
      ctx.push_back("y" + std::to_string(i));
    }
    inner.push_back(Term::v("z"));
    for (int i = 0; i < k; ++i) {
      outer_l.push_back(Term::v("x" + std::to_string(i)));
      outer_r.push_back(Term::v("x" + std::to_string(i)));
      ctx.push_back("x" + std::to_string(i));
    }
    ctx.push_back("z");
    outer_l.push_back(Term::op("pop", std::move(inner)));
    outer_r.push_back(Term::v("z"));
    th.equations.push_back({ctx, Term::op("pop", std::move(outer_l)),
                            Term::op("pop", std::move(outer_r)), "pop-pop"});
  }
  th.normalizer = detail::rewrite_normalize;
  return th;
}

// Affine-Dyck-word theory, ht_{>n} family truncated at n <= cutoff.
inline Theory dyck_theory(int cutoff) {
  if (cutoff < 0) throw bad_params("dyck theory needs a height cutoff >= 0");
  Theory th;
  th.builtin = "dyck";
  th.height_cutoff = cutoff;
  th.sig.symbols = {{"U", 1}, {"D", 1}};
  auto ht = [](int n) { return "ht_gt_" + std::to_string(n); };
  for (int n = 0; n <= cutoff; ++n) th.sig.symbols.push_back({ht(n), 2});
  for (int n = 0; n <= cutoff; ++n)
    detail::add_ro_axioms(th.equations, ht(n), 2, ht(n));
  // ht_n(x, ht_m(y,z)) == ht_m(ht_n(x,y), z)   for m <= n
  for (int n = 0; n <= cutoff; ++n)
    for (int m = 0; m <= n; ++m)
      th.equations.push_back(
          {{"x", "y", "z"},
           Term::op(ht(n), {Term::v("x"),
                            Term::op(ht(m), {Term::v("y"), Term::v("z")})}),
           Term::op(ht(m), {Term::op(ht(n), {Term::v("x"), Term::v("y")}),
                            Term::v("z")}),
           "ht-nested"});
  // ht_0(x, D(x)) == x
  th.equations.push_back(
      {{"x"},
       Term::op(ht(0), {Term::v("x"), Term::op("D", {Term::v("x")})}),
       Term::v("x"), "ht0-D"});
  // U(ht_0(x,y)) == U(x)
  th.equations.push_back(
      {{"x", "y"},
       Term::op("U", {Term::op(ht(0), {Term::v("x"), Term::v("y")})}),
       Term::op("U", {Term::v("x")}), "U-ht0"});
  // U(ht_{n+1}(x,y)) == ht_n(U(x), U(y))
  for (int n = 0; n + 1 <= cutoff; ++n)
    th.equations.push_back(
        {{"x", "y"},
         Term::op("U", {Term::op(ht(n + 1), {Term::v("x"), Term::v("y")})}),
         Term::op(ht(n), {Term::op("U", {Term::v("x")}),
                          Term::op("U", {Term::v("y")})}),
         "U-ht"});
  // D(ht_n(x,y)) == ht_{n+1}(D(x), D(y))
  for (int n = 0; n + 1 <= cutoff; ++n)
    th.equations.push_back(
        {{"x", "y"},
         Term::op("D", {Term::op(ht(n), {Term::v("x"), Term::v("y")})}),
         Term::op(ht(n + 1), {Term::op("D", {Term::v("x")}),
                              Term::op("D", {Term::v("y")})}),
         "D-ht"});
  th.normalizer = detail::rewrite_normalize;
  return th;
}

inline Theory store_theory(
    const std::vector<std::string>& L,
    const std::map<std::string, std::vector<std::string>>& Vl) {
  if (L.empty()) throw bad_params("store theory needs at least one location");
  Theory th;
  th.builtin = "store";
  th.locations = L;
  th.loc_values = Vl;
  for (const auto& l : L) {
    auto it = Vl.find(l);
    if (it == Vl.end() || it->second.empty())
      throw bad_params("store location without values: " + l);
    th.sig.symbols.push_back({"get_" + l, static_cast<int>(it->second.size())});
    for (const auto& v : it->second) th.sig.symbols.push_back({"put_" + l + "_" + v, 1});
  }
  // per-location state axioms
  for (const auto& l : L) {
    const auto& V = Vl.at(l);
    int k = static_cast<int>(V.size());
    std::string g = "get_" + l;
    auto put = [&](const std::string& v) { return "put_" + l + "_" + v; };
    {
      std::vector<Term> br;
      for (const auto& v : V) br.push_back(Term::op(put(v), {Term::v("x")}));
      th.equations.push_back({{"x"}, Term::op(g, std::move(br)), Term::v("x"),
                              l + ":get-put"});
    }
    for (const auto& u : V)
      for (const auto& v : V)
        th.equations.push_back(
            {{"x"}, Term::op(put(u), {Term::op(put(v), {Term::v("x")})}),
             Term::op(put(v), {Term::v("x")}), l + ":put-put"});
    for (int ui = 0; ui < k; ++ui) {
      std::vector<Term> br;
      std::vector<std::string> ctx;
      for (int vi = 0; vi < k; ++vi) {
        br.push_back(Term::v("x" + std::to_string(vi)));
        ctx.push_back("x" + std::to_string(vi));
      }
      th.equations.push_back(
          {ctx, Term::op(put(V[ui]), {Term::op(g, std::move(br))}),
           Term::op(put(V[ui]), {Term::v("x" + std::to_string(ui))}),
           l + ":put-get"});
    }
  }
  // commutation of puts at distinct locations
  for (const auto& l : L)
    for (const auto& m : L) {
      if (l >= m) continue;
      for (const auto& u : Vl.at(l))
        for (const auto& w : Vl.at(m)) {
          std::string pl = "put_" + l + "_" + u, pm = "put_" + m + "_" + w;
          th.equations.push_back(
              {{"x"}, Term::op(pl, {Term::op(pm, {Term::v("x")})}),
               Term::op(pm, {Term::op(pl, {Term::v("x")})}), "commute"});
        }
    }
  th.normalizer = detail::store_normalize;
  return th;
}

struct BuiltinParams {
  std::vector<std::string> values;
  std::vector<std::string> locations;
  std::map<std::string, std::vector<std::string>> loc_values;
  int height_cutoff = 2;
};

inline Theory builtin_theory(const std::string& name, const BuiltinParams& p) {
  if (name == "input") return input_theory(p.values);
  if (name == "output") return output_theory(p.values);
  if (name == "read-only-state") return read_only_state_theory(p.values);
  if (name == "state") return state_theory(p.values);
  if (name == "reversible-input") return reversible_input_theory(p.values);
  if (name == "stack") return stack_theory(p.values);
  if (name == "dyck") return dyck_theory(p.height_cutoff);
  if (name == "store") return store_theory(p.locations, p.loc_values);
  throw not_builtin(name);
}

// ---------------------------------------------------------------------------
// Normalizers.

namespace detail {

// Symbolic evaluation over the final comodel of state / read-only state:
// walk the term once per initial value and rebuild the canonical
// get-outermost (and, for state, put-inside) form.
inline Term state_like_normalize(const Theory& th, const Term& t) {
  const auto& V = th.values;
  int k = static_cast<int>(V.size());
  struct Out {
    std::string var;
    int state;
  };
  std::function<Out(const Term&, int)> eval = [&](const Term& u, int s) -> Out {
    if (u.var) return {u.head, s};
    if (u.head == "get") return eval(u.args[s], s);
    if (u.head.rfind("put_", 0) == 0)
      return eval(u.args[0], th.value_index(u.head.substr(4)));
    throw unknown_symbol(u.head);
  };
  std::vector<Out> table;
  for (int s = 0; s < k; ++s) table.push_back(eval(t, s));
  bool same_var = true, same_state = true;
  for (int s = 0; s < k; ++s) {
    if (table[s].var != table[0].var) same_var = false;
    if (table[s].state != s) same_state = false;
  }
  if (same_var && same_state) return Term::v(table[0].var);
  std::vector<Term> br;
  for (int s = 0; s < k; ++s) {
    Term leaf = Term::v(table[s].var);
    if (table[s].state != s)
      leaf = Term::op("put_" + V[table[s].state], {std::move(leaf)});
    br.push_back(std::move(leaf));
  }
  return Term::op("get", std::move(br));
}

// Store: evaluate on every total assignment and rebuild the nested
// get-then-put canonical form, writing only the changed locations.
inline Term store_normalize(const Theory& th, const Term& t) {
  const auto& L = th.locations;
  struct Out {
    std::string var;
    std::map<std::string, std::string> state;
  };
  std::function<Out(const Term&, std::map<std::string, std::string>)> eval =
      [&](const Term& u, std::map<std::string, std::string> s) -> Out {
    if (u.var) return {u.head, std::move(s)};
    if (u.head.rfind("get_", 0) == 0) {
      std::string l = u.head.substr(4);
      const auto& V = th.loc_values.at(l);
      int idx = 0;
      for (size_t i = 0; i < V.size(); ++i)
        if (V[i] == s.at(l)) idx = static_cast<int>(i);
      return eval(u.args[idx], std::move(s));
    }
    if (u.head.rfind("put_", 0) == 0) {
      // put_<loc>_<val>; split on the last separator of a known location
      for (const auto& l : L) {
        std::string pre = "put_" + l + "_";
        if (u.head.rfind(pre, 0) == 0) {
          s[l] = u.head.substr(pre.size());
          return eval(u.args[0], std::move(s));
        }
      }
    }
    throw unknown_symbol(u.head);
  };
  // leaf for one assignment: puts for changed locations (in L order), then var
  std::function<Term(size_t, std::map<std::string, std::string>&)> build =
      [&](size_t li, std::map<std::string, std::string>& s) -> Term {
    if (li == L.size()) {
      Out o = eval(t, s);
      Term leaf = Term::v(o.var);
      for (auto it = L.rbegin(); it != L.rend(); ++it)
        if (o.state.at(*it) != s.at(*it))
          leaf = Term::op("put_" + *it + "_" + o.state.at(*it), {std::move(leaf)});
      return leaf;
    }
    const auto& V = th.loc_values.at(L[li]);
    std::vector<Term> br;
    for (const auto& v : V) {
      s[L[li]] = v;
      br.push_back(build(li + 1, s));
    }
    s.erase(L[li]);
    return Term::op("get_" + L[li], std::move(br));
  };
  std::map<std::string, std::string> s0;
  Term nf = build(0, s0);
  // collapse the trivial case where no get/put is ever needed
  std::function<bool(const Term&, std::string&)> constant =
      [&](const Term& u, std::string& out) -> bool {
    if (u.var) {
      if (out.empty()) out = u.head;
      return out == u.head;
    }
    if (u.head.rfind("get_", 0) != 0) return false;
    for (const auto& a : u.args)
      if (!constant(a, out)) return false;
    return true;
  };
  std::string only;
  if (constant(nf, only)) return Term::v(only);
  return nf;
}

// Oriented-rewrite normalizer shared by reversible input, stack and dyck.
inline std::optional<Term> rewrite_step(const Theory& th, const Term& t) {
  if (t.var) return std::nullopt;
  const std::string& h = t.head;
  auto is_ht = [](const std::string& s, int& n) {
    if (s.rfind("ht_gt_", 0) != 0) return false;
    n = std::stoi(s.substr(6));
    return true;
  };
  if (th.builtin == "reversible-input") {
    // unread_v(read(x)) -> x_v
    if (h.rfind("unread_", 0) == 0 && !t.args[0].var &&
        t.args[0].head == "read")
      return t.args[0].args[th.value_index(h.substr(7))];
    // read(\u. unread_u(x)) -> x
    if (h == "read") {
      const Term* common = nullptr;
      bool all = true;
      for (size_t i = 0; i < t.args.size(); ++i) {
        const Term& a = t.args[i];
        if (a.var || a.head != "unread_" + th.values[i]) {
          all = false;
          break;
        }
        if (!common) common = &a.args[0];
        else if (!(*common == a.args[0])) {
          all = false;
          break;
        }
      }
      if (all && common) return *common;
    }
  } else if (th.builtin == "stack") {
    size_t k = th.values.size();
    if (h.rfind("push_", 0) == 0 && !t.args[0].var && t.args[0].head == "pop")
      return t.args[0].args[th.value_index(h.substr(5))];
    if (h == "pop") {
      // pop(\v. push_v(x), x) -> x
      const Term& bottom = t.args[k];
      bool all = true;
      for (size_t i = 0; i < k; ++i) {
        const Term& a = t.args[i];
        if (a.var || a.head != "push_" + th.values[i] || !(a.args[0] == bottom)) {
          all = false;
          break;
        }
      }
      if (all) return bottom;
      // pop(x, pop(y, z)) -> pop(x, z)
      if (!bottom.var && bottom.head == "pop") {
        std::vector<Term> as(t.args.begin(), t.args.begin() + k);
        as.push_back(bottom.args[k]);
        return Term::op("pop", std::move(as));
      }
    }
  } else if (th.builtin == "dyck") {
    int n = 0, m = 0;
    if (is_ht(h, n)) {
      const Term &a = t.args[0], &b = t.args[1];
      if (a == b) return a;                       // ht_n(x,x) -> x
      if (!a.var && is_ht(a.head, m) && m <= n)   // tt-branch: h>n => h>m
        return Term::op(h, {a.args[0], b});
      if (!b.var && is_ht(b.head, m) && m >= n)   // ff-branch: h<=n => not h>m
        return Term::op(h, {a, b.args[1]});
      if (n == 0 && !b.var && b.head == "D" && b.args[0] == a)
        return a;                                 // ht_0(x, D(x)) -> x
    }
    if (h == "U" && !t.args[0].var && is_ht(t.args[0].head, n)) {
      const Term& ht = t.args[0];
      if (n == 0) return Term::op("U", {ht.args[0]});
      return Term::op("ht_gt_" + std::to_string(n - 1),
                      {Term::op("U", {ht.args[0]}), Term::op("U", {ht.args[1]})});
    }
    if (h == "D" && !t.args[0].var && is_ht(t.args[0].head, n) &&
        n + 1 <= th.height_cutoff) {
      const Term& ht = t.args[0];
      return Term::op("ht_gt_" + std::to_string(n + 1),
                      {Term::op("D", {ht.args[0]}), Term::op("D", {ht.args[1]})});
    }
  }
  return std::nullopt;
}

inline Term rewrite_normalize(const Theory& th, const Term& t) {
  long budget = 200000;
  std::function<Term(Term)> norm = [&](Term u) -> Term {
    for (;;) {
      if (--budget < 0) throw explosion("normalizer budget exceeded");
      if (!u.var) {
        for (auto& a : u.args) a = norm(a);
      }
      auto r = rewrite_step(th, u);
      if (!r) return u;
      u = std::move(*r);
    }
  };
  return norm(t);
}

}  // namespace detail

}  // namespace ck

#endif
