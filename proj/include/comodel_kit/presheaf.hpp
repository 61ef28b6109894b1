#ifndef COMODEL_KIT_PRESHEAF_HPP
#define COMODEL_KIT_PRESHEAF_HPP

// Finite small categories with exhaustive law checking, presheaf monads and
// comonads, cofunctors, left B-sets, and the dependently-typed-update
// presentation of the presheaf monad.

#include "comodel.hpp"

namespace ck {

struct law_violation : std::runtime_error {
  explicit law_violation(const std::string& m) : std::runtime_error(m) {}
};

struct Arrow {
  std::string name, dom, cod;
  bool operator==(const Arrow&) const = default;
};

struct SmallCategory {
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;                       // includes identities
  std::map<std::string, std::string> ids;          // object -> identity arrow
  std::map<std::pair<std::string, std::string>, std::string> comp;  // (g,f) -> g.f

  const Arrow& arrow(const std::string& name) const {
    for (const auto& a : arrows)
      if (a.name == name) return a;
    throw unknown_symbol("arrow " + name);
  }
  bool is_id(const std::string& name) const {
    const Arrow& a = arrow(name);
    auto it = ids.find(a.dom);
    return it != ids.end() && it->second == name;
  }
  // all arrows with domain b (the fiber B_b)
  std::vector<std::string> arrows_from(const std::string& b) const {
    std::vector<std::string> out;
    for (const auto& a : arrows)
      if (a.dom == b) out.push_back(a.name);
    return out;
  }
  std::string cod(const std::string& f) const { return arrow(f).cod; }
  std::string dom(const std::string& f) const { return arrow(f).dom; }
  // g after f (cod f = dom g)
  std::string compose(const std::string& g, const std::string& f) const {
    if (arrow(f).cod != arrow(g).dom)
      throw law_violation("non-composable pair " + g + " . " + f);
    if (is_id(f)) return g;
    if (is_id(g)) return f;
    auto it = comp.find({g, f});
    if (it == comp.end()) throw law_violation("missing composite " + g + " . " + f);
    return it->second;
  }
  bool operator==(const SmallCategory& o) const {
    return objects == o.objects && arrows == o.arrows && ids == o.ids &&
           comp == o.comp;
  }
};

inline CheckReport check_category(const SmallCategory& B) {
  CheckReport rep;
  for (const auto& b : B.objects) {
    auto it = B.ids.find(b);
    if (it == B.ids.end()) {
      rep.fail("no identity at " + b);
      continue;
    }
    const Arrow& id = B.arrow(it->second);
    if (id.dom != b || id.cod != b) rep.fail("identity of " + b + " not an endo");
  }
  if (!rep.ok) return rep;
  for (const auto& f : B.arrows)
    for (const auto& g : B.arrows) {
      if (f.cod != g.dom) continue;
      std::string gf;
      try {
        gf = B.compose(g.name, f.name);
      } catch (const law_violation& e) {
        rep.fail(e.what());
        continue;
      }
      const Arrow& c = B.arrow(gf);
      if (c.dom != f.dom || c.cod != g.cod)
        rep.fail("composite " + g.name + "." + f.name + " has wrong endpoints");
    }
  if (!rep.ok) return rep;
  for (const auto& f : B.arrows)
    for (const auto& g : B.arrows)
      for (const auto& h : B.arrows) {
        if (f.cod != g.dom || g.cod != h.dom) continue;
        if (B.compose(h.name, B.compose(g.name, f.name)) !=
            B.compose(B.compose(h.name, g.name), f.name))
          rep.fail("associativity fails on (" + h.name + "," + g.name + "," +
                   f.name + ")");
      }
  return rep;
}

// ---------------------------------------------------------------------------
// Named categories and the exhaustive corpus.

inline SmallCategory discrete_category(int n) {
  SmallCategory B;
  for (int i = 0; i < n; ++i) {
    std::string o = "o" + std::to_string(i);
    B.objects.push_back(o);
    B.arrows.push_back({"id_" + o, o, o});
    B.ids[o] = "id_" + o;
  }
  return B;
}

inline SmallCategory z2_category() {
  SmallCategory B;
  B.objects = {"*"};
  B.arrows = {{"id", "*", "*"}, {"g", "*", "*"}};
  B.ids["*"] = "id";
  B.comp[{"g", "g"}] = "id";
  return B;
}

inline SmallCategory arrow_category() {
  SmallCategory B;
  B.objects = {"o0", "o1"};
  B.arrows = {{"id_o0", "o0", "o0"}, {"id_o1", "o1", "o1"}, {"f", "o0", "o1"}};
  B.ids["o0"] = "id_o0";
  B.ids["o1"] = "id_o1";
  return B;
}

// All categories with <= max_objects objects and <= max_arrows total arrows
// (identities included), enumerated by backtracking over composition tables.
inline std::vector<SmallCategory> category_corpus(int max_objects = 3,
                                                  int max_arrows = 5,
                                                  bool with_named = true) {
  std::vector<SmallCategory> out;
  for (int nobj = 1; nobj <= max_objects; ++nobj) {
    int max_extra = max_arrows - nobj;
    if (max_extra < 0) continue;
    for (int e = 0; e <= max_extra; ++e) {
      // nondecreasing (dom,cod) assignments for the extra arrows
      std::vector<std::vector<int>> shapes;  // each entry: e slots in [0, nobj^2)
      std::vector<int> cur(e, 0);
      std::function<void(int, int)> gen = [&](int pos, int lo) {
        if (pos == e) {
          shapes.push_back(cur);
          return;
        }
        for (int s = lo; s < nobj * nobj; ++s) {
          cur[pos] = s;
          gen(pos + 1, s);
        }
      };
      gen(0, 0);
      for (const auto& shape : shapes) {
        SmallCategory base = discrete_category(nobj);
        for (int i = 0; i < e; ++i) {
          int d = shape[i] / nobj, c = shape[i] % nobj;
          base.arrows.push_back({"a" + std::to_string(i),
                                 "o" + std::to_string(d),
                                 "o" + std::to_string(c)});
        }
        // cells needing assignment: composable pairs of non-identity arrows
        struct Cell {
          std::string g, f;
          std::vector<std::string> choices;
        };
        std::vector<Cell> cells;
        bool possible = true;
        for (const auto& f : base.arrows) {
          if (base.is_id(f.name)) continue;
          for (const auto& g : base.arrows) {
            if (base.is_id(g.name) || f.cod != g.dom) continue;
            Cell c{g.name, f.name, {}};
            for (const auto& h : base.arrows)
              if (h.dom == f.dom && h.cod == g.cod) c.choices.push_back(h.name);
            if (c.choices.empty()) {
              possible = false;
              break;
            }
            cells.push_back(std::move(c));
          }
          if (!possible) break;
        }
        if (!possible) continue;
        SmallCategory B = base;
        // incremental associativity check over fully-determined triples
        auto lookup = [&](const std::string& g,
                          const std::string& f) -> const std::string* {
          if (B.is_id(f)) return &g;
          if (B.is_id(g)) return &f;
          auto it = B.comp.find({g, f});
          return it == B.comp.end() ? nullptr : &it->second;
        };
        std::function<bool()> consistent = [&]() {
          for (const auto& f : B.arrows)
            for (const auto& g : B.arrows) {
              if (f.cod != g.dom) continue;
              const std::string* gf = lookup(g.name, f.name);
              if (!gf) continue;
              for (const auto& h : B.arrows) {
                if (g.cod != h.dom) continue;
                const std::string* hg = lookup(h.name, g.name);
                if (!hg) continue;
                const std::string* l = lookup(h.name, *gf);
                const std::string* r = lookup(*hg, f.name);
                if (l && r && *l != *r) return false;
              }
            }
          return true;
        };
        std::function<void(size_t)> assign = [&](size_t i) {
          if (i == cells.size()) {
            out.push_back(B);
            return;
          }
          for (const auto& ch : cells[i].choices) {
            B.comp[{cells[i].g, cells[i].f}] = ch;
            if (consistent()) assign(i + 1);
          }
          B.comp.erase({cells[i].g, cells[i].f});
        };
        assign(0);
      }
    }
  }
  if (with_named) {
    out.push_back(z2_category());
    out.push_back(arrow_category());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presheaf monad T_B(A) = prod_b (B_b x A) and comonad Q_B(A) = sum_b A^{B_b}.

struct PresheafMonadElement {
  // per object b: (arrow with domain b, value in A)
  std::map<std::string, std::pair<std::string, std::string>> at;
  bool operator==(const PresheafMonadElement&) const = default;
  bool operator<(const PresheafMonadElement& o) const { return at < o.at; }
};

struct PresheafComonadElement {
  std::string obj;
  std::map<std::string, std::string> phi;  // arrow with domain obj -> A
  bool operator==(const PresheafComonadElement&) const = default;
};

inline PresheafMonadElement monad_unit(const SmallCategory& B,
                                       const std::string& a) {
  PresheafMonadElement e;
  for (const auto& b : B.objects) e.at[b] = {B.ids.at(b), a};
  return e;
}

// nested element of T(T(A)): per object b, (arrow f_b, element of T(A))
using NestedMonadElement =
    std::map<std::string, std::pair<std::string, PresheafMonadElement>>;

inline PresheafMonadElement monad_mult(const SmallCategory& B,
                                       const NestedMonadElement& n) {
  PresheafMonadElement e;
  for (const auto& b : B.objects) {
    const auto& [f_b, inner] = n.at(b);
    const auto& [g, a] = inner.at.at(B.cod(f_b));
    e.at[b] = {B.compose(g, f_b), a};
  }
  return e;
}

inline std::string comonad_counit(const SmallCategory& B,
                                  const PresheafComonadElement& q) {
  return q.phi.at(B.ids.at(q.obj));
}

// nested element of Q(Q(A)): (b, per arrow f from b a comonad element)
struct NestedComonadElement {
  std::string obj;
  std::map<std::string, PresheafComonadElement> phi;
  bool operator==(const NestedComonadElement&) const = default;
};

inline NestedComonadElement comonad_comult(const SmallCategory& B,
                                           const PresheafComonadElement& q) {
  NestedComonadElement n;
  n.obj = q.obj;
  for (const auto& f : B.arrows_from(q.obj)) {
    PresheafComonadElement inner;
    inner.obj = B.cod(f);
    for (const auto& g : B.arrows_from(inner.obj))
      inner.phi[g] = q.phi.at(B.compose(g, f));
    n.phi[f] = std::move(inner);
  }
  return n;
}

// exhaustive element enumeration at a finite value set
inline std::vector<PresheafMonadElement> all_monad_elements(
    const SmallCategory& B, const std::vector<std::string>& A) {
  std::vector<PresheafMonadElement> out{PresheafMonadElement{}};
  for (const auto& b : B.objects) {
    std::vector<PresheafMonadElement> next;
    for (const auto& e : out)
      for (const auto& f : B.arrows_from(b))
        for (const auto& a : A) {
          PresheafMonadElement e2 = e;
          e2.at[b] = {f, a};
          next.push_back(std::move(e2));
        }
    out = std::move(next);
  }
  return out;
}

inline std::vector<PresheafComonadElement> all_comonad_elements(
    const SmallCategory& B, const std::vector<std::string>& A) {
  std::vector<PresheafComonadElement> out;
  for (const auto& b : B.objects) {
    std::vector<PresheafComonadElement> part{PresheafComonadElement{b, {}}};
    for (const auto& f : B.arrows_from(b)) {
      std::vector<PresheafComonadElement> next;
      for (const auto& q : part)
        for (const auto& a : A) {
          PresheafComonadElement q2 = q;
          q2.phi[f] = a;
          next.push_back(std::move(q2));
        }
      part = std::move(next);
    }
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive law suite at a finite value set: monad unit/associativity and
// comonad counit/coassociativity.

inline CheckReport presheaf_law_report(const SmallCategory& B,
                                       const std::vector<std::string>& A) {
  CheckReport rep;
  auto elems = all_monad_elements(B, A);
  // left unit: mult of (id, e) at every object is e
  for (const auto& e : elems) {
    NestedMonadElement n;
    for (const auto& b : B.objects) n[b] = {B.ids.at(b), e};
    if (!(monad_mult(B, n) == e)) rep.fail("monad left unit fails");
  }
  // right unit: mult of e with units substituted for values is e
  for (const auto& e : elems) {
    NestedMonadElement n;
    for (const auto& b : B.objects) {
      const auto& [f, a] = e.at.at(b);
      n[b] = {f, monad_unit(B, a)};
    }
    if (!(monad_mult(B, n) == e)) rep.fail("monad right unit fails");
  }
  // associativity.  The two flattenings of a triply nested element agree at
  // an object b iff they agree on the arrow chain it selects there, so it
  // suffices to range over composable chains f;g;h and values, padding the
  // remaining entries with units.
  for (const auto& b : B.objects)
    for (const auto& f : B.arrows_from(b))
      for (const auto& g : B.arrows_from(B.cod(f)))
        for (const auto& h : B.arrows_from(B.cod(g)))
          for (const auto& a : A) {
            PresheafMonadElement inner = monad_unit(B, a);
            inner.at[B.cod(g)] = {h, a};
            NestedMonadElement mid;
            for (const auto& o : B.objects)
              mid[o] = {B.ids.at(o), inner};
            mid[B.cod(f)] = {g, inner};
            // flatten inner two layers first
            NestedMonadElement pre;
            for (const auto& o : B.objects)
              pre[o] = {o == b ? f : B.ids.at(o), monad_mult(B, mid)};
            PresheafMonadElement lhs = monad_mult(B, pre);
            // flatten outer two layers first: compose the outer arrow into
            // the middle one at the object it reaches
            NestedMonadElement post;
            for (const auto& o : B.objects) {
              std::string of = o == b ? f : B.ids.at(o);
              const auto& [mg, me] = mid.at(B.cod(of));
              post[o] = {B.compose(mg, of), me};
            }
            PresheafMonadElement rhs = monad_mult(B, post);
            if (!(lhs == rhs)) rep.fail("monad associativity fails");
          }
  auto qelems = all_comonad_elements(B, A);
  for (const auto& q : qelems) {
    NestedComonadElement n = comonad_comult(B, q);
    // counit after comult (both sides)
    PresheafComonadElement left;
    left.obj = n.obj;
    for (const auto& [f, inner] : n.phi) left.phi[f] = comonad_counit(B, inner);
    if (!(left == q)) rep.fail("comonad left counit fails");
    if (!(n.phi.at(B.ids.at(n.obj)) == q)) rep.fail("comonad right counit fails");
    // coassociativity: comult each inner vs comult of comult
    for (const auto& [f, inner] : n.phi) {
      NestedComonadElement a = comonad_comult(B, inner);
      NestedComonadElement b;
      b.obj = inner.obj;
      for (const auto& g : B.arrows_from(inner.obj))
        b.phi[g] = n.phi.at(B.compose(g, f));
      if (!(a == b)) rep.fail("comonad coassociativity fails");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cofunctors.

struct Cofunctor {
  SmallCategory src, dst;                         // F : src ~> dst
  std::map<std::string, std::string> obmap;       // ob(src) -> ob(dst)
  // per b in ob(src): arrows of dst with domain F(b) -> arrows of src from b
  std::map<std::string, std::map<std::string, std::string>> hom;
};

inline CheckReport cofunctor_check(const Cofunctor& F) {
  CheckReport rep;
  for (const auto& b : F.src.objects) {
    auto ob = F.obmap.find(b);
    if (ob == F.obmap.end()) {
      rep.fail("no object image for " + b);
      continue;
    }
    const std::string& Fb = ob->second;
    auto hm = F.hom.find(b);
    if (hm == F.hom.end()) {
      rep.fail("no hom map at " + b);
      continue;
    }
    for (const auto& f : F.dst.arrows_from(Fb)) {
      auto it = hm->second.find(f);
      if (it == hm->second.end()) {
        rep.fail("hom map at " + b + " misses arrow " + f);
        continue;
      }
      const Arrow& lifted = F.src.arrow(it->second);
      if (lifted.dom != b) rep.fail("lift of " + f + " at " + b + " has wrong domain");
      // (i) F(cod(F_b f)) = cod(f)
      if (F.obmap.at(lifted.cod) != F.dst.cod(f))
        rep.fail("axiom (i) fails at (" + b + "," + f + ")");
    }
    // (ii) F_b(1_{Fb}) = 1_b
    if (hm->second.count(F.dst.ids.at(Fb)) &&
        hm->second.at(F.dst.ids.at(Fb)) != F.src.ids.at(b))
      rep.fail("axiom (ii) fails at " + b);
    // (iii) F_b(g f) = F_{cod(F_b f)}(g) . F_b(f)
    for (const auto& f : F.dst.arrows_from(Fb)) {
      if (!hm->second.count(f)) continue;
      const std::string& lf = hm->second.at(f);
      const std::string& mid = F.src.cod(lf);
      for (const auto& g : F.dst.arrows_from(F.dst.cod(f))) {
        auto hm2 = F.hom.find(mid);
        if (hm2 == F.hom.end() || !hm2->second.count(g)) {
          rep.fail("axiom (iii): missing lift of " + g + " at " + mid);
          continue;
        }
        if (hm->second.at(F.dst.compose(g, f)) !=
            F.src.compose(hm2->second.at(g), lf))
          rep.fail("axiom (iii) fails at (" + b + "," + g + "," + f + ")");
      }
    }
  }
  return rep;
}

inline Cofunctor identity_cofunctor(const SmallCategory& B) {
  Cofunctor F{B, B, {}, {}};
  for (const auto& b : B.objects) {
    F.obmap[b] = b;
    for (const auto& f : B.arrows_from(b)) F.hom[b][f] = f;
  }
  return F;
}

// (G o F)_b = F_b o G_{Fb} for F : B ~> C, G : C ~> D
inline Cofunctor cofunctor_compose(const Cofunctor& G, const Cofunctor& F) {
  Cofunctor H{F.src, G.dst, {}, {}};
  for (const auto& b : F.src.objects) {
    const std::string& Fb = F.obmap.at(b);
    H.obmap[b] = G.obmap.at(Fb);
    for (const auto& f : G.dst.arrows_from(H.obmap.at(b)))
      H.hom[b][f] = F.hom.at(b).at(G.hom.at(Fb).at(f));
  }
  auto rep = cofunctor_check(H);
  if (!rep.ok) throw law_violation("composite cofunctor fails axioms");
  return H;
}

// Q_B(A) -> Q_C(A):  (b, phi) |-> (Fb, phi o F_b)
inline PresheafComonadElement apply_comonad_morphism(
    const Cofunctor& F, const PresheafComonadElement& q) {
  PresheafComonadElement out;
  out.obj = F.obmap.at(q.obj);
  for (const auto& f : F.dst.arrows_from(out.obj))
    out.phi[f] = q.phi.at(F.hom.at(q.obj).at(f));
  return out;
}

// T_C(A) -> T_B(A):  (f_c, a_c)_c |-> (F_b(f_{Fb}), a_{Fb})_b
inline PresheafMonadElement apply_monad_morphism(const Cofunctor& F,
                                                 const PresheafMonadElement& e) {
  PresheafMonadElement out;
  for (const auto& b : F.src.objects) {
    const auto& [f, a] = e.at.at(F.obmap.at(b));
    out.at[b] = {F.hom.at(b).at(f), a};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Left B-sets.

struct LeftBSet {
  SmallCategory cat;
  std::vector<std::string> carrier;
  std::map<std::string, std::string> proj;                      // x -> object
  std::map<std::pair<std::string, std::string>, std::string> act;  // (x, f) -> f*x
};

inline CheckReport check_bset(const LeftBSet& X) {
  CheckReport rep;
  for (const auto& x : X.carrier) {
    auto p = X.proj.find(x);
    if (p == X.proj.end()) {
      rep.fail("no projection for " + x);
      continue;
    }
    for (const auto& f : X.cat.arrows_from(p->second)) {
      auto it = X.act.find({x, f});
      if (it == X.act.end()) {
        rep.fail("no action of " + f + " on " + x);
        continue;
      }
      if (X.proj.at(it->second) != X.cat.cod(f))
        rep.fail("p(f*x) != cod(f) for (" + x + "," + f + ")");
    }
    if (X.act.count({x, X.cat.ids.at(p->second)}) &&
        X.act.at({x, X.cat.ids.at(p->second)}) != x)
      rep.fail("identity action moves " + x);
  }
  if (!rep.ok) return rep;
  for (const auto& x : X.carrier) {
    const std::string& b = X.proj.at(x);
    for (const auto& f : X.cat.arrows_from(b)) {
      const std::string& fx = X.act.at({x, f});
      for (const auto& g : X.cat.arrows_from(X.cat.cod(f)))
        if (X.act.at({fx, g}) != X.act.at({x, X.cat.compose(g, f)}))
          rep.fail("action not functorial on (" + x + "," + g + "," + f + ")");
    }
  }
  return rep;
}

// representable y(b): carrier B_b, projection cod, action by composition
inline LeftBSet representable_bset(const SmallCategory& B, const std::string& b) {
  LeftBSet X;
  X.cat = B;
  for (const auto& f : B.arrows_from(b)) {
    X.carrier.push_back(f);
    X.proj[f] = B.cod(f);
    for (const auto& g : B.arrows_from(B.cod(f))) X.act[{f, g}] = B.compose(g, f);
  }
  return X;
}

// ---------------------------------------------------------------------------
// Dependently typed update.

// t ==_{get,i} u  as the literal displayed pair of get-terms; object names
// double as variable names in the non-i branches.
inline Equation dtu_place_equation(const SmallCategory& B, const std::string& i,
                                   const Term& t, const Term& u,
                                   const std::vector<std::string>& inner_vars,
                                   const std::string& label) {
  std::vector<Term> lbr, rbr;
  std::vector<std::string> ctx;
  for (const auto& b : B.objects) {
    if (b == i) {
      lbr.push_back(t);
      rbr.push_back(u);
    } else {
      lbr.push_back(Term::v(b));
      rbr.push_back(Term::v(b));
      ctx.push_back(b);
    }
  }
  for (const auto& v : inner_vars) ctx.push_back(v);
  return {ctx, Term::op("get", std::move(lbr)), Term::op("get", std::move(rbr)),
          label};
}

inline Theory dtu_theory(const SmallCategory& B);

inline PresheafMonadElement dtu_normal_form(const SmallCategory& B,
                                            const Term& t) {
  // evaluate in the model of the presheaf monad carried by T_B(A)
  std::function<PresheafMonadElement(const Term&)> eval =
      [&](const Term& u) -> PresheafMonadElement {
    if (u.var) return monad_unit(B, u.head);
    if (u.head == "get") {
      PresheafMonadElement out;
      for (size_t i = 0; i < B.objects.size(); ++i) {
        const std::string& b = B.objects[i];
        out.at[b] = eval(u.args[i]).at.at(b);
      }
      return out;
    }
    if (u.head.rfind("upd_", 0) == 0) {
      const Arrow& f = B.arrow(u.head.substr(4));
      PresheafMonadElement e = eval(u.args[0]);
      PresheafMonadElement out = e;
      const auto& [g, a] = e.at.at(f.cod);
      out.at[f.dom] = {B.compose(g, f.name), a};
      return out;
    }
    throw unknown_symbol(u.head);
  };
  return eval(t);
}

inline Term dtu_embed(const SmallCategory& B, const PresheafMonadElement& e) {
  std::vector<Term> br;
  for (const auto& b : B.objects) {
    const auto& [g, a] = e.at.at(b);
    br.push_back(Term::op("upd_" + g, {Term::v(a)}));
  }
  return Term::op("get", std::move(br));
}

inline Theory dtu_theory(const SmallCategory& B) {
  Theory th;
  th.builtin = "dtu";
  th.values = B.objects;
  th.sig.symbols.push_back({"get", static_cast<int>(B.objects.size())});
  for (const auto& f : B.arrows) th.sig.symbols.push_back({"upd_" + f.name, 1});
  detail::add_ro_axioms(th.equations, "get", static_cast<int>(B.objects.size()),
                        "get");
  for (const auto& f : B.arrows) {
    Term upd_x = Term::op("upd_" + f.name, {Term::v("x")});
    // upd_{1_b}(x) == x
    if (B.is_id(f.name)) {
      th.equations.push_back({{"x"}, upd_x, Term::v("x"), "upd-id"});
      continue;
    }
    // upd_f(x) ==_{get,c} x for c != dom f
    for (const auto& c : B.objects)
      if (c != f.dom)
        th.equations.push_back(dtu_place_equation(B, c, upd_x, Term::v("x"),
                                                  {"x"}, "upd-miss"));
    // upd_f(get(\a. x_a)) ==_{get,dom f} upd_f(x_{cod f})
    {
      std::vector<Term> br;
      std::vector<std::string> xs;
      Term xcod = Term::v("");
      for (const auto& a : B.objects) {
        br.push_back(Term::v("x_" + a));
        xs.push_back("x_" + a);
        if (a == f.cod) xcod = Term::v("x_" + a);
      }
      Term lhs = Term::op("upd_" + f.name, {Term::op("get", std::move(br))});
      Term rhs = Term::op("upd_" + f.name, {xcod});
      th.equations.push_back(
          dtu_place_equation(B, f.dom, lhs, rhs, xs, "upd-get"));
    }
  }
  // upd_f(upd_g(x)) ==_{get,dom f} upd_{g.f}(x) for composable f, g
  for (const auto& f : B.arrows)
    for (const auto& g : B.arrows) {
      if (f.cod != g.dom) continue;
      Term lhs = Term::op("upd_" + f.name,
                          {Term::op("upd_" + g.name, {Term::v("x")})});
      Term rhs = Term::op("upd_" + B.compose(g.name, f.name), {Term::v("x")});
      th.equations.push_back(
          dtu_place_equation(B, f.dom, lhs, rhs, {"x"}, "upd-upd"));
    }
  th.normalizer = [B](const Theory&, const Term& t) {
    return dtu_embed(B, dtu_normal_form(B, t));
  };
  return th;
}

// ---------------------------------------------------------------------------
// B-sets <-> comodels of the dtu theory.

inline Comodel bset_to_comodel(const LeftBSet& X) {
  Comodel c;
  c.theory = dtu_theory(X.cat);
  c.states = X.carrier;
  auto idx = [&](const std::string& x) {
    for (size_t i = 0; i < X.carrier.size(); ++i)
      if (X.carrier[i] == x) return static_cast<int>(i);
    throw unknown_state(x);
  };
  auto objidx = [&](const std::string& b) {
    for (size_t i = 0; i < X.cat.objects.size(); ++i)
      if (X.cat.objects[i] == b) return static_cast<int>(i);
    throw unknown_symbol("object " + b);
  };
  auto& gt = c.coops["get"];
  for (const auto& x : X.carrier) gt.emplace_back(objidx(X.proj.at(x)), idx(x));
  for (const auto& f : X.cat.arrows) {
    auto& t = c.coops["upd_" + f.name];
    for (const auto& x : X.carrier) {
      if (X.proj.at(x) != f.dom) t.emplace_back(0, idx(x));
      else t.emplace_back(0, idx(X.act.at({x, f.name})));
    }
  }
  return c;
}

inline LeftBSet comodel_to_bset(const SmallCategory& B, const Comodel& c) {
  LeftBSet X;
  X.cat = B;
  X.carrier = c.states;
  const auto& gt = c.coops.at("get");
  for (size_t s = 0; s < c.states.size(); ++s)
    X.proj[c.states[s]] = B.objects.at(gt[s].first);
  for (size_t s = 0; s < c.states.size(); ++s) {
    const std::string& b = X.proj.at(c.states[s]);
    for (const auto& f : B.arrows_from(b))
      X.act[{c.states[s], f}] =
          c.states.at(c.coops.at("upd_" + f).at(s).second);
  }
  return X;
}

// Eq 12: run the element's table on a B-set point: x |-> (a_{p(x)}, f_{p(x)} * x)
inline std::pair<std::string, std::string> bset_action_formula(
    const LeftBSet& X, const PresheafMonadElement& e, const std::string& x) {
  const std::string& b = X.proj.at(x);
  const auto& [f, a] = e.at.at(b);
  return {a, X.act.at({x, f})};
}

}  // namespace ck

#endif
