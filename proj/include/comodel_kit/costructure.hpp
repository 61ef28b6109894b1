#ifndef COMODEL_KIT_COSTRUCTURE_HPP
#define COMODEL_KIT_COSTRUCTURE_HPP

// Directed containers (polynomial comonads in container form), the exact
// correspondence with small categories, the dual monad with its
// presheaf-monad isomorphism, comonad morphisms as cofunctors, and the
// idempotency round trip.

#include "presheaf.hpp"

namespace ck {

struct iso_not_found : std::runtime_error {
  explicit iso_not_found(const std::string& m) : std::runtime_error(m) {}
};

struct DirectedContainer {
  std::vector<std::string> shapes;
  std::map<std::string, std::vector<std::string>> positions;  // E_b
  std::map<std::string, std::string> ids;                     // 1_b
  std::map<std::string, std::map<std::string, std::string>> cod;  // c : E_b -> B
  // rho[b][f][g] for f in E_b, g in E_{c(f)}, valued in E_b
  std::map<std::string, std::map<std::string, std::map<std::string, std::string>>>
      rho;
};

inline CheckReport check_directed_container(const DirectedContainer& dc) {
  CheckReport rep;
  for (const auto& b : dc.shapes) {
    if (!dc.positions.count(b)) {
      rep.fail("no positions at shape " + b);
      continue;
    }
    const auto& Eb = dc.positions.at(b);
    auto in_Eb = [&](const std::string& p) {
      return std::find(Eb.begin(), Eb.end(), p) != Eb.end();
    };
    if (!dc.ids.count(b) || !in_Eb(dc.ids.at(b))) {
      rep.fail("missing unit position at " + b);
      continue;
    }
    for (const auto& f : Eb) {
      auto ct = dc.cod.find(b);
      if (ct == dc.cod.end() || !ct->second.count(f)) {
        rep.fail("missing codomain of (" + b + "," + f + ")");
        continue;
      }
      const std::string& cf = ct->second.at(f);
      if (std::find(dc.shapes.begin(), dc.shapes.end(), cf) == dc.shapes.end())
        rep.fail("codomain of (" + b + "," + f + ") is not a shape");
    }
  }
  if (!rep.ok) return rep;
  auto c = [&](const std::string& b, const std::string& f) {
    return dc.cod.at(b).at(f);
  };
  auto r = [&](const std::string& b, const std::string& f,
               const std::string& g) -> const std::string* {
    auto i1 = dc.rho.find(b);
    if (i1 == dc.rho.end()) return nullptr;
    auto i2 = i1->second.find(f);
    if (i2 == i1->second.end()) return nullptr;
    auto i3 = i2->second.find(g);
    return i3 == i2->second.end() ? nullptr : &i3->second;
  };
  for (const auto& b : dc.shapes) {
    // c(1_b) = b
    if (c(b, dc.ids.at(b)) != b) rep.fail("c(1_" + b + ") != " + b);
    for (const auto& f : dc.positions.at(b)) {
      const std::string& cf = c(b, f);
      for (const auto& g : dc.positions.at(cf)) {
        const std::string* rg = r(b, f, g);
        if (!rg) {
          rep.fail("missing rho at (" + b + "," + f + "," + g + ")");
          continue;
        }
        if (std::find(dc.positions.at(b).begin(), dc.positions.at(b).end(),
                      *rg) == dc.positions.at(b).end())
          rep.fail("rho value out of E_" + b);
        // c(rho_f(g)) = c(g)
        else if (c(b, *rg) != c(cf, g))
          rep.fail("c(rho) law fails at (" + b + "," + f + "," + g + ")");
      }
      // rho_f(1_{c(f)}) = f
      const std::string* rid = r(b, f, dc.ids.at(cf));
      if (rid && *rid != f)
        rep.fail("rho_" + f + "(1_{c(" + f + ")}) != " + f);
    }
  }
  if (!rep.ok) return rep;
  for (const auto& b : dc.shapes) {
    // rho_{1_b}(f) = f
    for (const auto& f : dc.positions.at(b))
      if (dc.rho.at(b).at(dc.ids.at(b)).at(f) != f)
        rep.fail("rho_{1_" + b + "} not the identity on " + f);
    // rho_f(rho_g(h)) = rho_{rho_f(g)}(h)
    for (const auto& f : dc.positions.at(b)) {
      const std::string& cf = c(b, f);
      for (const auto& g : dc.positions.at(cf)) {
        const std::string& cg = c(cf, g);
        const std::string& rfg = dc.rho.at(b).at(f).at(g);
        for (const auto& h : dc.positions.at(cg)) {
          const std::string& lhs =
              dc.rho.at(b).at(f).at(dc.rho.at(cf).at(g).at(h));
          const std::string& rhs = dc.rho.at(b).at(rfg).at(h);
          if (lhs != rhs)
            rep.fail("rho composition law fails at (" + b + "," + f + "," + g +
                     "," + h + ")");
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The exact correspondence of Prop-6 shape: positions are arrows, the unit
// is the identity, rho is precomposition.  Position names double as arrow
// names, so they must be globally unique.

inline SmallCategory dc_to_category(const DirectedContainer& dc) {
  SmallCategory B;
  B.objects = dc.shapes;
  std::set<std::string> seen;
  for (const auto& b : dc.shapes)
    for (const auto& f : dc.positions.at(b)) {
      if (!seen.insert(f).second)
        throw law_violation("position name reused across shapes: " + f);
      B.arrows.push_back({f, b, dc.cod.at(b).at(f)});
    }
  for (const auto& b : dc.shapes) B.ids[b] = dc.ids.at(b);
  for (const auto& b : dc.shapes)
    for (const auto& f : dc.positions.at(b)) {
      if (f == dc.ids.at(b)) continue;
      const std::string& cf = dc.cod.at(b).at(f);
      for (const auto& g : dc.positions.at(cf)) {
        if (g == dc.ids.at(cf)) continue;
        B.comp[{g, f}] = dc.rho.at(b).at(f).at(g);
      }
    }
  return B;
}

inline DirectedContainer category_to_dc(const SmallCategory& B) {
  DirectedContainer dc;
  dc.shapes = B.objects;
  for (const auto& b : B.objects) {
    dc.positions[b] = B.arrows_from(b);
    dc.ids[b] = B.ids.at(b);
    for (const auto& f : dc.positions[b]) {
      dc.cod[b][f] = B.cod(f);
      for (const auto& g : B.arrows_from(B.cod(f)))
        dc.rho[b][f][g] = B.compose(g, f);
    }
  }
  return dc;
}

// Objects of the behaviour category are the shapes; the morphisms out of a
// shape are (by Yoneda) its positions, with codomain and composition read
// off the container data.  This is dc_to_category after law checking.
inline SmallCategory behaviour_category_of_comonad(const DirectedContainer& dc) {
  auto rep = check_directed_container(dc);
  if (!rep.ok) throw law_violation(rep.failures.front());
  SmallCategory B = dc_to_category(dc);
  auto crep = check_category(B);
  if (!crep.ok) throw law_violation(crep.failures.front());
  return B;
}

// ---------------------------------------------------------------------------
// The dual monad.  An element of Q*(A) is a natural transformation
// Q => A x Id, i.e. per shape x a value a_x and a position tau_x; the
// isomorphism theta just reorders this into a presheaf-monad element.

struct DualMonadElement {
  std::map<std::string, std::pair<std::string, std::string>> at;  // x -> (a, tau)
  bool operator==(const DualMonadElement&) const = default;
};

inline PresheafMonadElement dual_theta(const DualMonadElement& e) {
  PresheafMonadElement out;
  for (const auto& [x, av] : e.at) out.at[x] = {av.second, av.first};
  return out;
}

inline DualMonadElement dual_theta_inv(const PresheafMonadElement& e) {
  DualMonadElement out;
  for (const auto& [x, fa] : e.at) out.at[x] = {fa.second, fa.first};
  return out;
}

inline DualMonadElement dual_unit(const DirectedContainer& dc,
                                  const std::string& a) {
  DualMonadElement e;
  for (const auto& x : dc.shapes) e.at[x] = {a, dc.ids.at(x)};
  return e;
}

// component at X: (x, phi) |-> (a_x, phi(tau_x))
inline std::pair<std::string, std::string> dual_apply(
    const DualMonadElement& e, const PresheafComonadElement& q) {
  const auto& [a, tau] = e.at.at(q.obj);
  return {a, q.phi.at(tau)};
}

using NestedDualElement =
    std::map<std::string, std::pair<DualMonadElement, std::string>>;

inline DualMonadElement dual_mult(const DirectedContainer& dc,
                                  const NestedDualElement& n) {
  DualMonadElement out;
  for (const auto& x : dc.shapes) {
    const auto& [inner, f] = n.at(x);
    const std::string& cf = dc.cod.at(x).at(f);
    const auto& [a, g] = inner.at.at(cf);
    out.at[x] = {a, dc.rho.at(x).at(f).at(g)};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comonad morphisms in container form.

struct ContainerComonadMorphism {
  DirectedContainer source, target;                 // P, Q
  std::map<std::string, std::string> shape_map;     // f1 : B_P -> B_Q
  // per shape x of P, positions of Q at f1(x) -> positions of P at x
  std::map<std::string, std::map<std::string, std::string>> position_map;
};

inline Cofunctor comonad_morphism_to_cofunctor(
    const ContainerComonadMorphism& m) {
  Cofunctor F;
  F.src = dc_to_category(m.source);
  F.dst = dc_to_category(m.target);
  F.obmap = m.shape_map;
  F.hom = m.position_map;
  auto rep = cofunctor_check(F);
  if (!rep.ok) throw law_violation(rep.failures.front());
  return F;
}

inline CheckReport check_comonad_morphism(const ContainerComonadMorphism& m) {
  CheckReport rep;
  try {
    comonad_morphism_to_cofunctor(m);
  } catch (const law_violation& e) {
    rep.fail(e.what());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Structural isomorphism of small categories, by backtracking search.

struct CategoryIso {
  std::map<std::string, std::string> on_objects;
  std::map<std::string, std::string> on_arrows;
};

inline std::optional<CategoryIso> find_category_isomorphism(
    const SmallCategory& B, const SmallCategory& C) {
  if (B.objects.size() != C.objects.size() || B.arrows.size() != C.arrows.size())
    return std::nullopt;
  std::vector<std::string> cobj = C.objects;
  std::sort(cobj.begin(), cobj.end());
  std::vector<int> perm(B.objects.size());
  std::iota(perm.begin(), perm.end(), 0);
  // try every object bijection; arrows then match greedily per hom-set
  std::vector<int> idx(B.objects.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end());
  do {
    std::map<std::string, std::string> ob;
    for (size_t i = 0; i < B.objects.size(); ++i)
      ob[B.objects[i]] = C.objects[idx[i]];
    // hom-set sizes must agree
    bool ok = true;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> hb,
        hc;
    for (const auto& a : B.arrows) hb[{a.dom, a.cod}].push_back(a.name);
    for (const auto& a : C.arrows) hc[{a.dom, a.cod}].push_back(a.name);
    for (const auto& [k, v] : hb) {
      auto it = hc.find({ob.at(k.first), ob.at(k.second)});
      if (it == hc.end() || it->second.size() != v.size()) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    // backtrack over arrow assignments hom-set by hom-set
    std::vector<std::pair<std::string, std::vector<std::string>>> slots;
    for (const auto& [k, v] : hb)
      for (const auto& f : v) {
        (void)k;
        slots.push_back({f, hc.at({ob.at(B.dom(f)), ob.at(B.cod(f))})});
      }
    std::map<std::string, std::string> ar;
    std::set<std::string> used;
    std::function<bool(size_t)> assign = [&](size_t i) -> bool {
      if (i == slots.size()) {
        // full check: identities and composition
        for (const auto& o : B.objects)
          if (ar.at(B.ids.at(o)) != C.ids.at(ob.at(o))) return false;
        for (const auto& f : B.arrows)
          for (const auto& g : B.arrows) {
            if (f.cod != g.dom) continue;
            if (ar.at(B.compose(g.name, f.name)) !=
                C.compose(ar.at(g.name), ar.at(f.name)))
              return false;
          }
        return true;
      }
      for (const auto& cand : slots[i].second) {
        if (used.count(cand)) continue;
        ar[slots[i].first] = cand;
        used.insert(cand);
        // quick identity consistency
        bool fine = true;
        for (const auto& o : B.objects)
          if (B.ids.at(o) == slots[i].first && C.ids.at(ob.at(o)) != cand)
            fine = false;
        if (fine && assign(i + 1)) return true;
        used.erase(cand);
        ar.erase(slots[i].first);
      }
      return false;
    };
    if (assign(0)) return CategoryIso{ob, ar};
  } while (std::next_permutation(idx.begin(), idx.end()));
  return std::nullopt;
}

// The presheaf comonad of a category is again polynomial; extracting its
// behaviour category must give the category back.
inline CheckReport idempotency_check(const SmallCategory& B) {
  CheckReport rep;
  DirectedContainer dc = category_to_dc(B);
  auto dcrep = check_directed_container(dc);
  if (!dcrep.ok) {
    for (const auto& f : dcrep.failures) rep.fail(f);
    return rep;
  }
  SmallCategory B2 = behaviour_category_of_comonad(dc);
  auto iso = find_category_isomorphism(B, B2);
  if (!iso) rep.fail("no isomorphism with the extracted behaviour category");
  return rep;
}

// eta_A at an element (shape x, labelling phi) of Q(A): the component at a
// natural transformation tau : Q_x => Id is its value on the labelling,
// which by Yoneda is phi at tau's position.  In container form this is the
// canonical repackaging into a presheaf-comonad element over B_Q.
inline PresheafComonadElement reflection_unit(
    const DirectedContainer& dc, const std::string& shape,
    const std::map<std::string, std::string>& labelling) {
  PresheafComonadElement q;
  q.obj = shape;
  for (const auto& p : dc.positions.at(shape)) q.phi[p] = labelling.at(p);
  return q;
}

}  // namespace ck

#endif
