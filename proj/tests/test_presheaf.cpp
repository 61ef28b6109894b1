#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "comodel_kit/presheaf.hpp"

using namespace ck;

namespace {

const std::vector<std::string> A2{"a0", "a1"};
const std::vector<std::string> A3{"a0", "a1", "a2"};

bool same_category(const SmallCategory& a, const SmallCategory& b) {
  return a.objects == b.objects && a.ids == b.ids && a.comp == b.comp;
}

// monadic bind computed positionally, independent of monad_mult
PresheafMonadElement bind_oracle(
    const SmallCategory& B, const PresheafMonadElement& e,
    const std::map<std::string, PresheafMonadElement>& sigma) {
  PresheafMonadElement out;
  for (const auto& b : B.objects) {
    const auto& [f, a] = e.at.at(b);
    const auto& [g, a2] = sigma.at(a).at.at(B.cod(f));
    out.at[b] = {B.compose(g, f), a2};
  }
  return out;
}

}  // namespace

TEST_CASE("the category corpus is lawful and contains the named examples") {
  auto corpus = category_corpus();
  REQUIRE(corpus.size() >= 10);
  for (const auto& B : corpus) {
    auto rep = check_category(B);
    INFO((rep.failures.empty() ? "" : rep.failures.front()));
    CHECK(rep.ok);
    CHECK(B.objects.size() <= 3);
    CHECK(B.arrows.size() <= 5);
  }
  CHECK(same_category(corpus[corpus.size() - 2], z2_category()));
  CHECK(same_category(corpus.back(), arrow_category()));
}

TEST_CASE("presheaf monad and comonad laws hold across the corpus") {
  for (const auto& B : category_corpus()) {
    auto rep = presheaf_law_report(B, A2);
    INFO((rep.failures.empty() ? "" : rep.failures.front()));
    CHECK(rep.ok);
  }
}

TEST_CASE("multiplication agrees with syntactic substitution") {
  // binding through the update/lookup presentation: embed, substitute,
  // re-normalize; this exercises mult through an entirely syntactic route
  for (const auto& B : category_corpus()) {
    auto elems = all_monad_elements(B, A2);
    if (elems.size() > 40) elems.resize(40);
    for (const auto& e : elems) {
      std::map<std::string, PresheafMonadElement> sigma;
      std::map<std::string, Term> sub;
      for (size_t i = 0; i < A2.size(); ++i) {
        sigma[A2[i]] = elems[(i * 7 + 3) % elems.size()];
        sub[A2[i]] = dtu_embed(B, sigma[A2[i]]);
      }
      Term bound = substitute(dtu_embed(B, e), sub);
      NestedMonadElement n;
      for (const auto& b : B.objects) {
        const auto& [f, a] = e.at.at(b);
        n[b] = {f, sigma.at(a)};
      }
      CHECK(dtu_normal_form(B, bound) == monad_mult(B, n));
      CHECK(monad_mult(B, n) == bind_oracle(B, e, sigma));
    }
  }
}

TEST_CASE("unit embeds as pure lookup") {
  for (const auto& B : category_corpus()) {
    for (const auto& a : A2) {
      PresheafMonadElement u = monad_unit(B, a);
      for (const auto& b : B.objects) CHECK(u.at.at(b).first == B.ids.at(b));
      CHECK(dtu_normal_form(B, Term::v(a)) == u);
    }
  }
}

TEST_CASE("normal form and embedding are mutually inverse") {
  for (const auto& B : category_corpus()) {
    for (const auto& e : all_monad_elements(B, A3))
      CHECK(dtu_normal_form(B, dtu_embed(B, e)) == e);
  }
}

TEST_CASE("normalization is idempotent and sound on representable comodels") {
  std::mt19937 rng(20);
  for (const auto& B : category_corpus()) {
    Theory th = dtu_theory(B);
    for (const auto& eq : th.equations) {
      std::set<std::string> ctx(eq.vars.begin(), eq.vars.end());
      CHECK(well_formed(eq.lhs, th.sig, ctx));
      CHECK(well_formed(eq.rhs, th.sig, ctx));
      // both sides of every axiom have the same normal form
      std::map<std::string, Term> ren;
      for (const auto& v : eq.vars) ren[v] = Term::v("a0");
      CHECK(dtu_normal_form(B, substitute(eq.lhs, ren)) ==
            dtu_normal_form(B, substitute(eq.rhs, ren)));
    }
    // soundness: a term and its normal form run identically on the
    // comodels coming from representable actions
    std::vector<Comodel> reps;
    for (const auto& b : B.objects)
      reps.push_back(bset_to_comodel(representable_bset(B, b)));
    std::uniform_int_distribution<size_t> pick(0, th.sig.symbols.size() - 1);
    for (int it = 0; it < 30; ++it) {
      std::function<Term(int)> gen = [&](int d) -> Term {
        if (d == 0) return Term::v(A2[it % 2]);
        const auto& s = th.sig.symbols[pick(rng)];
        std::vector<Term> args;
        for (int i = 0; i < s.arity; ++i) args.push_back(gen(d - 1));
        return Term::op(s.name, std::move(args));
      };
      Term t = gen(3);
      Term nf = th.normalize(t);
      CHECK(th.normalize(nf) == nf);
      for (const auto& c : reps)
        for (const auto& s : c.states) CHECK(run(c, s, t) == run(c, s, nf));
    }
  }
}

TEST_CASE("representable actions are lawful and round-trip through comodels") {
  for (const auto& B : category_corpus()) {
    for (const auto& b : B.objects) {
      LeftBSet X = representable_bset(B, b);
      CHECK(check_bset(X).ok);
      Comodel c = bset_to_comodel(X);
      CHECK(check_comodel(c).ok);
      LeftBSet Y = comodel_to_bset(B, c);
      CHECK(Y.carrier == X.carrier);
      CHECK(Y.proj == X.proj);
      CHECK(Y.act == X.act);
    }
  }
}

TEST_CASE("the action formula matches running the embedded term") {
  for (const auto& B : category_corpus()) {
    for (const auto& b : B.objects) {
      LeftBSet X = representable_bset(B, b);
      Comodel c = bset_to_comodel(X);
      auto elems = all_monad_elements(B, A2);
      if (elems.size() > 30) elems.resize(30);
      for (const auto& e : elems)
        for (const auto& x : X.carrier) {
          auto [a, fx] = bset_action_formula(X, e, x);
          CHECK(run(c, x, dtu_embed(B, e)) == std::make_pair(a, fx));
        }
    }
  }
}

TEST_CASE("identity cofunctors pass the axioms and compose neutrally") {
  for (const auto& B : category_corpus()) {
    Cofunctor id = identity_cofunctor(B);
    CHECK(cofunctor_check(id).ok);
    Cofunctor idid = cofunctor_compose(id, id);
    CHECK(idid.obmap == id.obmap);
    CHECK(idid.hom == id.hom);
  }
}

TEST_CASE("a nontrivial cofunctor on the two-element group") {
  SmallCategory Z = z2_category();
  Cofunctor F{Z, Z, {{"*", "*"}}, {{"*", {{"id", "id"}, {"g", "id"}}}}};
  CHECK(cofunctor_check(F).ok);
  Cofunctor bad{Z, Z, {{"*", "*"}}, {{"*", {{"id", "g"}, {"g", "id"}}}}};
  CHECK_FALSE(cofunctor_check(bad).ok);

  // comonad morphism side: counit preserved, comultiplication natural
  for (const auto& q : all_comonad_elements(Z, A2)) {
    PresheafComonadElement Fq = apply_comonad_morphism(F, q);
    CHECK(comonad_counit(Z, Fq) == comonad_counit(Z, q));
    NestedComonadElement d1 = comonad_comult(Z, Fq);
    NestedComonadElement d2 = comonad_comult(Z, q);
    for (const auto& [f, inner] : d1.phi) {
      const auto& lifted = F.hom.at(q.obj).at(f);
      CHECK(inner == apply_comonad_morphism(F, d2.phi.at(lifted)));
    }
  }

  // monad morphism side: unit and multiplication preserved
  for (const auto& a : A2)
    CHECK(apply_monad_morphism(F, monad_unit(Z, a)) == monad_unit(Z, a));
  auto elems = all_monad_elements(Z, A2);
  for (const auto& e1 : elems)
    for (const auto& e2 : elems) {
      std::map<std::string, PresheafMonadElement> sigma{{"a0", e2},
                                                        {"a1", e1}};
      NestedMonadElement n;
      for (const auto& b : Z.objects) {
        const auto& [f, a] = e1.at.at(b);
        n[b] = {f, sigma.at(a)};
      }
      PresheafMonadElement lhs = apply_monad_morphism(F, monad_mult(Z, n));
      NestedMonadElement m;
      PresheafMonadElement fe1 = apply_monad_morphism(F, e1);
      for (const auto& b : Z.objects) {
        const auto& [f, a] = fe1.at.at(b);
        std::map<std::string, PresheafMonadElement> fsigma;
        for (const auto& [k, v] : sigma) fsigma[k] = apply_monad_morphism(F, v);
        m[b] = {f, fsigma.at(a)};
      }
      CHECK(lhs == monad_mult(Z, m));
    }
}

TEST_CASE("discrete categories have only identity arrows") {
  SmallCategory D = discrete_category(3);
  CHECK(check_category(D).ok);
  CHECK(D.arrows.size() == 3);
  for (const auto& a : D.arrows) CHECK(D.is_id(a.name));
}
