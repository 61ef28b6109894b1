// End-to-end acceptance checks.  Each check prints one PASS/FAIL line; the
// process exits nonzero if any check fails.

#include <cstdio>
#include <deque>
#include <functional>
#include <random>

#include "comodel_kit/behaviour.hpp"
#include "comodel_kit/cofree.hpp"
#include "comodel_kit/json_io.hpp"

using namespace ck;

namespace {

int g_failures = 0;

void report(int n, const char* what, bool ok) {
  std::printf("%s  %02d  %s\n", ok ? "PASS" : "FAIL", n, what);
  if (!ok) ++g_failures;
}

std::vector<std::string> names(int n, const std::string& stem) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

// --- lenses -----------------------------------------------------------------

struct Lens {
  int S, V;
  std::vector<int> get;
  std::vector<std::vector<int>> put;
};

Comodel lens_comodel(const Lens& l) {
  Comodel c;
  c.theory = state_theory(names(l.V, "v"));
  c.states = names(l.S, "s");
  for (int s = 0; s < l.S; ++s) c.coops["get"].push_back({l.get[s], s});
  for (int v = 0; v < l.V; ++v) {
    auto& t = c.coops["put_v" + std::to_string(v)];
    for (int s = 0; s < l.S; ++s) t.push_back({0, l.put[s][v]});
  }
  return c;
}

bool lens_lawful(const Lens& l) {
  for (int s = 0; s < l.S; ++s) {
    if (l.put[s][l.get[s]] != s) return false;
    for (int v = 0; v < l.V; ++v) {
      if (l.get[l.put[s][v]] != v) return false;
      for (int w = 0; w < l.V; ++w)
        if (l.put[l.put[s][v]][w] != l.put[s][w]) return false;
    }
  }
  return true;
}

Lens product_lens(std::mt19937& rng) {
  std::uniform_int_distribution<int> vd(1, 4);
  int V = vd(rng);
  std::uniform_int_distribution<int> rd(1, 6 / V);
  int R = rd(rng);
  Lens l;
  l.S = V * R;
  l.V = V;
  l.get.resize(l.S);
  l.put.assign(l.S, std::vector<int>(V));
  for (int r = 0; r < R; ++r)
    for (int v = 0; v < V; ++v) {
      l.get[r * V + v] = v;
      for (int w = 0; w < V; ++w) l.put[r * V + v][w] = r * V + w;
    }
  return l;
}

Lens random_lens(std::mt19937& rng) {
  std::uniform_int_distribution<int> vd(1, 4), sd(1, 6);
  Lens l;
  l.V = vd(rng);
  l.S = sd(rng);
  std::uniform_int_distribution<int> gv(0, l.V - 1), gs(0, l.S - 1);
  l.get.resize(l.S);
  l.put.assign(l.S, std::vector<int>(l.V));
  for (int s = 0; s < l.S; ++s) {
    l.get[s] = gv(rng);
    for (int v = 0; v < l.V; ++v) l.put[s][v] = gs(rng);
  }
  return l;
}

// --- behavioural word oracle ------------------------------------------------

bool words_equivalent(const Comodel& c1, int s1, const Comodel& c2, int s2) {
  size_t bound = c1.states.size() * c2.states.size();
  std::deque<std::tuple<int, int, size_t>> queue{{s1, s2, 0}};
  std::set<std::pair<int, int>> seen{{s1, s2}};
  while (!queue.empty()) {
    auto [a, b, len] = queue.front();
    queue.pop_front();
    if (len >= bound) continue;
    for (const auto& [op, t1] : c1.coops) {
      const auto& [o1, n1] = t1[a];
      const auto& [o2, n2] = c2.coops.at(op)[b];
      if (o1 != o2) return false;
      if (seen.insert({n1, n2}).second) queue.push_back({n1, n2, len + 1});
    }
  }
  return true;
}

Comodel random_input_comodel(std::mt19937& rng, int alphabet) {
  std::uniform_int_distribution<int> sd(1, 6);
  Comodel c;
  c.theory = input_theory(names(alphabet, "a"));
  int S = sd(rng);
  c.states = names(S, "s");
  std::uniform_int_distribution<int> od(0, alphabet - 1), nd(0, S - 1);
  for (int s = 0; s < S; ++s) c.coops["read"].push_back({od(rng), nd(rng)});
  return c;
}

// --- numeric helpers --------------------------------------------------------

long binom(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool full_bracketing(const std::string& s, size_t& i) {
  if (i < s.size() && s[i] == 'a') {
    ++i;
    return true;
  }
  if (i >= s.size() || s[i] != '(') return false;
  ++i;
  if (!full_bracketing(s, i)) return false;
  if (i >= s.size() || s[i] != '*') return false;
  ++i;
  if (!full_bracketing(s, i)) return false;
  if (i >= s.size() || s[i] != ')') return false;
  ++i;
  return true;
}

std::vector<BehaviourObject> all_streams(const std::vector<std::string>& V,
                                         int pmax, int cmax, bool rev) {
  std::vector<BehaviourObject> out;
  for (int p = 0; p <= pmax; ++p)
    for (int c = 1; c <= cmax; ++c)
      for (const auto& pw : detail::words_up_to(V, p))
        for (const auto& cw : detail::words_up_to(V, c)) {
          if ((int)pw.size() != p || (int)cw.size() != c) continue;
          BehaviourObject b = rev ? BehaviourObject::rev_input_stream(pw, cw)
                                  : BehaviourObject::input_stream(pw, cw);
          bool dup = false;
          for (const auto& o : out) dup |= o == b;
          if (!dup) out.push_back(std::move(b));
        }
  return out;
}

// counts the (object, morphism) samples a cofunctor view check covers
long view_samples(const CofunctorView& cf, const BehaviourCategory& up,
                  const BehaviourCategory& down, int max_objects, int bound) {
  long n = 0;
  auto objs = up.objects(max_objects);
  auto downs = down.objects(max_objects);
  for (const auto& beta : objs) {
    BehaviourObject alpha = cf.on_object(beta);
    for (const auto& gamma : downs)
      n += (long)down.hom(alpha, gamma, bound).size();
  }
  return n;
}

Coalgebra random_coalgebra(std::mt19937& rng, const PolyFunctor& F, int n) {
  Coalgebra c;
  c.functor = F;
  for (int i = 0; i < n; ++i) c.states.push_back("x" + std::to_string(i));
  std::uniform_int_distribution<size_t> sym(0, F.symbols.size() - 1);
  std::uniform_int_distribution<int> st(0, n - 1);
  for (const auto& s : c.states) {
    const auto& o = F.symbols[sym(rng)];
    std::vector<std::string> kids;
    for (int i = 0; i < o.arity; ++i) kids.push_back(c.states[st(rng)]);
    c.step[s] = {o.name, std::move(kids)};
  }
  return c;
}

DFA random_dfa(std::mt19937& rng, int max_states, int max_letters) {
  std::uniform_int_distribution<int> sd(1, max_states), ld(1, max_letters);
  DFA m;
  int S = sd(rng), E = ld(rng);
  for (int e = 0; e < E; ++e) m.alphabet.push_back("e" + std::to_string(e));
  for (int s = 0; s < S; ++s) m.states.push_back("q" + std::to_string(s));
  std::uniform_int_distribution<int> pick(0, S - 1), coin(0, 1);
  for (const auto& s : m.states)
    for (const auto& e : m.alphabet) m.trans[s][e] = m.states[pick(rng)];
  for (const auto& s : m.states)
    if (coin(rng)) m.accept.insert(s);
  m.start = m.states[pick(rng)];
  return m;
}

// --- the thirteen checks ----------------------------------------------------

void check_01_worked_run() {
  Comodel c;
  c.theory = input_theory({"7", "11", "13"});
  c.states = {"s", "s'", "s''"};
  c.coops["read"] = {{0, 1}, {1, 2}, {2, 2}};
  std::vector<Term> outer;
  for (int n : {7, 11, 13}) {
    std::vector<Term> inner;
    for (int m : {7, 11, 13}) inner.push_back(Term::v(std::to_string(n + m)));
    outer.push_back(Term::op("read", std::move(inner)));
  }
  Term t = Term::op("read", std::move(outer));
  bool ok = check_comodel(c).ok &&
            run(c, "s", t) == std::make_pair(std::string("18"), std::string("s''")) &&
            run(c, "s'", t) == std::make_pair(std::string("24"), std::string("s''")) &&
            run(c, "s''", t) == std::make_pair(std::string("26"), std::string("s''"));
  report(1, "two-step read program reproduces the worked run table", ok);
}

void check_02_lens_tables() {
  std::mt19937 rng(1);
  bool ok = true;
  for (int it = 0; it < 100; ++it) {
    Lens l = product_lens(rng);
    ok &= lens_lawful(l) && check_comodel(lens_comodel(l)).ok;
  }
  int violating = 0;
  for (int it = 0; violating < 100 && it < 100000; ++it) {
    Lens l = random_lens(rng);
    auto rep = check_comodel(lens_comodel(l));
    ok &= rep.ok == lens_lawful(l);
    if (!rep.ok) {
      ++violating;
      ok &= !rep.failures.empty();  // a witness is named
    }
  }
  ok &= violating == 100;
  report(2, "law checker accepts 100 lawful lenses, rejects 100 with witness", ok);
}

void check_03_presheaf_laws() {
  bool ok = true;
  auto corpus = category_corpus();
  ok &= corpus.size() >= 10;
  for (const auto& B : corpus) {
    ok &= presheaf_law_report(B, {"a0"}).ok;
    ok &= presheaf_law_report(B, {"a0", "a1"}).ok;
  }
  report(3, "monad and comonad laws hold across the category corpus", ok);
}

void check_04_normal_forms() {
  bool ok = true;
  for (const auto& B : category_corpus()) {
    for (const auto& e : all_monad_elements(B, {"a0", "a1", "a2"}))
      ok &= dtu_normal_form(B, dtu_embed(B, e)) == e;
    // the other direction on a sample of syntactic terms: re-embedding the
    // normal form normalizes back to itself
    for (const auto& e : all_monad_elements(B, {"a0"})) {
      Term t = dtu_embed(B, e);
      ok &= dtu_embed(B, dtu_normal_form(B, t)) == t;
    }
  }
  report(4, "normal form and embedding are mutually inverse", ok);
}

void check_05_costructure_roundtrip() {
  bool ok = true;
  for (const auto& B : category_corpus()) {
    DirectedContainer dc = category_to_dc(B);
    ok &= check_directed_container(dc).ok;
    SmallCategory B2 = dc_to_category(dc);
    ok &= B.objects == B2.objects && B.ids == B2.ids && B.comp == B2.comp;
    ok &= idempotency_check(B).ok;
  }
  report(5, "every corpus category is recovered from its own comonad", ok);
}

void check_06_dual_monad() {
  bool ok = true;
  const std::vector<std::string> A{"a0", "a1"};
  for (const auto& B : category_corpus()) {
    DirectedContainer dc = category_to_dc(B);
    for (const auto& a : A) ok &= dual_theta(dual_unit(dc, a)) == monad_unit(B, a);
    auto elems = all_monad_elements(B, A);
    for (const auto& e : elems) ok &= dual_theta(dual_theta_inv(e)) == e;
    if (elems.size() > 20) elems.resize(20);
    for (const auto& e1 : elems)
      for (size_t j = 0; j < elems.size(); j += 5) {
        NestedMonadElement n;
        NestedDualElement nd;
        for (const auto& b : B.objects) {
          n[b] = {e1.at.at(b).first, elems[j]};
          nd[b] = {dual_theta_inv(elems[j]), e1.at.at(b).first};
        }
        ok &= dual_theta(dual_mult(dc, nd)) == monad_mult(B, n);
      }
  }
  report(6, "the dual-presentation monad agrees through the comparison map", ok);
}

void check_07_bisimulation() {
  std::mt19937 rng(2);
  bool ok = true;
  for (int it = 0; it < 100; ++it) {
    Comodel c1 = random_input_comodel(rng, 2);
    Comodel c2 = random_input_comodel(rng, 2);
    ok &= check_comodel(c1).ok && check_comodel(c2).ok;
    for (size_t a = 0; a < c1.states.size(); ++a)
      for (size_t b = 0; b < c2.states.size(); ++b)
        ok &= bisimilar(c1, c1.states[a], c2, c2.states[b]) ==
              words_equivalent(c1, (int)a, c2, (int)b);
  }
  for (int it = 0; it < 100; ++it) {
    Lens l1 = product_lens(rng), l2 = product_lens(rng);
    while (l2.V != l1.V) l2 = product_lens(rng);
    Comodel c1 = lens_comodel(l1), c2 = lens_comodel(l2);
    ok &= check_comodel(c1).ok && check_comodel(c2).ok;
    for (size_t a = 0; a < c1.states.size(); ++a)
      for (size_t b = 0; b < c2.states.size(); ++b)
        ok &= bisimilar(c1, c1.states[a], c2, c2.states[b]) ==
              words_equivalent(c1, (int)a, c2, (int)b);
  }
  report(7, "partition refinement matches the generator-word oracle", ok);
}

void check_08_value_categories() {
  bool ok = true;
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::string> V = names(n, "v");
    BehaviourCategory out = behaviour_category(output_theory(V));
    auto objs = out.objects(100);
    ok &= objs.size() == 1;
    long expect = 0, pw = 1;
    for (int k = 0; k <= 4; ++k) {
      expect += pw;
      pw *= n;
    }
    ok &= (long)out.hom(objs[0], objs[0], 4).size() == expect;
    BehaviourCategory ro = behaviour_category(read_only_state_theory(V));
    auto robj = ro.objects(100);
    ok &= (int)robj.size() == n;
    for (const auto& b1 : robj)
      for (const auto& b2 : robj)
        ok &= ro.hom(b1, b2, 4).size() == (b1 == b2 ? 1u : 0u);
    BehaviourCategory st = behaviour_category(state_theory(V));
    auto sobj = st.objects(100);
    ok &= (int)sobj.size() == n;
    for (const auto& b1 : sobj)
      for (const auto& b2 : sobj) ok &= st.hom(b1, b2, 4).size() == 1u;
  }
  report(8, "value-style behaviour categories have exact hom cardinalities", ok);
}

void check_09_classifiers() {
  bool ok = true;
  const std::vector<std::string> V2{"a", "b"};
  Theory in = input_theory(V2);
  for (const auto& b : all_streams(V2, 3, 3, false))
    ok &= check_classifier_contract(in, b, 40).ok;
  Theory rin = reversible_input_theory(V2);
  for (const auto& b : all_streams(V2, 2, 2, true))
    ok &= check_classifier_contract(rin, b, 60).ok;
  Theory st = stack_theory(V2);
  for (int l = 0; l <= 3; ++l)
    for (const auto& w : detail::words_up_to(V2, l))
      if ((int)w.size() == l)
        ok &= check_classifier_contract(st, BehaviourObject::stack_word(w), 60).ok;
  ok &= check_classifier_contract(st, BehaviourObject::stack_word({}, {"a"}), 60).ok;
  Theory dy = dyck_theory(4);
  for (long h = 0; h <= 4; ++h)
    ok &= check_classifier_contract(dy, BehaviourObject::dyck_height(h), 60).ok;
  ok &= check_classifier_contract(dy, BehaviourObject::dyck_height(-1), 60).ok;
  report(9, "classifying machines run every generator as their behaviour dictates", ok);
}

void check_10_balanced_words() {
  bool ok = true;
  for (long n = 1; n <= 6; ++n) {
    long catalan = binom(2 * n, n) / (n + 1);
    ok &= (long)dyck_census((int)n) == catalan;
    ok &= (long)dyck_words((int)n).size() == catalan;
  }
  Magma free;
  free.unit = "a";
  free.mult = [](const std::string& x, const std::string& y) {
    return "(" + x + "*" + y + ")";
  };
  for (long n = 1; n <= 5; ++n) {
    std::set<std::string> results;
    for (const auto& w : dyck_words((int)n)) {
      std::string r = dyck_run_stack(w, free);
      size_t i = 0;
      ok &= full_bracketing(r, i) && i == r.size();
      ok &= (long)std::count(r.begin(), r.end(), 'a') == n + 1;
      results.insert(r);
    }
    ok &= (long)results.size() == binom(2 * n, n) / (n + 1);
  }
  report(10, "balanced-word counts and stack bracketings match the closed forms", ok);
}

void check_11_cofunctors() {
  bool ok = true;
  long samples = 0;

  {  // write channel into a store of states
    std::vector<std::string> V{"u", "v"}, W{"A", "B", "C"};
    std::map<std::string, std::string> h{{"u", "B"}, {"v", "C"}};
    Interpretation f;
    f.source = output_theory(V);
    f.target = state_theory(W);
    for (const auto& v : V)
      f.assign["write_" + v] = Term::op("put_" + h[v], {Term::v("0")});
    CofunctorView cf = induced_cofunctor(f);
    BehaviourCategory up = behaviour_category(f.target);
    BehaviourCategory dn = behaviour_category(f.source);
    ok &= check_cofunctor_view(cf, up, dn, 10, 5).ok;
    samples += view_samples(cf, up, dn, 10, 5);
  }
  {  // read-only view of a store of states
    std::vector<std::string> V{"0", "1"}, W{"A", "B", "C"};
    std::map<std::string, std::string> h{{"A", "0"}, {"B", "1"}, {"C", "1"}};
    Theory src = read_only_state_theory(V);
    Interpretation f;
    f.source = src;
    f.target = state_theory(W);
    std::vector<Term> branches;
    for (const auto& w : W)
      branches.push_back(Term::v(std::to_string(src.value_index(h[w]))));
    f.assign["get"] = Term::op("get", std::move(branches));
    CofunctorView cf = induced_cofunctor(f);
    BehaviourCategory up = behaviour_category(f.target);
    BehaviourCategory dn = behaviour_category(f.source);
    ok &= check_cofunctor_view(cf, up, dn, 10, 3).ok;
    samples += view_samples(cf, up, dn, 10, 3);
  }
  {  // per-location lenses on a three-location store
    Theory store = store_theory(
        {"l1", "l2", "l3"},
        {{"l1", {"0", "1"}}, {"l2", {"x", "y"}}, {"l3", {"p", "q"}}});
    for (const auto& loc : store.locations) {
      Interpretation f = view_update_interpretation(store, loc);
      CofunctorView cf = induced_cofunctor(f);
      BehaviourCategory up = behaviour_category(store);
      BehaviourCategory dn = behaviour_category(f.source);
      ok &= check_cofunctor_view(cf, up, dn, 8, 3).ok;
      samples += view_samples(cf, up, dn, 8, 3);
    }
  }
  {  // balanced counter into a stack over a two-element magma
    Theory dy = dyck_theory(4);
    Magma z2;
    z2.unit = "e";
    z2.mult = [](const std::string& x, const std::string& y) {
      return x == y ? std::string("e") : std::string("x");
    };
    Theory st = stack_theory({"e", "x"});
    Interpretation f = dyck_to_stack_interpretation(dy, st, z2);
    CofunctorView cf = induced_cofunctor(f);
    BehaviourCategory up = behaviour_category(st);
    BehaviourCategory dn = behaviour_category(dy);
    ok &= check_cofunctor_view(cf, up, dn, 12, 4).ok;
    samples += view_samples(cf, up, dn, 12, 4);
  }
  {  // pairing on bi-infinite tapes
    for (long n = 0; n < 100; ++n) {
      auto [w, u] = cantor_unpair(n);
      ok &= cantor_pair(w, u) == n;
    }
    CofunctorView cf = tape_pairing_cofunctor();
    BehaviourCategory up = tape_behaviour_category();
    BehaviourCategory dn = behaviour_category(reversible_input_theory({"0", "1"}));
    ok &= check_cofunctor_view(cf, up, dn, 8, 4).ok;
    samples += view_samples(cf, up, dn, 8, 4);
  }
  ok &= samples >= 500;
  report(11, "five lifting constructions satisfy all three cofunctor axioms", ok);
}

void check_12_derivatives() {
  std::mt19937 rng(3);
  bool ok = true;
  for (int it = 0; it < 50; ++it) {
    DFA m = random_dfa(rng, 6, 3);
    ok &= check_dfa(m).ok;
    for (const auto& e : m.alphabet) {
      DFA de = dfa_derivative(m, e);
      std::vector<std::vector<std::string>> layer{{}};
      for (int len = 0; len <= 8; ++len) {
        std::vector<std::vector<std::string>> next;
        for (const auto& w : layer) {
          std::vector<std::string> ew{e};
          ew.insert(ew.end(), w.begin(), w.end());
          ok &= dfa_accept(de, w) == dfa_accept(m, ew);
          if (len < 8)
            for (const auto& l : m.alphabet) {
              auto w2 = w;
              w2.push_back(l);
              next.push_back(std::move(w2));
            }
        }
        layer = std::move(next);
      }
    }
  }
  report(12, "automaton derivatives answer suffix membership for all short words", ok);
}

void check_13_unfolding() {
  std::mt19937 rng(4);
  bool ok = true;
  PolyFunctor F;
  F.symbols = {{"leaf", 0}, {"node", 2}};
  for (int it = 0; it < 50; ++it) {
    Coalgebra c = random_coalgebra(rng, F, 4);
    for (const auto& s : c.states)
      for (int d = 1; d <= 4; ++d) {
        FTree full = unfold(c, s, d);
        ok &= check_ftree(F, full).ok;
        FTree t1 = truncate_tree(full, d - 1);
        FTree t2 = unfold(c, s, d - 1);
        ok &= t1.nodes == t2.nodes && t1.labels == t2.labels;
      }
  }
  BehaviourGraph g = behaviour_graph(F, 3);
  for (const auto& e : g.edges) {
    ok &= e.target == subtree(g.nodes[e.source], e.path);
    // edges compose: a length-1 path of the target is a length-2 path of
    // the source, and the subtrees agree along path concatenation
    for (const auto& q : e.target.nodes)
      if (path_depth(q) == 1)
        ok &= subtree(e.target, q) ==
              subtree(g.nodes[e.source], path_concat(e.path, q));
  }
  report(13, "unfolding truncates coherently and tree edges compose by paths", ok);
}

}  // namespace

int main() {
  check_01_worked_run();
  check_02_lens_tables();
  check_03_presheaf_laws();
  check_04_normal_forms();
  check_05_costructure_roundtrip();
  check_06_dual_monad();
  check_07_bisimulation();
  check_08_value_categories();
  check_09_classifiers();
  check_10_balanced_words();
  check_11_cofunctors();
  check_12_derivatives();
  check_13_unfolding();
  if (g_failures) std::printf("%d check(s) failed\n", g_failures);
  return g_failures ? 1 : 0;
}
