#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "comodel_kit/comodel.hpp"

using namespace ck;

namespace {

Term rnd_term(std::mt19937& rng, const Signature& sig,
              const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> coin(0, 1);
  if (depth == 0 || (coin(rng) && !vars.empty())) {
    std::uniform_int_distribution<size_t> pick(0, vars.size() - 1);
    return Term::v(vars[pick(rng)]);
  }
  std::uniform_int_distribution<size_t> pick(0, sig.symbols.size() - 1);
  const auto& s = sig.symbols[pick(rng)];
  std::vector<Term> args;
  for (int i = 0; i < s.arity; ++i)
    args.push_back(rnd_term(rng, sig, vars, depth - 1));
  return Term::op(s.name, std::move(args));
}

}  // namespace

TEST_CASE("substitution composes") {
  std::mt19937 rng(0);
  Theory th = state_theory({"a", "b"});
  std::vector<std::string> vars{"x", "y"};
  for (int it = 0; it < 200; ++it) {
    Term t = rnd_term(rng, th.sig, vars, 3);
    std::map<std::string, Term> u1{{"x", rnd_term(rng, th.sig, vars, 2)},
                                   {"y", rnd_term(rng, th.sig, vars, 2)}};
    std::map<std::string, Term> u2{{"x", rnd_term(rng, th.sig, vars, 2)},
                                   {"y", rnd_term(rng, th.sig, vars, 2)}};
    // (t[u1])[u2] == t[x -> u1(x)[u2]]
    std::map<std::string, Term> u12;
    for (const auto& [v, s] : u1) u12[v] = substitute(s, u2);
    CHECK(substitute(substitute(t, u1), u2) == substitute(t, u12));
  }
}

TEST_CASE("sequencing is associative and unital") {
  std::mt19937 rng(1);
  Theory th = input_theory({"0", "1"});
  std::vector<std::string> vars{"x"};
  for (int it = 0; it < 100; ++it) {
    Term t = rnd_term(rng, th.sig, vars, 2);
    Term u = rnd_term(rng, th.sig, vars, 2);
    Term w = rnd_term(rng, th.sig, vars, 2);
    CHECK(seq(seq(t, u), w) == seq(t, seq(u, w)));
    CHECK(seq(t, Term::v("x")) == t);
  }
}

TEST_CASE("well-formedness distinguishes arity and scope errors") {
  Theory th = input_theory({"0", "1"});
  Term good = Term::op("read", {Term::v("x"), Term::v("x")});
  CHECK(well_formed(good, th.sig, {"x"}));
  CHECK_FALSE(well_formed(Term::op("read", {Term::v("x")}), th.sig, {"x"}));
  CHECK_FALSE(well_formed(good, th.sig, {"y"}));
  CHECK_FALSE(well_formed(Term::op("write", {Term::v("x")}), th.sig, {"x"}));
}

TEST_CASE("built-in theory equations are well-formed") {
  std::vector<Theory> ths{
      input_theory({"a", "b"}),
      output_theory({"a", "b"}),
      read_only_state_theory({"a", "b", "c"}),
      state_theory({"a", "b"}),
      reversible_input_theory({"a", "b"}),
      stack_theory({"a", "b"}),
      dyck_theory(3),
      store_theory({"l1", "l2"}, {{"l1", {"0", "1"}}, {"l2", {"0", "1"}}}),
  };
  for (const auto& th : ths) {
    for (const auto& eq : th.equations) {
      std::set<std::string> ctx(eq.vars.begin(), eq.vars.end());
      INFO(th.builtin << " / " << eq.label);
      CHECK(well_formed(eq.lhs, th.sig, ctx));
      CHECK(well_formed(eq.rhs, th.sig, ctx));
    }
  }
}

TEST_CASE("builtin_theory dispatch round-trips parameters") {
  BuiltinParams p;
  p.values = {"a", "b", "c"};
  Theory th = builtin_theory("state", p);
  CHECK(th.builtin == "state");
  CHECK(th.values == p.values);
  CHECK(th.value_index("c") == 2);
  CHECK_THROWS_AS(th.value_index("d"), bad_params);
  CHECK_THROWS_AS(builtin_theory("nonsense", p), not_builtin);
}

namespace {

// a lawful state comodel: states are the values themselves
Comodel value_state_comodel(const std::vector<std::string>& V) {
  Comodel c;
  c.theory = state_theory(V);
  c.states = V;
  auto& get = c.coops["get"];
  for (size_t s = 0; s < V.size(); ++s) get.push_back({(int)s, (int)s});
  for (size_t v = 0; v < V.size(); ++v) {
    auto& put = c.coops["put_" + V[v]];
    for (size_t s = 0; s < V.size(); ++s) put.push_back({0, (int)v});
  }
  return c;
}

}  // namespace

TEST_CASE("state normalizer preserves meaning and is idempotent") {
  std::mt19937 rng(2);
  Theory th = state_theory({"a", "b"});
  Comodel c = value_state_comodel({"a", "b"});
  REQUIRE(check_comodel(c).ok);
  std::vector<std::string> vars{"x", "y"};
  for (int it = 0; it < 300; ++it) {
    Term t = rnd_term(rng, th.sig, vars, 4);
    Term n = th.normalize(t);
    CHECK(th.normalize(n) == n);
    for (const auto& s : c.states) CHECK(run(c, s, t) == run(c, s, n));
  }
}

TEST_CASE("store normalizer preserves meaning and is idempotent") {
  std::mt19937 rng(3);
  Theory th = store_theory({"p", "q"}, {{"p", {"0", "1"}}, {"q", {"x"}}});
  // the store comodel on tuples of location contents
  Comodel c;
  c.theory = th;
  for (const auto& v0 : {"0", "1"}) c.states.push_back(std::string("p=") + v0);
  // one location q with a single value, so states track p only
  c.coops["get_p"] = {{0, 0}, {1, 1}};
  c.coops["get_q"] = {{0, 0}, {0, 1}};
  c.coops["put_p_0"] = {{0, 0}, {0, 0}};
  c.coops["put_p_1"] = {{0, 1}, {0, 1}};
  c.coops["put_q_x"] = {{0, 0}, {0, 1}};
  REQUIRE(check_comodel(c).ok);
  std::vector<std::string> vars{"x", "y"};
  for (int it = 0; it < 200; ++it) {
    Term t = rnd_term(rng, th.sig, vars, 3);
    Term n = th.normalize(t);
    CHECK(th.normalize(n) == n);
    for (const auto& s : c.states) CHECK(run(c, s, t) == run(c, s, n));
  }
}

TEST_CASE("translation respects composition of substitution") {
  // output-into-state: write_v becomes put_{h(v)}
  std::vector<std::string> V{"u", "v"}, W{"a", "b", "c"};
  std::map<std::string, std::string> h{{"u", "b"}, {"v", "c"}};
  Interpretation f;
  f.source = output_theory(V);
  f.target = state_theory(W);
  for (const auto& v : V)
    f.assign["write_" + v] = Term::op("put_" + h[v], {Term::v("0")});

  Comodel c = value_state_comodel(W);
  Comodel r = restrict_along(f, c);
  REQUIRE(check_comodel(r).ok);
  std::mt19937 rng(4);
  for (int it = 0; it < 200; ++it) {
    Term t = rnd_term(rng, f.source.sig, {"x"}, 4);
    for (const auto& s : c.states)
      CHECK(run(r, s, t) == run(c, s, translate(f, t)));
  }
}

TEST_CASE("read-only state embeds into state") {
  // get becomes get(\w. h(w))
  std::vector<std::string> V{"0", "1"}, W{"a", "b", "c"};
  std::map<std::string, std::string> h{{"a", "0"}, {"b", "1"}, {"c", "1"}};
  Theory src = read_only_state_theory(V), tgt = state_theory(W);
  Interpretation f;
  f.source = src;
  f.target = tgt;
  std::vector<Term> branches;
  for (const auto& w : W)
    branches.push_back(Term::v(std::to_string(src.value_index(h[w]))));
  f.assign["get"] = Term::op("get", std::move(branches));

  Comodel c = value_state_comodel(W);
  Comodel r = restrict_along(f, c);
  CHECK(check_comodel(r).ok);
  CHECK(check_interpretation(f, {c}).ok);
  // the restricted co-operation reads h of the state
  for (const auto& w : W) {
    auto [val, nx] = run(r, w, Term::op("get", detail::vars_upto(2)));
    CHECK(val == std::to_string(src.value_index(h[w])));
    CHECK(nx == w);
  }
}

TEST_CASE("identity interpretation translates terms to themselves") {
  Theory th = stack_theory({"a", "b"});
  Interpretation id = identity_interpretation(th);
  std::mt19937 rng(5);
  for (int it = 0; it < 100; ++it) {
    Term t = rnd_term(rng, th.sig, {"x", "y"}, 3);
    CHECK(translate(id, t) == t);
  }
}

TEST_CASE("dyck theory honours its height cutoff") {
  Theory th = dyck_theory(2);
  CHECK(th.height_cutoff == 2);
  CHECK(th.sig.arity("U").value() == 1);
  CHECK(th.sig.arity("D").value() == 1);
  CHECK(th.sig.arity("ht_gt_0").value() == 2);
  CHECK(th.sig.arity("ht_gt_2").value() == 2);
  CHECK_FALSE(th.sig.arity("ht_gt_3").has_value());
}

TEST_CASE("theories without a normalizer leave terms alone") {
  Theory th;
  th.sig.symbols = {{"d", 2}};
  Term t = Term::op("d", {Term::v("x"), Term::v("y")});
  CHECK(th.normalize(t) == t);
}

TEST_CASE("dyck normalizer is sound on a concrete height comodel") {
  Theory th = dyck_theory(2);
  // states are heights 0..6; terms of depth <= 4 started at height <= 2
  // never reach the artificial ceiling, so the table is exact there
  Comodel c;
  c.theory = th;
  const int H = 6;
  for (int k = 0; k <= H; ++k) c.states.push_back(std::to_string(k));
  for (int k = 0; k <= H; ++k) {
    c.coops["U"].push_back({0, std::min(k + 1, H)});
    c.coops["D"].push_back({0, std::max(k - 1, 0)});
  }
  for (int n = 0; n <= 2; ++n) {
    auto& t = c.coops["ht_gt_" + std::to_string(n)];
    for (int k = 0; k <= H; ++k) t.push_back({k > n ? 0 : 1, k});
  }
  std::mt19937 rng(6);
  for (int it = 0; it < 300; ++it) {
    Term t = rnd_term(rng, th.sig, {"x", "y"}, 4);
    Term n = th.normalize(t);
    CHECK(th.normalize(n) == n);
    for (const auto& s : {"0", "1", "2"}) CHECK(run(c, s, t) == run(c, s, n));
  }
}
