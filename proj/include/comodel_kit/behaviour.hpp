#ifndef COMODEL_KIT_BEHAVIOUR_HPP
#define COMODEL_KIT_BEHAVIOUR_HPP

// Admissible behaviours of the built-in effect theories: final and
// classifying comodels as lazy state machines, behaviour categories,
// beta-equivalence, cofunctors induced by interpretations, and the
// Dyck-word toolkit.
//
// Infinite behaviours are represented by eventually periodic data: streams
// as (finite prefix, nonempty cycle), biinfinite tapes as (left cycle,
// finite core, right cycle).  Equality and shift relations are decidable on
// these representations.

#include <numeric>

#include "presheaf.hpp"

namespace ck {

struct infinite_behaviour_category : std::runtime_error {
  explicit infinite_behaviour_category(const std::string& m)
      : std::runtime_error(m) {}
};
struct not_dyck : std::runtime_error {
  explicit not_dyck(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------------------
// Behaviour objects.

struct BehaviourObject {
  enum class Kind {
    InputStream,    // prefix + cycle
    OutputPoint,    // the unique behaviour
    ROValue,        // value
    StateValue,     // value
    RevInputStream, // prefix + cycle
    StackWord,      // entries top-first; nonempty cycle = infinite tail
    DyckHeight,     // height, -1 for infinity
    StoreTuple,     // tuple
    TapeBiStream    // tape_* fields; head at absolute position 0
  };
  Kind kind = Kind::OutputPoint;
  std::vector<std::string> prefix, cycle;
  std::string value;
  long height = 0;
  std::map<std::string, std::string> tuple;
  // cell at k: core for k in [base, base+|core|), then the cycles; the left
  // cycle is listed walking leftwards from the core
  std::vector<long> tape_left, tape_core, tape_right;
  long tape_base = 0;

  static BehaviourObject output_point() { return {}; }
  static BehaviourObject ro_value(std::string v) {
    BehaviourObject b;
    b.kind = Kind::ROValue;
    b.value = std::move(v);
    return b;
  }
  static BehaviourObject state_value(std::string v) {
    BehaviourObject b;
    b.kind = Kind::StateValue;
    b.value = std::move(v);
    return b;
  }
  static BehaviourObject dyck_height(long h) {
    BehaviourObject b;
    b.kind = Kind::DyckHeight;
    b.height = h;
    return b;
  }
  static BehaviourObject store_tuple(std::map<std::string, std::string> t) {
    BehaviourObject b;
    b.kind = Kind::StoreTuple;
    b.tuple = std::move(t);
    return b;
  }
  static BehaviourObject input_stream(std::vector<std::string> p,
                                      std::vector<std::string> c);
  static BehaviourObject rev_input_stream(std::vector<std::string> p,
                                          std::vector<std::string> c);
  static BehaviourObject stack_word(std::vector<std::string> entries,
                                    std::vector<std::string> c = {});
  static BehaviourObject tape(std::vector<long> left, std::vector<long> core,
                              std::vector<long> right, long base);

  bool operator==(const BehaviourObject& o) const;
  bool operator<(const BehaviourObject& o) const;  // on canonical data
};

namespace detail {

// canonical form: primitive cycle, prefix tail absorbed into the cycle
inline void canon_stream(std::vector<std::string>& prefix,
                         std::vector<std::string>& cycle) {
  if (cycle.empty()) return;
  for (size_t d = 1; d < cycle.size(); ++d) {
    if (cycle.size() % d) continue;
    bool per = true;
    for (size_t i = d; i < cycle.size() && per; ++i)
      per = cycle[i] == cycle[i % d];
    if (per) {
      cycle.resize(d);
      break;
    }
  }
  while (!prefix.empty() && prefix.back() == cycle.back()) {
    cycle.insert(cycle.begin(), cycle.back());
    cycle.pop_back();
    prefix.pop_back();
  }
}

inline void canon_cycle(std::vector<long>& cycle) {
  if (cycle.empty()) return;
  for (size_t d = 1; d < cycle.size(); ++d) {
    if (cycle.size() % d) continue;
    bool per = true;
    for (size_t i = d; i < cycle.size() && per; ++i)
      per = cycle[i] == cycle[i % d];
    if (per) {
      cycle.resize(d);
      break;
    }
  }
}

}  // namespace detail

inline BehaviourObject BehaviourObject::input_stream(std::vector<std::string> p,
                                                     std::vector<std::string> c) {
  if (c.empty()) throw bad_params("stream cycle must be nonempty");
  detail::canon_stream(p, c);
  BehaviourObject b;
  b.kind = Kind::InputStream;
  b.prefix = std::move(p);
  b.cycle = std::move(c);
  return b;
}

inline BehaviourObject BehaviourObject::rev_input_stream(
    std::vector<std::string> p, std::vector<std::string> c) {
  BehaviourObject b = input_stream(std::move(p), std::move(c));
  b.kind = Kind::RevInputStream;
  return b;
}

inline BehaviourObject BehaviourObject::stack_word(
    std::vector<std::string> entries, std::vector<std::string> c) {
  if (!c.empty()) detail::canon_stream(entries, c);
  BehaviourObject b;
  b.kind = Kind::StackWord;
  b.prefix = std::move(entries);
  b.cycle = std::move(c);
  return b;
}

inline BehaviourObject BehaviourObject::tape(std::vector<long> left,
                                             std::vector<long> core,
                                             std::vector<long> right,
                                             long base) {
  if (left.empty() || right.empty())
    throw bad_params("tape cycles must be nonempty");
  detail::canon_cycle(left);
  detail::canon_cycle(right);
  BehaviourObject b;
  b.kind = Kind::TapeBiStream;
  b.tape_left = std::move(left);
  b.tape_core = std::move(core);
  b.tape_right = std::move(right);
  b.tape_base = base;
  return b;
}

// value of a (prefix, cycle) stream at position n
inline const std::string& stream_at(const BehaviourObject& b, long n) {
  if (n < static_cast<long>(b.prefix.size())) return b.prefix[n];
  long c = static_cast<long>(b.cycle.size());
  return b.cycle[(n - static_cast<long>(b.prefix.size())) % c];
}

inline bool stack_finite(const BehaviourObject& b) { return b.cycle.empty(); }

inline long tape_at(const BehaviourObject& b, long k) {
  long lo = b.tape_base, hi = b.tape_base + static_cast<long>(b.tape_core.size());
  if (k >= lo && k < hi) return b.tape_core[k - lo];
  if (k >= hi) return b.tape_right[(k - hi) % static_cast<long>(b.tape_right.size())];
  return b.tape_left[(lo - 1 - k) % static_cast<long>(b.tape_left.size())];
}

inline bool tape_equal(const BehaviourObject& a, const BehaviourObject& b) {
  long lo = std::min(a.tape_base, b.tape_base);
  long hi = std::max(a.tape_base + static_cast<long>(a.tape_core.size()),
                     b.tape_base + static_cast<long>(b.tape_core.size()));
  long L = std::lcm<long>(a.tape_left.size(), b.tape_left.size());
  long R = std::lcm<long>(a.tape_right.size(), b.tape_right.size());
  for (long k = lo - L; k < hi + R; ++k)
    if (tape_at(a, k) != tape_at(b, k)) return false;
  return true;
}

inline bool BehaviourObject::operator==(const BehaviourObject& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::TapeBiStream) return tape_equal(*this, o);
  return prefix == o.prefix && cycle == o.cycle && value == o.value &&
         height == o.height && tuple == o.tuple;
}

inline bool BehaviourObject::operator<(const BehaviourObject& o) const {
  auto key = [](const BehaviourObject& b) {
    return std::tie(b.kind, b.prefix, b.cycle, b.value, b.height, b.tuple,
                    b.tape_left, b.tape_core, b.tape_right, b.tape_base);
  };
  return key(*this) < key(o);
}

// drop the first n values of a stream-like behaviour (same kind)
inline BehaviourObject shift_stream(const BehaviourObject& b, long n) {
  std::vector<std::string> p, c = b.cycle;
  long pl = static_cast<long>(b.prefix.size());
  if (n < pl) {
    p.assign(b.prefix.begin() + n, b.prefix.end());
  } else if (!c.empty()) {
    long r = (n - pl) % static_cast<long>(c.size());
    std::rotate(c.begin(), c.begin() + r, c.end());
  } else {
    p.clear();  // finite stack exhausted
  }
  if (b.cycle.empty() && n < pl)
    p.assign(b.prefix.begin() + n, b.prefix.end());
  BehaviourObject out;
  out.kind = b.kind;
  out.prefix = std::move(p);
  out.cycle = std::move(c);
  detail::canon_stream(out.prefix, out.cycle);
  return out;
}

inline BehaviourObject shift_tape(const BehaviourObject& b, long i) {
  BehaviourObject out = b;
  out.tape_base -= i;  // cell at k of the result is cell k+i of b
  return out;
}

// ---------------------------------------------------------------------------
// Morphisms of behaviours.

struct BehaviourMorphism {
  enum class Kind { Shift, Word, Unique, DyckWord };
  Kind kind = Kind::Unique;
  long shift = 0;
  std::vector<std::string> word;  // output letters
  std::string dyck;               // letters 'U' / 'D'
  BehaviourObject source, target;

  bool operator==(const BehaviourMorphism& o) const {
    return kind == o.kind && shift == o.shift && word == o.word &&
           dyck == o.dyck && source == o.source && target == o.target;
  }
};

// ---------------------------------------------------------------------------
// Dyck words.

// W is an affine word from n to m: heights stay >= 0 starting at n, ending
// at m.  -1 encodes infinity; every word is an affine word from inf to inf.
inline bool affine_dyck_check(const std::string& W, long n, long m) {
  if (n == -1 || m == -1) return n == -1 && m == -1;
  long h = n;
  for (char ch : W) {
    if (ch == 'U') ++h;
    else if (ch == 'D') --h;
    else return false;
    if (h < 0) return false;
  }
  return h == m;
}

inline std::vector<std::string> dyck_words(int n) {
  std::vector<std::string> out;
  std::string cur;
  std::function<void(int, int)> gen = [&](int rem, int h) {
    if (rem == 0) {
      if (h == 0) out.push_back(cur);
      return;
    }
    if (h + rem < 0 || h > rem) return;
    cur.push_back('U');
    gen(rem - 1, h + 1);
    cur.back() = 'D';
    if (h > 0) gen(rem - 1, h - 1);
    cur.pop_back();
  };
  gen(2 * n, 0);
  return out;
}

// count of balanced words of length 2n, by lattice-path dynamic programming
inline unsigned long long dyck_census(int n) {
  std::vector<unsigned long long> dp(n + 2, 0);
  dp[0] = 1;
  for (int step = 0; step < 2 * n; ++step) {
    std::vector<unsigned long long> nx(n + 2, 0);
    for (int h = 0; h <= n; ++h) {
      if (!dp[h]) continue;
      if (h + 1 <= n + 1) nx[h + 1] += dp[h];
      if (h > 0) nx[h - 1] += dp[h];
    }
    dp = std::move(nx);
  }
  return dp[0];
}

struct Magma {
  std::string unit;  // the single generator pushed by U
  std::function<std::string(const std::string&, const std::string&)> mult;
};

// the three-step stack machine: start with [a]; U pushes a; D pops the top
// two elements (x below, y on top) and pushes x*y
inline std::string dyck_run_stack(const std::string& W, const Magma& m) {
  std::vector<std::string> st{m.unit};
  for (char ch : W) {
    if (ch == 'U') {
      st.push_back(m.unit);
    } else if (ch == 'D') {
      if (st.size() < 2) throw not_dyck("stack underflow running " + W);
      std::string y = st.back();
      st.pop_back();
      std::string x = st.back();
      st.pop_back();
      st.push_back(m.mult(x, y));
    } else {
      throw not_dyck("bad letter in " + W);
    }
  }
  if (st.size() != 1) throw not_dyck("leftover stack running " + W);
  return st[0];
}

// ---------------------------------------------------------------------------
// Lazy comodels: final and classifying comodels as deterministic closures.

struct LazyState {
  enum class Kind { Final, Nat, Cfg, Word, Dyck };
  Kind kind = Kind::Final;
  BehaviourObject beta;           // Final
  long n = 0;                     // Nat / Cfg read counter
  std::vector<std::string> word;  // Cfg pending (back = next), Word, Dyck

  static LazyState final_state(BehaviourObject b) {
    LazyState s;
    s.beta = std::move(b);
    return s;
  }
  static LazyState nat(long n) {
    LazyState s;
    s.kind = Kind::Nat;
    s.n = n;
    return s;
  }
  static LazyState cfg(long n, std::vector<std::string> pending) {
    LazyState s;
    s.kind = Kind::Cfg;
    s.n = n;
    s.word = std::move(pending);
    return s;
  }
  static LazyState word_state(std::vector<std::string> w,
                              Kind k = Kind::Word) {
    LazyState s;
    s.kind = k;
    s.word = std::move(w);
    return s;
  }
  bool operator==(const LazyState& o) const {
    return kind == o.kind && beta == o.beta && n == o.n && word == o.word;
  }
};

struct LazyComodel {
  Theory theory;
  LazyState universal;
  std::function<std::pair<int, LazyState>(const std::string&, const LazyState&)>
      coop;
  std::function<BehaviourObject(const LazyState&)> behaviour;
};

inline std::pair<std::string, LazyState> run_lazy(const LazyComodel& lc,
                                                  LazyState s, const Term& t) {
  const Term* cur = &t;
  for (;;) {
    if (cur->var) return {cur->head, std::move(s)};
    auto [i, s2] = lc.coop(cur->head, s);
    s = std::move(s2);
    cur = &cur->args.at(i);
  }
}

// closure of the universal state under all generator co-operations
inline std::vector<LazyState> enumerate_states(const LazyComodel& lc,
                                               int max_states) {
  std::vector<LazyState> seen{lc.universal};
  for (size_t i = 0; i < seen.size(); ++i) {
    for (const auto& sym : lc.theory.sig.symbols) {
      auto [o, nx] = lc.coop(sym.name, seen[i]);
      (void)o;
      bool dup = false;
      for (const auto& s : seen)
        if (s == nx) {
          dup = true;
          break;
        }
      if (!dup) {
        if (static_cast<int>(seen.size()) >= max_states) return seen;
        seen.push_back(std::move(nx));
      }
    }
  }
  return seen;
}

namespace detail {

inline int idx_of(const std::vector<std::string>& vs, const std::string& v) {
  for (size_t i = 0; i < vs.size(); ++i)
    if (vs[i] == v) return static_cast<int>(i);
  throw bad_params("value not in alphabet: " + v);
}

inline long dyck_end_height(long k, const std::vector<std::string>& w) {
  if (k == -1) return -1;
  long h = k;
  for (const auto& l : w) h += (l == "U" ? 1 : -1);
  return h;
}

}  // namespace detail

inline LazyComodel final_comodel(const Theory& th) {
  LazyComodel lc;
  lc.theory = th;
  lc.behaviour = [](const LazyState& s) { return s.beta; };
  std::string builtin = th.builtin;
  Theory t = th;
  lc.coop = [t, builtin](const std::string& sym,
                         const LazyState& s) -> std::pair<int, LazyState> {
    const BehaviourObject& b = s.beta;
    if (builtin == "input" || builtin == "reversible-input") {
      if (sym == "read")
        return {detail::idx_of(t.values, stream_at(b, 0)),
                LazyState::final_state(shift_stream(b, 1))};
      if (sym.rfind("unread_", 0) == 0 && builtin == "reversible-input") {
        BehaviourObject nb = b;
        nb.prefix.insert(nb.prefix.begin(), sym.substr(7));
        return {0, LazyState::final_state(BehaviourObject::rev_input_stream(
                       nb.prefix, nb.cycle))};
      }
    } else if (builtin == "output") {
      if (sym.rfind("write_", 0) == 0) return {0, s};
    } else if (builtin == "read-only-state") {
      if (sym == "get") return {detail::idx_of(t.values, b.value), s};
    } else if (builtin == "state") {
      if (sym == "get") return {detail::idx_of(t.values, b.value), s};
      if (sym.rfind("put_", 0) == 0)
        return {0, LazyState::final_state(
                       BehaviourObject::state_value(sym.substr(4)))};
    } else if (builtin == "stack") {
      if (sym == "pop") {
        if (stack_finite(b) && b.prefix.empty())
          return {static_cast<int>(t.values.size()), s};
        return {detail::idx_of(t.values, stream_at(b, 0)),
                LazyState::final_state(shift_stream(b, 1))};
      }
      if (sym.rfind("push_", 0) == 0) {
        BehaviourObject nb = b;
        nb.prefix.insert(nb.prefix.begin(), sym.substr(5));
        return {0, LazyState::final_state(BehaviourObject::stack_word(
                       nb.prefix, nb.cycle))};
      }
    } else if (builtin == "dyck") {
      if (sym == "U")
        return {0, LazyState::final_state(BehaviourObject::dyck_height(
                       b.height == -1 ? -1 : b.height + 1))};
      if (sym == "D")
        return {0, LazyState::final_state(BehaviourObject::dyck_height(
                       b.height == -1 ? -1 : std::max<long>(b.height - 1, 0)))};
      if (sym.rfind("ht_gt_", 0) == 0) {
        long n = std::stol(sym.substr(6));
        return {(b.height == -1 || b.height > n) ? 0 : 1, s};
      }
    } else if (builtin == "store") {
      if (sym.rfind("get_", 0) == 0) {
        std::string l = sym.substr(4);
        return {detail::idx_of(t.loc_values.at(l), b.tuple.at(l)), s};
      }
      if (sym.rfind("put_", 0) == 0) {
        for (const auto& l : t.locations) {
          std::string pre = "put_" + l + "_";
          if (sym.rfind(pre, 0) == 0) {
            auto tup = b.tuple;
            tup[l] = sym.substr(pre.size());
            return {0, LazyState::final_state(
                           BehaviourObject::store_tuple(std::move(tup)))};
          }
        }
      }
    }
    throw unknown_symbol(sym);
  };
  return lc;
}

// evaluate beta on a term (first projection of the final-comodel run)
inline std::string beta_eval(const Theory& th, const BehaviourObject& beta,
                             const Term& t) {
  return run_lazy(final_comodel(th), LazyState::final_state(beta), t).first;
}

// the derivative behaviour after running t
inline BehaviourObject derivative(const Theory& th, const BehaviourObject& beta,
                                  const Term& t) {
  return run_lazy(final_comodel(th), LazyState::final_state(beta), t)
      .second.beta;
}

inline LazyComodel classifying_comodel(const Theory& th,
                                       const BehaviourObject& beta) {
  LazyComodel lc;
  lc.theory = th;
  Theory t = th;
  BehaviourObject b0 = beta;
  if (th.builtin == "input") {
    lc.universal = LazyState::nat(0);
    lc.coop = [t, b0](const std::string& sym,
                      const LazyState& s) -> std::pair<int, LazyState> {
      if (sym != "read") throw unknown_symbol(sym);
      return {detail::idx_of(t.values, stream_at(b0, s.n)),
              LazyState::nat(s.n + 1)};
    };
    lc.behaviour = [b0](const LazyState& s) { return shift_stream(b0, s.n); };
  } else if (th.builtin == "output") {
    lc.universal = LazyState::word_state({});
    lc.coop = [](const std::string& sym,
                 const LazyState& s) -> std::pair<int, LazyState> {
      if (sym.rfind("write_", 0) != 0) throw unknown_symbol(sym);
      LazyState nx = s;
      nx.word.push_back(sym.substr(6));
      return {0, std::move(nx)};
    };
    lc.behaviour = [](const LazyState&) {
      return BehaviourObject::output_point();
    };
  } else if (th.builtin == "read-only-state" || th.builtin == "state" ||
             th.builtin == "store") {
    // the classifier sits inside the final comodel, generated by beta
    LazyComodel fin = final_comodel(th);
    lc.universal = LazyState::final_state(beta);
    lc.coop = fin.coop;
    lc.behaviour = fin.behaviour;
  } else if (th.builtin == "reversible-input") {
    lc.universal = LazyState::cfg(0, {});
    lc.coop = [t, b0](const std::string& sym,
                      const LazyState& s) -> std::pair<int, LazyState> {
      if (sym == "read") {
        if (!s.word.empty()) {
          LazyState nx = s;
          std::string v = nx.word.back();
          nx.word.pop_back();
          return {detail::idx_of(t.values, v), std::move(nx)};
        }
        return {detail::idx_of(t.values, stream_at(b0, s.n)),
                LazyState::cfg(s.n + 1, {})};
      }
      if (sym.rfind("unread_", 0) == 0) {
        std::string v = sym.substr(7);
        if (s.word.empty() && s.n > 0 && v == stream_at(b0, s.n - 1))
          return {0, LazyState::cfg(s.n - 1, {})};
        LazyState nx = s;
        nx.word.push_back(v);
        return {0, std::move(nx)};
      }
      throw unknown_symbol(sym);
    };
    lc.behaviour = [b0](const LazyState& s) {
      BehaviourObject sh = shift_stream(b0, s.n);
      std::vector<std::string> p(s.word.rbegin(), s.word.rend());
      p.insert(p.end(), sh.prefix.begin(), sh.prefix.end());
      return BehaviourObject::rev_input_stream(std::move(p), sh.cycle);
    };
  } else if (th.builtin == "stack") {
    lc.universal = LazyState::cfg(0, {});
    lc.coop = [t, b0](const std::string& sym,
                      const LazyState& s) -> std::pair<int, LazyState> {
      long len = static_cast<long>(b0.prefix.size());
      bool fin = stack_finite(b0);
      if (sym == "pop") {
        if (!s.word.empty()) {
          LazyState nx = s;
          std::string v = nx.word.back();
          nx.word.pop_back();
          return {detail::idx_of(t.values, v), std::move(nx)};
        }
        if (fin && s.n >= len) return {static_cast<int>(t.values.size()), s};
        return {detail::idx_of(t.values, stream_at(b0, s.n)),
                LazyState::cfg(s.n + 1, {})};
      }
      if (sym.rfind("push_", 0) == 0) {
        std::string v = sym.substr(5);
        if (s.word.empty() && s.n > 0 && v == stream_at(b0, s.n - 1))
          return {0, LazyState::cfg(s.n - 1, {})};
        LazyState nx = s;
        nx.word.push_back(v);
        return {0, std::move(nx)};
      }
      throw unknown_symbol(sym);
    };
    lc.behaviour = [b0](const LazyState& s) {
      BehaviourObject sh = shift_stream(b0, s.n);
      std::vector<std::string> p(s.word.rbegin(), s.word.rend());
      p.insert(p.end(), sh.prefix.begin(), sh.prefix.end());
      return BehaviourObject::stack_word(std::move(p), sh.cycle);
    };
  } else if (th.builtin == "dyck") {
    lc.universal = LazyState::word_state({}, LazyState::Kind::Dyck);
    long k = beta.height;
    lc.coop = [k](const std::string& sym,
                  const LazyState& s) -> std::pair<int, LazyState> {
      long h = detail::dyck_end_height(k, s.word);
      if (sym == "U") {
        LazyState nx = s;
        nx.word.push_back("U");
        return {0, std::move(nx)};
      }
      if (sym == "D") {
        if (h == 0) return {0, s};
        LazyState nx = s;
        nx.word.push_back("D");
        return {0, std::move(nx)};
      }
      if (sym.rfind("ht_gt_", 0) == 0) {
        long n = std::stol(sym.substr(6));
        return {(h == -1 || h > n) ? 0 : 1, s};
      }
      throw unknown_symbol(sym);
    };
    lc.behaviour = [k](const LazyState& s) {
      return BehaviourObject::dyck_height(detail::dyck_end_height(k, s.word));
    };
  } else {
    throw not_builtin(th.builtin.empty() ? "generic theory" : th.builtin);
  }
  return lc;
}

// ---------------------------------------------------------------------------
// Behaviour extraction: run the co-operations of an arbitrary (finite or
// lazy) comodel until the eventually periodic pattern closes.

template <class S, class Coop, class Eq>
BehaviourObject extract_behaviour(const Theory& th, S s, Coop coop, Eq eq) {
  auto iterate = [&](const std::string& sym, int bottom)
      -> std::tuple<std::vector<std::string>, std::vector<std::string>, bool> {
    // returns (prefix, cycle, finite)
    std::vector<S> seen{s};
    std::vector<std::string> out;
    S cur = s;
    for (;;) {
      auto [i, nx] = coop(sym, cur);
      if (bottom >= 0 && i == bottom) return {out, {}, true};
      out.push_back(th.values.at(i));
      for (size_t j = 0; j < seen.size(); ++j)
        if (eq(seen[j], nx)) {
          // cycle detected: outputs j.. repeat forever
          std::vector<std::string> pre(out.begin(), out.begin() + j);
          std::vector<std::string> cyc(out.begin() + j, out.end());
          if (cyc.empty()) cyc.push_back(out.back());
          return {std::move(pre), std::move(cyc), false};
        }
      seen.push_back(nx);
      cur = std::move(nx);
    }
  };
  if (th.builtin == "input" || th.builtin == "reversible-input") {
    auto [p, c, fin] = iterate("read", -1);
    (void)fin;
    return th.builtin == "input"
               ? BehaviourObject::input_stream(std::move(p), std::move(c))
               : BehaviourObject::rev_input_stream(std::move(p), std::move(c));
  }
  if (th.builtin == "output") return BehaviourObject::output_point();
  if (th.builtin == "read-only-state")
    return BehaviourObject::ro_value(th.values.at(coop("get", s).first));
  if (th.builtin == "state")
    return BehaviourObject::state_value(th.values.at(coop("get", s).first));
  if (th.builtin == "store") {
    std::map<std::string, std::string> tup;
    for (const auto& l : th.locations)
      tup[l] = th.loc_values.at(l).at(coop("get_" + l, s).first);
    return BehaviourObject::store_tuple(std::move(tup));
  }
  if (th.builtin == "stack") {
    auto [p, c, fin] = iterate("pop", static_cast<int>(th.values.size()));
    return BehaviourObject::stack_word(std::move(p), std::move(c));
  }
  if (th.builtin == "dyck") {
    for (long n = 0; n <= th.height_cutoff; ++n)
      if (coop("ht_gt_" + std::to_string(n), s).first == 1)
        return BehaviourObject::dyck_height(n);
    return BehaviourObject::dyck_height(-1);
  }
  throw not_builtin(th.builtin.empty() ? "generic theory" : th.builtin);
}

inline BehaviourObject behaviour_of(const Comodel& c, const std::string& state) {
  return extract_behaviour(
      c.theory, c.state_index(state),
      [&](const std::string& sym, int s) { return c.coops.at(sym).at(s); },
      [](int a, int b) { return a == b; });
}

inline BehaviourObject behaviour_of(const LazyComodel& lc, const LazyState& s) {
  if (lc.behaviour) return lc.behaviour(s);
  return extract_behaviour(lc.theory, s, lc.coop,
                           [](const LazyState& a, const LazyState& b) {
                             return a == b;
                           });
}

// ---------------------------------------------------------------------------
// Admissibility sampling.

struct AdmissibleSample {
  Term t;                          // over some context B
  std::map<std::string, Term> u;   // per b in B a continuation term
};

inline CheckReport is_admissible_sample(
    const std::function<std::string(const Term&)>& beta,
    const std::vector<AdmissibleSample>& samples) {
  CheckReport rep;
  std::set<std::string> vars;
  for (const auto& smp : samples)
    for (const auto& [v, _] : smp.u) vars.insert(v);
  for (const auto& v : vars)
    if (beta(Term::v(v)) != v) rep.fail("beta(" + v + ") != " + v);
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& smp = samples[i];
    std::string lhs = beta(substitute(smp.t, smp.u));
    std::string b = beta(smp.t);
    auto it = smp.u.find(b);
    if (it == smp.u.end()) {
      rep.fail("sample " + std::to_string(i) + ": continuation missing at " + b);
      continue;
    }
    std::string rhs = beta(seq(smp.t, it->second));
    if (lhs != rhs)
      rep.fail("sample " + std::to_string(i) + ": " + lhs + " != " + rhs);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Beta-equivalence of unary terms, decided on the classifying comodel.

inline bool beta_equivalent(const Theory& th, const BehaviourObject& beta,
                            const Term& m, const Term& n) {
  LazyComodel lc = classifying_comodel(th, beta);
  auto a = run_lazy(lc, lc.universal, m);
  auto b = run_lazy(lc, lc.universal, n);
  return a.first == b.first && a.second == b.second;
}

// ---------------------------------------------------------------------------
// Behaviour categories.

struct BehaviourCategory {
  Theory theory;
  std::function<std::vector<BehaviourObject>(int)> objects;  // up to max count
  std::function<std::vector<BehaviourMorphism>(
      const BehaviourObject&, const BehaviourObject&, int)>
      hom;  // search bound: shift magnitude / word length
  std::function<BehaviourMorphism(const BehaviourObject&)> id;
  std::function<std::optional<BehaviourMorphism>(const BehaviourMorphism&,
                                                 const BehaviourMorphism&)>
      compose;  // compose(g, f) = g after f
};

namespace detail {

inline bool eventual_shift(const BehaviourObject& src,
                           const BehaviourObject& dst, long i) {
  // dst_k == src_{k+i} for all large k
  long N = static_cast<long>(std::max(src.prefix.size(), dst.prefix.size())) +
           std::labs(i) + 1;
  long L = std::lcm<long>(std::max<size_t>(src.cycle.size(), 1),
                          std::max<size_t>(dst.cycle.size(), 1));
  if (src.cycle.empty() || dst.cycle.empty()) return false;
  for (long k = N; k < N + L; ++k)
    if (stream_at(dst, k) != stream_at(src, k + i)) return false;
  return true;
}

inline BehaviourMorphism shift_mor(const BehaviourObject& s,
                                   const BehaviourObject& t, long i) {
  BehaviourMorphism m;
  m.kind = BehaviourMorphism::Kind::Shift;
  m.shift = i;
  m.source = s;
  m.target = t;
  return m;
}

inline BehaviourMorphism unique_mor(const BehaviourObject& s,
                                    const BehaviourObject& t) {
  BehaviourMorphism m;
  m.source = s;
  m.target = t;
  return m;
}

inline void push_unique(std::vector<BehaviourObject>& out,
                        BehaviourObject b, int max) {
  if (static_cast<int>(out.size()) >= max) return;
  for (const auto& o : out)
    if (o == b) return;
  out.push_back(std::move(b));
}

inline std::vector<std::vector<std::string>> words_up_to(
    const std::vector<std::string>& V, int len) {
  std::vector<std::vector<std::string>> out{{}};
  std::vector<std::vector<std::string>> layer{{}};
  for (int l = 1; l <= len; ++l) {
    std::vector<std::vector<std::string>> next;
    for (const auto& w : layer)
      for (const auto& v : V) {
        auto w2 = w;
        w2.push_back(v);
        next.push_back(w2);
        out.push_back(std::move(w2));
      }
    layer = std::move(next);
  }
  return out;
}

}  // namespace detail

inline BehaviourCategory behaviour_category(const Theory& th) {
  BehaviourCategory cat;
  cat.theory = th;
  Theory t = th;
  std::string builtin = th.builtin;
  if (builtin != "input" && builtin != "output" &&
      builtin != "read-only-state" && builtin != "state" &&
      builtin != "reversible-input" && builtin != "stack" &&
      builtin != "dyck" && builtin != "store" && builtin != "tape")
    throw not_builtin(builtin.empty() ? "generic theory" : builtin);

  cat.objects = [t, builtin](int max) {
    std::vector<BehaviourObject> out;
    if (builtin == "output") {
      out.push_back(BehaviourObject::output_point());
    } else if (builtin == "read-only-state" || builtin == "state") {
      for (const auto& v : t.values)
        detail::push_unique(
            out,
            builtin == "state" ? BehaviourObject::state_value(v)
                               : BehaviourObject::ro_value(v),
            max);
    } else if (builtin == "store") {
      std::vector<std::map<std::string, std::string>> tups{{}};
      for (const auto& l : t.locations) {
        std::vector<std::map<std::string, std::string>> nx;
        for (const auto& tup : tups)
          for (const auto& v : t.loc_values.at(l)) {
            auto t2 = tup;
            t2[l] = v;
            nx.push_back(std::move(t2));
          }
        tups = std::move(nx);
      }
      for (auto& tup : tups)
        detail::push_unique(out, BehaviourObject::store_tuple(std::move(tup)),
                            max);
    } else if (builtin == "input" || builtin == "reversible-input") {
      for (int p = 0; p <= 2; ++p)
        for (int c = 1; c <= 3; ++c)
          for (const auto& pw : detail::words_up_to(t.values, p))
            for (const auto& cw : detail::words_up_to(t.values, c)) {
              if (static_cast<int>(pw.size()) != p ||
                  static_cast<int>(cw.size()) != c)
                continue;
              auto b = builtin == "input"
                           ? BehaviourObject::input_stream(pw, cw)
                           : BehaviourObject::rev_input_stream(pw, cw);
              detail::push_unique(out, std::move(b), max);
            }
    } else if (builtin == "stack") {
      for (int l = 0; l <= 3; ++l)
        for (const auto& w : detail::words_up_to(t.values, l))
          if (static_cast<int>(w.size()) == l)
            detail::push_unique(out, BehaviourObject::stack_word(w), max);
      for (int p = 0; p <= 1; ++p)
        for (int c = 1; c <= 2; ++c)
          for (const auto& pw : detail::words_up_to(t.values, p))
            for (const auto& cw : detail::words_up_to(t.values, c))
              if (static_cast<int>(pw.size()) == p &&
                  static_cast<int>(cw.size()) == c)
                detail::push_unique(out, BehaviourObject::stack_word(pw, cw),
                                    max);
    } else if (builtin == "dyck") {
      long top = t.height_cutoff >= 0 ? t.height_cutoff : 4;
      for (long h = 0; h <= top; ++h)
        detail::push_unique(out, BehaviourObject::dyck_height(h), max);
      detail::push_unique(out, BehaviourObject::dyck_height(-1), max);
    } else if (builtin == "tape") {
      for (long a = 0; a <= 1; ++a)
        for (long b = 0; b <= 1; ++b)
          for (long x = 0; x <= 1; ++x)
            detail::push_unique(out, BehaviourObject::tape({a}, {x}, {b}, 0),
                                max);
    }
    if (static_cast<int>(out.size()) > max) out.resize(max);
    return out;
  };

  cat.id = [builtin](const BehaviourObject& b) {
    BehaviourMorphism m;
    m.source = b;
    m.target = b;
    if (builtin == "input" || builtin == "reversible-input" ||
        builtin == "stack" || builtin == "tape") {
      m.kind = BehaviourMorphism::Kind::Shift;
    } else if (builtin == "output") {
      m.kind = BehaviourMorphism::Kind::Word;
    } else if (builtin == "dyck") {
      m.kind = BehaviourMorphism::Kind::DyckWord;
    } else {
      m.kind = BehaviourMorphism::Kind::Unique;
    }
    return m;
  };

  cat.hom = [t, builtin](const BehaviourObject& b1, const BehaviourObject& b2,
                         int bound) {
    std::vector<BehaviourMorphism> out;
    if (builtin == "output") {
      for (const auto& w : detail::words_up_to(t.values, bound)) {
        BehaviourMorphism m;
        m.kind = BehaviourMorphism::Kind::Word;
        m.word = w;
        m.source = b1;
        m.target = b2;
        out.push_back(std::move(m));
      }
    } else if (builtin == "read-only-state") {
      if (b1 == b2) out.push_back(detail::unique_mor(b1, b2));
    } else if (builtin == "state" || builtin == "store") {
      out.push_back(detail::unique_mor(b1, b2));
    } else if (builtin == "input") {
      for (long i = 0; i <= bound; ++i)
        if (shift_stream(b1, i) == b2)
          out.push_back(detail::shift_mor(b1, b2, i));
    } else if (builtin == "reversible-input") {
      for (long i = -bound; i <= bound; ++i)
        if (detail::eventual_shift(b1, b2, i))
          out.push_back(detail::shift_mor(b1, b2, i));
    } else if (builtin == "stack") {
      bool f1 = stack_finite(b1), f2 = stack_finite(b2);
      if (f1 && f2) {
        out.push_back(detail::shift_mor(
            b1, b2,
            static_cast<long>(b1.prefix.size()) -
                static_cast<long>(b2.prefix.size())));
      } else if (!f1 && !f2) {
        for (long i = -bound; i <= bound; ++i)
          if (detail::eventual_shift(b1, b2, i))
            out.push_back(detail::shift_mor(b1, b2, i));
      }
    } else if (builtin == "dyck") {
      std::function<void(std::string&, int)> gen = [&](std::string& cur,
                                                       int rem) {
        if (affine_dyck_check(cur, b1.height, b2.height)) {
          BehaviourMorphism m;
          m.kind = BehaviourMorphism::Kind::DyckWord;
          m.dyck = cur;
          m.source = b1;
          m.target = b2;
          out.push_back(std::move(m));
        }
        if (rem == 0) return;
        cur.push_back('U');
        gen(cur, rem - 1);
        cur.back() = 'D';
        gen(cur, rem - 1);
        cur.pop_back();
      };
      std::string cur;
      gen(cur, bound);
    } else if (builtin == "tape") {
      for (long i = -bound; i <= bound; ++i) {
        BehaviourObject sh = shift_tape(b1, i);
        // finite difference: tails agree on both sides
        long N = std::labs(sh.tape_base) + std::labs(b2.tape_base) +
                 static_cast<long>(sh.tape_core.size() + b2.tape_core.size()) +
                 1;
        long L = std::lcm<long>(sh.tape_left.size(), b2.tape_left.size());
        long R = std::lcm<long>(sh.tape_right.size(), b2.tape_right.size());
        bool ok = true;
        for (long k = N; k < N + R && ok; ++k)
          ok = tape_at(sh, k) == tape_at(b2, k);
        for (long k = -N - L; k < -N && ok; ++k)
          ok = tape_at(sh, k) == tape_at(b2, k);
        if (ok) out.push_back(detail::shift_mor(b1, b2, i));
      }
    }
    return out;
  };

  cat.compose = [builtin](const BehaviourMorphism& g, const BehaviourMorphism& f)
      -> std::optional<BehaviourMorphism> {
    if (!(f.target == g.source)) return std::nullopt;
    BehaviourMorphism m;
    m.kind = f.kind;
    m.source = f.source;
    m.target = g.target;
    switch (f.kind) {
      case BehaviourMorphism::Kind::Shift:
        m.shift = f.shift + g.shift;
        break;
      case BehaviourMorphism::Kind::Word:
        m.word = f.word;
        m.word.insert(m.word.end(), g.word.begin(), g.word.end());
        break;
      case BehaviourMorphism::Kind::DyckWord:
        m.dyck = f.dyck + g.dyck;
        break;
      case BehaviourMorphism::Kind::Unique:
        break;
    }
    return m;
  };
  return cat;
}

// the tape behaviour category is not attached to a finite theory; it gets a
// marker theory value carrying only the builtin tag
inline BehaviourCategory tape_behaviour_category() {
  Theory t;
  t.builtin = "tape";
  return behaviour_category(t);
}

// ---------------------------------------------------------------------------
// Induced cofunctors.

namespace detail {

// a unary term realizing the given morphism (runs on any state of the
// morphism's source behaviour)
inline Term term_of_morphism(const Theory& th, const BehaviourMorphism& m) {
  Term x = Term::v("x");
  auto wrap_reads = [&](Term cur, long n, const std::string& sym, int arity) {
    for (long i = 0; i < n; ++i)
      cur = Term::op(sym, std::vector<Term>(arity, cur));
    return cur;
  };
  if (th.builtin == "input")
    return wrap_reads(x, m.shift, "read", static_cast<int>(th.values.size()));
  if (th.builtin == "output") {
    Term cur = x;
    for (auto it = m.word.rbegin(); it != m.word.rend(); ++it)
      cur = Term::op("write_" + *it, {cur});
    return cur;
  }
  if (th.builtin == "read-only-state") return x;
  if (th.builtin == "state")
    return Term::op("put_" + m.target.value, {x});
  if (th.builtin == "store") {
    Term cur = x;
    for (const auto& l : th.locations)
      cur = Term::op("put_" + l + "_" + m.target.tuple.at(l), {cur});
    return cur;
  }
  if (th.builtin == "dyck") {
    Term cur = x;
    for (auto it = m.dyck.rbegin(); it != m.dyck.rend(); ++it)
      cur = Term::op(std::string(1, *it), {cur});
    return cur;
  }
  if (th.builtin == "reversible-input" || th.builtin == "stack") {
    bool stack = th.builtin == "stack";
    int k = static_cast<int>(th.values.size());
    long horizon =
        static_cast<long>(m.source.prefix.size() + m.source.cycle.size() +
                          m.target.prefix.size() + m.target.cycle.size()) +
        std::labs(m.shift) + 4;
    for (long n = std::max<long>(m.shift, 0); n <= horizon; ++n) {
      long cnt = n - m.shift;  // pending length
      if (cnt < 0) continue;
      bool fin = stack && stack_finite(m.source);
      if (fin && n > static_cast<long>(m.source.prefix.size())) break;
      if (stack && stack_finite(m.target) &&
          cnt > static_cast<long>(m.target.prefix.size()))
        continue;
      // target = first cnt values ++ source shifted by n
      bool ok = true;
      long win = horizon + std::labs(n) + 4;
      if (stack && stack_finite(m.target)) {
        ok = static_cast<long>(m.target.prefix.size()) - cnt ==
             static_cast<long>(m.source.prefix.size()) - n;
        for (long j = cnt; ok && j < static_cast<long>(m.target.prefix.size());
             ++j)
          ok = m.target.prefix[j] == m.source.prefix[j - cnt + n];
      } else {
        for (long j = cnt; ok && j < win; ++j)
          ok = stream_at(m.target, j) == stream_at(m.source, j - cnt + n);
      }
      if (!ok) continue;
      Term cur = x;
      for (long j = 1; j <= cnt; ++j) {
        std::string v = stack ? (stack_finite(m.target)
                                     ? m.target.prefix[j - 1]
                                     : stream_at(m.target, j - 1))
                              : stream_at(m.target, j - 1);
        cur = Term::op((stack ? "push_" : "unread_") + v, {cur});
      }
      return wrap_reads(cur, n, stack ? "pop" : "read", stack ? k + 1 : k);
    }
    throw bad_params("morphism has no finite witness");
  }
  throw not_builtin(th.builtin.empty() ? "generic theory" : th.builtin);
}

// read a morphism off the end state of a classifying-comodel run (the
// classifier's states are exactly the morphisms out of its behaviour)
inline BehaviourMorphism morphism_of_state(const Theory& th,
                                           const BehaviourObject& beta,
                                           const LazyComodel& lc,
                                           const LazyState& end) {
  BehaviourObject tgt = behaviour_of(lc, end);
  switch (end.kind) {
    case LazyState::Kind::Nat:
      return shift_mor(beta, tgt, end.n);
    case LazyState::Kind::Cfg:
      return shift_mor(beta, tgt, end.n - static_cast<long>(end.word.size()));
    case LazyState::Kind::Word: {
      BehaviourMorphism m;
      m.kind = BehaviourMorphism::Kind::Word;
      m.word = end.word;
      m.source = beta;
      m.target = tgt;
      return m;
    }
    case LazyState::Kind::Dyck: {
      BehaviourMorphism m;
      m.kind = BehaviourMorphism::Kind::DyckWord;
      for (const auto& l : end.word) m.dyck += l;
      m.source = beta;
      m.target = tgt;
      return m;
    }
    case LazyState::Kind::Final:
      return unique_mor(beta, tgt);
  }
  throw bad_params("unreachable");
}

}  // namespace detail

struct CofunctorView {
  // object action beta |-> f*beta
  std::function<BehaviourObject(const BehaviourObject&)> on_object;
  // lift a morphism out of on_object(beta) to a morphism out of beta
  std::function<BehaviourMorphism(const BehaviourObject&,
                                  const BehaviourMorphism&)>
      lift;
};

// An interpretation f between built-in theories acts contravariantly on
// behaviours (restriction) and covariantly lifts morphisms: the lift of m
// at beta is the run of the translated term on beta's classifier.
inline CofunctorView induced_cofunctor(const Interpretation& f) {
  CofunctorView cf;
  Interpretation fc = f;
  cf.on_object = [fc](const BehaviourObject& beta) {
    LazyComodel fin = final_comodel(fc.target);
    auto coop = [&](const std::string& sym, const LazyState& s) {
      const int k = *fc.source.sig.arity(sym);
      Term gen = Term::op(sym, detail::vars_upto(k));
      auto [v, nx] = run_lazy(fin, s, translate(fc, gen));
      return std::pair<int, LazyState>(std::stoi(v), std::move(nx));
    };
    return extract_behaviour(fc.source, LazyState::final_state(beta), coop,
                             [](const LazyState& a, const LazyState& b) {
                               return a == b;
                             });
  };
  cf.lift = [fc](const BehaviourObject& beta, const BehaviourMorphism& m) {
    Term t = detail::term_of_morphism(fc.source, m);
    LazyComodel lc = classifying_comodel(fc.target, beta);
    auto [v, end] = run_lazy(lc, lc.universal, translate(fc, t));
    (void)v;
    return detail::morphism_of_state(fc.target, beta, lc, end);
  };
  return cf;
}

// ---------------------------------------------------------------------------
// Ready-made interpretations with well-known induced cofunctors.

// state over the values of one store location, interpreted into the store
inline Interpretation view_update_interpretation(const Theory& store,
                                                 const std::string& loc) {
  Interpretation f;
  f.target = store;
  f.source = state_theory(store.loc_values.at(loc));
  int k = static_cast<int>(f.source.values.size());
  f.assign["get"] = Term::op("get_" + loc, detail::vars_upto(k));
  for (const auto& v : f.source.values)
    f.assign["put_" + v] = Term::op("put_" + loc + "_" + v, {Term::v("0")});
  return f;
}

// Dyck theory into the stack theory over a magma: U pushes the generator,
// D pops the top two entries and pushes their product, the height tests
// probe the stack nondestructively.
inline Interpretation dyck_to_stack_interpretation(const Theory& dyck,
                                                   const Theory& stack,
                                                   const Magma& m) {
  Interpretation f;
  f.source = dyck;
  f.target = stack;
  const auto& V = stack.values;
  int k = static_cast<int>(V.size());
  auto pop_with = [&](const std::function<Term(const std::string&)>& br,
                      Term bottom) {
    std::vector<Term> as;
    for (const auto& v : V) as.push_back(br(v));
    as.push_back(std::move(bottom));
    return Term::op("pop", std::move(as));
  };
  f.assign["U"] = Term::op("push_" + m.unit, {Term::v("0")});
  f.assign["D"] = pop_with(
      [&](const std::string& v) {
        return pop_with(
            [&](const std::string& w) {
              return Term::op("push_" + m.mult(v, w), {Term::v("0")});
            },
            Term::v("0"));
      },
      Term::v("0"));
  // ht_0(x,y): pop; on a value, push it back and take x; at bottom take y
  std::function<Term(int, Term, Term)> ht = [&](int n, Term x, Term y) -> Term {
    if (n == 0)
      return pop_with(
          [&](const std::string& v) { return Term::op("push_" + v, {x}); }, y);
    return pop_with(
        [&](const std::string& v) {
          return ht(n - 1, Term::op("push_" + v, {x}),
                    Term::op("push_" + v, {y}));
        },
        y);
  };
  for (int n = 0; n <= dyck.height_cutoff; ++n)
    f.assign["ht_gt_" + std::to_string(n)] =
        ht(n, Term::v("0"), Term::v("1"));
  (void)k;
  return f;
}

// ---------------------------------------------------------------------------
// The tape: bidirectional store over the integers.  Behaviours are
// eventually periodic biinfinite words; the cofunctor to reversible input
// splits each cell with the Cantor pairing.

inline long cantor_pair(long w, long u) { return (w + u) * (w + u + 1) / 2 + u; }
inline std::pair<long, long> cantor_unpair(long n) {
  long s = 0;
  while ((s + 1) * (s + 2) / 2 <= n) ++s;
  long u = n - s * (s + 1) / 2;
  return {s - u, u};  // (first, second)
}

// Reversible input over numeral values, read off a tape through the second
// Cantor component: reading consumes q(cell), rewrites the cell to p(cell)
// and moves right; unreading moves left and pairs the value back in.
inline CofunctorView tape_pairing_cofunctor() {
  CofunctorView cf;
  cf.on_object = [](const BehaviourObject& tape) {
    // the stream of second components at positions 0, 1, 2, ...
    std::vector<std::string> p;
    long hi = std::max<long>(tape.tape_base +
                                 static_cast<long>(tape.tape_core.size()),
                             0);
    for (long k = 0; k < hi; ++k)
      p.push_back(std::to_string(cantor_unpair(tape_at(tape, k)).second));
    std::vector<std::string> c;
    for (long j = 0; j < static_cast<long>(tape.tape_right.size()); ++j)
      c.push_back(std::to_string(cantor_unpair(tape_at(tape, hi + j)).second));
    return BehaviourObject::rev_input_stream(std::move(p), std::move(c));
  };
  cf.lift = [cf](const BehaviourObject& tape, const BehaviourMorphism& m) {
    long i = m.shift;
    const BehaviourObject& W = m.target;  // reversible-input stream
    // agreement horizon: past N the target stream is the shifted source
    BehaviourObject src = cf.on_object(tape);
    long N = static_cast<long>(std::max(src.prefix.size(), W.prefix.size())) +
             std::labs(i) +
             std::lcm<long>(std::max<size_t>(src.cycle.size(), 1),
                            std::max<size_t>(W.cycle.size(), 1));
    long lo = std::min<long>({-i, 0, tape.tape_base - i});
    long hi = std::max<long>(
        {N, tape.tape_base + static_cast<long>(tape.tape_core.size()) - i - 1,
         0});
    std::vector<long> core;
    for (long k = lo; k <= hi; ++k) {
      long v = tape_at(tape, k + i);
      if (k >= 0)
        core.push_back(cantor_pair(cantor_unpair(v).first,
                                   std::stol(stream_at(W, k))));
      else if (k >= -i)
        core.push_back(cantor_unpair(v).first);
      else
        core.push_back(v);
    }
    std::vector<long> left, right;
    for (long j = 0; j < static_cast<long>(tape.tape_left.size()); ++j)
      left.push_back(tape_at(tape, lo - 1 - j + i));
    for (long j = 0; j < static_cast<long>(tape.tape_right.size()); ++j)
      right.push_back(tape_at(tape, hi + 1 + j + i));
    BehaviourMorphism out;
    out.kind = BehaviourMorphism::Kind::Shift;
    out.shift = i;
    out.source = tape;
    out.target = BehaviourObject::tape(std::move(left), std::move(core),
                                       std::move(right), lo);
    return out;
  };
  return cf;
}

// ---------------------------------------------------------------------------
// Law checking for cofunctor views and classifiers.

// The three cofunctor axioms on sampled objects and morphisms: upstairs is
// the category the view acts on, downstairs the one it projects to.
inline CheckReport check_cofunctor_view(const CofunctorView& cf,
                                        const BehaviourCategory& upstairs,
                                        const BehaviourCategory& downstairs,
                                        int max_objects, int bound) {
  CheckReport rep;
  auto objs = upstairs.objects(max_objects);
  auto downs = downstairs.objects(max_objects);
  for (const auto& beta : objs) {
    BehaviourObject alpha = cf.on_object(beta);
    // (ii) identities lift to identities
    BehaviourMorphism lid = cf.lift(beta, downstairs.id(alpha));
    if (!(lid == upstairs.id(beta))) rep.fail("identity lift fails");
    for (const auto& gamma : downs) {
      for (const auto& m : downstairs.hom(alpha, gamma, bound)) {
        BehaviourMorphism l1 = cf.lift(beta, m);
        // (i) domains match, codomains project back
        if (!(l1.source == beta)) rep.fail("lift changes the domain");
        if (!(cf.on_object(l1.target) == m.target))
          rep.fail("lifted codomain does not project to the codomain");
        // (iii) composition
        for (const auto& delta : downs)
          for (const auto& n : downstairs.hom(m.target, delta, bound)) {
            auto nm = downstairs.compose(n, m);
            if (!nm) continue;
            BehaviourMorphism l2 = cf.lift(l1.target, n);
            auto comp = upstairs.compose(l2, l1);
            BehaviourMorphism direct = cf.lift(beta, *nm);
            if (!comp || !(direct == *comp))
              rep.fail("composition lift fails");
          }
      }
    }
  }
  return rep;
}

// Every enumerated classifier state must run each generator to the output
// its behaviour dictates, moving to a state of the derivative behaviour.
inline CheckReport check_classifier_contract(const Theory& th,
                                             const BehaviourObject& beta,
                                             int max_states) {
  CheckReport rep;
  LazyComodel lc = classifying_comodel(th, beta);
  LazyComodel fin = final_comodel(th);
  if (!(behaviour_of(lc, lc.universal) == beta))
    rep.fail("universal state has the wrong behaviour");
  auto states = enumerate_states(lc, max_states);
  for (const auto& s : states) {
    BehaviourObject bs = behaviour_of(lc, s);
    for (const auto& sym : th.sig.symbols) {
      auto [i, s2] = lc.coop(sym.name, s);
      auto [j, f2] = fin.coop(sym.name, LazyState::final_state(bs));
      if (i != j) rep.fail("output of " + sym.name + " deviates from the behaviour");
      if (!(behaviour_of(lc, s2) == f2.beta))
        rep.fail("next state of " + sym.name + " has the wrong behaviour");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Reflection into the presheaf monad over the behaviour category.

struct Reflection {
  Theory theory;
  SmallCategory cat;
  std::vector<std::pair<std::string, BehaviourObject>> objects;  // name, beta
  int word_cutoff = 3;  // output only: words longer than this collapse

  const BehaviourObject& object_of(const std::string& name) const {
    for (const auto& [n, b] : objects)
      if (n == name) return b;
    throw unknown_symbol("object " + name);
  }

  // t |-> lambda beta. (beta(t), the arrow classified by t >> id)
  PresheafMonadElement reflect(const Term& t) const {
    PresheafMonadElement e;
    for (const auto& [name, beta] : objects) {
      LazyComodel lc = classifying_comodel(theory, beta);
      auto [v, end] = run_lazy(lc, lc.universal, t);
      std::string arrow;
      if (theory.builtin == "read-only-state") {
        arrow = cat.ids.at(name);
      } else if (theory.builtin == "state" || theory.builtin == "store") {
        BehaviourObject tgt = behaviour_of(lc, end);
        std::string tname;
        for (const auto& [n2, b2] : objects)
          if (b2 == tgt) tname = n2;
        arrow = "m_" + name + "_" + tname;
      } else if (theory.builtin == "output") {
        if (static_cast<int>(end.word.size()) > word_cutoff) {
          arrow = "w_top";
        } else {
          arrow = "w";
          for (const auto& l : end.word) arrow += "_" + l;
        }
      } else {
        throw infinite_behaviour_category(theory.builtin);
      }
      e.at[name] = {arrow, v};
    }
    return e;
  }
};

inline Reflection make_reflection(const Theory& th, int word_cutoff = 3) {
  Reflection r;
  r.theory = th;
  r.word_cutoff = word_cutoff;
  if (th.builtin == "read-only-state" || th.builtin == "state") {
    for (const auto& v : th.values)
      r.objects.emplace_back(v, th.builtin == "state"
                                    ? BehaviourObject::state_value(v)
                                    : BehaviourObject::ro_value(v));
  } else if (th.builtin == "store") {
    BehaviourCategory bc = behaviour_category(th);
    for (const auto& b : bc.objects(100000)) {
      std::string name;
      for (const auto& l : th.locations)
        name += (name.empty() ? "" : ",") + l + "=" + b.tuple.at(l);
      r.objects.emplace_back(name, b);
    }
  } else if (th.builtin == "output") {
    r.objects.emplace_back("*", BehaviourObject::output_point());
  } else {
    throw infinite_behaviour_category(
        th.builtin.empty() ? "generic theory" : th.builtin);
  }
  for (const auto& [name, b] : r.objects) {
    (void)b;
    r.cat.objects.push_back(name);
  }
  if (th.builtin == "read-only-state") {
    for (const auto& o : r.cat.objects) {
      r.cat.arrows.push_back({"id_" + o, o, o});
      r.cat.ids[o] = "id_" + o;
    }
  } else if (th.builtin == "state" || th.builtin == "store") {
    for (const auto& a : r.cat.objects)
      for (const auto& b : r.cat.objects)
        r.cat.arrows.push_back({"m_" + a + "_" + b, a, b});
    for (const auto& o : r.cat.objects) r.cat.ids[o] = "m_" + o + "_" + o;
    for (const auto& a : r.cat.objects)
      for (const auto& b : r.cat.objects)
        for (const auto& c : r.cat.objects)
          r.cat.comp[{"m_" + b + "_" + c, "m_" + a + "_" + b}] =
              "m_" + a + "_" + c;
  } else {  // output: words up to the cutoff plus one absorbing overflow
    auto name_of = [](const std::vector<std::string>& w) {
      std::string n = "w";
      for (const auto& l : w) n += "_" + l;
      return n;
    };
    auto words = detail::words_up_to(th.values, word_cutoff);
    for (const auto& w : words) r.cat.arrows.push_back({name_of(w), "*", "*"});
    r.cat.arrows.push_back({"w_top", "*", "*"});
    r.cat.ids["*"] = "w";
    for (const auto& a : r.cat.arrows)
      for (const auto& b : r.cat.arrows) {
        if (a.name == "w" || b.name == "w") continue;
        std::string c;
        if (a.name == "w_top" || b.name == "w_top") {
          c = "w_top";
        } else {
          c = b.name + a.name.substr(1);  // concatenation of suffixes
          bool found = false;
          for (const auto& ar : r.cat.arrows) found |= ar.name == c;
          if (!found) c = "w_top";
        }
        r.cat.comp[{a.name, b.name}] = c;  // a after b = b then a
      }
  }
  return r;
}

}  // namespace ck

#endif
