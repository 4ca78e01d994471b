#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "robsup/robsup.hpp"

namespace fx {

using namespace robsup;

inline std::string data(const std::string& rel) { return std::string(ROBSUP_DATA) + "/" + rel; }

inline Automaton running_plant() { return load_automaton(data("running/plant.txt")); }

inline Automaton running_sup(const std::string& file, const Automaton& g) {
  return rebase(load_automaton(data("running/" + file)), g.universe());
}

/// T1: a(c,o), u(uc,uo); 0-u->1, 0-a->2, 1-a->2.
inline Automaton t1() {
  auto s = std::make_shared<Alphabet>();
  auto a = s->add_plain("a", true, true);
  auto u = s->add_plain("u", false, false);
  Automaton t(s);
  t.set_name("T1");
  for (int i = 0; i < 3; ++i) t.add_state();
  t.add_transition(0, u, 1);
  t.add_transition(0, a, 2);
  t.add_transition(1, a, 2);
  t.set_initial(0);
  return t;
}

inline std::vector<EventId> word(const Alphabet& u, const std::string& text) {
  std::vector<EventId> s;
  std::string cur;
  for (char ch : text + " ") {
    if (ch == ' ') {
      if (!cur.empty()) s.push_back(u.at(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Random instances.

using Rng = std::mt19937;

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// 2..4 events; at least one compromised; controllable implies observable.
inline AlphabetPtr random_alphabet(Rng& rng) {
  auto s = std::make_shared<Alphabet>();
  int n = pick(rng, 2, 4);
  bool any_comp = false;
  for (int i = 0; i < n; ++i) {
    bool obs = i == 0 || coin(rng, 0.7);
    bool ctrl = obs && coin(rng, 0.6);
    bool comp = obs && (coin(rng, 0.4) || (!any_comp && i == n - 1));
    if (comp && !obs) comp = false;
    any_comp = any_comp || comp;
    s->add_plain(std::string(1, static_cast<char>('a' + i)), ctrl, obs, comp);
  }
  if (!any_comp) {
    // Event 0 is observable by construction.
    auto t = std::make_shared<Alphabet>();
    for (EventId e = 0; e < s->size(); ++e) {
      auto i = s->info(e);
      t->add_plain(i.name, i.controllable, i.observable, i.compromised || e == 0);
    }
    return t;
  }
  return s;
}

/// Accessible plant with up to max_states states and some critical states.
inline Automaton random_plant(Rng& rng, const AlphabetPtr& sigma, int max_states = 6) {
  int n = pick(rng, 2, max_states);
  Automaton g(sigma, sigma->legitimate());
  g.set_name("G");
  for (int i = 0; i < n; ++i) g.add_state(std::to_string(i), i > 0 && coin(rng, 0.2));
  for (int x = 0; x < n; ++x)
    sigma->legitimate().for_each([&](EventId e) {
      if (coin(rng, 0.45)) g.add_transition(x, e, pick(rng, 0, n - 1));
    });
  g.set_initial(0);
  return accessible(g).aut;
}

/// Admissible realization: uncontrollable events always enabled, enabled
/// unobservable events self-looped.
inline Automaton random_supervisor(Rng& rng, const AlphabetPtr& sigma, int max_states = 3) {
  int n = pick(rng, 1, max_states);
  Automaton r(sigma, sigma->legitimate());
  r.set_name("R");
  for (int i = 0; i < n; ++i) r.add_state();
  for (int x = 0; x < n; ++x)
    sigma->legitimate().for_each([&](EventId e) {
      const auto& i = sigma->info(e);
      if (i.controllable && !coin(rng, 0.7)) return;
      if (!i.observable) r.add_transition(x, e, x);
      else r.add_transition(x, e, pick(rng, 0, n - 1));
    });
  r.set_initial(0);
  return accessible(r).aut;
}

/// Attack satisfying condition (1) everywhere, plus random insertions.
inline AttackModel random_attack(Rng& rng, const AlphabetPtr& sigma, int max_states = 3) {
  auto u = decorated_universe(sigma);
  AttackModel a(u, u->observable_with_edits());
  a.set_name("A");
  int n = pick(rng, 1, max_states);
  for (int i = 0; i < n; ++i) a.add_state();
  auto obs = u->legitimate() & u->observable();
  auto comp = u->compromised();
  for (int x = 0; x < n; ++x) {
    (obs - comp).for_each([&](EventId e) { a.add_transition(x, e, pick(rng, 0, n - 1)); });
    comp.for_each([&](EventId e) {
      int mode = pick(rng, 0, 2);  // 0 keep, 1 delete, 2 both
      if (mode != 1) a.add_transition(x, e, pick(rng, 0, n - 1));
      if (mode != 0) a.add_transition(x, *u->deletion_of(e), pick(rng, 0, n - 1));
      if (coin(rng, 0.5)) a.add_transition(x, *u->insertion_of(e), pick(rng, 0, n - 1));
    });
  }
  a.set_initial(0);
  return accessible(a).aut;
}

// ---------------------------------------------------------------------------
// Brute-force oracles.

/// Every string of length <= n generated by aut, with its end state.
inline std::vector<std::pair<std::vector<EventId>, StateId>> strings_upto(const Automaton& aut, int n) {
  std::vector<std::pair<std::vector<EventId>, StateId>> out;
  if (aut.empty()) return out;
  out.push_back({{}, aut.initial()});
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].first.size()) == n) continue;
    auto [s, x] = out[i];
    for (const auto& t : aut.out(x)) {
      auto s2 = s;
      s2.push_back(t.event);
      out.push_back({std::move(s2), t.target});
    }
  }
  return out;
}

inline std::vector<EventId> project(const std::vector<EventId>& s, const EventSet& keep) {
  std::vector<EventId> p;
  for (auto e : s)
    if (keep.contains(e)) p.push_back(e);
  return p;
}

}  // namespace fx
