#pragma once

#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "robsup/extraction.hpp"

namespace robsup {

struct Counterexample {
  /// Closed-loop string over Σm.
  std::vector<EventId> trace;
  /// P^G(trace): what the plant executed.
  std::vector<EventId> plant_string;
  /// P^S(trace): what the supervisor saw.
  std::vector<EventId> supervisor_string;
  StateId plant_state = no_state;
};

struct RobustnessResult {
  bool robust = true;
  std::optional<Counterexample> counterexample;
  explicit operator bool() const { return robust; }
};

namespace detail {

/// BFS parents; edges are scanned in event order, so the first path found
/// to each state is the lexicographically least among the shortest.
inline std::vector<EventId> bfs_path(const Automaton& aut, StateId target,
                                     const std::vector<std::pair<StateId, EventId>>& parent) {
  std::vector<EventId> s;
  for (auto x = target; parent[x].first != no_state; x = parent[x].first) s.push_back(parent[x].second);
  std::reverse(s.begin(), s.end());
  (void)aut;
  return s;
}

}  // namespace detail

/// Robust: no closed-loop state puts the plant in X_crit.
inline RobustnessResult verify_robust(const Automaton& g, const Automaton& r, const AttackModel& a) {
  auto cl = closed_loop(g, r, a);
  const auto& aut = cl.aut;
  RobustnessResult res;
  std::vector<std::pair<StateId, EventId>> parent(aut.num_states(), {no_state, 0});
  std::vector<char> seen(aut.num_states(), 0);
  std::deque<StateId> queue{aut.initial()};
  seen[aut.initial()] = 1;
  const auto& u = aut.alphabet();
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    if (aut.is_crit(x)) {
      Counterexample cx;
      cx.trace = detail::bfs_path(aut, x, parent);
      for (auto e : cx.trace) {
        if (auto p = u.plant_projection(e)) cx.plant_string.push_back(*p);
        if (auto p = u.supervisor_projection(e); p && u.info(*p).observable) cx.supervisor_string.push_back(*p);
      }
      cx.plant_state = cl.plant_state(x);
      res.robust = false;
      res.counterexample = std::move(cx);
      return res;
    }
    for (const auto& t : aut.out(x))
      if (!seen[t.target]) {
        seen[t.target] = 1;
        parent[t.target] = {x, t.event};
        queue.push_back(t.target);
      }
  }
  return res;
}

/// RE(s) two ways: the closed-loop product search and the recursive
/// estimate driven by C_Ra. Throws std::logic_error if they disagree.
inline StateSet re_oracle(const Automaton& g, const Automaton& r, const AttackModel& a, std::span<const EventId> s) {
  auto cl = closed_loop(g, r, a);
  const auto& aut = cl.aut;
  const auto& u = aut.alphabet();
  auto obs_e = u.observable_with_edits();
  auto hidden = aut.events() - obs_e;
  for (auto e : s)
    if (!obs_e.contains(e)) throw input_error("re_oracle expects a string over the attack alphabet");

  // (i) all t with P(t) = s, by subset stepping through the product.
  auto cur = silent_closure(aut, {aut.initial()}, hidden);
  for (auto e : s) {
    StateSet next;
    for (auto x : cur)
      if (auto y = aut.next(x, e)) next.push_back(*y);
    if (next.empty()) throw input_error("string is not in the observed closed-loop language");
    cur = silent_closure(aut, normalized(std::move(next)), hidden);
  }
  StateSet by_product;
  for (auto x : cur) by_product.push_back(cl.plant_state(x));
  by_product = normalized(std::move(by_product));

  // (ii) left fold: RE(se) = UR_{C_Ra(se)∩Σ}(δ_Ga(RE(s), e)).
  auto ga = attacked_plant(g);
  auto ra = attacked_supervisor(r);
  auto rebased_ra = rebase(ra, ga.universe());
  StateId rx = rebased_ra.initial();
  auto legit = ga.alphabet().legitimate();
  auto est = unobservable_reach(ga, {ga.initial()}, rebased_ra.active(rx) & legit);
  for (auto e : s) {
    auto ry = rebased_ra.next(rx, e);
    if (!ry) throw std::logic_error("attacked supervisor blocks an observed event");
    rx = *ry;
    StateSet moved;
    for (auto x : est)
      if (auto y = ga.next(x, e)) moved.push_back(*y);
    est = unobservable_reach(ga, normalized(std::move(moved)), rebased_ra.active(rx) & legit);
  }
  if (est != by_product) throw std::logic_error("state estimate oracles disagree");
  return est;
}

struct EmbeddingResult {
  bool embeds = true;
  /// Shortest observed string (over Σo,e) whose fold is undefined.
  std::vector<EventId> witness;
  explicit operator bool() const { return embeds; }
};

/// Checks that every observed closed-loop string folds through sup with the
/// decisions of r; a synchronized BFS over (closed-loop state, sup state).
inline EmbeddingResult embeds(const SupArena& sup, const Automaton& g, const Automaton& r, const AttackModel& a) {
  EmbeddingResult res;
  auto cl = closed_loop(g, r, a);
  const auto& aut = cl.aut;
  const auto& u = aut.alphabet();
  auto obs_e = u.observable_with_edits();
  auto legit = u.legitimate();
  Automaton rr = rebase(r, sup.ctx->sigma);
  auto gamma_of = [&](StateId clx) { return rr.active(cl.supervisor_state(clx)) & legit; };
  if (sup.empty()) {
    res.embeds = false;
    return res;
  }
  auto start = h1(sup, sup.aut.initial(), gamma_of(aut.initial()));
  if (!start) {
    res.embeds = false;
    return res;
  }
  using Key = std::pair<StateId, StateId>;
  std::unordered_map<Key, std::pair<Key, EventId>, detail::PairHash> parent;
  Key root{aut.initial(), *start};
  parent.emplace(root, std::pair{Key{no_state, no_state}, no_event});
  std::deque<Key> queue{root};
  auto witness_of = [&](Key k, EventId last) {
    std::vector<EventId> s;
    if (last != no_event) s.push_back(last);
    for (; k != root; k = parent.at(k).first) {
      auto e = parent.at(k).second;
      if (obs_e.contains(e)) s.push_back(e);
    }
    std::reverse(s.begin(), s.end());
    return s;
  };
  while (!queue.empty()) {
    auto k = queue.front();
    queue.pop_front();
    auto [x, q] = k;
    for (const auto& t : aut.out(x)) {
      std::optional<StateId> nq = q;
      if (obs_e.contains(t.event)) nq = step_h2_big(sup, q, t.event, gamma_of(t.target));
      if (!nq) {
        res.embeds = false;
        res.witness = witness_of(k, t.event);
        return res;
      }
      Key nk{t.target, *nq};
      if (parent.emplace(nk, std::pair{k, t.event}).second) queue.push_back(nk);
    }
  }
  return res;
}

}  // namespace robsup
