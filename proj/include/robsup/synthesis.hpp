#pragma once

#include <deque>
#include <unordered_map>
#include <vector>

#include "robsup/arena.hpp"

namespace robsup {

/// Removes every state whose estimate meets xcrit, then takes the
/// accessible part.
inline GameGraph meta_trim(const GameGraph& ar, const StateSet& xcrit) {
  StateSet kill;
  for (StateId q = 0; q < ar.size(); ++q)
    if (intersects(ar.i1(q), xcrit)) kill.push_back(q);
  return ar.derive(trim_states(ar.aut, kill));
}

inline GameGraph meta_trim(const GameGraph& ar) { return meta_trim(ar, ar.ctx->plant.crit_states()); }

enum class SupCnAlgorithm {
  /// Alternate supC and supN until neither changes anything.
  iterative,
  /// Refine the plant with its observer, then prune state blocks.
  partition,
};

/// Result of sup_cn: the generator plus the plant state behind each state.
struct SupCnResult {
  Automaton aut;
  std::vector<StateId> plant_state;
};

namespace detail {

inline Automaton with_events(const Automaton& a, const EventSet& events) {
  if (a.events() == events) return a;
  Automaton out(a.universe(), events);
  out.set_name(a.name());
  for (StateId x = 0; x < a.num_states(); ++x) out.add_state(a.label(x), a.is_crit(x));
  for (StateId x = 0; x < a.num_states(); ++x)
    for (const auto& t : a.out(x)) out.add_transition(x, t.event, t.target);
  if (!a.empty()) out.set_initial(a.initial());
  return out;
}

/// spec × plant keeping spec labels, so every state knows its plant state.
inline SupCnResult track(const Automaton& spec, const Automaton& plant) {
  SupCnResult r{Automaton(plant.universe(), plant.events()), {}};
  r.aut.set_name(spec.name());
  if (spec.empty()) return r;
  std::unordered_map<std::pair<StateId, StateId>, StateId, PairHash> index;
  std::vector<StateId> spec_state;
  std::deque<StateId> queue;
  auto intern = [&](StateId k, StateId l) {
    auto [it, fresh] = index.try_emplace({k, l}, 0);
    if (fresh) {
      it->second = r.aut.add_state(spec.label(k), spec.is_crit(k));
      spec_state.push_back(k);
      r.plant_state.push_back(l);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(spec.initial(), plant.initial());
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    auto k = spec_state[id];
    auto l = r.plant_state[id];
    for (const auto& t : spec.out(k)) {
      auto lt = plant.next(l, t.event);
      if (!lt) throw input_error("specification language is not contained in the plant language");
      r.aut.add_transition(id, t.event, intern(t.target, *lt));
    }
  }
  r.aut.set_initial(0);
  return r;
}

inline SupCnResult restrict(const SupCnResult& k, const std::vector<char>& removed) {
  auto d = restrict_accessible(k.aut, removed);
  SupCnResult out{std::move(d.aut), {}};
  for (auto o : d.origin) out.plant_state.push_back(k.plant_state[o]);
  return out;
}

/// One supC pass; returns false when K is already controllable.
inline bool sup_c_step(SupCnResult& k, const Automaton& plant, const EventSet& uncontrollable) {
  auto n = k.aut.num_states();
  std::vector<char> bad(n, 0);
  std::vector<std::vector<StateId>> preds(n);
  std::vector<StateId> work;
  for (StateId x = 0; x < n; ++x) {
    for (const auto& t : plant.out(k.plant_state[x]))
      if (uncontrollable.contains(t.event) && !k.aut.next(x, t.event)) {
        if (!bad[x]) work.push_back(x);
        bad[x] = 1;
      }
    for (const auto& t : k.aut.out(x))
      if (uncontrollable.contains(t.event)) preds[t.target].push_back(x);
  }
  if (work.empty()) return false;
  while (!work.empty()) {
    auto x = work.back();
    work.pop_back();
    for (auto p : preds[x])
      if (!bad[p]) {
        bad[p] = 1;
        work.push_back(p);
      }
  }
  k = restrict(k, bad);
  return true;
}

/// One supN pass: K − P⁻¹[P(L−K)]E*. Returns false when K is normal.
inline bool sup_n_step(SupCnResult& k, const Automaton& plant, const EventSet& unobservable, std::size_t limit) {
  auto n = static_cast<StateId>(k.aut.num_states());
  // K completed inside L: ids < n are K states, n + l is the sink copy of l.
  Automaton completed(plant.universe(), plant.events());
  for (StateId x = 0; x < n; ++x) completed.add_state();
  for (StateId l = 0; l < plant.num_states(); ++l) completed.add_state();
  for (StateId x = 0; x < n; ++x)
    for (const auto& t : plant.out(k.plant_state[x])) {
      auto kt = k.aut.next(x, t.event);
      completed.add_transition(x, t.event, kt ? *kt : n + t.target);
    }
  for (StateId l = 0; l < plant.num_states(); ++l)
    for (const auto& t : plant.out(l)) completed.add_transition(n + l, t.event, n + t.target);
  completed.set_initial(0);
  auto obs = observer(completed, unobservable, limit);
  std::vector<char> bad(obs.aut.num_states(), 0);
  bool any_bad = false;
  for (StateId o = 0; o < obs.aut.num_states(); ++o)
    if (!obs.sets[o].empty() && obs.sets[o].back() >= n) bad[o] = any_bad = 1;
  if (!any_bad) return false;

  SupCnResult out{Automaton(k.aut.universe(), k.aut.events()), {}};
  out.aut.set_name(k.aut.name());
  if (bad[0]) {
    k = std::move(out);
    return true;
  }
  std::unordered_map<std::pair<StateId, StateId>, StateId, PairHash> index;
  std::vector<std::pair<StateId, StateId>> parts;
  std::deque<StateId> queue;
  auto intern = [&](StateId x, StateId o) {
    auto [it, fresh] = index.try_emplace({x, o}, 0);
    if (fresh) {
      it->second = out.aut.add_state(k.aut.label(x), k.aut.is_crit(x));
      out.plant_state.push_back(k.plant_state[x]);
      parts.emplace_back(x, o);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(k.aut.initial(), obs.aut.initial());
  bool dropped = false;
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    auto [x, o] = parts[id];
    for (const auto& t : k.aut.out(x)) {
      auto ot = unobservable.contains(t.event) ? o : *obs.aut.next(o, t.event);
      if (bad[ot]) {
        dropped = true;
        continue;
      }
      out.aut.add_transition(id, t.event, intern(t.target, ot));
    }
  }
  // Bad blocks only reachable outside K: K is already normal.
  if (!dropped) return false;
  out.aut.set_initial(0);
  k = std::move(out);
  return true;
}

inline SupCnResult sup_cn_partition(const SupCnResult& k, const Automaton& plant, const EventSet& uncontrollable,
                                    const EventSet& unobservable, std::size_t limit) {
  // The specification must be a strict sub-automaton of the plant.
  std::vector<StateId> kept_as(plant.num_states(), no_state);
  for (StateId x = 0; x < k.aut.num_states(); ++x) {
    auto l = k.plant_state[x];
    if (kept_as[l] != no_state) throw input_error("partition mode needs a strict sub-automaton specification");
    kept_as[l] = x;
  }
  for (StateId x = 0; x < k.aut.num_states(); ++x)
    for (const auto& t : plant.out(k.plant_state[x]))
      if (kept_as[t.target] != no_state && k.aut.next(x, t.event) != kept_as[t.target])
        throw input_error("partition mode needs a strict sub-automaton specification");

  // G' = plant || Obs(plant), built on demand. A block holding a state
  // outside the specification dies as a whole, so it is never expanded.
  std::vector<StateSet> blocks;
  std::vector<char> block_dead;
  std::unordered_map<StateSet, StateId, StateSetHash> block_index;
  auto block_of = [&](StateSet set) {
    auto it = block_index.find(set);
    if (it != block_index.end()) return it->second;
    bool dead = false;
    for (auto l : set) dead = dead || kept_as[l] == no_state;
    auto id = static_cast<StateId>(blocks.size());
    block_index.emplace(set, id);
    blocks.push_back(std::move(set));
    block_dead.push_back(dead);
    return id;
  };
  Automaton refined(plant.universe(), plant.events());
  refined.set_name(k.aut.name());
  std::unordered_map<std::pair<StateId, StateId>, StateId, PairHash> index;
  std::vector<std::pair<StateId, StateId>> parts;
  std::deque<StateId> queue;
  auto intern = [&](StateId l, StateId o) {
    auto [it, fresh] = index.try_emplace({l, o}, 0);
    if (fresh) {
      if (limit && refined.num_states() >= limit) throw limit_exceeded("refined plant exceeds the state limit");
      it->second = refined.add_state(plant.label(l), plant.is_crit(l));
      parts.emplace_back(l, o);
      if (!block_dead[o]) queue.push_back(it->second);
    }
    return it->second;
  };
  intern(plant.initial(), block_of(silent_closure(plant, {plant.initial()}, unobservable)));
  std::unordered_map<std::pair<StateId, EventId>, StateId, PairHash> block_next;
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    auto [l, o] = parts[id];
    for (const auto& t : plant.out(l)) {
      StateId ot = o;
      if (!unobservable.contains(t.event)) {
        auto [it, fresh] = block_next.try_emplace({o, t.event}, 0);
        if (fresh) {
          StateSet targets;
          for (auto m : blocks[o])
            if (auto y = plant.next(m, t.event)) targets.push_back(*y);
          it->second = block_of(silent_closure(plant, normalized(std::move(targets)), unobservable));
        }
        ot = it->second;
      }
      refined.add_transition(id, t.event, intern(t.target, ot));
    }
  }
  refined.set_initial(0);

  auto n = refined.num_states();
  std::vector<char> dead(n, 0);
  std::vector<std::vector<StateId>> members(blocks.size());
  std::vector<std::vector<StateId>> preds(n);
  std::vector<StateId> work;
  for (StateId s = 0; s < n; ++s) {
    members[parts[s].second].push_back(s);
    for (const auto& t : refined.out(s))
      if (uncontrollable.contains(t.event)) preds[t.target].push_back(s);
  }
  auto kill = [&](StateId s) {
    if (!dead[s]) {
      dead[s] = 1;
      work.push_back(s);
    }
  };
  for (StateId s = 0; s < n; ++s)
    if (block_dead[parts[s].second]) kill(s);
  std::vector<char> block_done(blocks.size(), 0);
  while (!work.empty()) {
    auto s = work.back();
    work.pop_back();
    for (auto p : preds[s]) kill(p);
    auto o = parts[s].second;
    if (!block_done[o]) {
      block_done[o] = 1;
      for (auto m : members[o]) kill(m);
    }
  }
  SupCnResult base{std::move(refined), {}};
  for (auto& [l, o] : parts) base.plant_state.push_back(l);
  // Relabel with the specification's names.
  for (StateId s = 0; s < n; ++s)
    if (!dead[s])
      base.aut.set_label(s, k.aut.label(kept_as[parts[s].first]) + "|o" + std::to_string(parts[s].second));
  return restrict(base, dead);
}

}  // namespace detail

/// Supremal prefix-closed sublanguage of L(spec) that is controllable
/// (uncontrollable = events outside ec) and normal (hidden = events
/// outside eo) with respect to L(plant). A nonzero state_limit caps the
/// intermediate observer constructions (limit_exceeded).
inline SupCnResult sup_cn(const Automaton& spec_in, const Automaton& plant, const EventSet& ec, const EventSet& eo,
                          SupCnAlgorithm algo = SupCnAlgorithm::iterative, std::size_t state_limit = 0) {
  if (!ec.subset_of(eo)) throw input_error("sup_cn needs controllable events to be observable");
  if (plant.empty()) throw input_error("sup_cn needs a nonempty plant");
  if (!spec_in.empty() && !spec_in.events().subset_of(plant.events()))
    throw input_error("specification uses events outside the plant alphabet");
  auto spec = spec_in.empty() ? spec_in : detail::with_events(rebase(spec_in, plant.universe()), plant.events());
  auto k = detail::track(spec, plant);
  if (k.aut.empty()) return k;
  auto uncontrollable = plant.events() - ec;
  auto unobservable = plant.events() - eo;
  if (algo == SupCnAlgorithm::partition) return detail::sup_cn_partition(k, plant, uncontrollable, unobservable, state_limit);
  for (;;) {
    bool changed = detail::sup_c_step(k, plant, uncontrollable);
    if (k.aut.empty()) return k;
    changed = detail::sup_n_step(k, plant, unobservable, state_limit) || changed;
    if (k.aut.empty() || !changed) return k;
  }
}

struct SynthesisOptions {
  SupCnAlgorithm algorithm = SupCnAlgorithm::iterative;
  ArenaOptions arena;
  std::size_t state_limit = 0;
};

/// Meta-control on an already built arena.
inline SupArena synthesize(const Arena& ar, SupCnAlgorithm algo = SupCnAlgorithm::iterative,
                           std::size_t state_limit = 0) {
  auto trimmed = meta_trim(ar);
  SupArena out{Automaton(ar.ctx->meta), {}, {}, ar.ctx, ar.options};
  out.aut.set_name("asup");
  if (trimmed.empty()) return out;
  const auto& meta = *ar.ctx->meta;
  auto res = sup_cn(trimmed.aut, ar.aut, meta.controllable(), meta.observable(), algo, state_limit);
  out.aut = std::move(res.aut);
  out.aut.set_name("asup");
  for (auto q : res.plant_state) {
    out.info.push_back(ar.info.at(q));
    out.origin.push_back(ar.origin.at(q));
  }
  return out;
}

inline SupArena synthesize(const Automaton& g, const AttackModel& a, SynthesisOptions opt = {}) {
  return synthesize(build_arena(g, a, opt.arena), opt.algorithm, opt.state_limit);
}

/// A robust supervisor exists iff the solution arena is nonempty.
inline bool exists_robust(const Automaton& g, const AttackModel& a, SynthesisOptions opt = {}) {
  return !synthesize(g, a, opt).empty();
}

struct PropertyReport {
  bool included = true;
  bool controllable = true;
  bool normal = true;
  std::vector<EventId> inclusion_witness;
  std::vector<EventId> controllability_witness;
  std::vector<EventId> normality_witness;
  bool ok() const { return included && controllable && normal; }
};

/// Decides L(k) ⊆ L(l), controllability, and normality, with witnesses.
inline PropertyReport check_properties(const Automaton& k_in, const Automaton& l, const EventSet& ec,
                                       const EventSet& eo) {
  PropertyReport rep;
  if (k_in.empty()) return rep;
  auto k = detail::with_events(rebase(k_in, l.universe()), l.events());
  auto inc = language_included(k, l);
  if (!inc) {
    rep.included = rep.controllable = rep.normal = false;
    rep.inclusion_witness = inc.witness;
    return rep;
  }
  auto uncontrollable = l.events() - ec;
  auto unobservable = l.events() - eo;
  auto tracked = detail::track(k, l);
  // Shortest path to every tracked state for witnesses.
  std::vector<std::pair<StateId, EventId>> parent(tracked.aut.num_states(), {no_state, 0});
  std::vector<StateId> order{tracked.aut.initial()};
  std::vector<char> seen(tracked.aut.num_states(), 0);
  seen[order[0]] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& t : tracked.aut.out(order[i]))
      if (!seen[t.target]) {
        seen[t.target] = 1;
        parent[t.target] = {order[i], t.event};
        order.push_back(t.target);
      }
  auto path_to = [&](StateId x) {
    std::vector<EventId> s;
    for (; parent[x].first != no_state; x = parent[x].first) s.push_back(parent[x].second);
    std::reverse(s.begin(), s.end());
    return s;
  };
  for (auto x : order) {
    for (const auto& t : l.out(tracked.plant_state[x]))
      if (uncontrollable.contains(t.event) && !tracked.aut.next(x, t.event)) {
        rep.controllable = false;
        rep.controllability_witness = path_to(x);
        rep.controllability_witness.push_back(t.event);
        break;
      }
    if (!rep.controllable) break;
  }
  // P⁻¹(P(K)) ∩ L via the observer of K with hidden events self-looped.
  auto obs = observer(k, unobservable);
  Automaton lifted(l.universe(), l.events());
  for (StateId o = 0; o < obs.aut.num_states(); ++o) lifted.add_state(obs.aut.label(o));
  for (StateId o = 0; o < obs.aut.num_states(); ++o) {
    for (const auto& t : obs.aut.out(o)) lifted.add_transition(o, t.event, t.target);
    unobservable.for_each([&](EventId e) { lifted.add_transition(o, e, o); });
  }
  lifted.set_initial(0);
  auto closure = compose_parallel(lifted, l);
  auto eq = language_equal(k, closure.aut);
  if (!eq) {
    rep.normal = false;
    rep.normality_witness = eq.witness;
  }
  return rep;
}

}  // namespace robsup
