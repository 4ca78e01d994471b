#pragma once

#include <deque>
#include <map>
#include <unordered_map>

#include "robsup/automaton.hpp"

namespace robsup {

namespace detail {

inline void check_states(const Automaton& aut, const StateSet& q) {
  for (auto x : q)
    if (!aut.has_state(x)) throw input_error("unknown state id " + std::to_string(x));
}

struct PairHash {
  std::size_t operator()(const std::pair<StateId, StateId>& p) const {
    std::size_t h = p.first;
    hash_combine(h, p.second);
    return h;
  }
};

}  // namespace detail

/// Γ(Q): events defined at some state of q.
inline EventSet active_events(const Automaton& aut, const StateSet& q) {
  detail::check_states(aut, q);
  EventSet s;
  for (auto x : q)
    for (const auto& t : aut.out(x)) s.insert(t.event);
  return s;
}

/// UR_γ(Q): closure of q under unobservable events enabled by gamma.
inline StateSet unobservable_reach(const Automaton& aut, const StateSet& q, const EventSet& gamma) {
  detail::check_states(aut, q);
  auto silent = aut.alphabet().unobservable() & gamma;
  std::vector<char> seen(aut.num_states(), 0);
  std::vector<StateId> stack;
  for (auto x : q)
    if (!seen[x]) {
      seen[x] = 1;
      stack.push_back(x);
    }
  StateSet out;
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    out.push_back(x);
    for (const auto& t : aut.out(x))
      if (silent.contains(t.event) && !seen[t.target]) {
        seen[t.target] = 1;
        stack.push_back(t.target);
      }
  }
  return normalized(std::move(out));
}

/// NX_e(Q) = δ(Q, e) for an observable event e; may be empty.
inline StateSet observable_reach(const Automaton& aut, const StateSet& q, EventId e) {
  detail::check_states(aut, q);
  if (e >= aut.alphabet().size() || !aut.alphabet().info(e).observable)
    throw input_error("observable_reach needs an observable event");
  StateSet out;
  for (auto x : q)
    if (auto y = aut.next(x, e)) out.push_back(*y);
  return normalized(std::move(out));
}

/// Copies the part of aut reachable from its initial state while avoiding
/// the states flagged in `removed` (may be empty = keep all).
inline Derived restrict_accessible(const Automaton& aut, const std::vector<char>& removed) {
  Derived d{Automaton(aut.universe(), aut.events()), {}};
  d.aut.set_name(aut.name());
  if (aut.empty()) return d;
  auto init = aut.initial();
  if (!removed.empty() && removed[init]) return d;
  std::vector<StateId> map(aut.num_states(), no_state);
  std::deque<StateId> queue{init};
  map[init] = d.aut.add_state(aut.label(init), aut.is_crit(init));
  d.origin.push_back(init);
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (const auto& t : aut.out(x)) {
      if (!removed.empty() && removed[t.target]) continue;
      if (map[t.target] == no_state) {
        map[t.target] = d.aut.add_state(aut.label(t.target), aut.is_crit(t.target));
        d.origin.push_back(t.target);
        queue.push_back(t.target);
      }
      d.aut.add_transition(map[x], t.event, map[t.target]);
    }
  }
  d.aut.set_initial(0);
  return d;
}

inline Derived accessible(const Automaton& aut) { return restrict_accessible(aut, {}); }

/// trim(G, Q): delete `kill`, keep the accessible part.
inline Derived trim_states(const Automaton& aut, const StateSet& kill) {
  detail::check_states(aut, kill);
  std::vector<char> removed(aut.num_states(), 0);
  for (auto x : kill) removed[x] = 1;
  return restrict_accessible(aut, removed);
}

/// Re-expresses `aut` inside another universe, matching events by name.
inline Automaton rebase(const Automaton& aut, const AlphabetPtr& universe) {
  if (aut.universe() == universe) return aut;
  std::vector<EventId> map(aut.alphabet().size(), 0);
  EventSet events;
  aut.events().for_each([&](EventId e) {
    const auto& info = aut.alphabet().info(e);
    auto target = universe->find(info.name);
    if (!target) throw input_error("event '" + info.name + "' missing from target universe");
    const auto& ti = universe->info(*target);
    if (ti.observable != info.observable || ti.controllable != info.controllable)
      throw input_error("event '" + info.name + "' has conflicting attributes");
    map[e] = *target;
    events.insert(*target);
  });
  Automaton out(universe, events);
  out.set_name(aut.name());
  for (StateId x = 0; x < aut.num_states(); ++x) out.add_state(aut.label(x), aut.is_crit(x));
  for (StateId x = 0; x < aut.num_states(); ++x)
    for (const auto& t : aut.out(x)) out.add_transition(x, map[t.event], t.target);
  if (!aut.empty()) out.set_initial(aut.initial());
  return out;
}

namespace detail {

/// A universe holding the events of both a and b (by name).
inline AlphabetPtr merged_universe(const Automaton& a, const Automaton& b) {
  if (a.universe() == b.universe()) return a.universe();
  if (*a.universe() == *b.universe()) return a.universe();
  auto merged = std::make_shared<Alphabet>(*a.universe());
  for (EventId e = 0; e < b.alphabet().size(); ++e) {
    const auto& info = b.alphabet().info(e);
    if (auto existing = merged->find(info.name)) {
      const auto& m = merged->info(*existing);
      if (m.observable != info.observable || m.controllable != info.controllable)
        throw input_error("event '" + info.name + "' has conflicting attributes");
      continue;
    }
    auto copy = info;
    if (copy.kind == EventKind::insertion || copy.kind == EventKind::deletion) {
      auto base = merged->find(b.alphabet().name(info.base));
      if (!base) throw input_error("decorated event '" + info.name + "' lacks its base event");
      copy.base = *base;
    }
    merged->add(copy);
  }
  return merged;
}

}  // namespace detail

/// a || b: shared events synchronize, private events interleave.
/// Accessible part only; product labels are "(la,lb)".
inline Product compose_parallel(const Automaton& a_in, const Automaton& b_in) {
  auto universe = detail::merged_universe(a_in, b_in);
  const Automaton a = rebase(a_in, universe);
  const Automaton b = rebase(b_in, universe);
  Product p{Automaton(universe, a.events() | b.events()), {}};
  if (a.empty() || b.empty()) return p;
  auto shared = a.events() & b.events();
  std::unordered_map<std::pair<StateId, StateId>, StateId, detail::PairHash> index;
  std::deque<StateId> queue;
  auto intern = [&](StateId x, StateId y) {
    auto [it, fresh] = index.try_emplace({x, y}, 0);
    if (fresh) {
      it->second = p.aut.add_state("(" + a.label(x) + "," + b.label(y) + ")",
                                   a.is_crit(x) || b.is_crit(y));
      p.parts.emplace_back(x, y);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(a.initial(), b.initial());
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    auto [x, y] = p.parts[id];
    // Merge the two sorted rows.
    auto ra = a.out(x);
    auto rb = b.out(y);
    std::size_t i = 0, j = 0;
    while (i < ra.size() || j < rb.size()) {
      if (j == rb.size() || (i < ra.size() && ra[i].event < rb[j].event)) {
        if (!shared.contains(ra[i].event)) p.aut.add_transition(id, ra[i].event, intern(ra[i].target, y));
        ++i;
      } else if (i == ra.size() || rb[j].event < ra[i].event) {
        if (!shared.contains(rb[j].event)) p.aut.add_transition(id, rb[j].event, intern(x, rb[j].target));
        ++j;
      } else {
        p.aut.add_transition(id, ra[i].event, intern(ra[i].target, rb[j].target));
        ++i;
        ++j;
      }
    }
  }
  p.aut.set_initial(0);
  return p;
}

/// Subset construction for the observation of `aut` that hides `unobs`.
struct Observer {
  Automaton aut;
  std::vector<StateSet> sets;
};

inline StateSet silent_closure(const Automaton& aut, StateSet q, const EventSet& unobs) {
  std::vector<char> seen(aut.num_states(), 0);
  for (auto x : q) seen[x] = 1;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (const auto& t : aut.out(q[i]))
      if (unobs.contains(t.event) && !seen[t.target]) {
        seen[t.target] = 1;
        q.push_back(t.target);
      }
  return normalized(std::move(q));
}

/// `limit` (0 = none) bounds the number of observer states.
inline Observer observer(const Automaton& aut, const EventSet& unobs, std::size_t limit = 0) {
  if (!unobs.subset_of(aut.alphabet().all()))
    throw input_error("observer: hidden events outside the alphabet");
  Observer o{Automaton(aut.universe(), aut.events() - unobs), {}};
  if (aut.empty()) return o;
  std::unordered_map<StateSet, StateId, StateSetHash> index;
  std::deque<StateId> queue;
  auto intern = [&](StateSet s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    std::string label = "{";
    for (std::size_t i = 0; i < s.size(); ++i) label += (i ? "," : "") + aut.label(s[i]);
    label += "}";
    bool crit = false;
    for (auto x : s) crit = crit || aut.is_crit(x);
    if (limit && o.aut.num_states() >= limit) throw limit_exceeded("observer exceeds the state limit");
    auto id = o.aut.add_state(std::move(label), crit);
    index.emplace(s, id);
    o.sets.push_back(std::move(s));
    queue.push_back(id);
    return id;
  };
  intern(silent_closure(aut, {aut.initial()}, unobs));
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    std::map<EventId, StateSet> succ;
    for (auto x : o.sets[id])
      for (const auto& t : aut.out(x))
        if (!unobs.contains(t.event)) succ[t.event].push_back(t.target);
    for (auto& [e, targets] : succ) {
      auto target = intern(silent_closure(aut, normalized(std::move(targets)), unobs));
      o.aut.add_transition(id, e, target);
    }
  }
  o.aut.set_initial(0);
  return o;
}

struct LanguageComparison {
  bool equal = true;
  /// Shortest string in the symmetric difference (empty when equal; the
  /// empty string itself differs only when exactly one side is empty).
  std::vector<EventId> witness;
  explicit operator bool() const { return equal; }
};

namespace detail {

/// BFS over the pair graph; `stop(x_defined, y_defined)` decides whether a
/// pair is a witness.
template <class Stop>
LanguageComparison compare_languages(const Automaton& a_in, const Automaton& b_in, Stop stop) {
  auto universe = merged_universe(a_in, b_in);
  const Automaton a = rebase(a_in, universe);
  const Automaton b = rebase(b_in, universe);
  LanguageComparison r;
  constexpr StateId undef = no_state;
  auto root_a = a.empty() ? undef : a.initial();
  auto root_b = b.empty() ? undef : b.initial();
  if (root_a == undef && root_b == undef) return r;
  if (stop(root_a != undef, root_b != undef)) {
    r.equal = false;
    return r;
  }
  using Key = std::pair<StateId, StateId>;
  std::unordered_map<Key, std::pair<Key, EventId>, PairHash> parent;
  std::deque<Key> queue{{root_a, root_b}};
  parent.emplace(Key{root_a, root_b}, std::pair{Key{undef, undef}, EventId{0}});
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    EventSet evs;
    if (x != undef) evs |= a.active(x);
    if (y != undef) evs |= b.active(y);
    for (auto e : evs.to_vector()) {
      auto nx = x != undef ? a.next(x, e) : std::nullopt;
      auto ny = y != undef ? b.next(y, e) : std::nullopt;
      Key k{nx.value_or(undef), ny.value_or(undef)};
      if (parent.count(k)) continue;
      parent.emplace(k, std::pair{Key{x, y}, e});
      if (stop(nx.has_value(), ny.has_value())) {
        r.equal = false;
        for (Key cur = k; cur != Key{root_a, root_b};) {
          auto& [prev, ev] = parent.at(cur);
          r.witness.push_back(ev);
          cur = prev;
        }
        std::reverse(r.witness.begin(), r.witness.end());
        return r;
      }
      if (nx && ny) queue.push_back(k);
    }
  }
  return r;
}

}  // namespace detail

/// Compares generated (prefix-closed) languages.
inline LanguageComparison language_equal(const Automaton& a, const Automaton& b) {
  auto names = [](const Automaton& m) {
    std::vector<std::string> n;
    m.events().for_each([&](EventId e) { n.push_back(m.alphabet().name(e)); });
    std::sort(n.begin(), n.end());
    return n;
  };
  if (!a.empty() && !b.empty() && names(a) != names(b))
    throw input_error("language_equal: alphabets differ");
  return detail::compare_languages(a, b, [](bool x, bool y) { return x != y; });
}

/// L(a) ⊆ L(b); the witness is a shortest string of L(a) \ L(b).
inline LanguageComparison language_included(const Automaton& a, const Automaton& b) {
  return detail::compare_languages(a, b, [](bool x, bool y) { return x && !y; });
}

}  // namespace robsup
