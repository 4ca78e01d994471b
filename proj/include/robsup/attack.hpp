#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "robsup/supervisor.hpp"

namespace robsup {

/// An attack model is an automaton over Σo,e inside a decorated universe.
/// Its branching over decorated events encodes the edit function f_A.
using AttackModel = Automaton;

/// The decorated universe Σm for an alphabet (identity if already decorated).
inline AlphabetPtr decorated_universe(const AlphabetPtr& sigma) {
  auto comp = sigma->compromised();
  bool has_all = true;
  comp.for_each([&](EventId e) {
    has_all = has_all && sigma->insertion_of(e) && sigma->deletion_of(e);
  });
  if (has_all) return sigma;
  return Alphabet::decorate(*sigma);
}

struct Violation {
  std::string state;
  std::string message;
};

struct AttackValidation {
  std::vector<Violation> violations;
  /// Condition (2) states: accepted, but they stall the plant.
  std::vector<Violation> warnings;
  bool ok() const { return violations.empty(); }
};

/// Every state must either be complete on Σo\Σa with e or e.del defined for
/// each e ∈ Σa (condition 1), or define only insertions, at least one
/// (condition 2).
inline AttackValidation validate(const AttackModel& a) {
  AttackValidation v;
  const auto& u = a.alphabet();
  auto allowed = u.observable_with_edits();
  auto stray = a.events() - allowed;
  if (!stray.empty()) v.violations.push_back({"*", "events outside the attack alphabet: " + u.format(stray)});
  auto obs = u.legitimate() & u.observable();
  auto comp = u.compromised();
  auto ins = u.of_kind(EventKind::insertion);
  auto del = u.of_kind(EventKind::deletion);
  comp.for_each([&](EventId e) {
    if (!u.insertion_of(e) || !u.deletion_of(e))
      v.violations.push_back({"*", "compromised event " + u.name(e) + " lacks decorations"});
  });
  if (!v.ok()) return v;
  for (StateId x = 0; x < a.num_states(); ++x) {
    auto act = a.active(x);
    std::string why1;
    auto missing = (obs - comp) - act;
    if (!missing.empty()) why1 = "undefined " + u.format(missing);
    comp.for_each([&](EventId e) {
      if (!act.contains(e) && !act.contains(*u.deletion_of(e)))
        why1 += std::string(why1.empty() ? "" : "; ") + "neither " + u.name(e) + " nor its deletion defined";
    });
    if (why1.empty()) continue;
    bool cond2 = !act.intersects(obs | del) && act.intersects(ins);
    if (cond2) {
      v.warnings.push_back({a.label(x), "insertion-only state stalls the plant"});
      continue;
    }
    v.violations.push_back({a.label(x), why1});
  }
  return v;
}

inline void require_valid(const AttackModel& a) {
  if (a.empty()) throw input_error("attack model has no states");
  auto v = validate(a);
  if (!v.ok())
    throw input_error("invalid attack model at " + v.violations.front().state + ": " +
                      v.violations.front().message);
}

/// Rebinds an automaton read from a file to the attack alphabet Σo,e.
inline AttackModel as_attack_model(const Automaton& aut) {
  auto u = decorated_universe(aut.universe());
  auto allowed = u->observable_with_edits();
  Automaton a = rebase(aut, u);
  Automaton out(u, allowed);
  out.set_name(aut.name());
  for (StateId x = 0; x < a.num_states(); ++x) out.add_state(a.label(x), a.is_crit(x));
  for (StateId x = 0; x < a.num_states(); ++x)
    for (const auto& t : a.out(x)) out.add_transition(x, t.event, t.target);
  if (!a.empty()) out.set_initial(a.initial());
  return out;
}

/// A¹: one state, self-loops on all of Σo,e.
inline AttackModel build_all_out(const AlphabetPtr& sigma) {
  auto u = decorated_universe(sigma);
  auto events = u->observable_with_edits();
  AttackModel a(u, events);
  a.set_name("allout");
  auto x = a.add_state("0");
  events.for_each([&](EventId e) { a.add_transition(x, e, x); });
  a.set_initial(x);
  return a;
}

/// At most max_ins insertions and max_del deletions overall.
inline AttackModel build_bounded(const AlphabetPtr& sigma, int max_ins, int max_del) {
  if (max_ins < 0 || max_del < 0) throw input_error("attack budgets must be nonnegative");
  auto u = decorated_universe(sigma);
  AttackModel a(u, u->observable_with_edits());
  a.set_name("bounded_" + std::to_string(max_ins) + "_" + std::to_string(max_del));
  auto id = [&](int i, int d) { return static_cast<StateId>(i * (max_del + 1) + d); };
  for (int i = 0; i <= max_ins; ++i)
    for (int d = 0; d <= max_del; ++d) a.add_state("i" + std::to_string(i) + "d" + std::to_string(d));
  auto obs = u->legitimate() & u->observable();
  auto comp = u->compromised().to_vector();
  for (int i = 0; i <= max_ins; ++i)
    for (int d = 0; d <= max_del; ++d) {
      auto x = id(i, d);
      obs.for_each([&](EventId e) { a.add_transition(x, e, x); });
      for (auto e : comp) {
        if (i < max_ins) a.add_transition(x, *u->insertion_of(e), id(i + 1, d));
        if (d < max_del) a.add_transition(x, *u->deletion_of(e), id(i, d + 1));
      }
    }
  a.set_initial(0);
  return accessible(a).aut;
}

/// f_A(s, e): the edited strings the attacker may emit for plant event e
/// after history s, with at most `depth` trailing insertions. e = nullopt
/// stands for ε. nullopt result means s ∉ L(A).
inline std::optional<std::vector<std::vector<EventId>>> fa_eval(const AttackModel& a,
                                                                std::span<const EventId> s,
                                                                std::optional<EventId> e, int depth) {
  if (depth < 0) throw input_error("insertion depth bound must be nonnegative");
  const auto& u = a.alphabet();
  if (e && (!u.is_plain(*e) || !u.info(*e).observable))
    throw input_error("fa_eval expects an observable plant event");
  auto x = a.empty() ? std::nullopt : a.run(s);
  if (!x) return std::nullopt;
  std::vector<std::vector<EventId>> out;
  if (!e && !s.empty()) {
    out.push_back({});
    return out;
  }
  std::vector<std::pair<std::vector<EventId>, StateId>> frontier;
  if (!e) {
    frontier.push_back({{}, *x});
  } else {
    if (auto y = a.next(*x, *e)) frontier.push_back({{*e}, *y});
    if (auto d = u.deletion_of(*e))
      if (auto y = a.next(*x, *d)) frontier.push_back({{*d}, *y});
  }
  auto ins = u.of_kind(EventKind::insertion).to_vector();
  for (int level = 0;; ++level) {
    std::vector<std::pair<std::vector<EventId>, StateId>> next;
    for (auto& [str, st] : frontier) {
      out.push_back(str);
      if (level == depth) continue;
      for (auto i : ins)
        if (auto y = a.next(st, i)) {
          auto longer = str;
          longer.push_back(i);
          next.push_back({std::move(longer), *y});
        }
    }
    if (next.empty()) break;
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// G_a: δ_Ga(x, e) = δ_G(x, P^G(e)).
inline Automaton attacked_plant(const Automaton& g) {
  auto u = decorated_universe(g.universe());
  Automaton base = rebase(g, u);
  Automaton ga(u, u->all());
  ga.set_name(g.name().empty() ? "Ga" : g.name() + "_a");
  for (StateId x = 0; x < base.num_states(); ++x) ga.add_state(base.label(x), base.is_crit(x));
  for (StateId x = 0; x < base.num_states(); ++x) {
    for (const auto& t : base.out(x)) {
      ga.add_transition(x, t.event, t.target);
      if (auto d = u->deletion_of(t.event); d && u->info(t.event).compromised)
        ga.add_transition(x, *d, t.target);
    }
    u->of_kind(EventKind::insertion).for_each([&](EventId i) { ga.add_transition(x, i, x); });
  }
  if (!base.empty()) ga.set_initial(base.initial());
  return ga;
}

/// R_a: follows P^S on enabled events; ignores insertions of disabled ones.
inline Automaton attacked_supervisor(const Automaton& r) {
  require_realization(r);
  auto u = decorated_universe(r.universe());
  Automaton base = rebase(r, u);
  Automaton ra(u, u->all());
  ra.set_name(r.name().empty() ? "Ra" : r.name() + "_a");
  for (StateId x = 0; x < base.num_states(); ++x) ra.add_state(base.label(x));
  for (StateId x = 0; x < base.num_states(); ++x) {
    auto gamma = base.active(x);
    for (EventId e = 0; e < u->size(); ++e) {
      if (gamma.contains(u->mask(e))) {
        auto p = u->supervisor_projection(e);
        ra.add_transition(x, e, p ? *base.next(x, *p) : x);
      } else if (u->is_insertion(e)) {
        ra.add_transition(x, e, x);
      }
    }
  }
  ra.set_initial(base.initial());
  return ra;
}

/// G_a || R_a || A with the component states of every product state.
struct ClosedLoop {
  Automaton aut;
  /// (plant, supervisor, attacker) component per state.
  std::vector<std::array<StateId, 3>> parts;
  StateId plant_state(StateId x) const { return parts[x][0]; }
  StateId supervisor_state(StateId x) const { return parts[x][1]; }
  StateId attacker_state(StateId x) const { return parts[x][2]; }
};

inline ClosedLoop closed_loop(const Automaton& g, const Automaton& r, const AttackModel& a) {
  require_valid(a);
  auto ga = attacked_plant(g);
  auto ra = attacked_supervisor(r);
  auto gr = compose_parallel(ga, ra);
  auto full = compose_parallel(gr.aut, a);
  ClosedLoop cl{std::move(full.aut), {}};
  cl.parts.reserve(full.parts.size());
  for (auto [xy, z] : full.parts) cl.parts.push_back({gr.parts[xy].first, gr.parts[xy].second, z});
  return cl;
}

}  // namespace robsup
