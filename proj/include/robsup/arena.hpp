#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "robsup/attack.hpp"

namespace robsup {

struct ArenaOptions {
  /// Drop insertions of events the current decision disables when the
  /// attacker stays put: the attacked supervisor ignores them, so such a
  /// move changes nothing. Insertions that move the attacker are kept.
  bool discard_disabled_insertions = true;
  /// Keep expanding states whose estimate already meets X_crit. Those states
  /// are trimmed by meta-control, so the default leaves them as leaves.
  bool expand_critical = false;
};

enum class Player : std::uint8_t { one, two };

inline constexpr std::uint32_t no_decision = static_cast<std::uint32_t>(-1);
inline constexpr EventId no_event = static_cast<EventId>(-1);

/// Q1 state (S1, S2) or Q2 state (S1, S2, γ, σ).
struct ArenaState {
  Player player = Player::one;
  StateSet estimate;
  StateId attacker = 0;
  std::uint32_t decision = no_decision;
  /// σ: the plant event whose insertion awaits its echo; no_event for ε.
  EventId pending = no_event;

  friend bool operator==(const ArenaState&, const ArenaState&) = default;
};

struct ArenaStateHash {
  std::size_t operator()(const ArenaState& s) const {
    std::size_t h = StateSetHash{}(s.estimate);
    hash_combine(h, s.attacker);
    hash_combine(h, s.decision);
    hash_combine(h, s.pending);
    hash_combine(h, static_cast<std::size_t>(s.player));
    return h;
  }
};

/// Event bookkeeping shared by an arena and everything derived from it.
///
/// The meta alphabet E lists every admissible decision first (ordered by
/// bit encoding, named like "{a,c}"), then Σo,e in Σm order.
struct MetaContext {
  Automaton plant;
  AttackModel attack;
  AlphabetPtr sigma;
  AlphabetPtr meta;
  std::vector<EventSet> decisions;
  std::vector<EventId> decision_event;
  std::vector<std::uint32_t> decision_of;
  std::vector<EventId> to_meta;
  std::vector<EventId> from_meta;
  std::vector<EventId> controllable_order;

  std::uint32_t uncontrollable_decision() const { return 0; }

  /// Index of an admissible decision γ ⊆ Σ.
  std::uint32_t decision_index(const EventSet& gamma) const {
    auto legit = sigma->legitimate();
    if (!gamma.subset_of(legit)) throw input_error("decision contains non-plant events");
    if (!admissible(*sigma, gamma)) throw input_error("decision " + sigma->format(gamma) + " is not admissible");
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < controllable_order.size(); ++i)
      if (gamma.contains(controllable_order[i])) mask |= 1U << i;
    return mask;
  }

  bool is_decision(EventId meta_event) const { return decision_of[meta_event] != no_decision; }

  std::string state_label(const ArenaState& s) const {
    std::string out = "({";
    for (std::size_t i = 0; i < s.estimate.size(); ++i) out += (i ? "," : "") + plant.label(s.estimate[i]);
    out += "}," + attack.label(s.attacker);
    if (s.player == Player::two) {
      out += "," + sigma->format(decisions[s.decision]) + ",";
      out += s.pending == no_event ? std::string("eps") : sigma->name(s.pending);
    }
    return out + ")";
  }
};

/// Fills the decision and meta-event tables from ctx.sigma.
inline void init_meta_events(MetaContext& ctx) {
  const auto& sig = *ctx.sigma;
  auto legit = sig.legitimate();
  ctx.controllable_order = (sig.controllable() & legit).to_vector();
  if (ctx.controllable_order.size() > 20) throw input_error("too many controllable events for decision enumeration");
  auto uc = sig.uncontrollable() & legit;
  auto meta = std::make_shared<Alphabet>();
  ctx.decisions.clear();
  ctx.decision_event.clear();
  std::size_t n = std::size_t{1} << ctx.controllable_order.size();
  for (std::size_t mask = 0; mask < n; ++mask) {
    EventSet gamma = uc;
    for (std::size_t i = 0; i < ctx.controllable_order.size(); ++i)
      if (mask & (std::size_t{1} << i)) gamma.insert(ctx.controllable_order[i]);
    ctx.decision_event.push_back(meta->add(EventInfo{sig.format(gamma), mask != 0, true, false, EventKind::decision, 0}));
    ctx.decisions.push_back(std::move(gamma));
  }
  ctx.to_meta.assign(sig.size(), no_event);
  for (auto e : sig.observable_with_edits().to_vector()) {
    const auto& info = sig.info(e);
    EventInfo m{info.name, false, info.kind == EventKind::plain, false, info.kind, 0};
    if (info.kind != EventKind::plain) m.base = ctx.to_meta.at(info.base);
    ctx.to_meta[e] = meta->add(m);
  }
  ctx.decision_of.assign(meta->size(), no_decision);
  for (std::uint32_t d = 0; d < ctx.decision_event.size(); ++d) ctx.decision_of[ctx.decision_event[d]] = d;
  ctx.from_meta.assign(meta->size(), no_event);
  for (EventId e = 0; e < sig.size(); ++e)
    if (ctx.to_meta[e] != no_event) ctx.from_meta[ctx.to_meta[e]] = e;
  ctx.meta = std::move(meta);
}

inline std::shared_ptr<const MetaContext> make_meta_context(const Automaton& g, const AttackModel& a) {
  if (g.empty()) throw input_error("plant has no states");
  auto ctx = std::make_shared<MetaContext>();
  ctx->sigma = decorated_universe(g.universe());
  ctx->plant = rebase(g, ctx->sigma);
  ctx->attack = rebase(as_attack_model(a), ctx->sigma);
  require_valid(ctx->attack);
  init_meta_events(*ctx);
  return ctx;
}

/// Arena-shaped automaton: the arena itself, its trimmed copy, or a
/// synthesized solution. Each state carries its arena label.
struct GameGraph {
  Automaton aut;
  std::vector<ArenaState> info;
  /// Arena state behind every state (identity for the arena itself).
  std::vector<StateId> origin;
  std::shared_ptr<const MetaContext> ctx;
  ArenaOptions options;

  bool empty() const { return aut.empty(); }
  std::size_t size() const { return aut.num_states(); }
  const ArenaState& state(StateId q) const { return info.at(q); }
  bool is_q1(StateId q) const { return info.at(q).player == Player::one; }
  bool is_q2(StateId q) const { return info.at(q).player == Player::two; }
  const StateSet& i1(StateId q) const { return info.at(q).estimate; }
  StateId i2(StateId q) const { return info.at(q).attacker; }
  bool meets_crit(StateId q) const {
    for (auto x : info.at(q).estimate)
      if (ctx->plant.is_crit(x)) return true;
    return false;
  }

  /// Keeps the states of `d` (derived from this graph), carrying labels.
  GameGraph derive(Derived d) const {
    GameGraph out{std::move(d.aut), {}, {}, ctx, options};
    for (auto o : d.origin) {
      out.info.push_back(info.at(o));
      out.origin.push_back(origin.at(o));
    }
    return out;
  }
};

using Arena = GameGraph;
using SupArena = GameGraph;

inline Arena build_arena(const Automaton& g, const AttackModel& a, ArenaOptions options = {}) {
  auto ctx = make_meta_context(g, a);
  const auto& plant = ctx->plant;
  const auto& atk = ctx->attack;
  const auto& sig = *ctx->sigma;
  Arena ar{Automaton(ctx->meta), {}, {}, ctx, options};
  ar.aut.set_name("arena");

  std::unordered_map<ArenaState, StateId, ArenaStateHash> index;
  std::deque<StateId> queue;
  auto intern = [&](ArenaState s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    auto id = ar.aut.add_state(ctx->state_label(s));
    for (auto x : s.estimate) {
      if (plant.is_crit(x)) {
        ar.aut.set_crit(id);
        break;
      }
    }
    index.emplace(s, id);
    ar.info.push_back(std::move(s));
    ar.origin.push_back(id);
    queue.push_back(id);
    return id;
  };

  auto observable = sig.legitimate() & sig.observable();
  auto compromised = sig.compromised().to_vector();
  intern(ArenaState{Player::one, {plant.initial()}, atk.initial(), no_decision, no_event});
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    if (ar.aut.is_crit(id) && !options.expand_critical) continue;
    const ArenaState cur = ar.info[id];
    if (cur.player == Player::one) {
      for (std::uint32_t d = 0; d < ctx->decisions.size(); ++d) {
        ArenaState next{Player::two, unobservable_reach(plant, cur.estimate, ctx->decisions[d]), cur.attacker, d, no_event};
        ar.aut.add_transition(id, ctx->decision_event[d], intern(std::move(next)));
      }
      continue;
    }
    const auto& gamma = ctx->decisions[cur.decision];
    if (cur.pending != no_event) {
      ArenaState next{Player::one, cur.estimate, cur.attacker, no_decision, no_event};
      ar.aut.add_transition(id, ctx->to_meta[cur.pending], intern(std::move(next)));
      continue;
    }
    auto active = active_events(plant, cur.estimate);
    auto feasible = active & gamma;
    (observable & feasible).for_each([&](EventId e) {
      if (auto z = atk.next(cur.attacker, e)) {
        ArenaState next{Player::one, observable_reach(plant, cur.estimate, e), *z, no_decision, no_event};
        ar.aut.add_transition(id, ctx->to_meta[e], intern(std::move(next)));
      }
    });
    for (auto e : compromised) {
      auto ins = *sig.insertion_of(e);
      auto z = atk.next(cur.attacker, ins);
      if (!z || (options.discard_disabled_insertions && !gamma.contains(e) && *z == cur.attacker)) continue;
      ArenaState next{Player::two, cur.estimate, *z, cur.decision, e};
      ar.aut.add_transition(id, ctx->to_meta[ins], intern(std::move(next)));
    }
    for (auto e : compromised) {
      auto del = *sig.deletion_of(e);
      if (feasible.contains(e))
        if (auto z = atk.next(cur.attacker, del)) {
          auto est = unobservable_reach(plant, observable_reach(plant, cur.estimate, e), gamma);
          ArenaState next{Player::two, std::move(est), *z, cur.decision, no_event};
          ar.aut.add_transition(id, ctx->to_meta[del], intern(std::move(next)));
        }
    }
  }
  ar.aut.set_initial(0);
  return ar;
}

/// h1 on an arena-shaped graph: follow decision γ from a Q1-like state.
inline std::optional<StateId> h1(const GameGraph& gg, StateId q, const EventSet& gamma) {
  if (!gg.is_q1(q)) return std::nullopt;
  return gg.aut.next(q, gg.ctx->decision_event[gg.ctx->decision_index(gamma)]);
}

/// h2: follow an event of Σo,e (given as a Σm id).
inline std::optional<StateId> h2(const GameGraph& gg, StateId q, EventId e) {
  if (e >= gg.ctx->to_meta.size() || gg.ctx->to_meta[e] == no_event)
    throw input_error("h2 expects an event of the attack alphabet");
  if (!gg.is_q2(q)) return std::nullopt;
  return gg.aut.next(q, gg.ctx->to_meta[e]);
}

namespace detail {
/// A disabled insertion the attacker makes without moving; absent from the
/// graph and equivalent to staying put.
inline bool discarded_insertion(const GameGraph& gg, StateId q, EventId e, const EventSet& active_decision) {
  const auto& sig = *gg.ctx->sigma;
  if (!gg.options.discard_disabled_insertions || !sig.is_insertion(e) || active_decision.contains(sig.mask(e)))
    return false;
  auto z = gg.state(q).attacker;
  return gg.ctx->attack.next(z, e) == std::optional<StateId>(z);
}
}  // namespace detail

/// H2: Q2 to Q2 big step.
inline std::optional<StateId> step_h2_big(const GameGraph& gg, StateId q, EventId e, const EventSet& gamma) {
  const auto& sig = *gg.ctx->sigma;
  if (!gg.is_q2(q)) throw input_error("step_h2_big expects a Q2 state");
  if (sig.is_deletion(e)) return h2(gg, q, e);
  if (sig.is_insertion(e)) {
    if (detail::discarded_insertion(gg, q, e, gg.ctx->decisions[gg.state(q).decision])) return q;
    auto a = h2(gg, q, e);
    if (!a) return std::nullopt;
    auto b = h2(gg, *a, sig.mask(e));
    if (!b) return std::nullopt;
    return h1(gg, *b, gamma);
  }
  auto a = h2(gg, q, e);
  if (!a) return std::nullopt;
  return h1(gg, *a, gamma);
}

/// H1: Q1 to Q1 big step.
inline std::optional<StateId> step_h1_big(const GameGraph& gg, StateId q, EventId e, const EventSet& gamma) {
  const auto& sig = *gg.ctx->sigma;
  if (!gg.is_q1(q)) throw input_error("step_h1_big expects a Q1 state");
  if (sig.is_deletion(e)) {
    if (e >= gg.ctx->to_meta.size() || gg.ctx->to_meta[e] == no_event)
      throw input_error("h2 expects an event of the attack alphabet");
    return q;
  }
  if (detail::discarded_insertion(gg, q, e, gamma)) return q;
  auto a = h1(gg, q, gamma);
  if (!a) return std::nullopt;
  auto b = h2(gg, *a, e);
  if (!b || !sig.is_insertion(e)) return b;
  return h2(gg, *b, sig.mask(e));
}

/// Folds H2 over s from q with one decision per event.
inline std::optional<StateId> fold_h2(const GameGraph& gg, StateId q, std::span<const EventId> s,
                                      std::span<const EventSet> gammas) {
  if (gammas.size() != s.size()) throw input_error("fold_h2 needs one decision per event");
  std::optional<StateId> cur = q;
  for (std::size_t i = 0; i < s.size() && cur; ++i) cur = step_h2_big(gg, *cur, s[i], gammas[i]);
  return cur;
}

struct ArenaStats {
  std::size_t q1 = 0;
  std::size_t q2 = 0;
  std::size_t transitions = 0;
  std::size_t decisions = 0;
  std::size_t decisions_used = 0;
  std::size_t critical = 0;
  std::size_t total() const { return q1 + q2; }
};

inline ArenaStats arena_stats(const GameGraph& gg) {
  ArenaStats s;
  s.decisions = gg.ctx->decisions.size();
  EventSet used;
  for (StateId q = 0; q < gg.size(); ++q) {
    (gg.is_q1(q) ? s.q1 : s.q2)++;
    if (gg.meets_crit(q)) s.critical++;
    for (const auto& t : gg.aut.out(q))
      if (gg.ctx->is_decision(t.event)) used.insert(t.event);
  }
  s.transitions = gg.aut.num_transitions();
  s.decisions_used = used.count();
  return s;
}

}  // namespace robsup
