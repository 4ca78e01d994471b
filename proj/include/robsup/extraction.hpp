#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "robsup/synthesis.hpp"

namespace robsup {

enum class ExtractionMode { maximal, reward };

/// Order among maximal decisions: rank is (cardinality, bit encoding).
enum class TieBreak { highest_rank, lowest_rank };

struct ExtractionPolicy {
  ExtractionMode mode = ExtractionMode::maximal;
  TieBreak tie_break = TieBreak::highest_rank;
  bool enumerate = false;
  double reward_c = 1.0;
  /// Upper bound on choice assignments explored by enumeration.
  std::size_t budget = 100000;
};

/// A supervisor realization plus the solution-arena state behind each state.
struct Extraction {
  Automaton sup;
  std::vector<StateId> origin;
};

namespace detail {

inline bool rank_less(const EventSet& a, const EventSet& b) {
  if (a.count() != b.count()) return a.count() < b.count();
  return encoding_less(a, b);
}

/// Decisions defined at a Q1-like state that no other one strictly contains,
/// best first under the tie-break.
inline std::vector<std::uint32_t> maximal_decisions(const SupArena& sup, StateId x, TieBreak tb) {
  std::vector<std::uint32_t> ds;
  for (const auto& t : sup.aut.out(x))
    if (sup.ctx->is_decision(t.event)) ds.push_back(sup.ctx->decision_of[t.event]);
  std::vector<std::uint32_t> out;
  for (auto d : ds) {
    bool dominated = false;
    for (auto o : ds) dominated = dominated || sup.ctx->decisions[d].strict_subset_of(sup.ctx->decisions[o]);
    if (!dominated) out.push_back(d);
  }
  std::sort(out.begin(), out.end(), [&](auto a, auto b) {
    bool lt = rank_less(sup.ctx->decisions[a], sup.ctx->decisions[b]);
    bool gt = rank_less(sup.ctx->decisions[b], sup.ctx->decisions[a]);
    return tb == TieBreak::highest_rank ? gt : lt;
  });
  return out;
}

/// Depth-first extraction; `choose` picks a decision for a state, or
/// returns no_decision to abort the walk (used by enumeration).
inline std::optional<Extraction> walk(const SupArena& sup, const std::function<std::uint32_t(StateId)>& choose) {
  const auto& ctx = *sup.ctx;
  const auto& sig = *ctx.sigma;
  auto legit = sig.legitimate();
  Automaton r(ctx.sigma, legit);
  r.set_name("R");
  Extraction ex{std::move(r), {}};
  std::unordered_map<StateId, StateId> id;
  std::vector<StateId> stack;
  auto visit = [&](StateId q) {
    auto [it, fresh] = id.try_emplace(q, 0);
    if (fresh) {
      it->second = ex.sup.add_state();
      ex.origin.push_back(q);
      stack.push_back(q);
    }
    return it->second;
  };
  auto root = sup.aut.initial();
  if (!sup.is_q1(root)) throw input_error("solution arena must start in a Q1 state");
  visit(root);
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    auto d = choose(x);
    if (d == no_decision) return std::nullopt;
    const auto& gamma = ctx.decisions[d];
    auto q2 = *sup.aut.next(x, ctx.decision_event[d]);
    auto rx = id.at(x);
    for (auto e : (gamma & legit).to_vector()) {
      if (!sig.info(e).observable) {
        ex.sup.add_transition(rx, e, rx);
        continue;
      }
      // The supervisor sees e from the plant or as an echoed insertion.
      // When neither can happen, only an uncontrollable e needs a move
      // (a self-loop that is never taken).
      auto y = sup.aut.next(q2, ctx.to_meta[e]);
      if (!y)
        if (auto ins = sig.insertion_of(e))
          if (auto p = sup.aut.next(q2, ctx.to_meta[*ins])) y = sup.aut.next(*p, ctx.to_meta[e]);
      if (y) ex.sup.add_transition(rx, e, visit(*y));
      else if (!sig.info(e).controllable) ex.sup.add_transition(rx, e, rx);
    }
  }
  ex.sup.set_initial(0);
  return ex;
}

}  // namespace detail

/// Depth-first extraction taking a maximal decision at every visited
/// Q1-like state.
inline Extraction extract_supervisor(const SupArena& sup, const ExtractionPolicy& policy = {}) {
  if (sup.empty()) throw input_error("no robust supervisor exists");
  return *detail::walk(sup, [&](StateId x) {
    auto ds = detail::maximal_decisions(sup, x, policy.tie_break);
    if (ds.empty()) throw std::logic_error("Q1-like state without decisions");
    return ds.front();
  });
}

/// BFS canonical form used to compare extracted supervisors.
inline std::vector<std::vector<std::pair<EventId, StateId>>> canonical_form(const Automaton& r) {
  std::vector<std::vector<std::pair<EventId, StateId>>> rows;
  if (r.empty()) return rows;
  std::vector<StateId> number(r.num_states(), no_state);
  std::vector<StateId> order{r.initial()};
  number[r.initial()] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::vector<std::pair<EventId, StateId>> row;
    for (const auto& t : r.out(order[i])) {
      if (number[t.target] == no_state) {
        number[t.target] = static_cast<StateId>(order.size());
        order.push_back(t.target);
      }
      row.emplace_back(t.event, number[t.target]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Isomorphism of accessible deterministic automata over the same events.
inline bool isomorphic(const Automaton& a, const Automaton& b) {
  auto names = [](const Automaton& m) {
    std::vector<std::vector<std::pair<std::string, StateId>>> rows;
    for (auto& row : canonical_form(m)) {
      std::vector<std::pair<std::string, StateId>> r;
      for (auto [e, y] : row) r.emplace_back(m.alphabet().name(e), y);
      std::sort(r.begin(), r.end());
      rows.push_back(std::move(r));
    }
    return rows;
  };
  return names(a) == names(b);
}

struct Enumeration {
  std::vector<Extraction> supervisors;
  std::size_t assignments = 0;
  bool budget_exhausted = false;
};

/// All distinct supervisors reachable by choosing among maximal decisions.
inline Enumeration enumerate_supervisors(const SupArena& sup, const ExtractionPolicy& policy = {}) {
  if (sup.empty()) throw input_error("no robust supervisor exists");
  Enumeration out;
  std::map<std::vector<std::vector<std::pair<EventId, StateId>>>, std::size_t> seen;
  // Odometer over choice points in visiting order.
  std::vector<std::size_t> digits;
  for (;;) {
    if (out.assignments >= policy.budget) {
      out.budget_exhausted = true;
      break;
    }
    std::size_t pos = 0;
    std::vector<std::size_t> arity;
    auto ex = detail::walk(sup, [&](StateId x) {
      auto ds = detail::maximal_decisions(sup, x, policy.tie_break);
      if (ds.empty()) throw std::logic_error("Q1-like state without decisions");
      if (pos == digits.size()) digits.push_back(0);
      arity.push_back(ds.size());
      return ds.at(digits[pos++]);
    });
    ++out.assignments;
    digits.resize(pos);
    auto form = canonical_form(ex->sup);
    if (!seen.count(form)) {
      seen.emplace(std::move(form), out.supervisors.size());
      out.supervisors.push_back(std::move(*ex));
    }
    // Advance the odometer from the deepest choice point.
    while (!digits.empty() && digits.back() + 1 >= arity[digits.size() - 1]) {
      digits.pop_back();
    }
    if (digits.empty()) break;
    ++digits.back();
  }
  return out;
}

/// States of G||R (ids of compose_parallel(g, r)) from which a deadlock is
/// reachable through unobservable events.
inline StateSet x_dead(const Product& gr) {
  const auto& aut = gr.aut;
  auto unobs = aut.alphabet().unobservable();
  std::vector<char> mark(aut.num_states(), 0);
  std::vector<std::vector<StateId>> preds(aut.num_states());
  std::vector<StateId> work;
  for (StateId x = 0; x < aut.num_states(); ++x) {
    if (aut.out(x).empty()) {
      mark[x] = 1;
      work.push_back(x);
    }
    for (const auto& t : aut.out(x))
      if (unobs.contains(t.event)) preds[t.target].push_back(x);
  }
  while (!work.empty()) {
    auto x = work.back();
    work.pop_back();
    for (auto p : preds[x])
      if (!mark[p]) {
        mark[p] = 1;
        work.push_back(p);
      }
  }
  StateSet out;
  for (StateId x = 0; x < aut.num_states(); ++x)
    if (mark[x]) out.push_back(x);
  return out;
}

inline StateSet x_dead(const Automaton& g, const Automaton& r) { return x_dead(compose_parallel(g, r)); }

/// Σ r(x) over G||R: −∞ on critical plant states, 0 on X_dead, c otherwise.
inline double reward_total(const Automaton& g, const Automaton& r, double c = 1.0) {
  if (!(c >= 0)) throw input_error("reward constant must be nonnegative");
  auto gr = compose_parallel(g, r);
  auto dead = x_dead(gr);
  double total = 0;
  for (StateId x = 0; x < gr.aut.num_states(); ++x) {
    if (gr.aut.is_crit(x)) return -std::numeric_limits<double>::infinity();
    if (!contains(dead, x)) total += c;
  }
  return total;
}

struct RewardExtraction {
  Extraction best;
  double reward = -std::numeric_limits<double>::infinity();
  bool budget_exhausted = false;
};

/// The extracted supervisor with the largest total reward; earlier
/// assignments (tie-break order) win ties.
inline RewardExtraction extract_max_reward(const SupArena& sup, const Automaton& g, double c = 1.0,
                                           const ExtractionPolicy& policy = {}) {
  auto all = enumerate_supervisors(sup, policy);
  RewardExtraction out;
  out.budget_exhausted = all.budget_exhausted;
  bool have = false;
  for (auto& ex : all.supervisors) {
    auto rw = reward_total(g, ex.sup, c);
    if (!have || rw > out.reward) {
      out.best = ex;
      out.reward = rw;
      have = true;
    }
  }
  return out;
}

}  // namespace robsup
