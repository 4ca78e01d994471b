#pragma once

#include <span>
#include <string>
#include <vector>

#include "robsup/operations.hpp"

namespace robsup {

/// Γ_R(x): the control decision encoded by state x of a realization.
inline EventSet decision(const Automaton& r, StateId x) { return r.active(x); }

/// γ is admissible iff it contains every uncontrollable event.
inline bool admissible(const Alphabet& sigma, const EventSet& gamma) {
  return (sigma.uncontrollable() & sigma.legitimate()).subset_of(gamma);
}

/// Problems that keep r from being a supervisor realization.
inline std::vector<std::string> realization_violations(const Automaton& r) {
  std::vector<std::string> out;
  const auto& sigma = r.alphabet();
  auto uc = sigma.uncontrollable() & sigma.legitimate();
  for (StateId x = 0; x < r.num_states(); ++x) {
    auto g = r.active(x);
    auto missing = uc - g;
    if (!missing.empty())
      out.push_back("state " + r.label(x) + " disables uncontrollable " + sigma.format(missing));
    for (const auto& t : r.out(x)) {
      if (!sigma.is_plain(t.event))
        out.push_back("state " + r.label(x) + " uses non-plant event " + sigma.name(t.event));
      else if (!sigma.info(t.event).observable && t.target != x)
        out.push_back("state " + r.label(x) + " moves on unobservable " + sigma.name(t.event));
    }
  }
  return out;
}

inline void require_realization(const Automaton& r) {
  if (r.empty()) throw input_error("supervisor has no states");
  auto v = realization_violations(r);
  if (!v.empty()) throw input_error("not an admissible supervisor: " + v.front());
}

/// Δ_R: δ_R where defined, otherwise stay put.
inline StateId delta_complete(const Automaton& r, StateId x, EventId e) {
  if (e >= r.alphabet().size() || !r.alphabet().info(e).observable || !r.alphabet().is_plain(e))
    throw input_error("delta_complete needs an observable plant event");
  return r.next(x, e).value_or(x);
}

inline StateId delta_complete(const Automaton& r, StateId x, std::span<const EventId> s) {
  for (auto e : s) x = delta_complete(r, x, e);
  return x;
}

/// C_R(s) = Γ_R(Δ_R(x0, s)).
inline EventSet c_r(const Automaton& r, std::span<const EventId> s) {
  return decision(r, delta_complete(r, r.initial(), s));
}

}  // namespace robsup
