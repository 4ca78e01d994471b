#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "robsup/alphabet.hpp"

namespace robsup {

struct Transition {
  EventId event;
  StateId target;
  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Deterministic automaton with a partial transition function.
///
/// The automaton lives inside an event universe (an Alphabet) and is
/// defined over a subset of it, events(). Parallel composition
/// synchronizes on the intersection of those subsets. An automaton with
/// no states is the distinguished empty automaton.
class Automaton {
 public:
  Automaton() = default;
  explicit Automaton(AlphabetPtr universe)
      : universe_(std::move(universe)), events_(universe_->all()) {}
  Automaton(AlphabetPtr universe, EventSet events)
      : universe_(std::move(universe)), events_(std::move(events)) {
    if (!events_.subset_of(universe_->all()))
      throw input_error("automaton events outside of its universe");
  }

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  const AlphabetPtr& universe() const { return universe_; }
  const Alphabet& alphabet() const { return *universe_; }
  const EventSet& events() const { return events_; }

  bool empty() const { return out_.empty(); }
  std::size_t num_states() const { return out_.size(); }
  std::size_t num_transitions() const {
    std::size_t n = 0;
    for (const auto& o : out_) n += o.size();
    return n;
  }

  StateId add_state(std::string label = {}, bool crit = false) {
    auto id = static_cast<StateId>(out_.size());
    if (label.empty()) label = std::to_string(id);
    labels_.push_back(std::move(label));
    crit_.push_back(crit);
    out_.emplace_back();
    return id;
  }

  void add_transition(StateId src, EventId e, StateId dst) {
    check_state(src);
    check_state(dst);
    if (!events_.contains(e))
      throw input_error("event '" + event_name(e) + "' is not in the automaton's alphabet");
    auto& row = out_[src];
    auto it = std::lower_bound(row.begin(), row.end(), e,
                               [](const Transition& t, EventId ev) { return t.event < ev; });
    if (it != row.end() && it->event == e) {
      if (it->target == dst)
        throw input_error("duplicate transition " + labels_[src] + " -" + event_name(e) + "-> " +
                          labels_[dst]);
      throw input_error("nondeterministic transition at " + labels_[src] + " on " + event_name(e));
    }
    row.insert(it, Transition{e, dst});
  }

  StateId initial() const {
    if (empty()) throw input_error("empty automaton has no initial state");
    return initial_;
  }
  void set_initial(StateId x) {
    check_state(x);
    initial_ = x;
  }

  std::optional<StateId> next(StateId x, EventId e) const {
    const auto& row = out_[x];
    auto it = std::lower_bound(row.begin(), row.end(), e,
                               [](const Transition& t, EventId ev) { return t.event < ev; });
    if (it == row.end() || it->event != e) return std::nullopt;
    return it->target;
  }

  /// Extended transition function; nullopt when undefined.
  std::optional<StateId> run(std::span<const EventId> s) const {
    return run_from(initial(), s);
  }
  std::optional<StateId> run_from(StateId x, std::span<const EventId> s) const {
    for (auto e : s) {
      auto n = next(x, e);
      if (!n) return std::nullopt;
      x = *n;
    }
    return x;
  }
  bool accepts(std::span<const EventId> s) const { return !empty() && run(s).has_value(); }

  std::span<const Transition> out(StateId x) const { return out_.at(x); }

  EventSet active(StateId x) const {
    EventSet s;
    for (const auto& t : out_.at(x)) s.insert(t.event);
    return s;
  }

  const std::string& label(StateId x) const { return labels_.at(x); }
  void set_label(StateId x, std::string l) { labels_.at(x) = std::move(l); }
  std::optional<StateId> find_state(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<StateId>(i);
    return std::nullopt;
  }
  StateId state(const std::string& label) const {
    if (auto x = find_state(label)) return *x;
    throw input_error("unknown state '" + label + "'");
  }

  bool is_crit(StateId x) const { return crit_.at(x); }
  void set_crit(StateId x, bool c = true) { crit_.at(x) = c; }
  StateSet crit_states() const {
    StateSet s;
    for (std::size_t i = 0; i < crit_.size(); ++i)
      if (crit_[i]) s.push_back(static_cast<StateId>(i));
    return s;
  }

  bool has_state(StateId x) const { return x < out_.size(); }

  std::string event_name(EventId e) const {
    return universe_ && e < universe_->size() ? universe_->name(e) : "#" + std::to_string(e);
  }

 private:
  void check_state(StateId x) const {
    if (x >= out_.size()) throw input_error("unknown state id " + std::to_string(x));
  }

  std::string name_;
  AlphabetPtr universe_;
  EventSet events_;
  std::vector<std::string> labels_;
  std::vector<bool> crit_;
  std::vector<std::vector<Transition>> out_;
  StateId initial_ = 0;
};

/// An automaton derived from another one, remembering where each state
/// came from (trim, accessible part, sub-automata).
struct Derived {
  Automaton aut;
  std::vector<StateId> origin;
};

/// Product automaton with the component state of every product state.
struct Product {
  Automaton aut;
  std::vector<std::pair<StateId, StateId>> parts;
};

}  // namespace robsup
