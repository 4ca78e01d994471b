#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "robsup/event_set.hpp"

namespace robsup {

enum class EventKind : std::uint8_t { plain, insertion, deletion, decision };

struct EventInfo {
  std::string name;
  bool controllable = false;
  bool observable = true;
  bool compromised = false;
  EventKind kind = EventKind::plain;
  /// Legitimate event behind a decoration (the mask M); self for plain events.
  EventId base = 0;
};

inline constexpr std::string_view insertion_suffix = ".ins";
inline constexpr std::string_view deletion_suffix = ".del";

/// Ordered event universe with control/observation flags.
///
/// A plain alphabet holds the legitimate events. decorate() appends one
/// insertion and one deletion event per compromised event while keeping
/// the legitimate ids unchanged, so plant-level event ids stay valid in
/// the decorated universe.
class Alphabet {
 public:
  EventId add(EventInfo info) {
    if (info.name.empty() || info.name.find_first_of(" \t\r\n#") != std::string::npos)
      throw input_error("invalid event name '" + info.name + "'");
    if (index_.count(info.name)) throw input_error("duplicate event '" + info.name + "'");
    if (info.compromised && !info.observable)
      throw input_error("compromised event '" + info.name + "' must be observable");
    auto id = static_cast<EventId>(events_.size());
    if (info.kind == EventKind::plain || info.kind == EventKind::decision) info.base = id;
    index_.emplace(info.name, id);
    events_.push_back(std::move(info));
    return id;
  }

  EventId add_plain(std::string name, bool controllable, bool observable,
                    bool compromised = false) {
    return add(EventInfo{std::move(name), controllable, observable, compromised,
                         EventKind::plain, 0});
  }

  std::size_t size() const { return events_.size(); }
  const EventInfo& info(EventId e) const { return events_.at(e); }
  const std::string& name(EventId e) const { return events_.at(e).name; }

  std::optional<EventId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  EventId at(std::string_view name) const {
    if (auto e = find(name)) return *e;
    throw input_error("unknown event '" + std::string(name) + "'");
  }

  EventSet all() const { return select([](const EventInfo&) { return true; }); }
  EventSet controllable() const { return select([](const EventInfo& i) { return i.controllable; }); }
  EventSet uncontrollable() const { return select([](const EventInfo& i) { return !i.controllable; }); }
  EventSet observable() const { return select([](const EventInfo& i) { return i.observable; }); }
  EventSet unobservable() const { return select([](const EventInfo& i) { return !i.observable; }); }
  EventSet compromised() const { return select([](const EventInfo& i) { return i.compromised; }); }
  EventSet of_kind(EventKind k) const { return select([k](const EventInfo& i) { return i.kind == k; }); }
  /// Σ: the legitimate events.
  EventSet legitimate() const { return of_kind(EventKind::plain); }
  /// Σa^e = Σa^i ∪ Σa^d.
  EventSet edits() const { return of_kind(EventKind::insertion) | of_kind(EventKind::deletion); }
  /// Σo,e = Σo ∪ Σa^e (observable legitimate events plus edits).
  EventSet observable_with_edits() const { return (legitimate() & observable()) | edits(); }

  bool is_insertion(EventId e) const { return info(e).kind == EventKind::insertion; }
  bool is_deletion(EventId e) const { return info(e).kind == EventKind::deletion; }
  bool is_plain(EventId e) const { return info(e).kind == EventKind::plain; }

  std::optional<EventId> insertion_of(EventId e) const { return find(name(e) + std::string(insertion_suffix)); }
  std::optional<EventId> deletion_of(EventId e) const { return find(name(e) + std::string(deletion_suffix)); }

  /// M: strips the decoration.
  EventId mask(EventId e) const { return info(e).base; }
  /// P^G: effect on the plant; insertions vanish.
  std::optional<EventId> plant_projection(EventId e) const {
    if (is_insertion(e)) return std::nullopt;
    return mask(e);
  }
  /// P^S: what the supervisor receives; deletions vanish.
  std::optional<EventId> supervisor_projection(EventId e) const {
    if (is_deletion(e)) return std::nullopt;
    return mask(e);
  }

  std::string format(const EventSet& s) const {
    std::string out = "{";
    bool first = true;
    s.for_each([&](EventId e) {
      if (!first) out += ',';
      out += name(e);
      first = false;
    });
    return out + "}";
  }

  /// Builds Σm: same legitimate events (same ids), then e.ins for every
  /// compromised e, then e.del for every compromised e.
  static std::shared_ptr<const Alphabet> decorate(const Alphabet& plain) {
    auto out = std::make_shared<Alphabet>();
    for (const auto& ev : plain.events_) {
      if (ev.kind != EventKind::plain)
        throw input_error("decorate() expects an alphabet of legitimate events");
      out->add(ev);
    }
    auto comp = plain.compromised().to_vector();
    for (auto e : comp)
      out->add(EventInfo{plain.name(e) + std::string(insertion_suffix), false, true, false,
                         EventKind::insertion, e});
    for (auto e : comp)
      out->add(EventInfo{plain.name(e) + std::string(deletion_suffix), false, true, false,
                         EventKind::deletion, e});
    return out;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    if (a.events_.size() != b.events_.size()) return false;
    for (std::size_t i = 0; i < a.events_.size(); ++i) {
      const auto& x = a.events_[i];
      const auto& y = b.events_[i];
      if (x.name != y.name || x.controllable != y.controllable || x.observable != y.observable ||
          x.compromised != y.compromised || x.kind != y.kind || x.base != y.base)
        return false;
    }
    return true;
  }

 private:
  template <class Pred>
  EventSet select(Pred p) const {
    EventSet s;
    for (std::size_t i = 0; i < events_.size(); ++i)
      if (p(events_[i])) s.insert(static_cast<EventId>(i));
    return s;
  }

  std::vector<EventInfo> events_;
  std::unordered_map<std::string, EventId> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

}  // namespace robsup
