#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace robsup {

using EventId = std::uint32_t;
using StateId = std::uint32_t;

inline constexpr StateId no_state = static_cast<StateId>(-1);

/// Raised on malformed caller input (unknown states, wrong event classes,
/// violated preconditions). Distinct from std::logic_error, which flags
/// broken internal invariants.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a construction grows past a caller-supplied state limit.
class limit_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

/// Bit-indexed event set keyed by alphabet order.
///
/// Width grows on demand; missing high words read as zero, so sets built
/// against alphabets of different sizes still compare correctly.
class EventSet {
 public:
  EventSet() = default;
  EventSet(std::initializer_list<EventId> ids) {
    for (auto id : ids) insert(id);
  }

  template <class Range>
  static EventSet from(const Range& ids) {
    EventSet s;
    for (auto id : ids) s.insert(static_cast<EventId>(id));
    return s;
  }

  bool contains(EventId e) const {
    auto w = e / 64;
    return w < words_.size() && ((words_[w] >> (e % 64)) & 1U);
  }
  void insert(EventId e) {
    auto w = e / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << (e % 64);
  }
  void erase(EventId e) {
    auto w = e / 64;
    if (w < words_.size()) {
      words_[w] &= ~(std::uint64_t{1} << (e % 64));
      trim();
    }
  }

  bool empty() const { return words_.empty(); }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool subset_of(const EventSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      auto o = i < other.words_.size() ? other.words_[i] : 0;
      if (words_[i] & ~o) return false;
    }
    return true;
  }
  bool strict_subset_of(const EventSet& other) const {
    return subset_of(other) && *this != other;
  }
  bool intersects(const EventSet& other) const {
    auto n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  EventSet& operator|=(const EventSet& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  EventSet& operator&=(const EventSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] &= i < o.words_.size() ? o.words_[i] : 0;
    trim();
    return *this;
  }
  EventSet& operator-=(const EventSet& o) {
    auto n = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < n; ++i) words_[i] &= ~o.words_[i];
    trim();
    return *this;
  }
  friend EventSet operator|(EventSet a, const EventSet& b) { return a |= b; }
  friend EventSet operator&(EventSet a, const EventSet& b) { return a &= b; }
  friend EventSet operator-(EventSet a, const EventSet& b) { return a -= b; }

  friend bool operator==(const EventSet& a, const EventSet& b) = default;

  /// Orders by the set's value read as a binary number (bit i = event i).
  friend bool encoding_less(const EventSet& a, const EventSet& b) {
    if (a.words_.size() != b.words_.size()) return a.words_.size() < b.words_.size();
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
    return false;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      auto w = words_[i];
      while (w) {
        auto bit = static_cast<EventId>(std::countr_zero(w));
        f(static_cast<EventId>(i * 64 + bit));
        w &= w - 1;
      }
    }
  }

  std::vector<EventId> to_vector() const {
    std::vector<EventId> out;
    for_each([&](EventId e) { out.push_back(e); });
    return out;
  }

  std::size_t hash() const {
    std::size_t h = words_.size();
    for (auto w : words_) hash_combine(h, std::hash<std::uint64_t>{}(w));
    return h;
  }

 private:
  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }
  std::vector<std::uint64_t> words_;
};

struct EventSetHash {
  std::size_t operator()(const EventSet& s) const { return s.hash(); }
};

/// Canonical state set: sorted, duplicate free.
using StateSet = std::vector<StateId>;

inline StateSet normalized(StateSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool contains(const StateSet& s, StateId x) {
  return std::binary_search(s.begin(), s.end(), x);
}

inline bool intersects(const StateSet& a, const StateSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

inline bool subset_of(const StateSet& a, const StateSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const {
    std::size_t h = s.size();
    for (auto x : s) hash_combine(h, x);
    return h;
  }
};

}  // namespace robsup
