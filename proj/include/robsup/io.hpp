#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "robsup/arena.hpp"

namespace robsup {

/// Field-for-field image of an automaton file, shared by the text and JSON
/// forms.
struct AutomatonDoc {
  struct Event {
    std::string name;
    bool controllable = false;
    bool observable = true;
  };
  struct State {
    std::string id;
    bool init = false;
    bool crit = false;
  };
  struct Info {
    std::string state;
    bool q2 = false;
    std::vector<std::string> estimate;
    std::string attacker;
    std::string decision;
    std::string pending;
  };
  std::string name;
  std::vector<Event> event;
  std::vector<std::string> compromised;
  /// Explicit event subset; absent means the default (see to_automaton).
  std::optional<std::vector<std::string>> alphabet;
  std::vector<State> state;
  std::vector<std::array<std::string, 3>> trans;
  std::vector<Info> info;
};

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& msg) {
  throw input_error("line " + std::to_string(line) + ": " + msg);
}

inline std::vector<std::string> split_set(const std::string& tok) {
  if (tok.size() < 2 || tok.front() != '{' || tok.back() != '}') throw input_error("expected a set, got '" + tok + "'");
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
    if (tok[i] == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += tok[i];
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::string join_set(const std::vector<std::string>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out + "}";
}

}  // namespace detail

inline AutomatonDoc parse_text(std::istream& in) {
  AutomatonDoc doc;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const auto& kw = tok[0];
    if (kw == "name") {
      if (tok.size() != 2) detail::parse_fail(n, "usage: name <id>");
      doc.name = tok[1];
    } else if (kw == "event") {
      if (tok.size() != 4) detail::parse_fail(n, "usage: event <name> <c|u> <o|uo>");
      if ((tok[2] != "c" && tok[2] != "u") || (tok[3] != "o" && tok[3] != "uo"))
        detail::parse_fail(n, "event flags must be c|u and o|uo");
      doc.event.push_back({tok[1], tok[2] == "c", tok[3] == "o"});
    } else if (kw == "compromised") {
      doc.compromised.insert(doc.compromised.end(), tok.begin() + 1, tok.end());
    } else if (kw == "alphabet") {
      if (!doc.alphabet) doc.alphabet.emplace();
      doc.alphabet->insert(doc.alphabet->end(), tok.begin() + 1, tok.end());
    } else if (kw == "state") {
      if (tok.size() < 2) detail::parse_fail(n, "usage: state <id> [init] [crit]");
      AutomatonDoc::State s{tok[1]};
      for (std::size_t i = 2; i < tok.size(); ++i) {
        if (tok[i] == "init") s.init = true;
        else if (tok[i] == "crit") s.crit = true;
        else detail::parse_fail(n, "unknown state flag '" + tok[i] + "'");
      }
      doc.state.push_back(s);
    } else if (kw == "trans") {
      if (tok.size() != 4) detail::parse_fail(n, "usage: trans <src> <event> <dst>");
      doc.trans.push_back({tok[1], tok[2], tok[3]});
    } else if (kw == "info") {
      if (tok.size() < 5) detail::parse_fail(n, "usage: info <state> q1|q2 <estimate> <attacker> [decision pending]");
      AutomatonDoc::Info i;
      i.state = tok[1];
      if (tok[2] == "q1" && tok.size() == 5) {
        i.q2 = false;
      } else if (tok[2] == "q2" && tok.size() == 7) {
        i.q2 = true;
        i.decision = tok[5];
        i.pending = tok[6];
      } else {
        detail::parse_fail(n, "malformed info line");
      }
      try {
        i.estimate = detail::split_set(tok[3]);
      } catch (const input_error& e) {
        detail::parse_fail(n, e.what());
      }
      i.attacker = tok[4];
      doc.info.push_back(std::move(i));
    } else {
      detail::parse_fail(n, "unknown keyword '" + kw + "'");
    }
  }
  return doc;
}

inline void write_text(std::ostream& out, const AutomatonDoc& doc) {
  if (!doc.name.empty()) out << "name " << doc.name << '\n';
  for (const auto& e : doc.event)
    out << "event " << e.name << ' ' << (e.controllable ? "c" : "u") << ' ' << (e.observable ? "o" : "uo") << '\n';
  if (!doc.compromised.empty()) {
    out << "compromised";
    for (const auto& c : doc.compromised) out << ' ' << c;
    out << '\n';
  }
  if (doc.alphabet) {
    out << "alphabet";
    for (const auto& c : *doc.alphabet) out << ' ' << c;
    out << '\n';
  }
  for (const auto& s : doc.state) out << "state " << s.id << (s.init ? " init" : "") << (s.crit ? " crit" : "") << '\n';
  for (const auto& t : doc.trans) out << "trans " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& i : doc.info) {
    out << "info " << i.state << (i.q2 ? " q2 " : " q1 ") << detail::join_set(i.estimate) << ' ' << i.attacker;
    if (i.q2) out << ' ' << i.decision << ' ' << i.pending;
    out << '\n';
  }
}

inline nlohmann::json to_json(const AutomatonDoc& doc) {
  nlohmann::json j;
  j["name"] = doc.name;
  j["event"] = nlohmann::json::array();
  for (const auto& e : doc.event)
    j["event"].push_back({{"name", e.name}, {"controllable", e.controllable}, {"observable", e.observable}});
  j["compromised"] = doc.compromised;
  if (doc.alphabet) j["alphabet"] = *doc.alphabet;
  j["state"] = nlohmann::json::array();
  for (const auto& s : doc.state) j["state"].push_back({{"id", s.id}, {"init", s.init}, {"crit", s.crit}});
  j["trans"] = doc.trans;
  if (!doc.info.empty()) {
    j["info"] = nlohmann::json::array();
    for (const auto& i : doc.info) {
      nlohmann::json x{{"state", i.state}, {"player", i.q2 ? "q2" : "q1"}, {"estimate", i.estimate}, {"attacker", i.attacker}};
      if (i.q2) {
        x["decision"] = i.decision;
        x["pending"] = i.pending;
      }
      j["info"].push_back(std::move(x));
    }
  }
  return j;
}

inline AutomatonDoc from_json(const nlohmann::json& j) {
  AutomatonDoc doc;
  try {
    doc.name = j.value("name", "");
    for (const auto& e : j.at("event"))
      doc.event.push_back({e.at("name").get<std::string>(), e.value("controllable", false), e.value("observable", true)});
    if (j.contains("compromised")) doc.compromised = j["compromised"].get<std::vector<std::string>>();
    if (j.contains("alphabet")) doc.alphabet = j["alphabet"].get<std::vector<std::string>>();
    for (const auto& s : j.at("state"))
      doc.state.push_back({s.at("id").get<std::string>(), s.value("init", false), s.value("crit", false)});
    if (j.contains("trans")) doc.trans = j["trans"].get<std::vector<std::array<std::string, 3>>>();
    if (j.contains("info"))
      for (const auto& x : j["info"]) {
        AutomatonDoc::Info i;
        i.state = x.at("state").get<std::string>();
        i.q2 = x.at("player").get<std::string>() == "q2";
        i.estimate = x.at("estimate").get<std::vector<std::string>>();
        i.attacker = x.at("attacker").get<std::string>();
        if (i.q2) {
          i.decision = x.at("decision").get<std::string>();
          i.pending = x.at("pending").get<std::string>();
        }
        doc.info.push_back(std::move(i));
      }
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed automaton JSON: ") + e.what());
  }
  return doc;
}

/// Builds the decorated universe Σm declared by a document.
inline AlphabetPtr doc_universe(const AutomatonDoc& doc) {
  Alphabet plain;
  std::set<std::string> comp(doc.compromised.begin(), doc.compromised.end());
  for (const auto& e : doc.event) plain.add_plain(e.name, e.controllable, e.observable, comp.count(e.name) > 0);
  for (const auto& c : comp)
    if (!plain.find(c)) throw input_error("compromised event '" + c + "' is not declared");
  return decorated_universe(std::make_shared<const Alphabet>(std::move(plain)));
}

namespace detail {

inline void fill_states(Automaton& aut, const AutomatonDoc& doc, std::map<std::string, StateId>& ids) {
  std::optional<StateId> init;
  for (const auto& s : doc.state) {
    if (ids.count(s.id)) throw input_error("duplicate state '" + s.id + "'");
    auto id = aut.add_state(s.id, s.crit);
    ids.emplace(s.id, id);
    if (s.init) {
      if (init) throw input_error("more than one initial state");
      init = id;
    }
  }
  if (!doc.state.empty()) {
    if (!init) throw input_error("no initial state");
    aut.set_initial(*init);
  }
}

inline StateId state_id(const std::map<std::string, StateId>& ids, const std::string& s) {
  auto it = ids.find(s);
  if (it == ids.end()) throw input_error("unknown state '" + s + "'");
  return it->second;
}

}  // namespace detail

/// Plant, supervisor or attack automaton. Its event set is the explicit
/// `alphabet` when given, otherwise the declared events plus every
/// decoration if any decorated event is used.
inline Automaton to_automaton(const AutomatonDoc& doc) {
  if (!doc.info.empty()) throw input_error("file carries arena annotations; load it as a game");
  auto u = doc_universe(doc);
  EventSet events;
  if (doc.alphabet) {
    for (const auto& n : *doc.alphabet) events.insert(u->at(n));
  } else {
    events = u->legitimate();
    for (const auto& t : doc.trans)
      if (auto e = u->find(t[1]); e && !u->is_plain(*e)) events |= u->edits();
  }
  Automaton aut(u, events);
  aut.set_name(doc.name);
  std::map<std::string, StateId> ids;
  detail::fill_states(aut, doc, ids);
  for (const auto& t : doc.trans)
    aut.add_transition(detail::state_id(ids, t[0]), u->at(t[1]), detail::state_id(ids, t[2]));
  return aut;
}

inline AutomatonDoc to_doc(const Automaton& aut) {
  AutomatonDoc doc;
  doc.name = aut.name();
  const auto& u = aut.alphabet();
  for (EventId e = 0; e < u.size(); ++e) {
    const auto& i = u.info(e);
    if (i.kind != EventKind::plain) continue;
    doc.event.push_back({i.name, i.controllable, i.observable});
    if (i.compromised) doc.compromised.push_back(i.name);
  }
  bool uses_edits = false;
  for (StateId x = 0; x < aut.num_states(); ++x)
    for (const auto& t : aut.out(x)) uses_edits = uses_edits || !u.is_plain(t.event);
  auto fallback = u.legitimate();
  if (uses_edits) fallback |= u.edits();
  if (aut.events() != fallback) {
    doc.alphabet.emplace();
    aut.events().for_each([&](EventId e) { doc.alphabet->push_back(u.name(e)); });
  }
  for (StateId x = 0; x < aut.num_states(); ++x)
    doc.state.push_back({aut.label(x), x == aut.initial(), aut.is_crit(x)});
  for (StateId x = 0; x < aut.num_states(); ++x)
    for (const auto& t : aut.out(x)) doc.trans.push_back({aut.label(x), u.name(t.event), aut.label(t.target)});
  return doc;
}

/// Arena-shaped automata use numeric state ids, decision events written as
/// sets, and one `info` line per state.
inline AutomatonDoc to_doc(const GameGraph& gg) {
  AutomatonDoc doc;
  doc.name = gg.aut.name();
  const auto& ctx = *gg.ctx;
  const auto& u = *ctx.sigma;
  for (EventId e = 0; e < u.size(); ++e) {
    const auto& i = u.info(e);
    if (i.kind != EventKind::plain) continue;
    doc.event.push_back({i.name, i.controllable, i.observable});
    if (i.compromised) doc.compromised.push_back(i.name);
  }
  for (StateId q = 0; q < gg.size(); ++q) doc.state.push_back({std::to_string(q), q == gg.aut.initial(), false});
  for (StateId q = 0; q < gg.size(); ++q)
    for (const auto& t : gg.aut.out(q))
      doc.trans.push_back({std::to_string(q), ctx.meta->name(t.event), std::to_string(t.target)});
  for (StateId q = 0; q < gg.size(); ++q) {
    const auto& s = gg.state(q);
    AutomatonDoc::Info i;
    i.state = std::to_string(q);
    i.q2 = s.player == Player::two;
    for (auto x : s.estimate) i.estimate.push_back(ctx.plant.label(x));
    i.attacker = ctx.attack.label(s.attacker);
    if (i.q2) {
      i.decision = u.format(ctx.decisions[s.decision]);
      i.pending = s.pending == no_event ? "eps" : u.name(s.pending);
    }
    doc.info.push_back(std::move(i));
  }
  return doc;
}

/// Rebuilds an arena-shaped automaton. Without a plant, estimates refer to
/// placeholder plant states that only keep their labels.
inline GameGraph to_game(const AutomatonDoc& doc, const Automaton* plant = nullptr) {
  auto ctx = std::make_shared<MetaContext>();
  ctx->sigma = doc_universe(doc);
  init_meta_events(*ctx);
  std::map<std::string, StateId> plant_ids, attack_ids;
  if (plant) {
    ctx->plant = rebase(*plant, ctx->sigma);
    for (StateId x = 0; x < ctx->plant.num_states(); ++x) plant_ids.emplace(ctx->plant.label(x), x);
  } else {
    ctx->plant = Automaton(ctx->sigma, ctx->sigma->legitimate());
  }
  ctx->attack = Automaton(ctx->sigma, ctx->sigma->observable_with_edits());
  auto lookup = [](Automaton& aut, std::map<std::string, StateId>& ids, const std::string& label, bool create) {
    auto it = ids.find(label);
    if (it != ids.end()) return it->second;
    if (!create) throw input_error("estimate refers to unknown plant state '" + label + "'");
    auto id = aut.add_state(label);
    ids.emplace(label, id);
    return id;
  };
  std::map<std::string, const AutomatonDoc::Info*> info;
  for (const auto& i : doc.info) {
    if (!info.emplace(i.state, &i).second) throw input_error("duplicate info for state '" + i.state + "'");
    for (const auto& x : i.estimate) lookup(ctx->plant, plant_ids, x, plant == nullptr);
    lookup(ctx->attack, attack_ids, i.attacker, true);
  }
  if (!ctx->plant.empty()) ctx->plant.set_initial(0);
  if (!ctx->attack.empty()) ctx->attack.set_initial(0);

  GameGraph gg{Automaton(ctx->meta), {}, {}, ctx, {}};
  gg.aut.set_name(doc.name);
  std::map<std::string, StateId> ids;
  detail::fill_states(gg.aut, doc, ids);
  for (const auto& s : doc.state) {
    auto it = info.find(s.id);
    if (it == info.end()) throw input_error("state '" + s.id + "' lacks an info line");
    const auto& i = *it->second;
    ArenaState st;
    st.player = i.q2 ? Player::two : Player::one;
    for (const auto& x : i.estimate) st.estimate.push_back(plant_ids.at(x));
    st.estimate = normalized(std::move(st.estimate));
    st.attacker = attack_ids.at(i.attacker);
    if (i.q2) {
      EventSet gamma;
      for (const auto& e : detail::split_set(i.decision)) gamma.insert(ctx->sigma->at(e));
      st.decision = ctx->decision_index(gamma);
      st.pending = i.pending == "eps" ? no_event : ctx->sigma->at(i.pending);
    }
    gg.info.push_back(std::move(st));
    gg.origin.push_back(static_cast<StateId>(gg.origin.size()));
  }
  for (const auto& t : doc.trans) {
    auto e = ctx->meta->find(t[1]);
    if (!e && !t[1].empty() && t[1].front() == '{') {
      EventSet gamma;
      for (const auto& n : detail::split_set(t[1])) gamma.insert(ctx->sigma->at(n));
      e = ctx->decision_event[ctx->decision_index(gamma)];
    }
    if (!e) throw input_error("unknown meta event '" + t[1] + "'");
    gg.aut.add_transition(detail::state_id(ids, t[0]), *e, detail::state_id(ids, t[2]));
  }
  for (StateId q = 0; q < gg.size(); ++q)
    for (auto x : gg.info[q].estimate)
      if (ctx->plant.is_crit(x)) gg.aut.set_crit(q);
  return gg;
}

inline bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

inline AutomatonDoc load_doc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  if (is_json_path(path)) {
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw input_error("'" + path + "': " + e.what());
    }
  }
  try {
    return parse_text(in);
  } catch (const input_error& e) {
    throw input_error("'" + path + "' " + e.what());
  }
}

inline void save_doc(const std::string& path, const AutomatonDoc& doc) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write '" + path + "'");
  if (is_json_path(path)) out << to_json(doc).dump(2) << '\n';
  else write_text(out, doc);
}

inline Automaton load_automaton(const std::string& path) { return to_automaton(load_doc(path)); }
inline void save_automaton(const std::string& path, const Automaton& aut) { save_doc(path, to_doc(aut)); }
inline GameGraph load_game(const std::string& path, const Automaton* plant = nullptr) {
  return to_game(load_doc(path), plant);
}
inline void save_game(const std::string& path, const GameGraph& gg) { save_doc(path, to_doc(gg)); }

inline std::string format_string(const Alphabet& u, std::span<const EventId> s) {
  if (s.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + u.name(s[i]);
  return out;
}

}  // namespace robsup
