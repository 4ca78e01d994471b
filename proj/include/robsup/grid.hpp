#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "robsup/automaton.hpp"

namespace robsup {

using Cell = std::pair<int, int>;  // (row, col), row 0 at the top

struct GridSpec {
  int rows = 0;
  int cols = 0;
  std::vector<Cell> obstacles;
  std::vector<Cell> hostile;
  Cell start{0, 0};
};

inline std::string cell_name(Cell c) { return "r" + std::to_string(c.first) + "c" + std::to_string(c.second); }

/// Robot plant: one state per reachable free cell plus a single critical
/// "crash" state entered by any move into an obstacle. Moves out of hostile
/// cells use the starred (compromised) copies of E, W, N, S. Moves off the
/// grid are not possible.
inline Automaton gridgen(const GridSpec& spec) {
  if (spec.rows <= 0 || spec.cols <= 0) throw input_error("grid needs positive dimensions");
  auto in_range = [&](Cell c) { return c.first >= 0 && c.first < spec.rows && c.second >= 0 && c.second < spec.cols; };
  std::set<Cell> obstacles(spec.obstacles.begin(), spec.obstacles.end());
  std::set<Cell> hostile(spec.hostile.begin(), spec.hostile.end());
  for (auto c : obstacles)
    if (!in_range(c)) throw input_error("obstacle " + cell_name(c) + " out of range");
  for (auto c : hostile)
    if (!in_range(c)) throw input_error("hostile cell " + cell_name(c) + " out of range");
  if (!in_range(spec.start)) throw input_error("start cell out of range");
  if (obstacles.count(spec.start)) throw input_error("start cell is an obstacle");

  auto sigma = std::make_shared<Alphabet>();
  const char* dirs[] = {"E", "W", "N", "S"};
  const int dr[] = {0, 0, -1, 1};
  const int dc[] = {1, -1, 0, 0};
  EventId plain[4], starred[4];
  for (int d = 0; d < 4; ++d) plain[d] = sigma->add_plain(dirs[d], true, true);
  for (int d = 0; d < 4; ++d) starred[d] = sigma->add_plain(std::string(dirs[d]) + "*", true, true, true);

  Automaton g(sigma);
  g.set_name("robot");
  std::map<Cell, StateId> ids;
  StateId crash = no_state;
  std::vector<Cell> queue{spec.start};
  ids.emplace(spec.start, g.add_state(cell_name(spec.start)));
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto c = queue[i];
    auto src = ids.at(c);
    bool h = hostile.count(c) > 0;
    for (int d = 0; d < 4; ++d) {
      Cell n{c.first + dr[d], c.second + dc[d]};
      if (!in_range(n)) continue;
      StateId dst;
      if (obstacles.count(n)) {
        if (crash == no_state) crash = g.add_state("crash", true);
        dst = crash;
      } else {
        auto [it, fresh] = ids.try_emplace(n, 0);
        if (fresh) {
          it->second = g.add_state(cell_name(n));
          queue.push_back(n);
        }
        dst = it->second;
      }
      g.add_transition(src, h ? starred[d] : plain[d], dst);
    }
  }
  g.set_initial(ids.at(spec.start));
  return g;
}

/// Parses "r,c;r,c;..." (spaces ignored, empty string allowed).
inline std::vector<Cell> parse_cells(const std::string& text) {
  std::vector<Cell> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    auto comma = cur.find(',');
    if (comma == std::string::npos) throw input_error("cell '" + cur + "' must be r,c");
    try {
      out.emplace_back(std::stoi(cur.substr(0, comma)), std::stoi(cur.substr(comma + 1)));
    } catch (const std::exception&) {
      throw input_error("cell '" + cur + "' must be r,c");
    }
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ';') flush();
    else if (ch != ' ') cur += ch;
  }
  flush();
  return out;
}

}  // namespace robsup
