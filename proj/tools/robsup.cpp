// robsup command-line front end.
//
// Exit codes: 0 success, 1 bad input or I/O failure, 2 supervisor not
// robust, 3 no robust supervisor exists.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "robsup/robsup.hpp"

namespace {

using namespace robsup;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_not_robust = 2;
constexpr int exit_empty = 3;

AttackModel load_attack(const std::string& spec, const Automaton& plant) {
  if (spec == "allout") return build_all_out(plant.universe());
  auto a = load_automaton(spec);
  // Attack files declare the plant events they mention; bind them to the
  // plant alphabet so flags and ids agree.
  for (const auto& e : a.alphabet().legitimate().to_vector()) {
    auto name = a.alphabet().name(e);
    auto pe = plant.alphabet().find(name);
    if (!pe) throw input_error("attack event '" + name + "' is not a plant event");
    const auto& ai = a.alphabet().info(e);
    const auto& pi = plant.alphabet().info(*pe);
    if (ai.controllable != pi.controllable || ai.observable != pi.observable || ai.compromised != pi.compromised)
      throw input_error("attack event '" + name + "' disagrees with the plant declaration");
  }
  auto u = decorated_universe(plant.universe());
  auto rebound = rebase(as_attack_model(a), u);
  require_valid(rebound);
  return rebound;
}

SupCnAlgorithm parse_algo(const std::string& s) {
  if (s == "default" || s == "iterative") return SupCnAlgorithm::iterative;
  if (s == "partition") return SupCnAlgorithm::partition;
  throw input_error("unknown algorithm '" + s + "'");
}

std::string reward_text(double r) {
  if (std::isinf(r)) return r < 0 ? "-inf" : "inf";
  std::ostringstream os;
  os << r;
  return os.str();
}

json reward_json(double r) {
  if (std::isinf(r)) return reward_text(r);
  return r;
}

/// path "out/r.txt", index 2 -> "out/r_2.txt"
std::string indexed_path(const std::string& path, std::size_t i) {
  std::filesystem::path p(path);
  auto stem = p.stem().string() + "_" + std::to_string(i);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

struct Common {
  bool json_out = false;
};

int cmd_arena(const std::string& plant_f, const std::string& attack_f, bool stats, const std::string& out_f,
              bool expand_critical, const Common& c) {
  auto g = load_automaton(plant_f);
  auto a = load_attack(attack_f, g);
  ArenaOptions opt;
  opt.expand_critical = expand_critical;
  auto ar = build_arena(g, a, opt);
  auto st = arena_stats(ar);
  if (!out_f.empty()) save_game(out_f, ar);
  if (c.json_out) {
    json j{{"states", st.total()}};
    if (stats) {
      j["q1"] = st.q1;
      j["q2"] = st.q2;
      j["transitions"] = st.transitions;
      j["decisions"] = st.decisions;
      j["decisions_used"] = st.decisions_used;
      j["critical"] = st.critical;
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "states: " << st.total() << '\n';
    if (stats) {
      std::cout << "q1: " << st.q1 << '\n'
                << "q2: " << st.q2 << '\n'
                << "transitions: " << st.transitions << '\n'
                << "decisions: " << st.decisions << '\n'
                << "decisions used: " << st.decisions_used << '\n'
                << "critical: " << st.critical << '\n';
    }
  }
  return exit_ok;
}

int cmd_synth(const std::string& plant_f, const std::string& attack_f, const std::string& out_f,
              const std::string& algo, std::size_t limit, const Common& c) {
  auto g = load_automaton(plant_f);
  auto a = load_attack(attack_f, g);
  SynthesisOptions opt;
  opt.algorithm = parse_algo(algo);
  opt.state_limit = limit;
  auto sup = synthesize(g, a, opt);
  save_game(out_f, sup);
  auto st = arena_stats(sup);
  if (c.json_out) {
    std::cout << json{{"states", st.total()}, {"q1", st.q1}, {"q2", st.q2}, {"transitions", st.transitions},
                      {"empty", sup.empty()}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "states: " << st.total() << '\n' << "transitions: " << st.transitions << '\n';
  }
  if (sup.empty()) {
    std::cerr << "no robust supervisor exists\n";
    return exit_empty;
  }
  return exit_ok;
}

int cmd_extract(const std::string& asup_f, const std::string& policy, bool enumerate, double reward_c,
                const std::string& plant_f, const std::string& tie, const std::string& out_f, const Common& c) {
  ExtractionPolicy pol;
  if (policy == "maximal") pol.mode = ExtractionMode::maximal;
  else if (policy == "reward") pol.mode = ExtractionMode::reward;
  else throw input_error("unknown policy '" + policy + "'");
  if (tie == "highest") pol.tie_break = TieBreak::highest_rank;
  else if (tie == "lowest") pol.tie_break = TieBreak::lowest_rank;
  else throw input_error("unknown tie-break '" + tie + "'");
  pol.enumerate = enumerate;
  pol.reward_c = reward_c;

  std::optional<Automaton> g;
  if (!plant_f.empty()) g = load_automaton(plant_f);
  if (pol.mode == ExtractionMode::reward && !g) throw input_error("--policy reward needs --plant");
  auto sup = load_game(asup_f, g ? &*g : nullptr);
  if (sup.empty()) {
    std::cerr << "solution arena is empty: no robust supervisor exists\n";
    return exit_empty;
  }

  json report = json::array();
  auto emit = [&](const Automaton& r, const std::string& path, std::optional<double> reward) {
    save_automaton(path, r);
    json item{{"file", path}, {"states", r.num_states()}};
    if (reward) item["reward"] = reward_json(*reward);
    report.push_back(item);
    if (!c.json_out) {
      std::cout << path << ": " << r.num_states() << " states";
      if (reward) std::cout << ", reward " << reward_text(*reward);
      std::cout << '\n';
    }
  };

  if (enumerate) {
    auto all = enumerate_supervisors(sup, pol);
    if (all.budget_exhausted) std::cerr << "warning: enumeration budget exhausted\n";
    for (std::size_t i = 0; i < all.supervisors.size(); ++i) {
      std::optional<double> rw;
      if (g) rw = reward_total(*g, all.supervisors[i].sup, pol.reward_c);
      emit(all.supervisors[i].sup, indexed_path(out_f, i + 1), rw);
    }
  } else if (pol.mode == ExtractionMode::reward) {
    auto best = extract_max_reward(sup, *g, pol.reward_c, pol);
    if (best.budget_exhausted) std::cerr << "warning: enumeration budget exhausted\n";
    emit(best.best.sup, out_f, best.reward);
  } else {
    auto ex = extract_supervisor(sup, pol);
    std::optional<double> rw;
    if (g) rw = reward_total(*g, ex.sup, pol.reward_c);
    emit(ex.sup, out_f, rw);
  }
  if (c.json_out) std::cout << report.dump(2) << '\n';
  return exit_ok;
}

int cmd_verify(const std::string& plant_f, const std::string& sup_f, const std::string& attack_f, const Common& c) {
  auto g = load_automaton(plant_f);
  auto r = rebase(load_automaton(sup_f), g.universe());
  require_realization(r);
  auto a = load_attack(attack_f, g);
  auto res = verify_robust(g, r, a);
  if (res.robust) {
    if (c.json_out) std::cout << json{{"robust", true}}.dump(2) << '\n';
    else std::cout << "robust\n";
    return exit_ok;
  }
  const auto& cx = *res.counterexample;
  auto cl = closed_loop(g, r, a);
  const auto& u = cl.aut.alphabet();
  if (c.json_out) {
    auto names = [&](const Alphabet& al, const std::vector<EventId>& s) {
      json arr = json::array();
      for (auto e : s) arr.push_back(al.name(e));
      return arr;
    };
    std::cout << json{{"robust", false},
                      {"trace", names(u, cx.trace)},
                      {"plant_string", names(u, cx.plant_string)},
                      {"supervisor_string", names(u, cx.supervisor_string)},
                      {"plant_state", g.label(cx.plant_state)}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "not robust\n"
              << "trace: " << format_string(u, cx.trace) << '\n'
              << "plant: " << format_string(u, cx.plant_string) << '\n'
              << "observed: " << format_string(u, cx.supervisor_string) << '\n'
              << "reaches: " << g.label(cx.plant_state) << '\n';
  }
  return exit_not_robust;
}

int cmd_reward(const std::string& plant_f, const std::string& sup_f, double reward_c, const Common& c) {
  auto g = load_automaton(plant_f);
  auto r = rebase(load_automaton(sup_f), g.universe());
  require_realization(r);
  auto gr = compose_parallel(g, r);
  auto dead = x_dead(gr);
  auto total = reward_total(g, r, reward_c);
  if (c.json_out) {
    std::cout << json{{"reward", reward_json(total)}, {"states", gr.aut.num_states()}, {"dead", dead.size()}}.dump(2)
              << '\n';
  } else {
    std::cout << "reward: " << reward_text(total) << '\n'
              << "states: " << gr.aut.num_states() << '\n'
              << "dead: " << dead.size() << '\n';
  }
  return exit_ok;
}

int cmd_gridgen(int rows, int cols, const std::string& obstacles, const std::string& hostile,
                const std::string& start, const std::string& out_f, const Common& c) {
  GridSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.obstacles = parse_cells(obstacles);
  spec.hostile = parse_cells(hostile);
  auto st = parse_cells(start);
  if (st.size() != 1) throw input_error("--start needs exactly one cell");
  spec.start = st.front();
  auto g = gridgen(spec);
  save_automaton(out_f, g);
  if (c.json_out)
    std::cout << json{{"states", g.num_states()}, {"transitions", g.num_transitions()}}.dump(2) << '\n';
  else
    std::cout << "states: " << g.num_states() << '\n' << "transitions: " << g.num_transitions() << '\n';
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust supervisor synthesis against sensor deception attacks"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--json", common.json_out, "Machine-readable output");

  std::string plant_f, attack_f = "allout", out_f, sup_f, asup_f, algo = "default", policy = "maximal",
                       tie = "highest", obstacles, hostile, start;
  bool stats = false, enumerate = false, expand_critical = false;
  double reward_c = 1.0;
  std::size_t limit = 0;
  int rows = 0, cols = 0;

  auto* arena = app.add_subcommand("arena", "Build the game arena");
  arena->add_option("--plant", plant_f, "Plant automaton")->required();
  arena->add_option("--attack", attack_f, "Attack automaton file or 'allout'");
  arena->add_flag("--stats", stats, "Print the full breakdown");
  arena->add_option("--out", out_f, "Write the arena");
  arena->add_flag("--expand-critical", expand_critical, "Also expand states whose estimate is critical");

  auto* synth = app.add_subcommand("synth", "Compute the solution arena");
  synth->add_option("--plant", plant_f, "Plant automaton")->required();
  synth->add_option("--attack", attack_f, "Attack automaton file or 'allout'");
  synth->add_option("--out", out_f, "Write the solution arena")->required();
  synth->add_option("--algo", algo, "default|partition");
  synth->add_option("--limit", limit, "Abort past this many intermediate states (0 = none)");

  auto* extract = app.add_subcommand("extract", "Extract supervisors from a solution arena");
  extract->add_option("--asup", asup_f, "Solution arena")->required();
  extract->add_option("--policy", policy, "maximal|reward");
  extract->add_flag("--enumerate", enumerate, "Write every distinct extraction as <out>_<i>");
  extract->add_option("--c", reward_c, "Reward per live state");
  extract->add_option("--plant", plant_f, "Plant automaton (required for reward)");
  extract->add_option("--tie-break", tie, "highest|lowest");
  extract->add_option("--out", out_f, "Output supervisor")->required();

  auto* verify = app.add_subcommand("verify", "Check a supervisor against an attack");
  verify->add_option("--plant", plant_f, "Plant automaton")->required();
  verify->add_option("--sup", sup_f, "Supervisor realization")->required();
  verify->add_option("--attack", attack_f, "Attack automaton file or 'allout'");

  auto* reward = app.add_subcommand("reward", "Total reward of a supervised plant");
  reward->add_option("--plant", plant_f, "Plant automaton")->required();
  reward->add_option("--sup", sup_f, "Supervisor realization")->required();
  reward->add_option("--c", reward_c, "Reward per live state");

  auto* grid = app.add_subcommand("gridgen", "Generate a grid-world robot plant");
  grid->add_option("--rows", rows, "Rows")->required();
  grid->add_option("--cols", cols, "Columns")->required();
  grid->add_option("--obstacles", obstacles, "Cells 'r,c;r,c'");
  grid->add_option("--hostile", hostile, "Cells 'r,c;r,c'");
  grid->add_option("--start", start, "Start cell 'r,c'")->required();
  grid->add_option("--out", out_f, "Output plant")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return exit_input;
  }

  try {
    if (*arena) return cmd_arena(plant_f, attack_f, stats, out_f, expand_critical, common);
    if (*synth) return cmd_synth(plant_f, attack_f, out_f, algo, limit, common);
    if (*extract) return cmd_extract(asup_f, policy, enumerate, reward_c, plant_f, tie, out_f, common);
    if (*verify) return cmd_verify(plant_f, sup_f, attack_f, common);
    if (*reward) return cmd_reward(plant_f, sup_f, reward_c, common);
    if (*grid) return cmd_gridgen(rows, cols, obstacles, hostile, start, out_f, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}
