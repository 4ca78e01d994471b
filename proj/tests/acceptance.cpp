// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"

using namespace robsup;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
int known = 0;
// Criteria listed with --known-gap still print FAIL but do not change the
// exit status.
std::set<int> known_gaps;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs < limit_s;
  bool pass = o.pass && in_time;
  bool gap = !pass && known_gaps.count(id);
  failures += !pass && !gap;
  known += gap;
  std::ostringstream line;
  line << (pass ? "PASS" : "FAIL") << " criterion " << id << " (" << title << "): " << o.detail;
  if (gap) line << " [known gap]";
  char buf[64];
  std::snprintf(buf, sizeof buf, " [%.2fs, limit %.0fs%s]", secs, limit_s, in_time ? "" : ", too slow");
  std::cout << line.str() << buf << std::endl;
}

std::string suite_detail(const oracle::SuiteResult& r) {
  std::ostringstream s;
  s << r.instances << " instances, " << r.checks << " checks, " << r.failures.size() << " failures";
  for (const auto& [k, v] : r.counts) s << ", " << k << " " << v;
  if (!r.failures.empty()) s << "; first: " << r.failures.front();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--known-gap") known_gaps.insert(std::stoi(argv[++i]));
  auto g = fx::running_plant();
  auto allout = build_all_out(g.universe());
  auto r1 = fx::running_sup("r1.txt", g);
  auto r2 = fx::running_sup("r2.txt", g);

  criterion(1, "running-example arena", 1, [&] {
    auto ar = build_arena(g, allout);
    auto n = ar.size();
    return Outcome{n == 26, std::to_string(n) + " states (expected 26)"};
  });

  criterion(2, "running-example synthesis", 5, [&] {
    auto want = load_game(fx::data("running/asup_expected.txt"), &g);
    std::ostringstream d;
    bool ok = true;
    for (auto algo : {SupCnAlgorithm::iterative, SupCnAlgorithm::partition}) {
      auto sup = synthesize(g, allout, {algo, {}, 0});
      auto eq = language_equal(sup.aut, rebase(want.aut, sup.ctx->meta));
      ok = ok && eq;
      d << (algo == SupCnAlgorithm::iterative ? "default" : "partition") << ": " << sup.size() << " states, "
        << (eq ? "language-equal" : "differs at " + format_string(*sup.ctx->meta, eq.witness)) << "; ";
    }
    return Outcome{ok, d.str()};
  });

  criterion(3, "extraction", 5, [&] {
    auto sup = synthesize(g, allout);
    auto en = enumerate_supervisors(sup);
    int hit1 = 0, hit2 = 0;
    for (const auto& ex : en.supervisors) {
      hit1 += isomorphic(ex.sup, r1);
      hit2 += isomorphic(ex.sup, r2);
    }
    auto best = extract_max_reward(sup, g, 1.0);
    bool picks_r1 = isomorphic(best.best.sup, r1);
    std::ostringstream d;
    d << en.supervisors.size() << " supervisors (R1 x" << hit1 << ", R2 x" << hit2 << "); reward picks "
      << (picks_r1 ? "R1" : "another") << " with " << best.reward;
    return Outcome{en.supervisors.size() == 2 && hit1 == 1 && hit2 == 1 && picks_r1 && best.reward == 4.0, d.str()};
  });

  criterion(4, "verification ground truth", 1, [&] {
    auto naive = fx::running_sup("sup_unattacked.txt", g);
    auto v = verify_robust(g, naive, allout);
    bool reaches4 = !v.robust && g.label(v.counterexample->plant_state) == "4";
    bool ok1 = verify_robust(g, r1, allout).robust;
    bool ok2 = verify_robust(g, r2, allout).robust;
    std::ostringstream d;
    d << "unattacked design " << (v.robust ? "robust" : "not robust");
    if (!v.robust)
      d << " via '" << format_string(*decorated_universe(g.universe()), v.counterexample->trace) << "' reaching "
        << g.label(v.counterexample->plant_state);
    d << "; R1 " << (ok1 ? "robust" : "not robust") << "; R2 " << (ok2 ? "robust" : "not robust");
    return Outcome{reaches4 && ok1 && ok2, d.str()};
  });

  criterion(5, "robot case study", 300, [&] {
    auto robot = load_automaton(fx::data("robot/plant.txt"));
    auto a = build_all_out(robot.universe());
    auto ar = build_arena(robot, a);
    auto st = arena_stats(ar);
    std::ostringstream d;
    d << "arena " << st.total() << " states, " << st.decisions << " decisions";
    bool ok = st.total() == 18649 && st.decisions == 256;
    // Default mode: properties and an embedded, robust extraction.
    auto sup = synthesize(ar);
    const auto& meta = *ar.ctx->meta;
    bool props = !sup.empty() && check_properties(sup.aut, ar.aut, meta.controllable(), meta.observable()).ok();
    d << "; default " << sup.size() << " states, properties " << (props ? "ok" : "FAIL");
    ok = ok && props;
    if (!sup.empty()) {
      auto ex = extract_supervisor(sup);
      bool robust = verify_robust(robot, ex.sup, a).robust;
      bool inside = embeds(sup, robot, ex.sup, a).embeds;
      d << ", extraction " << ex.sup.num_states() << " states " << (robust ? "robust" : "NOT robust") << "/"
        << (inside ? "embedded" : "NOT embedded");
      ok = ok && robust && inside;
    }
    try {
      auto part = synthesize(ar, SupCnAlgorithm::partition, 3'000'000);
      d << "; partition " << part.size() << " states (expected 65358)";
      ok = ok && part.size() == 65358;
    } catch (const limit_exceeded& e) {
      d << "; partition aborted (" << e.what() << ")";
      ok = false;
    }
    return Outcome{ok, d.str()};
  });

  criterion(6, "state-estimate property suite", 120,
            [&] {
              auto r = oracle::estimate_suite(6001, 100, 6);
              return Outcome{r.ok(), suite_detail(r)};
            });

  criterion(7, "supremal controllable normal suite", 300,
            [&] {
              auto r = oracle::supcn_suite(7001, 50, 50);
              return Outcome{r.ok(), suite_detail(r)};
            });

  criterion(8, "robustness iff embedding suite", 300,
            [&] {
              auto r = oracle::embedding_suite(8001, 100, 10);
              return Outcome{r.ok(), suite_detail(r)};
            });

  std::cout << 8 - failures - known << "/8 passed";
  if (known) std::cout << ", " << known << " known gap(s)";
  if (failures) std::cout << ", " << failures << " unexpected failure(s)";
  std::cout << std::endl;
  return failures ? 1 : 0;
}
