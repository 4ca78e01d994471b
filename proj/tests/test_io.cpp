#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fixtures.hpp"

using namespace robsup;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("robsup_io_" + name)).string();
}

void expect_same(const Automaton& a, const Automaton& b) {
  EXPECT_EQ(a.name(), b.name());
  ASSERT_EQ(a.num_states(), b.num_states());
  EXPECT_EQ(a.num_transitions(), b.num_transitions());
  EXPECT_EQ(a.initial(), b.initial());
  for (StateId x = 0; x < a.num_states(); ++x) {
    EXPECT_EQ(a.label(x), b.label(x));
    EXPECT_EQ(a.is_crit(x), b.is_crit(x));
  }
  EXPECT_EQ(a.events().count(), b.events().count());
  EXPECT_TRUE(isomorphic(a, rebase(b, a.universe())));
}

AutomatonDoc parse(const std::string& text) {
  std::istringstream in(text);
  return parse_text(in);
}

}  // namespace

TEST(Io, FixturesRoundTripThroughTextAndJson) {
  for (const char* f : {"running/plant.txt", "running/sup_unattacked.txt", "running/r1.txt", "running/r2.txt",
                        "running/attack_one_deletion.txt", "robot/plant.txt"}) {
    SCOPED_TRACE(f);
    auto a = load_automaton(fx::data(f));
    auto txt = tmp_path("rt.txt");
    auto js = tmp_path("rt.json");
    save_automaton(txt, a);
    save_automaton(js, a);
    expect_same(a, load_automaton(txt));
    expect_same(a, load_automaton(js));
    EXPECT_EQ(a.universe()->size(), load_automaton(js).universe()->size());
  }
}

TEST(Io, GameRoundTrip) {
  auto g = fx::running_plant();
  auto sup = synthesize(g, build_all_out(g.universe()));
  for (const char* ext : {".txt", ".json"}) {
    auto p = tmp_path(std::string("game") + ext);
    save_game(p, sup);
    auto back = load_game(p, &g);
    ASSERT_EQ(back.size(), sup.size());
    EXPECT_TRUE(language_equal(rebase(back.aut, sup.ctx->meta), sup.aut));
    for (StateId q = 0; q < sup.size(); ++q) {
      EXPECT_EQ(back.i1(q), sup.i1(q));
      EXPECT_EQ(back.is_q1(q), sup.is_q1(q));
      EXPECT_EQ(back.state(q).pending, sup.state(q).pending);
    }
    // Extraction works on a loaded arena.
    EXPECT_EQ(enumerate_supervisors(back).supervisors.size(), 2u);
  }
}

TEST(Io, ExpectedArenaLoadsWithoutPlant) {
  auto gg = load_game(fx::data("running/asup_expected.txt"));
  EXPECT_EQ(gg.size(), 14u);
  EXPECT_EQ(gg.aut.label(gg.aut.initial()), "q0");
}

TEST(Io, Errors) {
  EXPECT_THROW(parse("bogus x"), input_error);
  EXPECT_THROW(parse("event a x o"), input_error);
  EXPECT_THROW(parse("state 0 init foo"), input_error);
  EXPECT_THROW(parse("info 0 q1 0 0"), input_error);
  EXPECT_THROW(to_automaton(parse("event a c o\nstate 0 init\nstate 0")), input_error);
  EXPECT_THROW(to_automaton(parse("event a c o\nstate 0 init\nstate 1 init")), input_error);
  EXPECT_THROW(to_automaton(parse("event a c o\nstate 0")), input_error);
  EXPECT_THROW(to_automaton(parse("event a c o\nstate 0 init\ntrans 0 a 1")), input_error);
  EXPECT_THROW(to_automaton(parse("event a c o\nstate 0 init\ntrans 0 z 0")), input_error);
  EXPECT_THROW(to_automaton(parse("event a c o\nstate 0 init\nstate 1\ntrans 0 a 0\ntrans 0 a 1")), input_error);
  EXPECT_THROW(to_automaton(parse("event a c o\ncompromised b\nstate 0 init")), input_error);
  EXPECT_THROW(load_automaton("/nonexistent/file.txt"), input_error);
  EXPECT_THROW(from_json(nlohmann::json::parse(R"({"state": []})")), input_error);
  EXPECT_THROW(load_automaton(fx::data("running/asup_expected.txt")), input_error);
}

TEST(Io, CommentsAndDecoratedEvents) {
  auto a = to_automaton(parse("# header\nevent b c o # trailing\ncompromised b\nstate 0 init\ntrans 0 b.del 0\n"));
  EXPECT_TRUE(a.events().contains(a.alphabet().at("b.ins")));
  EXPECT_TRUE(a.events().contains(a.alphabet().at("b")));
  auto b = to_automaton(parse("event b c o\ncompromised b\nalphabet b\nstate 0 init\n"));
  EXPECT_EQ(b.events().count(), 1u);
}

TEST(Grid, GeneratorShape) {
  GridSpec s;
  s.rows = 2;
  s.cols = 2;
  s.obstacles = {{0, 1}};
  s.hostile = {{1, 0}};
  s.start = {0, 0};
  auto g = gridgen(s);
  // Three free cells plus the crash state.
  EXPECT_EQ(g.num_states(), 4u);
  EXPECT_EQ(g.crit_states().size(), 1u);
  const auto& u = g.alphabet();
  for (const char* e : {"E", "W", "N", "S", "E*", "W*", "N*", "S*"}) {
    auto id = u.at(e);
    EXPECT_TRUE(u.info(id).controllable && u.info(id).observable);
    EXPECT_EQ(u.info(id).compromised, std::string(e).back() == '*');
  }
  auto start = g.initial();
  auto crash = g.next(start, u.at("E"));
  ASSERT_TRUE(crash);
  EXPECT_TRUE(g.is_crit(*crash));
  auto down = g.next(start, u.at("S"));
  ASSERT_TRUE(down);
  // Leaving the hostile cell uses starred events.
  EXPECT_TRUE(g.next(*down, u.at("N*")));
  EXPECT_FALSE(g.next(*down, u.at("N")));
  EXPECT_FALSE(g.next(start, u.at("N")));
}

TEST(Grid, RejectsBadSpecs) {
  GridSpec s;
  s.rows = 2;
  s.cols = 2;
  s.obstacles = {{0, 0}};
  EXPECT_THROW(gridgen(s), input_error);
  s.obstacles = {{5, 5}};
  EXPECT_THROW(gridgen(s), input_error);
  EXPECT_EQ(parse_cells("1,2;0,0"), (std::vector<Cell>{{1, 2}, {0, 0}}));
  EXPECT_THROW(parse_cells("1;2"), input_error);
}
