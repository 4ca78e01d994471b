#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(ROBSUP_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string tmp(const std::string& name) {
  auto dir = fs::temp_directory_path() / "robsup_cli";
  fs::create_directories(dir);
  return (dir / name).string();
}

const std::string plant = fx::data("running/plant.txt");

}  // namespace

TEST(Cli, ArenaCountsRunningExample) {
  auto r = run("arena --plant " + plant);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("states: 26"), std::string::npos) << r.out;
  auto s = run("arena --plant " + plant + " --attack allout --stats");
  EXPECT_NE(s.out.find("decisions: 4"), std::string::npos) << s.out;
  auto j = run("--json arena --plant " + plant);
  EXPECT_EQ(nlohmann::json::parse(j.out).at("states"), 26);
}

TEST(Cli, SynthExtractVerifyPipeline) {
  auto asup = tmp("asup.txt");
  auto r = run("synth --plant " + plant + " --out " + asup);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("states: 14"), std::string::npos) << r.out;
  auto rp = run("synth --plant " + plant + " --algo partition --out " + tmp("asup_p.txt"));
  EXPECT_NE(rp.out.find("states: 14"), std::string::npos) << rp.out;

  auto sup = tmp("sup.txt");
  ASSERT_EQ(run("extract --asup " + asup + " --policy reward --plant " + plant + " --out " + sup).code, 0);
  EXPECT_EQ(run("verify --plant " + plant + " --sup " + sup).code, 0);
  auto rw = run("reward --plant " + plant + " --sup " + sup);
  EXPECT_NE(rw.out.find("reward: 4"), std::string::npos) << rw.out;

  auto many = tmp("many.txt");
  auto en = run("extract --asup " + asup + " --enumerate --out " + many);
  EXPECT_EQ(en.code, 0);
  EXPECT_TRUE(fs::exists(tmp("many_1.txt")));
  EXPECT_TRUE(fs::exists(tmp("many_2.txt")));
  EXPECT_FALSE(fs::exists(tmp("many_3.txt")));
}

TEST(Cli, VerifyReportsCounterexample) {
  auto r = run("verify --plant " + plant + " --sup " + fx::data("running/sup_unattacked.txt") + " --attack allout");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("not robust"), std::string::npos);
  EXPECT_NE(r.out.find("reaches: 4"), std::string::npos) << r.out;
  auto ok = run("verify --plant " + plant + " --sup " + fx::data("running/sup_unattacked.txt") + " --attack " +
                fx::data("running/attack_one_deletion.txt"));
  EXPECT_EQ(ok.code, 2);
  auto j = run("--json verify --plant " + plant + " --sup " + fx::data("running/r1.txt"));
  EXPECT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out).at("robust"), true);
}

TEST(Cli, EmptySolutionExitsThree) {
  auto bad = tmp("crit_plant.txt");
  {
    std::ifstream in(plant);
    std::ofstream out(bad);
    for (std::string line; std::getline(in, line);) {
      if (line.rfind("state 0", 0) == 0) line += " crit";
      out << line << '\n';
    }
  }
  auto asup = tmp("empty.txt");
  EXPECT_EQ(run("synth --plant " + bad + " --out " + asup).code, 3);
  EXPECT_EQ(run("extract --asup " + asup + " --out " + tmp("none.txt")).code, 3);
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(run("arena --plant /nonexistent.txt").code, 1);
  EXPECT_EQ(run("arena").code, 1);
  EXPECT_EQ(run("bogus").code, 1);
  EXPECT_EQ(run("synth --plant " + plant + " --algo fancy --out " + tmp("x.txt")).code, 1);
  EXPECT_EQ(run("extract --asup " + fx::data("running/asup_expected.txt") + " --policy reward --out " + tmp("y.txt")).code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, GridGen) {
  auto out = tmp("grid.txt");
  auto r = run("gridgen --rows 2 --cols 2 --obstacles 0,1 --hostile 1,0 --start 0,0 --out " + out);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("states: 4"), std::string::npos) << r.out;
  auto g = robsup::load_automaton(out);
  EXPECT_EQ(g.num_states(), 4u);
  EXPECT_EQ(run("gridgen --rows 2 --cols 2 --obstacles 0,0 --start 0,0 --out " + out).code, 1);
}
