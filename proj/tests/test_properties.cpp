#include <gtest/gtest.h>

#include "oracles.hpp"

// Reduced versions of the acceptance suites; the acceptance binary runs
// the full sizes.

namespace {

void report(const oracle::SuiteResult& r) {
  for (std::size_t i = 0; i < r.failures.size() && i < 10; ++i) ADD_FAILURE() << r.failures[i];
  EXPECT_TRUE(r.ok()) << r.failures.size() << " failures over " << r.checks << " checks";
  EXPECT_GT(r.checks, 0u);
}

}  // namespace

TEST(Properties, StateEstimatesAreExact) { report(oracle::estimate_suite(101, 25, 4)); }

TEST(Properties, SupremalControllableNormal) { report(oracle::supcn_suite(103, 15, 15)); }

TEST(Properties, RobustIffEmbedded) { report(oracle::embedding_suite(107, 25, 6)); }

TEST(Properties, RunningExampleEstimates) {
  auto g = fx::running_plant();
  auto a = robsup::build_all_out(g.universe());
  for (const char* f : {"sup_unattacked.txt", "r1.txt", "r2.txt"}) {
    oracle::EstimateStats st;
    oracle::estimate_check(g, fx::running_sup(f, g), a, 6, st);
    EXPECT_TRUE(st.failures.empty()) << f << ": " << (st.failures.empty() ? "" : st.failures[0]);
    EXPECT_GT(st.strings, 1u);
  }
}
