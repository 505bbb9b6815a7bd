#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "etaq/search.hpp"

namespace {

etaq::ObjectiveSpec small_spec(std::size_t hMax) {
  etaq::ObjectiveSpec spec;
  spec.points = {{0.75, 3}};
  spec.n0 = 200;
  spec.n1 = 600;
  spec.hMax = hMax;
  return spec;
}

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

}  // namespace

TEST(Objective, SingleElementEqualsSubseriesTail) {
  etaq::ObjectiveSpec spec;
  spec.points = {{2, 0}};
  spec.n0 = 10'000;
  spec.n1 = 20'000;
  spec.hMax = 1;
  const double got = etaq::objective_gap({identity(2), 0}, spec);

  // Sum over multiples of 3 of (-1)^(k-1) k^-2 is eta(2)/9.
  const long double full = std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 108;
  long double partial = 0;
  long double worst = 0;
  for (std::uint64_t k = 1; k <= spec.n1; ++k) {
    if (k % 3 == 0) {
      const long double kk = static_cast<long double>(k);
      partial += ((k % 2) ? 1.0L : -1.0L) / (kk * kk);
    }
    if (k >= spec.n0) worst = std::max(worst, std::abs(full - partial));
  }

  EXPECT_GT(got, 0);
  EXPECT_NEAR(got, static_cast<double>(worst), 1e-13);
}

TEST(Objective, EmptyHRangeIsZero) {
  EXPECT_EQ(etaq::objective_gap({identity(4), 0}, small_spec(0)), 0.0);
}

TEST(Objective, DeterministicBitForBit) {
  const auto spec = small_spec(8);
  auto perm = identity(8);
  std::swap(perm[2], perm[5]);
  const double a = etaq::objective_gap({perm, 0}, spec);
  const double b = etaq::objective_gap({perm, 0}, spec);
  EXPECT_EQ(a, b);
}

TEST(Objective, OrderMattersWithinHMax) {
  const auto spec = small_spec(4);
  auto perm = identity(8);
  const double base = etaq::objective_gap({perm, 0}, spec);
  std::swap(perm[0], perm[6]);
  EXPECT_NE(etaq::objective_gap({perm, 0}, spec), base);
}

TEST(Objective, SwapBeyondHMaxIsInvisible) {
  const auto spec = small_spec(3);
  auto perm = identity(10);
  const double base = etaq::objective_gap({perm, 0}, spec);
  std::swap(perm[4], perm[8]);
  EXPECT_EQ(etaq::objective_gap({perm, 0}, spec), base);
}

TEST(Objective, MatchesSurfaceAndLimitA) {
  const auto spec = small_spec(6);
  auto perm = identity(6);
  std::swap(perm[0], perm[3]);
  std::swap(perm[1], perm[5]);
  const double got = etaq::objective_gap({perm, 0}, spec);

  const etaq::ObjectiveEvaluator eval(spec, 6);
  const auto ordering = etaq::candidate_ordering({perm, 0}, eval.byValue(), 1000);
  const auto s = spec.points[0];
  std::vector<std::uint64_t> nAxis;
  for (auto n = spec.n0; n <= spec.n1; ++n) nAxis.push_back(n);
  std::vector<std::uint64_t> hAxis = {1, 2, 3, 4, 5, 6};
  const auto surf = etaq::c_s_surface(s, ordering, nAxis, hAxis);
  const auto prefix = ordering.prefix(6);
  const auto a = etaq::limit_a_sequence(s, prefix, etaq::eta_accel(s, 1e-12));
  double worst = 0;
  for (std::size_t i = 0; i < nAxis.size(); ++i) {
    for (std::size_t j = 0; j < hAxis.size(); ++j) {
      worst = std::max(worst, std::abs(surf.c(i, j) - a[j].cos) + std::abs(surf.s(i, j) - a[j].sin));
    }
  }
  EXPECT_NEAR(got, worst, 1e-12);
}

TEST(Anneal, SingleIteration) {
  etaq::SearchConfig cfg;
  cfg.prefixLength = 6;
  cfg.objective = small_spec(6);
  const auto r = etaq::anneal(cfg);
  ASSERT_EQ(r.trace.size(), 1u);
  const auto id = identity(6);
  int moved = 0;
  for (std::size_t i = 0; i < 6; ++i) moved += r.best.permutation[i] != id[i];
  EXPECT_TRUE(moved == 0 || moved == 2);
}

TEST(Anneal, DeterministicAndMonotoneIncumbent) {
  etaq::SearchConfig cfg;
  cfg.seed = 42;
  cfg.prefixLength = 12;
  cfg.iterations = 60;
  cfg.neighborhood = etaq::Neighborhood::RandomSwap;
  cfg.objective = small_spec(12);
  const auto a = etaq::anneal(cfg);
  const auto b = etaq::anneal(cfg);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].objective, b.trace[i].objective);
    EXPECT_EQ(a.trace[i].accepted, b.trace[i].accepted);
  }
  EXPECT_EQ(a.best.permutation, b.best.permutation);
  EXPECT_LE(a.best.objective, a.initial.objective);
  EXPECT_EQ(a.initial.permutation, identity(12));
  auto sorted = a.best.permutation;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, identity(12));
  EXPECT_EQ(etaq::objective_gap(a.best, cfg.objective), a.best.objective);
}

TEST(Anneal, DifferentSeedsDiverge) {
  etaq::SearchConfig cfg;
  cfg.prefixLength = 12;
  cfg.iterations = 30;
  cfg.objective = small_spec(12);
  cfg.seed = 1;
  const auto a = etaq::anneal(cfg);
  cfg.seed = 2;
  const auto b = etaq::anneal(cfg);
  bool differ = false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) differ |= a.trace[i].objective != b.trace[i].objective;
  EXPECT_TRUE(differ);
}

TEST(Anneal, RejectsInvalidConfig) {
  etaq::SearchConfig cfg;
  cfg.objective = small_spec(2);
  cfg.prefixLength = 1;
  EXPECT_THROW(etaq::anneal(cfg), etaq::PreconditionError);
  cfg.prefixLength = 2;
  cfg.iterations = 0;
  EXPECT_THROW(etaq::anneal(cfg), etaq::PreconditionError);
  cfg.iterations = 1;
  cfg.decay = 1;
  EXPECT_THROW(etaq::anneal(cfg), etaq::PreconditionError);
  cfg.decay = 0.5;
  cfg.objective.n0 = 0;
  EXPECT_THROW(etaq::anneal(cfg), etaq::PreconditionError);
}
