#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "wealthsim/dynamics.hpp"
#include "wealthsim/errors.hpp"
#include "wealthsim/metrics.hpp"

using namespace wealthsim;

namespace {

std::vector<std::vector<double>> normal_draws(std::size_t periods, std::size_t agents,
                                              unsigned seed, double mu = 0.05,
                                              double sigma = 0.05) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(mu, sigma);
  std::vector<std::vector<double>> out(periods, std::vector<double>(agents));
  for (auto& row : out)
    for (double& r : row) r = std::max(dist(gen), -1.0);
  return out;
}

}  // namespace

TEST(Compound, SingleStep) {
  auto s = PopulationState::uniform(2, 10.0);
  std::vector<double> r{0.05, -0.1};
  step_compound(s, r);
  EXPECT_DOUBLE_EQ(s.wealth[0], 10.5);
  EXPECT_DOUBLE_EQ(s.wealth[1], 9.0);
  EXPECT_EQ(s.prev_wealth, std::vector<double>(2, 10.0));
  EXPECT_EQ(s.t, 1u);
}

TEST(Compound, ClosedFormConstantReturn) {
  auto s = PopulationState::uniform(3, 10.0);
  std::vector<double> r(3, 0.05);
  for (int t = 0; t < 100; ++t) step_compound(s, r);
  const double expected = 10.0 * std::pow(1.05, 100);
  for (double w : s.wealth) EXPECT_NEAR(w, expected, 1e-12 * expected);
}

TEST(Compound, ProductOfGrossReturns) {
  const auto draws = normal_draws(200, 5, 1);
  auto s = PopulationState::uniform(5, 10.0);
  for (const auto& r : draws) step_compound(s, r);
  for (std::size_t i = 0; i < 5; ++i) {
    long double p = 10.0L;
    for (const auto& r : draws) p *= 1.0L + r[i];
    EXPECT_NEAR(s.wealth[i], static_cast<double>(p), 1e-12 * static_cast<double>(p));
  }
}

TEST(Compound, TotalLossAbsorbs) {
  auto s = PopulationState::uniform(2, 10.0);
  std::vector<double> wipe{-1.0, 0.0};
  EXPECT_EQ(step_compound(s, wipe), 1u);
  EXPECT_EQ(s.wealth[0], 0.0);
  std::vector<double> up{0.5, 0.5};
  for (int t = 0; t < 10; ++t) EXPECT_EQ(step_compound(s, up), 0u);
  EXPECT_EQ(s.wealth[0], 0.0);
}

TEST(Simple, SumOfReturnsOnInitialStake) {
  auto s = PopulationState::uniform(2, 10.0);
  auto ledger = CumulativeReturnLedger::start(s.wealth);
  std::vector<double> a{0.1, -0.2}, b{0.3, 0.1};
  step_simple(s, ledger, a);
  step_simple(s, ledger, b);
  EXPECT_NEAR(s.wealth[0], 14.0, 1e-12);
  EXPECT_NEAR(s.wealth[1], 9.0, 1e-12);
}

TEST(Simple, ConstantReturnClosedForm) {
  auto s = PopulationState::uniform(50, 10.0);
  auto ledger = CumulativeReturnLedger::start(s.wealth);
  std::vector<double> r(50, 0.05);
  for (int t = 0; t < 100; ++t) step_simple(s, ledger, r);
  for (double w : s.wealth) EXPECT_NEAR(w, 60.0, 1e-10);
  EXPECT_EQ(gini(s.wealth), 0.0);
}

TEST(Simple, FloorAndAbsorption) {
  auto s = PopulationState::uniform(1, 10.0);
  auto ledger = CumulativeReturnLedger::start(s.wealth);
  std::vector<double> down{-0.6};
  step_simple(s, ledger, down);
  EXPECT_EQ(step_simple(s, ledger, down), 1u);
  EXPECT_EQ(s.wealth[0], 0.0);
  std::vector<double> up{1.0};
  for (int t = 0; t < 5; ++t) step_simple(s, ledger, up);
  EXPECT_EQ(s.wealth[0], 0.0);
}

TEST(Simple, TerminalWealthInvariantToDrawOrder) {
  const auto draws = normal_draws(300, 4, 2);
  auto forward = PopulationState::uniform(4, 10.0);
  auto backward = forward;
  auto lf = CumulativeReturnLedger::start(forward.wealth);
  auto lb = lf;
  for (const auto& r : draws) step_simple(forward, lf, r);
  for (auto it = draws.rbegin(); it != draws.rend(); ++it) step_simple(backward, lb, *it);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(forward.wealth[i], backward.wealth[i], 1e-10);
}

TEST(Decreasing, IdentityPoint) {
  std::vector<double> r{0.05};
  apply_decreasing_adjustment(r, std::exp(1.0) - 1.0, DecreasingForm::Gross);
  EXPECT_NEAR(r[0], 0.05, 1e-12);
  r = {0.05};
  apply_decreasing_adjustment(r, std::exp(1.0) - 1.0, DecreasingForm::Net);
  EXPECT_NEAR(r[0], 0.05, 1e-12);
}

TEST(Decreasing, GrossFormDirectEvaluation) {
  std::vector<double> r{0.05};
  apply_decreasing_adjustment(r, std::exp(2.0) - 1.0, DecreasingForm::Gross);
  EXPECT_NEAR(1.0 + r[0], 0.525, 1e-12);
  EXPECT_NEAR(r[0], -0.475, 1e-12);
}

TEST(Decreasing, NetFormScalesReturn) {
  std::vector<double> r{0.05, -0.04};
  apply_decreasing_adjustment(r, std::exp(2.0) - 1.0, DecreasingForm::Net);
  EXPECT_NEAR(r[0], 0.025, 1e-12);
  EXPECT_NEAR(r[1], -0.02, 1e-12);
}

TEST(Decreasing, TotalLossStaysTotal) {
  for (double tw : {0.5, 100.0, 1e8}) {
    std::vector<double> r{-1.0};
    apply_decreasing_adjustment(r, tw, DecreasingForm::Gross);
    EXPECT_EQ(r[0], -1.0);
  }
  // The net form shrinks losses too, so a total loss becomes partial.
  std::vector<double> r{-1.0};
  apply_decreasing_adjustment(r, 100.0, DecreasingForm::Net);
  EXPECT_NEAR(r[0], -1.0 / std::log(101.0), 1e-15);
}

TEST(Decreasing, ClampedAtMinusOne) {
  std::vector<double> r{-3.0};
  // ln(1 + TW) < 1 amplifies, so the net form can push below -1.
  apply_decreasing_adjustment(r, 0.5, DecreasingForm::Net);
  EXPECT_EQ(r[0], -1.0);
}

TEST(Decreasing, DegenerateTotalWealth) {
  std::vector<double> r{0.05, 0.2};
  EXPECT_TRUE(apply_decreasing_adjustment(r, 0.0));
  EXPECT_EQ(r, std::vector<double>(2, -1.0));
  EXPECT_FALSE(apply_decreasing_adjustment(r, 1.0));
}

TEST(Decreasing, TotalWealthPermutationInvariant) {
  auto draws = normal_draws(60, 8, 3);
  auto run = [&](const std::vector<std::vector<double>>& d) {
    auto s = PopulationState::uniform(8, 10.0);
    std::vector<double> tw;
    for (std::size_t t = 0; t < d.size(); ++t) {
      auto r = d[t];
      if (t > 0) apply_decreasing_adjustment(r, s.total_wealth(), DecreasingForm::Gross);
      step_compound(s, r);
      tw.push_back(s.total_wealth());
    }
    return tw;
  };
  const auto base = run(draws);
  auto permuted = draws;
  std::reverse(permuted[0].begin(), permuted[0].end());
  const auto other = run(permuted);
  // Only the first-period draws are permuted, so later periods differ per agent
  // but the first-period total is the same multiset sum.
  EXPECT_NEAR(base[0], other[0], 1e-12 * base[0]);
  // Permuting every period's draws by the same agent relabelling leaves every total unchanged.
  auto relabel = draws;
  for (auto& row : relabel) std::rotate(row.begin(), row.begin() + 3, row.end());
  const auto rel = run(relabel);
  for (std::size_t t = 0; t < base.size(); ++t) EXPECT_NEAR(base[t], rel[t], 1e-9 * base[t]);
}

TEST(Decreasing, GrossFormLeavesSharesUnchanged) {
  // A common divisor rescales every agent alike, so the Gini path equals the
  // unadjusted compound path under the same draws.
  const auto draws = normal_draws(300, 200, 4);
  auto plain = PopulationState::uniform(200, 10.0);
  auto adjusted = plain;
  for (std::size_t t = 0; t < draws.size(); ++t) {
    step_compound(plain, draws[t]);
    auto r = draws[t];
    if (t > 0) apply_decreasing_adjustment(r, adjusted.total_wealth(), DecreasingForm::Gross);
    step_compound(adjusted, r);
    ASSERT_NEAR(gini(plain.wealth), gini(adjusted.wealth), 1e-9) << t;
  }
}

TEST(TwoFactor, NoReinvestComponents) {
  auto s = PopulationState::uniform(1, 10.0, true);
  std::vector<double> r{0.05}, sv{0.5};
  step_two_factor(s, r, sv, false);
  EXPECT_DOUBLE_EQ(s.wealth[0], 11.0);
  EXPECT_DOUBLE_EQ(s.inherited[0], 10.5);
  EXPECT_DOUBLE_EQ(s.savings[0], 0.5);
  step_two_factor(s, r, sv, false);
  // Savings earn nothing without reinvestment.
  EXPECT_DOUBLE_EQ(s.savings[0], 1.0);
  EXPECT_DOUBLE_EQ(s.inherited[0], 10.5 * 1.05);
}

TEST(TwoFactor, ReinvestCompoundsEverything) {
  auto s = PopulationState::uniform(1, 10.0, true);
  std::vector<double> r{0.05}, sv{0.5};
  step_two_factor(s, r, sv, true);
  EXPECT_DOUBLE_EQ(s.wealth[0], 11.0);
  step_two_factor(s, r, sv, true);
  EXPECT_DOUBLE_EQ(s.wealth[0], 11.0 * 1.05 + 0.5);
}

TEST(TwoFactor, ReinvestMatchesClosedForm) {
  const std::size_t n = 10, periods = 50;
  const auto draws = normal_draws(periods, n, 5);
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> saving(periods, std::vector<double>(n));
  for (auto& row : saving)
    for (double& x : row) x = u(gen);

  auto s = PopulationState::uniform(n, 10.0, true);
  for (std::size_t t = 0; t < periods; ++t) step_two_factor(s, draws[t], saving[t], true);

  for (std::size_t i = 0; i < n; ++i) {
    // W_T = W_1 prod(1 + r_t) + sum_t s_t Y0 prod_{k > t}(1 + r_k)
    long double inherited = 10.0L;
    for (std::size_t t = 0; t < periods; ++t) inherited *= 1.0L + draws[t][i];
    long double saved = 0.0L;
    for (std::size_t t = 0; t < periods; ++t) {
      long double g = 1.0L;
      for (std::size_t k = t + 1; k < periods; ++k) g *= 1.0L + draws[k][i];
      saved += saving[t][i] * g;
    }
    const double expected = static_cast<double>(inherited + saved);
    EXPECT_NEAR(s.wealth[i], expected, 1e-9 * expected);
  }
}

TEST(TwoFactor, ZeroSavingMatchesCompound) {
  const auto draws = normal_draws(200, 20, 7);
  std::vector<double> zero(20, 0.0);
  for (bool reinvest : {false, true}) {
    auto tf = PopulationState::uniform(20, 10.0, true);
    auto c = PopulationState::uniform(20, 10.0);
    for (const auto& r : draws) {
      step_two_factor(tf, r, zero, reinvest);
      step_compound(c, r);
    }
    for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(tf.wealth[i], c.wealth[i], 1e-12 * c.wealth[i]);
  }
}

TEST(TwoFactor, SavingRateOutOfRange) {
  auto s = PopulationState::uniform(1, 10.0, true);
  std::vector<double> r{0.05};
  std::vector<double> bad{1.5};
  EXPECT_THROW(step_two_factor(s, r, bad, false), ConfigError);
  bad = {-0.1};
  EXPECT_THROW(step_two_factor(s, r, bad, true), ConfigError);
}

TEST(TwoFactor, FairCondition) {
  EXPECT_DOUBLE_EQ(fair_initial_wealth(0.5, 0.05, 1.0), 10.0);
  EXPECT_THROW(fair_initial_wealth(0.5, 0.0, 1.0), ConfigError);
}

TEST(Process, NamesRoundTrip) {
  for (auto k : {ProcessKind::Compound, ProcessKind::Simple, ProcessKind::DecreasingCompound,
                 ProcessKind::TwoFactorNoReinvest, ProcessKind::TwoFactorReinvest}) {
    EXPECT_EQ(parse_process_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_process_kind("geometric"), ConfigError);
}
