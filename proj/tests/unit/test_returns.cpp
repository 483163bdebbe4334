#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wealthsim/errors.hpp"
#include "wealthsim/returns.hpp"

using namespace wealthsim;

namespace {

struct Moments {
  double mean = 0, var = 0, min = 1e300;
};

Moments draw(const ReturnSpec& spec, int n) {
  RngStream s(2019, {});
  double sum = 0, sq = 0;
  Moments m;
  for (int i = 0; i < n; ++i) {
    const double r = sample_return(spec, s);
    sum += r;
    sq += r * r;
    m.min = std::min(m.min, r);
  }
  m.mean = sum / n;
  m.var = sq / n - m.mean * m.mean;
  return m;
}

}  // namespace

TEST(Returns, NormalBaselineMoments) {
  const auto m = draw(NormalReturns{0.05, 0.05}, 1'000'000);
  EXPECT_NEAR(m.mean, 0.05, 5e-4);
  EXPECT_NEAR(std::sqrt(m.var), 0.05, 5e-4);
}

TEST(Returns, GammaMomentsMatchShapeScale) {
  const GammaReturns g{0.25, 0.2};
  EXPECT_DOUBLE_EQ(analytic_mean(g), 0.05);
  EXPECT_DOUBLE_EQ(analytic_variance(g), 0.01);
  const auto m = draw(g, 1'000'000);
  EXPECT_NEAR(m.mean, 0.05, 1e-3);
  EXPECT_NEAR(m.var, 0.01, 5e-4);
  EXPECT_GE(m.min, 0.0);
}

TEST(Returns, ConstantIsExact) {
  RngStream s(1, {});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample_return(ConstantReturn{0.05}, s), 0.05);
}

TEST(Returns, ClampedAtMinusOne) {
  const auto m = draw(NormalReturns{0.0, 2.0}, 100000);
  EXPECT_EQ(m.min, -1.0);
}

TEST(Returns, InvalidParameters) {
  EXPECT_THROW(validate(NormalReturns{0.05, 0.0}), ConfigError);
  EXPECT_THROW(validate(NormalReturns{0.05, -1.0}), ConfigError);
  EXPECT_THROW(validate(GammaReturns{0.0, 0.2}), ConfigError);
  EXPECT_THROW(validate(GammaReturns{0.25, -0.2}), ConfigError);
  EXPECT_THROW(validate(ConstantReturn{-1.5}), ConfigError);
  EXPECT_NO_THROW(validate(ConstantReturn{-1.0}));
}

TEST(Returns, StreamSetIndependentOfSpan) {
  // Filling the same set twice continues the stream; two fresh sets agree.
  std::vector<double> a(1000), b(1000);
  StreamSet s1(5, 2, Channel::Returns, 1000), s2(5, 2, Channel::Returns, 1000);
  s1.fill_returns(NormalReturns{}, a);
  s2.fill_returns(NormalReturns{}, b);
  EXPECT_EQ(a, b);
  s1.fill_returns(NormalReturns{}, a);
  EXPECT_NE(a, b);
}

TEST(Returns, AgentDrawDoesNotDependOnPopulationSize) {
  // Agent i only consumes the stream of its own block.
  std::vector<double> small(300), large(1000);
  StreamSet(5, 0, Channel::Returns, 300).fill_returns(NormalReturns{}, small);
  StreamSet(5, 0, Channel::Returns, 1000).fill_returns(NormalReturns{}, large);
  for (std::size_t i = 0; i < small.size(); ++i) ASSERT_EQ(small[i], large[i]) << i;
}

TEST(Returns, SavingChannelLeavesReturnsUntouched) {
  std::vector<double> r1(500), r2(500), s(500);
  StreamSet ret1(3, 0, Channel::Returns, 500);
  ret1.fill_returns(NormalReturns{}, r1);
  StreamSet ret2(3, 0, Channel::Returns, 500);
  StreamSet sav(3, 0, Channel::Savings, 500);
  sav.fill_saving_rates(s);
  ret2.fill_returns(NormalReturns{}, r2);
  EXPECT_EQ(r1, r2);
  for (double x : s) {
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
  EXPECT_NE(r1, s);
}

TEST(Returns, ClampHoldsOverTenMillionDraws) {
  StreamSet streams(2019, 0, Channel::Returns, 10'000);
  std::vector<double> r(10'000);
  double lo = 0.0;
  for (const ReturnSpec& spec : {ReturnSpec(NormalReturns{0.05, 0.05}), ReturnSpec(NormalReturns{0.0, 0.6})}) {
    for (int rep = 0; rep < 500; ++rep) {
      streams.fill_returns(spec, r);
      lo = std::min(lo, *std::min_element(r.begin(), r.end()));
    }
  }
  EXPECT_GE(lo, -1.0);
}

TEST(Returns, SavingRateMoments) {
  RngStream s(17, {0, 0, Channel::Savings});
  const int n = 1'000'000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_saving_rate(s);
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 1.0);
    sum += x;
  }
  EXPECT_NEAR(sum / n, 0.5, 3.0 / std::sqrt(12.0) / 1000.0);
}
