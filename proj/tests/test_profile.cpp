#include <random>

#include <gtest/gtest.h>

#include "cgap/profile.hpp"

namespace {

using namespace cgap;

TEST(Profile, Evaluation) {
  EXPECT_DOUBLE_EQ(CompressionProfile::power(0.5).rho(16), 4.0);
  EXPECT_NEAR(CompressionProfile::log().rho(std::exp(1.0)), 1.0, 1e-15);
  EXPECT_NEAR(CompressionProfile::x_over_logbeta(2).rho(10), 10 / std::pow(std::log(11.0), 2), 1e-12);
  EXPECT_THROW(CompressionProfile::power(0.5).rho(0.5), Error);
}

TEST(Profile, TauInverse) {
  EXPECT_NEAR(tau_inverse(CompressionProfile::power(0.5), 5), 25, 1e-8);
  const auto lg = CompressionProfile::log();
  EXPECT_NEAR(tau_inverse(lg, 100 / std::log(100.0)), 100, 1e-6);
}

TEST(Profile, TauInverseRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (const auto& p : {CompressionProfile::power(0.3), CompressionProfile::power(0.7), CompressionProfile::log(),
                        CompressionProfile::x_over_logbeta(2), CompressionProfile::power_over_loggamma(0.5, 1)}) {
    for (int i = 0; i < 100; ++i) {
      const double y = p.tau(p.a_threshold()) + std::pow(10.0, u(rng));
      const double x = tau_inverse(p, y);
      EXPECT_NEAR(p.tau(x), y, 1e-8 * y) << p.describe();
    }
  }
}

TEST(Profile, ScalingSqrt) {
  const std::vector<double> v{12, 64, 1024, 65536};
  const auto s = scaling_sequence(CompressionProfile::power(0.5), v);
  for (const auto& e : s.entries) EXPECT_NEAR(e.lambda, e.y, 1e-6);
}

TEST(Profile, MuFromLambda) {
  for (double lambda : {9.0, 10.7}) {
    const int m = m_from_lambda(lambda, 2);
    EXPECT_EQ(m, 4);
    EXPECT_LE(2 * m + 1, lambda);
    EXPECT_LT(lambda, 2 * m + 3);
  }
  EXPECT_EQ(m_from_lambda(50, 1), 0);
}

TEST(Profile, GreedySelection) {
  std::vector<double> v;
  for (int n = 2; n < 30; ++n) v.push_back(std::pow(2.0, n));
  const auto s = scaling_sequence(CompressionProfile::power(0.5), v);
  const auto sel = s.selected();
  ASSERT_FALSE(sel.empty());
  EXPECT_EQ(sel.front().k, 1);
  for (std::size_t i = 1; i < sel.size(); ++i) {
    EXPECT_GE(sel[i].lambda - sel[i - 1].lambda, 4.0);
    EXPECT_NE(sel[i].m, sel[i - 1].m);
  }
}

TEST(Profile, Membership) {
  EXPECT_TRUE(check_class_membership(CompressionProfile::power(0.7)).pass());
  EXPECT_TRUE(check_class_membership(CompressionProfile::x_over_logbeta(2)).pass());
  const auto lg = check_class_membership(CompressionProfile::log());
  EXPECT_FALSE(lg.pass());
  for (const auto& c : lg.conditions) EXPECT_EQ(c.pass, c.name != "rho_one_positive") << c.name;
  const auto sq = check_class_membership(CompressionProfile::power(2.0));
  EXPECT_FALSE(sq.pass());
  const auto flat = check_class_membership(CompressionProfile::grid({{1, 1}, {1e13, 1}}));
  EXPECT_FALSE(flat.pass());
  bool named = false;
  for (const auto& c : flat.conditions)
    if (!c.pass) named = named || !c.first_violation.empty();
  EXPECT_TRUE(named);
}

TEST(Profile, RatioConstant) {
  const auto p = CompressionProfile::power(0.5);
  std::vector<double> v;
  for (int n = 1; n <= 10; ++n) v.push_back(std::pow(4.0, n));
  const auto s = scaling_sequence(p, v);
  const auto m = check_class_membership(p);
  const auto r = ratio_constant(p, s, m.a_star, m.x_end);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.c, std::log(4.0), 1e-9);
  EXPECT_TRUE(std::isfinite(r.theta));
}

}  // namespace
