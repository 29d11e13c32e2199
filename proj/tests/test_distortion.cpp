#include <sstream>

#include <gtest/gtest.h>

#include "cgap/distortion.hpp"

namespace {

using namespace cgap;

FiniteMetric cycle(int n) {
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = std::min(std::abs(i - j), n - std::abs(i - j));
  return FiniteMetric(d);
}

GroupPtr k4() {
  std::istringstream in("4 3\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n1 2 3\n");
  return table_group(in, 1, "V4");
}

TEST(Distortion, CanonicalUpper) {
  Eigen::MatrixXd two(2, 2);
  two << 0, 1, 1, 0;
  EXPECT_DOUBLE_EQ(canonical_upper(FiniteMetric(two)), 1.0);
  EXPECT_DOUBLE_EQ(canonical_upper(cycle(4)), 2.0);
  EXPECT_THROW(canonical_upper(cycle(4).scaled(0.5)), Error);
}

TEST(Distortion, SdpExamples) {
  Eigen::MatrixXd p3(3, 3);
  p3 << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  EXPECT_NEAR(sdp_exact(FiniteMetric(p3)).distortion, 1.0, 1e-6);
  Eigen::MatrixXd tri = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  EXPECT_NEAR(sdp_exact(FiniteMetric(tri)).distortion, 1.0, 1e-6);
  EXPECT_NEAR(sdp_exact(cycle(4)).distortion, std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(sdp_exact(cycle(6)).distortion, 1.5, 1e-6);
}

TEST(Distortion, SdpCertificate) {
  const auto m = cycle(5);
  const auto r = sdp_exact(m);
  EXPECT_LE(r.lower_bound, r.distortion);
  EXPECT_LE(r.distortion - r.lower_bound, 1e-6);
  // Gram matrix reproduces the claimed distortion.
  const auto& q = r.gram;
  double worst = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      const double qi = i ? q(i - 1, i - 1) : 0, qj = q(j - 1, j - 1), qij = i ? q(i - 1, j - 1) : 0;
      const double e = std::sqrt(std::max(0.0, qi + qj - 2 * qij));
      EXPECT_LE(e, m(i, j) * (1 + 1e-6));
      worst = std::max(worst, m(i, j) / e);
    }
  EXPECT_NEAR(worst, r.distortion, 1e-5);
}

TEST(Distortion, DykstraCrossCheck) {
  const auto m = cycle(4);
  EXPECT_TRUE(projection_feasible(m, std::sqrt(2.0) * 1.01).has_value());
  EXPECT_FALSE(projection_feasible(m, 1.3).has_value());
}

TEST(Distortion, RejectsLargeSdp) { EXPECT_THROW(sdp_exact(cycle(9)), Error); }

TEST(Distortion, PoincareK4) {
  const auto g = k4();
  const CayleyGraph graph(g);
  const auto wm = word_metric(graph);
  const auto stats = spectrum(graph, wm);
  const auto cert = poincare_constant(graph, stats);
  EXPECT_LE(cert.relative_gap, 1e-10);
  const auto rep = distortion_report(graph, wm, stats);
  EXPECT_LE(rep.lower, 1.0 + 1e-12);
  EXPECT_DOUBLE_EQ(rep.upper, 1.0);
  ASSERT_TRUE(rep.sdp.has_value());
  EXPECT_NEAR(*rep.sdp, 1.0, 1e-6);
  EXPECT_TRUE(rep.sandwich_ok());
  EXPECT_EQ(poincare_lower(graph, stats, 0.0), 0.0);
}

TEST(Distortion, SandwichOnSmallGroups) {
  for (std::uint32_t n : {2u, 3u, 4u, 6u, 10u, 30u}) {
    const auto g = dihedral_group(n, 1, 4096);
    const CayleyGraph graph(g);
    const auto wm = word_metric(graph);
    const auto rep = distortion_report(graph, wm, spectrum(graph, wm));
    EXPECT_TRUE(rep.sandwich_ok()) << rep.graph_id;
    EXPECT_EQ(rep.sdp.has_value(), 2 * n <= 8);
  }
}

TEST(Distortion, C4SdpInsideSandwich) {
  const auto g = dihedral_group(2, 1, 4096);
  const CayleyGraph graph(g);
  const auto wm = word_metric(graph);
  const auto rep = distortion_report(graph, wm, spectrum(graph, wm));
  ASSERT_TRUE(rep.sdp.has_value());
  EXPECT_NEAR(*rep.sdp, std::sqrt(2.0), 1e-4);
  EXPECT_LE(rep.lower, *rep.sdp + 1e-6);
  EXPECT_LE(*rep.sdp, rep.upper + 1e-6);
}

}  // namespace
