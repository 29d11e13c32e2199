#include <sstream>

#include <gtest/gtest.h>

#include "cgap/group_core.hpp"

namespace {

using namespace cgap;

GroupPtr xor_group(std::size_t v, const std::string& gens) {
  std::ostringstream os;
  os << v << ' ' << std::count(gens.begin(), gens.end(), ' ') + 1 << '\n';
  for (std::size_t a = 0; a < v; ++a) {
    for (std::size_t b = 0; b < v; ++b) os << (a ^ b) << ' ';
    os << '\n';
  }
  os << gens << '\n';
  std::istringstream in(os.str());
  auto g = table_group(in, 1, "xor");
  validate_group(*g);
  return g;
}

GroupFamilySpec dihedral_spec(std::vector<std::uint32_t> orders) {
  GroupFamilySpec s;
  s.family = "dihedral";
  s.k_lo = 1;
  s.k_hi = static_cast<int>(orders.size());
  s.orders = std::move(orders);
  return s;
}

TEST(GroupCore, SymmetricS3) {
  GroupFamilySpec s;
  s.family = "symmetric";
  s.k_lo = s.k_hi = 1;
  s.n_offset = 2;
  const auto g = build_group(s, 1);
  EXPECT_EQ(g->order(), 6u);
  EXPECT_EQ(g->degree(), 2u);
  for (auto x : g->generators()) EXPECT_EQ(g->mul(x, x), 0u);
  const CayleyGraph graph(g);
  EXPECT_EQ(word_metric(graph).diameter(), 3);
}

TEST(GroupCore, DihedralD10) {
  const auto g = build_group(dihedral_spec({5}), 1);
  EXPECT_EQ(g->order(), 10u);
  EXPECT_EQ(g->degree(), 2u);
  const CayleyGraph graph(g);
  EXPECT_EQ(word_metric(graph).diameter(), 5);
}

TEST(GroupCore, RejectsNonInvolution) {
  std::istringstream in("3 1\n0 1 2\n1 2 0\n2 0 1\n1\n");
  const auto g = table_group(in, 1);
  try {
    validate_group(*g);
    FAIL() << "order-3 generator accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotInvolution);
  }
}

TEST(GroupCore, RejectsNonGenerating) {
  try {
    xor_group(4, "1");
    FAIL() << "subgroup accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotGenerating);
  }
}

TEST(GroupCore, RejectsNonAssociativeTable) {
  std::istringstream in("3 1\n0 1 2\n1 0 1\n2 2 0\n1\n");
  EXPECT_THROW(table_group(in, 1), Error);
}

TEST(GroupCore, SizeCap) {
  auto s = dihedral_spec({100});
  s.size_cap = 50;
  try {
    build_group(s, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSizeCap);
  }
}

TEST(GroupCore, RandomInvolutionsGenerate) {
  GroupFamilySpec s;
  s.family = "symmetric";
  s.k_lo = 1;
  s.k_hi = 3;
  s.degrees = {4, 5, 6};
  s.generators = "random_involutions";
  s.generator_count = 3;
  const auto fam = build_family(s);
  ASSERT_EQ(fam.size(), 3u);
  for (const auto& g : fam) {
    EXPECT_EQ(g->degree(), 3u);
    EXPECT_TRUE(g->distinct_generators());
  }
}

TEST(GroupCore, WordMetricSymmetricAndGeneratorsAtOne) {
  for (std::uint32_t n : {3u, 4u, 7u}) {
    const auto g = dihedral_group(n, 1, 4096);
    const CayleyGraph graph(g);
    const auto wm = word_metric(graph);
    for (auto s : g->generators()) EXPECT_EQ(wm(0, s), 1);
    for (Element x = 0; x < g->order(); ++x)
      for (Element y = 0; y < g->order(); ++y) EXPECT_EQ(wm(x, y), wm(y, x));
  }
}

TEST(GroupCore, IdentityRowMatchesFullMatrix) {
  const auto g = dihedral_group(9, 1, 4096);
  const CayleyGraph graph(g);
  const auto full = word_metric(graph, 6000);
  const auto row = word_metric(graph, 0);
  ASSERT_TRUE(full.has_full_matrix());
  ASSERT_FALSE(row.has_full_matrix());
  for (Element x = 0; x < g->order(); ++x)
    for (Element y = 0; y < g->order(); ++y) EXPECT_EQ(full(x, y), row(x, y));
}

TEST(GroupCore, SpectrumK4) {
  const auto g = xor_group(4, "1 2 3");
  const CayleyGraph graph(g);
  const auto s = spectrum(graph, word_metric(graph));
  EXPECT_NEAR(s.lambda2, -1.0, 1e-10);
  EXPECT_NEAR(s.spectral_gap, 4.0, 1e-10);
}

TEST(GroupCore, SpectrumC4) {
  const auto g = dihedral_group(2, 1, 4096);
  const CayleyGraph graph(g);
  const auto s = spectrum(graph, word_metric(graph));
  EXPECT_NEAR(s.lambda2, 0.0, 1e-10);
}

TEST(GroupCore, LanczosMatchesDense) {
  for (std::uint32_t n : {5u, 12u}) {
    const auto g = dihedral_group(n, 1, 4096);
    const CayleyGraph graph(g);
    const auto wm = word_metric(graph);
    const auto dense = spectrum(graph, wm);
    const auto sparse = spectrum(graph, wm, SpectrumOptions{0});
    EXPECT_NEAR(dense.lambda2, sparse.lambda2, 1e-8);
    EXPECT_NEAR(dense.lambda2, 2 * std::cos(2 * M_PI / (2.0 * n)), 1e-8);
  }
  GroupFamilySpec s;
  s.family = "symmetric";
  s.k_lo = s.k_hi = 1;
  s.degrees = {5};
  s.generators = "random_involutions";
  s.generator_count = 3;
  const auto g = build_group(s, 1);
  const CayleyGraph graph(g);
  const auto wm = word_metric(graph);
  EXPECT_NEAR(spectrum(graph, wm).lambda2, spectrum(graph, wm, SpectrumOptions{0}).lambda2, 1e-8);
}

TEST(GroupCore, FarFraction) {
  const auto g = dihedral_group(4, 1, 4096);
  const CayleyGraph graph(g);
  const auto s = spectrum(graph, word_metric(graph));
  EXPECT_DOUBLE_EQ(s.far_fraction(0.0), 1.0);
  EXPECT_DOUBLE_EQ(s.far_fraction(1.0), 1.0 / 8.0);
  EXPECT_THROW(s.far_fraction(1.5), Error);
}

}  // namespace
