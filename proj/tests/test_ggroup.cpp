#include <random>

#include <gtest/gtest.h>

#include "cgap/ggroup.hpp"
#include "cgap/verify.hpp"

namespace {

using namespace cgap;

// M₁ = D₆ with m = 0, M₂ = D₁₀ with m = 4 (μ = 9).
GGroup make_g(int m2 = 4) {
  return GGroup({dihedral_group(3, 1, 4096), dihedral_group(5, 2, 4096)}, {0, m2});
}

Element element_of_length(const GGroup& G, int k, int len, int skip = 0) {
  for (Element e = 0; e < G.member(k)->order(); ++e)
    if (G.length_in_member(k, e) == len && skip-- == 0) return e;
  throw std::logic_error("no element of that length");
}

TEST(GGroup, ConstructorValidation) {
  EXPECT_THROW(GGroup({dihedral_group(3, 1, 4096), dihedral_group(5, 2, 4096)}, {0, 0}), Error);
  EXPECT_THROW(GGroup({dihedral_group(3, 1, 4096)}, {0, 1}), Error);
}

TEST(GGroup, SigmaSpellingsAgree) {
  const auto G = make_g();
  const GElement a = G.canonicalize({MSyl{1, G.sigma_of(0, 1)}});
  const GElement b = G.canonicalize({HSyl{0, HWord::sigma_conj(4)}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(G.weight(a), 9);
  EXPECT_EQ(bfs_length_oracle(G, a, 12), 9);
}

TEST(GGroup, InvolutionCancels) {
  const auto G = make_g();
  const Element s = element_of_length(G, 1, 1);
  EXPECT_TRUE(G.canonicalize({MSyl{1, s}, MSyl{1, s}}).is_identity());
  EXPECT_EQ(G.format(G.canonicalize({MSyl{1, s}, MSyl{1, s}})), "1");
}

TEST(GGroup, SameFactorMerge) {
  const auto G = make_g();
  const Element s = element_of_length(G, 1, 2, 0), s2 = element_of_length(G, 1, 2, 1);
  const HSyl b{0, HWord::t(1)};
  const GElement g = G.canonicalize({b, MSyl{1, s}, MSyl{1, s2}});
  const GElement expect = G.canonicalize({b, MSyl{1, G.member(1)->mul(s, s2)}});
  EXPECT_EQ(g, expect);
  EXPECT_EQ(g.h.size(), 1u);
}

TEST(GGroup, Weights) {
  const auto G = make_g();
  const Element s = element_of_length(G, 1, 2);
  const GElement g = G.canonicalize({MSyl{1, s}});
  EXPECT_EQ(G.weight(g), 18);
  EXPECT_EQ(G.weight(G.canonicalize({HSyl{0, HWord::sigma_conj(3)}})), 7);
  EXPECT_EQ(G.weight(G.identity()), 0);
}

TEST(GGroup, OracleExamples) {
  const auto G = make_g(2);
  EXPECT_EQ(bfs_length_oracle(G, G.parse("t:1"), 12), 1);
  EXPECT_EQ(bfs_length_oracle(G, G.canonicalize({MSyl{1, G.sigma_of(0, 1)}}), 12), 5);
  const Element prod = G.member(1)->mul(G.sigma_of(0, 1), G.sigma_of(1, 1));
  ASSERT_EQ(G.length_in_member(1, prod), 2);
  EXPECT_EQ(bfs_length_oracle(G, G.canonicalize({MSyl{1, prod}}), 12), 10);
  EXPECT_EQ(bfs_length_oracle(G, G.canonicalize({MSyl{1, prod}}), 9), std::nullopt);
}

TEST(GGroup, OracleEighteen) {
  const auto G = make_g();
  const Element prod = G.member(1)->mul(G.sigma_of(0, 1), G.sigma_of(1, 1));
  EXPECT_EQ(bfs_length_oracle(G, G.canonicalize({MSyl{1, prod}}), 18), 18);
}

TEST(GGroup, PrefixDecomposition) {
  const auto G = make_g();
  const GElement g = G.parse("t:1 M:2:3");
  EXPECT_EQ(G.prefix_decompose(g, g).tag, DistanceCase::kEqual);
  EXPECT_TRUE(G.prefix_decompose(g, g).q_gh.empty());

  const Element s = element_of_length(G, 1, 2, 0), s2 = element_of_length(G, 1, 2, 1);
  const GElement w = G.parse("t:1 t:2");
  const GElement a = G.mul(w, G.canonicalize({MSyl{1, s}}));
  const GElement b = G.mul(w, G.canonicalize({MSyl{1, s2}}));
  const auto pd = G.prefix_decompose(a, b);
  EXPECT_EQ(pd.tag, DistanceCase::kS);
  ASSERT_TRUE(pd.f_gh && pd.f_hg);
  EXPECT_EQ(pd.f_gh->element, s);
  EXPECT_EQ(pd.f_hg->element, s2);
  EXPECT_TRUE(pd.q_gh.empty() && pd.q_hg.empty());

  // A leading σ is absorbed into the M-letter, so the divergence has to sit after an H-letter.
  const auto pb = G.prefix_decompose(G.parse("t:1 t:1"), G.parse("t:1 s:2 t:2"));
  EXPECT_EQ(pb.tag, DistanceCase::kB);
  ASSERT_EQ(pb.p.size(), 1u);
  EXPECT_EQ(pb.f_hg->kind, Letter::Kind::kSigma);
}

TEST(GGroup, DistanceBracketExamples) {
  const auto G = make_g();
  const Element s = element_of_length(G, 1, 2);
  const GElement g = G.canonicalize({MSyl{1, s}});
  const auto b = G.distance_bracket(g, G.identity());
  EXPECT_EQ(b.A, 18);
  EXPECT_EQ(G.distance_bracket(g, g).A, 0);
  EXPECT_EQ(G.distance_bracket(g, g).hi, 0.0);
}

TEST(GGroup, ParseFormatRoundTrip) {
  const auto G = make_g(2);
  std::mt19937_64 rng(11);
  for (int n = 0; n < 300; ++n) {
    const GElement g = G.canonicalize(random_syllables(G, rng, 6));
    EXPECT_EQ(G.parse(G.format(g)), g);
    EXPECT_EQ(G.from_key(G.key(g)), g);
  }
  EXPECT_THROW(G.parse("M:3:0"), Error);
  EXPECT_THROW(G.parse("x:1"), Error);
}

TEST(GGroup, GroupLaws) {
  const auto G = make_g(2);
  std::mt19937_64 rng(12);
  for (int n = 0; n < 300; ++n) {
    const GElement a = G.canonicalize(random_syllables(G, rng, 5));
    const GElement b = G.canonicalize(random_syllables(G, rng, 5));
    const GElement c = G.canonicalize(random_syllables(G, rng, 5));
    EXPECT_TRUE(G.mul(a, G.inverse(a)).is_identity());
    EXPECT_EQ(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c)));
  }
}

TEST(GGroup, Confluence) {
  const auto G = make_g(2);
  std::mt19937_64 rng(13);
  for (int n = 0; n < 1000; ++n) {
    const auto raw = random_syllables(G, rng, 8);
    EXPECT_EQ(canonicalize_random_schedule(G, raw, rng), G.canonicalize(raw));
  }
}

TEST(GGroup, CanonicalFormShape) {
  const auto G = make_g(2);
  std::mt19937_64 rng(14);
  for (int n = 0; n < 500; ++n) {
    const GElement g = G.canonicalize(random_syllables(G, rng, 8));
    ASSERT_EQ(g.f.size(), g.h.size() + 1);
    for (std::size_t j = 0; j < g.h.size(); ++j) {
      EXPECT_FALSE(g.h[j].w.is_identity());
      EXPECT_FALSE(G.h_in_edge(g.h[j].w, g.h[j].i, nullptr));
    }
    EXPECT_EQ(G.canonicalize(G.syllables(g)), g);
  }
}

TEST(GGroup, BallAgreesWithOracle) {
  const auto G = make_g(2);
  const GBall ball(G, 6);
  EXPECT_FALSE(ball.truncated());
  EXPECT_EQ(ball.complete_radius(), 6);
  EXPECT_EQ(ball.level_size(0), 1u);
  EXPECT_EQ(ball.level_size(1), 6u);
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  for (int n = 0; n < 200; ++n) {
    const auto i = pick(rng);
    EXPECT_EQ(bfs_length_oracle(G, ball.element(i), 6), ball.distance_at(i));
  }
}

TEST(GGroup, BallTruncation) {
  const auto G = make_g(2);
  const GBall ball(G, 10, 500);
  EXPECT_TRUE(ball.truncated());
  EXPECT_LT(ball.complete_radius(), 10);
  EXPECT_LE(ball.size(), 500u);
}

TEST(GGroup, BracketsOnBall) {
  const auto G = make_g(2);
  const GBall ball(G, 7);
  const auto wb = check_weight_bracket(G, ball);
  EXPECT_TRUE(wb.pass());
  EXPECT_LE(wb.max_ratio, 3.0);
  EXPECT_GE(wb.min_ratio, 1.0);
  const auto pairs = sample_group_pairs(G, ball, 500, 3);
  const auto db = check_distance_bracket(G, pairs);
  EXPECT_TRUE(db.pass());
  EXPECT_LE(db.worst_ratio, 9.0);
  for (const auto& p : pairs) EXPECT_EQ(bfs_length_oracle(G, G.mul(G.inverse(p.g), p.h), 14), p.d);
}

TEST(GGroup, MemberLengths) {
  const auto G = make_g(2);
  const auto r = check_member_lengths(G, 12);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.checked + r.skipped, 16u);
  EXPECT_EQ(r.fully_checked, std::vector<int>{0});
  EXPECT_EQ(r.checked, 11u);
  const auto bad = check_member_lengths(G, 12, 10'000'000, 1);
  EXPECT_GT(bad.violations, 0u);
}

TEST(GGroup, FromFamilySelection) {
  GroupFamilySpec s;
  s.family = "dihedral";
  s.k_lo = 1;
  s.k_hi = 4;
  s.orders = {6, 32, 512, 32768};
  const auto G = GGroup::from_family(build_family(s), CompressionProfile::power(0.5));
  ASSERT_EQ(G.member_count(), 3);
  EXPECT_EQ(G.mu_of(0), 1);
  EXPECT_EQ(G.mu_of(1), 5);
  EXPECT_EQ(G.mu_of(2), 11);
}

}  // namespace
