#pragma once

// Invariant suites over G and its embeddings, shared by the CLI and the
// acceptance runner.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "cgap/embed.hpp"
#include "cgap/ggroup.hpp"
#include "cgap/profile.hpp"

namespace cgap {

// ---------------------------------------------------------------------------
// |g|_G = μₖ|g|ₖ on members

struct MemberLengthRow {
  int k = 0;
  Element element = 0;
  int mu = 0;
  int length_k = 0;
  long predicted = 0;
  std::optional<int> exact;  // nullopt: beyond the radius cap
  bool ok() const { return !exact || *exact == predicted; }
};

struct MemberLengthResult {
  std::vector<MemberLengthRow> rows;
  std::vector<int> fully_checked;  // members with μₖ·diam(Mₖ) ≤ radius cap
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  bool pass() const { return violations == 0 && checked > 0; }
};

/// Checks every g ∈ Mₖ whose predicted length μₖ|g|ₖ is within radius_cap.
/// tamper_mu is added to every μₖ in the prediction (fault injection).
inline MemberLengthResult check_member_lengths(const GGroup& G, int radius_cap, std::size_t state_cap = 10'000'000,
                                               int tamper_mu = 0) {
  MemberLengthResult r;
  for (int k = 0; k < G.member_count(); ++k) {
    const int mu = G.mu_of(k) + tamper_mu;
    if (static_cast<long>(G.mu_of(k)) * G.diameter_of(k) <= radius_cap) r.fully_checked.push_back(k);
    const auto& M = *G.member(k);
    for (Element e = 0; e < M.order(); ++e) {
      MemberLengthRow row{k, e, mu, G.length_in_member(k, e), static_cast<long>(mu) * G.length_in_member(k, e), {}};
      const long true_pred = static_cast<long>(G.mu_of(k)) * row.length_k;
      if (true_pred > radius_cap) {
        ++r.skipped;
        continue;
      }
      GElement g = G.identity();
      if (e != 0) g.f.front().push_back({k, e});
      row.exact = bfs_length_oracle(G, g, radius_cap, state_cap);
      ++r.checked;
      if (!row.ok()) ++r.violations;
      r.rows.push_back(row);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// wt/3 ≤ |g|_G ≤ wt over a ball

struct WeightLevelRow {
  int radius = 0;
  std::size_t elements = 0;
  long min_weight = 0, max_weight = 0;
  std::size_t violations = 0;
  std::size_t witness = 0;  // ball index of the element with the largest wt/|g|
  double worst_ratio = 0;   // largest wt/|g| at this radius
};

struct WeightBracketResult {
  std::vector<WeightLevelRow> levels;
  std::size_t elements = 0;
  std::size_t violations = 0;
  double max_ratio = 0;  // max wt/|g|, must be ≤ 3
  double min_ratio = 0;  // min wt/|g|, must be ≥ 1
  std::optional<std::size_t> first_violation;
  bool pass() const { return violations == 0 && elements > 0; }
};

inline WeightBracketResult check_weight_bracket(const GGroup& G, const GBall& ball) {
  WeightBracketResult r;
  r.min_ratio = INFINITY;
  for (int rad = 0; rad <= ball.radius(); ++rad) {
    if (ball.level_size(rad) == 0) break;
    WeightLevelRow row;
    row.radius = rad;
    row.min_weight = std::numeric_limits<long>::max();
    r.levels.push_back(row);
  }
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const int d = ball.distance_at(i);
    const long w = G.weight(ball.element(i));
    auto& lv = r.levels[static_cast<std::size_t>(d)];
    ++lv.elements;
    ++r.elements;
    lv.min_weight = std::min(lv.min_weight, w);
    lv.max_weight = std::max(lv.max_weight, w);
    const bool ok = 3L * d >= w && d <= w;
    if (!ok) {
      ++lv.violations;
      ++r.violations;
      if (!r.first_violation) r.first_violation = i;
    }
    if (d > 0) {
      const double ratio = static_cast<double>(w) / d;
      if (ratio > lv.worst_ratio) {
        lv.worst_ratio = ratio;
        lv.witness = i;
      }
      r.max_ratio = std::max(r.max_ratio, ratio);
      r.min_ratio = std::min(r.min_ratio, ratio);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pairs with exact distances

struct GroupPair {
  GElement g, h;
  int d = 0;  // exact d_G(g, h)
};

/// Seeded pairs (g, g·u) with g and g·u stored in the ball and u in a
/// complete sphere, so d(g, g·u) = |u| is exact. Radii are drawn uniformly
/// before elements, which spreads distances over the whole range.
inline std::vector<GroupPair> sample_group_pairs(const GGroup& G, const GBall& ball, std::size_t count,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> start{0};
  for (int r = 0; r <= ball.radius(); ++r) start.push_back(start.back() + ball.level_size(r));
  const int top = ball.complete_radius();
  if (top < 1) throw Error(ErrorKind::kBudget, "ball too small to sample pairs");
  const auto pick_at = [&](int r) {
    std::uniform_int_distribution<std::size_t> p(start[r], start[r + 1] - 1);
    return p(rng);
  };
  std::vector<GroupPair> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * count + 100000) throw Error(ErrorKind::kBudget, "could not sample pairs inside the ball");
    const int rg = std::uniform_int_distribution<int>(0, top)(rng);
    const int ru = std::uniform_int_distribution<int>(1, top)(rng);
    const std::size_t gi = pick_at(rg), ui = pick_at(ru);
    GroupPair p;
    p.g = ball.element(gi);
    p.h = G.mul(p.g, ball.element(ui));
    if (!ball.length(p.h)) continue;
    p.d = ball.distance_at(ui);
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// d_G ∈ [A/9, A]

struct DistanceBracketRow {
  std::size_t pair = 0;
  int d = 0;
  DistanceBracket bracket;
  bool ok() const { return bracket.lo <= d + 1e-12 && d <= bracket.hi + 1e-12; }
};

struct DistanceBracketResult {
  std::vector<DistanceBracketRow> rows;
  std::size_t violations = 0;
  double worst_ratio = 0;   // max A/d
  double least_ratio = 0;   // min A/d
  std::size_t worst_pair = 0;
  bool pass() const { return violations == 0 && !rows.empty(); }
};

inline DistanceBracketResult check_distance_bracket(const GGroup& G, const std::vector<GroupPair>& pairs) {
  DistanceBracketResult r;
  r.least_ratio = INFINITY;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    DistanceBracketRow row{i, pairs[i].d, G.distance_bracket(pairs[i].g, pairs[i].h)};
    if (!row.ok()) ++r.violations;
    if (row.d > 0) {
      const double ratio = static_cast<double>(row.bracket.A) / row.d;
      if (ratio > r.worst_ratio) {
        r.worst_ratio = ratio;
        r.worst_pair = i;
      }
      r.least_ratio = std::min(r.least_ratio, ratio);
    }
    r.rows.push_back(row);
  }
  return r;
}

// ---------------------------------------------------------------------------
// ψ and π against the word metric

struct EmbedRow {
  std::size_t pair = 0;
  double d_lo = 0, d_hi = 0;  // exact distance when both agree
  double psi = 0, pi = 0;
  double rho_lo = 0;
  double ratio_psi = 0;  // ‖ψ(g)−ψ(h)‖²/ρ(d⁻)
  double ratio_pi = 0;   // ‖π(g)−π(h)‖·ln²(d⁻+1)/ρ(d⁻)
  double pi_over_d = 0;  // ‖π(g)−π(h)‖/d⁺
};

struct EmbedResult {
  std::vector<EmbedRow> rows;
  double pi_lipschitz = 0;      // sup ‖π(g)−π(h)‖/d⁺
  double pi_lower = INFINITY;   // inf ‖π(g)−π(h)‖·ln²(d⁻+1)/ρ(d⁻)
  double psi_lower = INFINITY;  // c′ = inf ‖ψ(g)−ψ(h)‖²/ρ(d⁻)
  std::size_t pi_lipschitz_pair = 0, pi_lower_pair = 0, psi_lower_pair = 0;
  double closed_form_max_rel_error = 0;
  bool pass() const {
    return !rows.empty() && std::isfinite(pi_lipschitz) && pi_lower > 0 && std::isfinite(pi_lower) && psi_lower > 0 &&
           closed_form_max_rel_error <= 1e-9;
  }
};

/// d⁻ = d⁺ = d for pairs with an exact distance; pairs with d ≤ 0 use
/// d⁻ = A/9 and d⁺ = A.
inline EmbedResult check_embeddings(const GGroup& G, const CompressionProfile& rho, const std::vector<GroupPair>& pairs) {
  EmbedResult r;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (p.g == p.h) continue;
    EmbedRow row;
    row.pair = i;
    if (p.d > 0) {
      row.d_lo = row.d_hi = p.d;
    } else {
      const auto b = G.distance_bracket(p.g, p.h);
      row.d_lo = b.lo;
      row.d_hi = b.hi;
    }
    row.psi = embed_distance(G, EmbeddingKind::kPsi, p.g, p.h);
    row.pi = embed_distance(G, EmbeddingKind::kPi, p.g, p.h);
    row.rho_lo = rho.rho(std::max(row.d_lo, 1.0));
    const double l = std::log(row.d_lo + 1.0);
    row.ratio_psi = row.psi * row.psi / row.rho_lo;
    row.ratio_pi = row.pi * l * l / row.rho_lo;
    row.pi_over_d = row.pi / row.d_hi;
    const double closed = psi_distance2_closed_form(G, p.g, p.h);
    const double rel = std::abs(closed - row.psi * row.psi) / std::max(1.0, closed);
    r.closed_form_max_rel_error = std::max(r.closed_form_max_rel_error, rel);
    if (row.pi_over_d > r.pi_lipschitz) {
      r.pi_lipschitz = row.pi_over_d;
      r.pi_lipschitz_pair = i;
    }
    if (row.ratio_pi < r.pi_lower) {
      r.pi_lower = row.ratio_pi;
      r.pi_lower_pair = i;
    }
    if (row.ratio_psi < r.psi_lower) {
      r.psi_lower = row.ratio_psi;
      r.psi_lower_pair = i;
    }
    r.rows.push_back(row);
  }
  return r;
}

struct GeneratorStepResult {
  std::size_t elements = 0;
  double psi_max = 0;  // max ‖ψ(g)−ψ(gs)‖
  double pi_max = 0;   // max ‖π(g)−π(gs)‖
  bool pass() const { return elements > 0 && std::isfinite(psi_max) && std::isfinite(pi_max); }
};

/// ‖e(g)−e(gs)‖ over seeded ball elements g and every s ∈ U ∪ U⁻¹.
inline GeneratorStepResult check_generator_steps(const GGroup& G, const GBall& ball, std::size_t count,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  GeneratorStepResult r;
  const auto moves = G.generator_moves();
  for (std::size_t n = 0; n < count; ++n) {
    const GElement g = ball.element(pick(rng));
    const auto pg = psi(G, g), qg = pi(G, g);
    for (const auto& s : moves) {
      const GElement h = G.mul(g, s);
      r.psi_max = std::max(r.psi_max, distance(pg, psi(G, h)));
      r.pi_max = std::max(r.pi_max, distance(qg, pi(G, h)));
    }
    ++r.elements;
  }
  return r;
}

/// x ↦ √x/ln(x+1) is non-decreasing from e²−1 on; checked on a grid.
inline bool kappa_profile_monotone(double x_end = 1e9, std::size_t points = 4000) {
  const double x0 = std::exp(2.0) - 1.0;
  double prev = -INFINITY;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = x0 * std::pow(x_end / x0, static_cast<double>(i) / static_cast<double>(points - 1));
    const double f = std::sqrt(x) / std::log(x + 1.0);
    if (f < prev * (1 - 1e-12)) return false;
    prev = f;
  }
  return true;
}

/// Seeded positive sequences of length ≤ max_len with last entry ≥ 1.
inline std::vector<std::vector<double>> random_positive_sequences(std::size_t count, std::size_t max_len,
                                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  std::uniform_real_distribution<double> last(0.0, 3.0);
  std::vector<std::vector<double>> out(count);
  for (auto& a : out) {
    a.resize(len(rng));
    for (auto& x : a) x = std::pow(10.0, expo(rng));
    a.back() = std::pow(10.0, last(rng));
  }
  return out;
}

}  // namespace cgap
