#pragma once

// Wedge of rescaled Cayley graphs λₙΠₙ glued at their identities, with the
// scaled-indicator embedding and compression estimates.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cgap/error.hpp"
#include "cgap/group_core.hpp"
#include "cgap/profile.hpp"

namespace cgap {

struct WedgeMember {
  GroupPtr group;
  std::shared_ptr<const CayleyGraph> graph;
  std::shared_ptr<const WordMetricTable> metric;
  double lambda = 0;
  double y = 0;  // ln v
};

/// Vertex of the wedge. Element 0 of every member is the shared wedge point.
struct WedgeVertex {
  std::size_t member = 0;
  Element element = 0;
  bool is_wedge_point() const { return element == 0; }
};

class WedgeSpace {
 public:
  explicit WedgeSpace(std::vector<WedgeMember> members) : members_(std::move(members)) {
    if (members_.empty()) throw Error(ErrorKind::kInvalidArgument, "wedge needs at least one member");
  }

  std::size_t size() const { return members_.size(); }
  const WedgeMember& member(std::size_t n) const { return members_.at(n); }
  const std::vector<WedgeMember>& members() const { return members_; }

  void check(const WedgeVertex& v) const {
    if (v.member >= members_.size() || v.element >= members_[v.member].group->order())
      throw Error(ErrorKind::kInvalidArgument, "invalid wedge vertex (" + std::to_string(v.member) + ", " +
                                                   std::to_string(v.element) + ")");
  }

  /// Distance from the wedge point, λₙ·|v|.
  double radius(const WedgeVertex& v) const {
    return members_[v.member].lambda * members_[v.member].metric->length(v.element);
  }

  /// max over members of diam(λₙΠₙ)/(λₙyₙ) = diam/ln v.
  double diameter_constant() const {
    double d = 0;
    for (const auto& m : members_) d = std::max(d, m.metric->diameter() / m.y);
    return d;
  }

 private:
  std::vector<WedgeMember> members_;
};

/// Builds the wedge over `groups` with λₙ from the scaling sequence of ρ.
inline WedgeSpace build_wedge(const std::vector<GroupPtr>& groups, const CompressionProfile& rho,
                              std::size_t all_pairs_cap = 6000) {
  std::vector<double> v;
  for (const auto& g : groups) v.push_back(static_cast<double>(g->order()));
  const auto seq = scaling_sequence(rho, v);
  std::vector<WedgeMember> members;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    WedgeMember m;
    m.group = groups[i];
    m.graph = std::make_shared<CayleyGraph>(groups[i]);
    m.metric = std::make_shared<WordMetricTable>(word_metric(*m.graph, all_pairs_cap));
    m.lambda = seq.entries[i].lambda;
    m.y = seq.entries[i].y;
    members.push_back(std::move(m));
  }
  return WedgeSpace(std::move(members));
}

inline double wedge_distance(const WedgeSpace& w, const WedgeVertex& a, const WedgeVertex& b) {
  w.check(a);
  w.check(b);
  if (a.is_wedge_point()) return w.radius(b);
  if (b.is_wedge_point()) return w.radius(a);
  if (a.member == b.member) return w.member(a.member).lambda * (*w.member(a.member).metric)(a.element, b.element);
  return w.radius(a) + w.radius(b);
}

/// ‖f(a) − f(b)‖ for f(v) = λₙδᵥ and f(wedge point) = 0.
inline double dirac_distance(const WedgeSpace& w, const WedgeVertex& a, const WedgeVertex& b) {
  w.check(a);
  w.check(b);
  const bool pa = a.is_wedge_point(), pb = b.is_wedge_point();
  if (pa && pb) return 0.0;
  if (pa) return w.member(b.member).lambda;
  if (pb) return w.member(a.member).lambda;
  if (a.member == b.member) return a.element == b.element ? 0.0 : w.member(a.member).lambda * std::sqrt(2.0);
  const double la = w.member(a.member).lambda, lb = w.member(b.member).lambda;
  return std::sqrt(la * la + lb * lb);
}

// ---------------------------------------------------------------------------
// Two-sided inequality check

struct Eq4Report {
  double d_const = 0;
  std::size_t same_pairs = 0;
  std::size_t cross_pairs = 0;
  std::size_t upper_violations = 0;
  std::size_t lower_violations = 0;
  std::size_t subadditivity_violations = 0;
  double worst_upper_slack = INFINITY;  // min of √2·d_τ − ‖·‖
  double worst_lower_slack = INFINITY;  // min of ‖·‖ − ρ(d_τ/d)/√2
  std::string first_violation;
  bool pass() const { return upper_violations == 0 && lower_violations == 0 && subadditivity_violations == 0; }
};

struct Eq4Options {
  std::size_t cross_samples = 10000;
  std::uint64_t seed = 1;
};

namespace detail {

// ρ on [1, ∞) applied to max(x, 1); ρ is increasing so this only raises the lower bound.
inline double rho_clamped(const CompressionProfile& rho, double x) { return rho.rho(std::max(x, 1.0)); }

inline Element farthest_element(const WordMetricTable& metric) {
  const auto& row = metric.from_identity();
  return static_cast<Element>(std::max_element(row.begin(), row.end()) - row.begin());
}

}  // namespace detail

/// Checks (1/√2)ρ(d_τ/d) ≤ ‖f(v) − f(v′)‖ ≤ √2·d_τ on every same-member pair
/// and on sampled cross-member pairs. Members without an all-pairs table are
/// enumerated through the identity row: by left invariance the pairs at
/// distance t number v·h(t)/2, of which h(t) contain the basepoint.
inline Eq4Report verify_eq4(const WedgeSpace& w, const CompressionProfile& rho, double d_const,
                            const Eq4Options& opt = {}) {
  Eq4Report rep;
  rep.d_const = d_const;
  const double s2 = std::sqrt(2.0);
  const auto record = [&](double dtau, double emb, std::size_t multiplicity, const std::string& where) {
    const double upper = s2 * dtau - emb;
    const double lower = emb - detail::rho_clamped(rho, dtau / d_const) / s2;
    rep.worst_upper_slack = std::min(rep.worst_upper_slack, upper);
    rep.worst_lower_slack = std::min(rep.worst_lower_slack, lower);
    const double tol = 1e-12 * std::max(1.0, dtau);
    if (upper < -tol) {
      rep.upper_violations += multiplicity;
      if (rep.first_violation.empty()) rep.first_violation = "upper bound at " + where;
    }
    if (lower < -tol) {
      rep.lower_violations += multiplicity;
      if (rep.first_violation.empty()) rep.first_violation = "lower bound at " + where;
    }
  };

  for (std::size_t n = 0; n < w.size(); ++n) {
    const auto& m = w.member(n);
    const std::size_t v = m.group->order();
    const double lam = m.lambda;
    if (m.metric->has_full_matrix()) {
      for (Element a = 0; a < v; ++a)
        for (Element b = a + 1; b < v; ++b) {
          const double dtau = lam * (*m.metric)(a, b);
          const double emb = (a == 0) ? lam : lam * s2;
          record(dtau, emb, 1, "member " + std::to_string(n + 1) + " pair (" + std::to_string(a) + "," +
                                   std::to_string(b) + ")");
          ++rep.same_pairs;
        }
    } else {
      std::vector<std::size_t> hist(static_cast<std::size_t>(m.metric->diameter()) + 1, 0);
      for (auto d : m.metric->from_identity()) ++hist[d];
      for (std::size_t t = 1; t < hist.size(); ++t) {
        if (!hist[t]) continue;
        const double dtau = lam * static_cast<double>(t);
        const std::size_t with_base = hist[t];
        const std::size_t total = v * hist[t] / 2;
        const std::string where = "member " + std::to_string(n + 1) + " distance " + std::to_string(t);
        record(dtau, lam, with_base, where + " (basepoint)");
        record(dtau, lam * s2, total - with_base, where);
        rep.same_pairs += total;
      }
    }
  }

  if (w.size() >= 2) {
    std::mt19937_64 rng(opt.seed);
    std::vector<std::pair<WedgeVertex, WedgeVertex>> pairs;
    for (std::size_t a = 0; a < w.size(); ++a)
      for (std::size_t b = a + 1; b < w.size(); ++b)
        pairs.push_back({{a, detail::farthest_element(*w.member(a).metric)},
                         {b, detail::farthest_element(*w.member(b).metric)}});
    std::uniform_int_distribution<std::size_t> pick_member(0, w.size() - 1);
    while (pairs.size() < opt.cross_samples) {
      std::size_t a = pick_member(rng), b = pick_member(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      std::uniform_int_distribution<Element> ea(1, static_cast<Element>(w.member(a).group->order() - 1));
      std::uniform_int_distribution<Element> eb(1, static_cast<Element>(w.member(b).group->order() - 1));
      pairs.push_back({{a, ea(rng)}, {b, eb(rng)}});
    }
    for (const auto& [p, q] : pairs) {
      const double dtau = wedge_distance(w, p, q);
      const double emb = dirac_distance(w, p, q);
      std::ostringstream where;
      where << "cross (" << p.member + 1 << ":" << p.element << ", " << q.member + 1 << ":" << q.element << ")";
      record(dtau, emb, 1, where.str());
      const double lhs = detail::rho_clamped(rho, w.radius(p) / d_const) + detail::rho_clamped(rho, w.radius(q) / d_const);
      const double rhs = detail::rho_clamped(rho, dtau / d_const);
      if (lhs < rhs * (1 - 1e-12)) {
        ++rep.subadditivity_violations;
        if (rep.first_violation.empty()) rep.first_violation = "subadditivity at " + where.str();
      }
      ++rep.cross_pairs;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Compression estimate

using PairOracle = std::function<double(const WedgeVertex&, const WedgeVertex&)>;

struct SampleOptions {
  std::size_t pairs_per_member = 200;
  std::size_t cross_pairs = 400;
  std::uint64_t seed = 1;
};

/// Random same-member pairs (equal count per member), random cross pairs, and
/// the extreme pairs: each member's closest and farthest pair and the
/// farthest cross pair of every two members.
inline std::vector<std::pair<WedgeVertex, WedgeVertex>> sample_pairs(const WedgeSpace& w, const SampleOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::vector<std::pair<WedgeVertex, WedgeVertex>> out;
  for (std::size_t n = 0; n < w.size(); ++n) {
    const auto& m = w.member(n);
    out.push_back({{n, 0}, {n, m.group->generator(0)}});
    out.push_back({{n, 0}, {n, detail::farthest_element(*m.metric)}});
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(m.group->order() - 1));
    for (std::size_t i = 0; i < opt.pairs_per_member;) {
      const Element a = pick(rng), b = pick(rng);
      if (a == b) continue;
      out.push_back({{n, a}, {n, b}});
      ++i;
    }
  }
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = a + 1; b < w.size(); ++b)
      out.push_back({{a, detail::farthest_element(*w.member(a).metric)},
                     {b, detail::farthest_element(*w.member(b).metric)}});
  if (w.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick_member(0, w.size() - 1);
    for (std::size_t i = 0; i < opt.cross_pairs;) {
      const std::size_t a = pick_member(rng), b = pick_member(rng);
      if (a == b) continue;
      std::uniform_int_distribution<Element> ea(1, static_cast<Element>(w.member(a).group->order() - 1));
      std::uniform_int_distribution<Element> eb(1, static_cast<Element>(w.member(b).group->order() - 1));
      out.push_back({{a, ea(rng)}, {b, eb(rng)}});
      ++i;
    }
  }
  return out;
}

struct CompressionEstimate {
  double slope = 0;
  double intercept = 0;
  double inf_exponent = INFINITY;  // inf of log‖·‖ / log d_τ over d_τ ≥ cutoff
  double span = 0;                 // max d_τ / min d_τ
  std::size_t pairs = 0;
};

struct EstimateOptions {
  double cutoff = 10.0;
  std::size_t min_pairs = 1000;
  double min_span = 100.0;
};

/// Least-squares slope of log oracle(v,v′) against log d_τ(v,v′).
inline CompressionEstimate estimate_compression(const WedgeSpace& w, const PairOracle& oracle,
                                                const std::vector<std::pair<WedgeVertex, WedgeVertex>>& pairs,
                                                const EstimateOptions& opt = {}) {
  std::vector<double> lx, ly;
  CompressionEstimate est;
  double dmin = INFINITY, dmax = 0;
  for (const auto& [a, b] : pairs) {
    const double d = wedge_distance(w, a, b);
    if (d <= 0) continue;
    const double e = oracle(a, b);
    if (!(e > 0)) throw Error(ErrorKind::kDomain, "embedding distance must be positive for distinct points");
    lx.push_back(std::log(d));
    ly.push_back(std::log(e));
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
    if (d >= opt.cutoff && d > 1) est.inf_exponent = std::min(est.inf_exponent, std::log(e) / std::log(d));
  }
  est.pairs = lx.size();
  est.span = lx.empty() ? 0 : dmax / dmin;
  if (est.pairs < opt.min_pairs || est.span < opt.min_span) {
    std::ostringstream os;
    os << est.pairs << " pairs spanning a factor " << est.span << " of d_tau (need " << opt.min_pairs
       << " pairs and a factor " << opt.min_span << ")";
    throw Error(ErrorKind::kInsufficientRange, os.str());
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  return est;
}

}  // namespace cgap
