#pragma once

// Euclidean distortion of finite graphs: canonical upper bound, spectral
// Poincaré lower bound, and an alternating-projection SDP oracle.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cgap/error.hpp"
#include "cgap/group_core.hpp"

namespace cgap {

/// Symmetric distance matrix with zero diagonal.
class FiniteMetric {
 public:
  explicit FiniteMetric(Eigen::MatrixXd d, double tol = 1e-12) : d_(std::move(d)) {
    const Eigen::Index n = d_.rows();
    if (n == 0 || d_.cols() != n) throw Error(ErrorKind::kInvalidArgument, "distance matrix must be square and non-empty");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d_(i, i) != 0) throw Error(ErrorKind::kInvalidArgument, "non-zero diagonal entry");
      for (Eigen::Index j = 0; j < n; ++j) {
        if (d_(i, j) != d_(j, i)) throw Error(ErrorKind::kInvalidArgument, "asymmetric distance matrix");
        if (i != j && !(d_(i, j) > 0)) throw Error(ErrorKind::kInvalidArgument, "distinct points at distance 0");
        for (Eigen::Index k = 0; k < n; ++k)
          if (d_(i, k) > d_(i, j) + d_(j, k) + tol * std::max(1.0, d_(i, k)))
            throw Error(ErrorKind::kInvalidArgument, "triangle inequality fails at (" + std::to_string(i) + "," +
                                                         std::to_string(j) + "," + std::to_string(k) + ")");
      }
    }
  }

  static FiniteMetric from_word_metric(const WordMetricTable& wm) {
    const auto n = static_cast<Eigen::Index>(wm.size());
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) d(i, j) = wm(static_cast<Element>(i), static_cast<Element>(j));
    return FiniteMetric(std::move(d));
  }

  Eigen::Index size() const { return d_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const { return d_; }

  double min_positive() const {
    double m = INFINITY;
    for (Eigen::Index i = 0; i < size(); ++i)
      for (Eigen::Index j = i + 1; j < size(); ++j) m = std::min(m, d_(i, j));
    return m;
  }
  double max_distance() const { return d_.maxCoeff(); }
  FiniteMetric scaled(double s) const { return FiniteMetric(d_ * s); }

 private:
  Eigen::MatrixXd d_;
};

/// Distortion of v ↦ (1/√2)δᵥ, which sends distinct points to distance 1.
inline double canonical_upper(const FiniteMetric& metric) {
  if (metric.size() < 2) return 1.0;
  const double mn = metric.min_positive();
  if (mn < 1.0 - 1e-12)
    throw Error(ErrorKind::kDomain, "minimum distance " + std::to_string(mn) + " < 1");
  return metric.max_distance();
}

// ---------------------------------------------------------------------------
// Poincaré lower bound

struct PoincareCertificate {
  double C = 0;            // (1/v²)Σ‖φx−φy‖² / ((1/v)Σ_{x∼y}‖φx−φy‖²) on the λ₂ eigenvector
  double C_spectral = 0;   // 1/(m − λ₂)
  double relative_gap = 0;
};

/// Evaluates both quadratic forms of the Poincaré inequality on the λ₂
/// eigenvector; neighbor sums run over ordered pairs with multiplicity.
inline PoincareCertificate poincare_constant(const CayleyGraph& g, const ExpanderStats& stats) {
  const double m = static_cast<double>(g.degree());
  const double gap = m - stats.lambda2;
  if (!(gap > 1e-12)) throw Error(ErrorKind::kNotExpander, "spectral gap " + std::to_string(gap) + " is not positive");
  const auto& phi = stats.eigenvector;
  const double v = static_cast<double>(g.vertex_count());
  const double sum = phi.sum(), sq = phi.squaredNorm();
  const double all_pairs = (2.0 * v * sq - 2.0 * sum * sum) / (v * v);
  double edges = 0;
  for (Element x = 0; x < g.vertex_count(); ++x)
    for (Element y : g.neighbors(x)) {
      const double t = phi[x] - phi[y];
      edges += t * t;
    }
  edges /= v;
  PoincareCertificate c;
  c.C = all_pairs / edges;
  c.C_spectral = 1.0 / gap;
  c.relative_gap = std::abs(c.C - c.C_spectral) / c.C_spectral;
  return c;
}

/// √(κ²·far_fraction(κ)·diam² / (C·m)).
inline double poincare_lower(const CayleyGraph& g, const ExpanderStats& stats, double kappa) {
  const auto cert = poincare_constant(g, stats);
  const double ff = stats.far_fraction(kappa);
  const double d = stats.diameter;
  return std::sqrt(kappa * kappa * ff * d * d / (cert.C * static_cast<double>(g.degree())));
}

/// κ* maximizing κ²·far_fraction(κ); far_fraction is a step function, so the
/// grid κ = t/diam is exhaustive.
inline double best_kappa(const ExpanderStats& stats) {
  double best = 0, arg = 0;
  for (int t = 1; t <= stats.diameter; ++t) {
    const double k = static_cast<double>(t) / stats.diameter;
    const double val = k * k * stats.far_fraction(k);
    if (val > best) {
      best = val;
      arg = k;
    }
  }
  return arg;
}

// ---------------------------------------------------------------------------
// SDP oracle

struct SdpOptions {
  double tolerance = 1e-6;        // on D
  double feasibility = 1e-9;      // max slab violation of the PSD iterate
  int max_sweeps = 200000;
  int stagnation_window = 2000;
};

struct SdpResult {
  double distortion = 1;
  double lower_bound = 1;  // certified: optimum ≥ lower_bound
  Eigen::MatrixXd gram;    // Gram matrix of xᵢ − x₀, i = 1..n−1, attaining `distortion`
};

namespace detail {

struct Slab {
  int i, j;  // 0 means the base point x₀
  double lo, hi;
};

inline double slab_value(const Eigen::MatrixXd& q, const Slab& s) {
  if (s.i == 0) return q(s.j - 1, s.j - 1);
  return q(s.i - 1, s.i - 1) + q(s.j - 1, s.j - 1) - 2 * q(s.i - 1, s.j - 1);
}

inline void slab_add(Eigen::MatrixXd& q, const Slab& s, double t) {
  if (s.i == 0) {
    q(s.j - 1, s.j - 1) += t;
    return;
  }
  q(s.i - 1, s.i - 1) += t;
  q(s.j - 1, s.j - 1) += t;
  q(s.i - 1, s.j - 1) -= t;
  q(s.j - 1, s.i - 1) -= t;
}

inline Eigen::MatrixXd project_psd(const Eigen::MatrixXd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q + q.transpose()));
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// Cyclic Dykstra over the PSD cone and one slab per pair.
inline std::optional<Eigen::MatrixXd> sdp_feasible(const Eigen::MatrixXd& d, double D, const SdpOptions& opt) {
  const int n = static_cast<int>(d.rows());
  std::vector<Slab> slabs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slabs.push_back({i, j, d(i, j) * d(i, j) / (D * D), d(i, j) * d(i, j)});
  const int k = n - 1;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd p_psd = Eigen::MatrixXd::Zero(k, k);
  std::vector<double> p_slab(slabs.size(), 0.0);
  double best = INFINITY;
  int since_best = 0;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const Eigen::MatrixXd y = project_psd(x + p_psd);
    p_psd = x + p_psd - y;
    x = y;
    double viol = 0;
    for (const auto& s : slabs) {
      const double e = slab_value(x, s);
      viol = std::max({viol, s.lo - e, e - s.hi});
    }
    if (viol < opt.feasibility) return x;
    if (viol < best * (1 - 1e-6)) {
      best = viol;
      since_best = 0;
    } else if (++since_best > opt.stagnation_window) {
      return std::nullopt;
    }
    for (std::size_t t = 0; t < slabs.size(); ++t) {
      const auto& s = slabs[t];
      const double w2 = s.i == 0 ? 1.0 : 4.0;
      // Increments stay multiples of the slab normal W; p_slab holds the coefficient.
      slab_add(x, s, p_slab[t]);
      const double e = slab_value(x, s);
      const double step = (std::clamp(e, s.lo, s.hi) - e) / w2;
      slab_add(x, s, step);
      p_slab[t] = -step;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Dykstra alternating projections between the PSD cone and the pair slabs
/// d(i,j)²/D² ≤ ‖xᵢ − xⱼ‖² ≤ d(i,j)²; returns a Gram matrix whose slab
/// violation is below opt.feasibility, or nothing on stagnation.
inline std::optional<Eigen::MatrixXd> projection_feasible(const FiniteMetric& metric, double D,
                                                          const SdpOptions& opt = {}) {
  if (metric.size() < 2) return Eigen::MatrixXd::Zero(0, 0);
  const double scale = metric.max_distance();
  auto q = detail::sdp_feasible(metric.matrix() / scale, D, opt);
  if (q) *q *= scale * scale;
  return q;
}

namespace detail {

// Log-barrier path following for: maximize s subject to Q ⪰ 0 and
// s·d² ≤ E_ij(Q) ≤ d² for every pair. Variables are the upper triangle of Q
// followed by s.
struct BarrierSolution {
  Eigen::MatrixXd q;
  double s = 0;
  double gap_bound = 0;  // s* − s ≤ gap_bound
};

inline BarrierSolution barrier_sdp(const Eigen::MatrixXd& d) {
  const int n = static_cast<int>(d.rows());
  const int k = n - 1;
  std::vector<std::pair<int, int>> basis;  // (a,b), a ≤ b
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) basis.push_back({a, b});
  const int nq = static_cast<int>(basis.size());
  const int nv = nq + 1;
  std::vector<Slab> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j, 0, d(i, j) * d(i, j)});
  // Row r of `w` gives ⟨W_r, B_p⟩ so that E_r = w.row(r)·z.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pairs.size()), nq);
  for (std::size_t r = 0; r < pairs.size(); ++r)
    for (int p = 0; p < nq; ++p) {
      Eigen::MatrixXd bp = Eigen::MatrixXd::Zero(k, k);
      bp(basis[p].first, basis[p].second) += 1;
      if (basis[p].first != basis[p].second) bp(basis[p].second, basis[p].first) += 1;
      w(static_cast<Eigen::Index>(r), p) = slab_value(bp, pairs[r]);
    }
  const auto to_matrix = [&](const Eigen::VectorXd& z) {
    Eigen::MatrixXd q(k, k);
    for (int p = 0; p < nq; ++p) q(basis[p].first, basis[p].second) = q(basis[p].second, basis[p].first) = z[p];
    return q;
  };
  const auto dd = [&](std::size_t r) { return pairs[r].hi; };

  // Strictly feasible start: xᵢ = r·eᵢ with r² = min d²/4.
  double min_d2 = INFINITY;
  for (std::size_t r = 0; r < pairs.size(); ++r) min_d2 = std::min(min_d2, dd(r));
  Eigen::VectorXd z = Eigen::VectorXd::Zero(nv);
  for (int p = 0; p < nq; ++p)
    if (basis[p].first == basis[p].second) z[p] = min_d2 / 4;
  {
    double smin = INFINITY;
    const Eigen::VectorXd e = w * z.head(nq);
    for (std::size_t r = 0; r < pairs.size(); ++r) smin = std::min(smin, e[static_cast<Eigen::Index>(r)] / dd(r));
    z[nq] = smin / 2;
  }

  const double nu = k + 2.0 * static_cast<double>(pairs.size());
  // Returns +∞ outside the domain.
  const auto barrier = [&](const Eigen::VectorXd& x, double t) {
    const Eigen::MatrixXd q = to_matrix(x.head(nq));
    Eigen::LLT<Eigen::MatrixXd> llt(q);
    constexpr double kOut = std::numeric_limits<double>::infinity();
    if (llt.info() != Eigen::Success) return kOut;
    double logdet = 0;
    for (int a = 0; a < k; ++a) {
      const double l = llt.matrixL()(a, a);
      if (!(l > 0)) return kOut;
      logdet += 2 * std::log(l);
    }
    const Eigen::VectorXd e = w * x.head(nq);
    double f = -t * x[nq] - logdet;
    for (std::size_t r = 0; r < pairs.size(); ++r) {
      const auto ri = static_cast<Eigen::Index>(r);
      const double lo = e[ri] - x[nq] * dd(r), hi = dd(r) - e[ri];
      if (!(lo > 0) || !(hi > 0)) return kOut;
      f -= std::log(lo) + std::log(hi);
    }
    return f;
  };

  double t = 1.0;
  for (int outer = 0; outer < 200; ++outer) {
    for (int it = 0; it < 200; ++it) {
      const Eigen::MatrixXd q = to_matrix(z.head(nq));
      const Eigen::MatrixXd qi = q.inverse();
      Eigen::VectorXd g = Eigen::VectorXd::Zero(nv);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nv, nv);
      g[nq] = -t;
      std::vector<Eigen::MatrixXd> qb(nq);
      for (int p = 0; p < nq; ++p) {
        Eigen::MatrixXd bp = Eigen::MatrixXd::Zero(k, k);
        bp(basis[p].first, basis[p].second) += 1;
        if (basis[p].first != basis[p].second) bp(basis[p].second, basis[p].first) += 1;
        qb[p] = qi * bp;
        g[p] -= qb[p].trace();
      }
      for (int p = 0; p < nq; ++p)
        for (int r = p; r < nq; ++r) h(p, r) = h(r, p) = (qb[p] * qb[r]).trace();
      const Eigen::VectorXd e = w * z.head(nq);
      for (std::size_t r = 0; r < pairs.size(); ++r) {
        const auto ri = static_cast<Eigen::Index>(r);
        Eigen::VectorXd glo = Eigen::VectorXd::Zero(nv), ghi = Eigen::VectorXd::Zero(nv);
        glo.head(nq) = w.row(ri).transpose();
        glo[nq] = -dd(r);
        ghi.head(nq) = -w.row(ri).transpose();
        const double lo = e[ri] - z[nq] * dd(r), hi = dd(r) - e[ri];
        g -= glo / lo + ghi / hi;
        h += glo * glo.transpose() / (lo * lo) + ghi * ghi.transpose() / (hi * hi);
      }
      const Eigen::VectorXd step = -h.ldlt().solve(g);
      const double decrement = -g.dot(step);
      if (decrement / 2 <= 1e-12) break;
      double alpha = 1.0;
      const double f0 = barrier(z, t);
      while (alpha > 1e-16 && barrier(z + alpha * step, t) > f0 - 0.25 * alpha * decrement) alpha *= 0.5;
      if (alpha <= 1e-16) break;
      z += alpha * step;
    }
    if (nu / t < 1e-13) break;
    t *= 8;
  }
  return {to_matrix(z.head(nq)), z[nq], nu / t};
}

}  // namespace detail

/// Least D admitting an embedding with d(i,j)/D ≤ ‖xᵢ − xⱼ‖ ≤ d(i,j), from the
/// linear SDP in s = 1/D². The returned Gram certificate attains the returned
/// D, and the barrier duality gap bounds the distance to the optimum.
inline SdpResult sdp_exact(const FiniteMetric& metric, const SdpOptions& opt = {}) {
  const auto n = metric.size();
  if (n > 8) throw Error(ErrorKind::kInvalidArgument, "SDP oracle limited to 8 points");
  SdpResult res;
  if (n <= 1) {
    res.gram = Eigen::MatrixXd::Zero(0, 0);
    return res;
  }
  const double scale = metric.max_distance();
  const Eigen::MatrixXd d = metric.matrix() / scale;
  const auto sol = detail::barrier_sdp(d);
  if (!(sol.s > 0)) throw Error(ErrorKind::kNoConvergence, "barrier iterate left the domain");
  res.distortion = std::max(1.0, 1.0 / std::sqrt(sol.s));
  res.lower_bound = std::max(1.0, 1.0 / std::sqrt(sol.s + sol.gap_bound));
  if (res.distortion - res.lower_bound > opt.tolerance)
    throw Error(ErrorKind::kNoConvergence, "duality gap " + std::to_string(res.distortion - res.lower_bound) +
                                               " exceeds tolerance");
  res.gram = sol.q * scale * scale;
  return res;
}

// ---------------------------------------------------------------------------
// Sandwich report

struct DistortionReport {
  std::string graph_id;
  std::size_t n = 0;
  std::size_t m = 0;
  int diameter = 0;
  double lambda2 = 0;
  double poincare_C = 0;
  double poincare_certificate_gap = 0;
  double kappa = 0;
  double far_fraction = 0;
  double lower = 0;
  double upper = 0;
  std::optional<double> sdp;
  bool sandwich_ok() const {
    const double eps = 1e-6;
    if (lower > upper + eps) return false;
    if (sdp && (lower > *sdp + eps || *sdp > upper + eps)) return false;
    return true;
  }
};

inline DistortionReport distortion_report(const CayleyGraph& g, const WordMetricTable& wm, const ExpanderStats& stats,
                                          std::size_t sdp_cap = 8, const SdpOptions& sdp_opt = {}) {
  DistortionReport r;
  r.graph_id = g.group()->label();
  r.n = g.vertex_count();
  r.m = g.degree();
  r.diameter = wm.diameter();
  r.lambda2 = stats.lambda2;
  const auto cert = poincare_constant(g, stats);
  r.poincare_C = cert.C;
  r.poincare_certificate_gap = cert.relative_gap;
  r.kappa = best_kappa(stats);
  r.far_fraction = stats.far_fraction(r.kappa);
  r.lower = poincare_lower(g, stats, r.kappa);
  r.upper = static_cast<double>(wm.diameter());  // canonical bound for a graph metric with unit edges
  if (r.n <= sdp_cap && r.n >= 2) r.sdp = sdp_exact(FiniteMetric::from_word_metric(wm), sdp_opt).distortion;
  return r;
}

}  // namespace cgap
