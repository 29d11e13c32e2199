#pragma once

// Compression profiles ρ, the auxiliary τ(x) = x/ρ(x), its inverse, and the
// scaling sequences λₖ, mₖ, μₖ derived from a list of group orders.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cgap/error.hpp"

namespace cgap {

enum class ProfileKind { kPower, kLog, kLogLog, kXOverLogBeta, kPowerOverLogGamma, kGrid };

inline const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kPower: return "power";
    case ProfileKind::kLog: return "log";
    case ProfileKind::kLogLog: return "loglog";
    case ProfileKind::kXOverLogBeta: return "x_over_logbeta";
    case ProfileKind::kPowerOverLogGamma: return "power_over_loggamma";
    case ProfileKind::kGrid: return "grid";
  }
  return "?";
}

inline ProfileKind profile_kind_from_string(const std::string& s) {
  for (auto k : {ProfileKind::kPower, ProfileKind::kLog, ProfileKind::kLogLog, ProfileKind::kXOverLogBeta,
                 ProfileKind::kPowerOverLogGamma, ProfileKind::kGrid})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::kParse, "unknown profile kind \"" + s + "\"");
}

class CompressionProfile {
 public:
  static CompressionProfile power(double alpha) {
    CompressionProfile p(ProfileKind::kPower);
    p.alpha_ = alpha;
    p.a_threshold_ = 1.0;
    return p;
  }
  static CompressionProfile log() {
    CompressionProfile p(ProfileKind::kLog);
    p.a_threshold_ = std::exp(1.0);
    return p;
  }
  static CompressionProfile loglog() {
    CompressionProfile p(ProfileKind::kLogLog);
    p.a_threshold_ = std::exp(std::exp(1.0));
    return p;
  }
  static CompressionProfile x_over_logbeta(double beta) {
    CompressionProfile p(ProfileKind::kXOverLogBeta);
    p.beta_ = beta;
    p.a_threshold_ = 1.0;
    return p;
  }
  static CompressionProfile power_over_loggamma(double alpha, double gamma) {
    CompressionProfile p(ProfileKind::kPowerOverLogGamma);
    p.alpha_ = alpha;
    p.gamma_ = gamma;
    p.a_threshold_ = 1.0;
    return p;
  }
  /// Piecewise-linear through (x, ρ(x)) points; log-log linear outside the grid.
  static CompressionProfile grid(std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) throw Error(ErrorKind::kInvalidArgument, "grid profile needs at least two points");
    std::sort(points.begin(), points.end());
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].first <= 0 || points[i].second <= 0)
        throw Error(ErrorKind::kInvalidArgument, "grid points must be positive");
      if (i && points[i].first == points[i - 1].first)
        throw Error(ErrorKind::kInvalidArgument, "duplicate grid abscissa");
      if (i && points[i].second < points[i - 1].second)
        throw Error(ErrorKind::kInvalidArgument, "grid values must be non-decreasing");
    }
    CompressionProfile p(ProfileKind::kGrid);
    p.a_threshold_ = std::max(1.0, points.front().first);
    p.grid_ = std::move(points);
    return p;
  }

  ProfileKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  const std::vector<std::pair<double, double>>& grid_points() const { return grid_; }
  double a_threshold() const { return a_threshold_; }
  double tolerance() const { return tolerance_; }
  CompressionProfile& set_a_threshold(double a) {
    if (!(a >= 1.0)) throw Error(ErrorKind::kDomain, "a_threshold must be >= 1");
    a_threshold_ = a;
    return *this;
  }
  CompressionProfile& set_tolerance(double t) {
    if (!(t > 0)) throw Error(ErrorKind::kDomain, "tolerance must be positive");
    tolerance_ = t;
    return *this;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_);
    switch (kind_) {
      case ProfileKind::kPower: os << "(alpha=" << alpha_ << ")"; break;
      case ProfileKind::kXOverLogBeta: os << "(beta=" << beta_ << ")"; break;
      case ProfileKind::kPowerOverLogGamma: os << "(alpha=" << alpha_ << ",gamma=" << gamma_ << ")"; break;
      case ProfileKind::kGrid: os << "(" << grid_.size() << " points)"; break;
      default: break;
    }
    return os.str();
  }

  double rho(double x) const {
    if (!(x >= 1.0)) throw Error(ErrorKind::kDomain, "rho evaluated at x = " + std::to_string(x) + " < 1");
    switch (kind_) {
      case ProfileKind::kPower: return std::pow(x, alpha_);
      case ProfileKind::kLog: return std::log(x);
      case ProfileKind::kLogLog: return std::log(std::log(x));
      case ProfileKind::kXOverLogBeta: return x / std::pow(std::log(x + 1.0), beta_);
      case ProfileKind::kPowerOverLogGamma: return std::pow(x, alpha_) / std::pow(std::log(x + 1.0), gamma_);
      case ProfileKind::kGrid: return grid_eval(x);
    }
    return 0;
  }

  double tau(double x) const { return x / rho(x); }

 private:
  explicit CompressionProfile(ProfileKind kind) : kind_(kind) {}

  double grid_eval(double x) const {
    const auto loglog_line = [](std::pair<double, double> p, std::pair<double, double> q, double t) {
      const double slope = (std::log(q.second) - std::log(p.second)) / (std::log(q.first) - std::log(p.first));
      return p.second * std::pow(t / p.first, slope);
    };
    if (x <= grid_.front().first) return loglog_line(grid_[0], grid_[1], x);
    if (x >= grid_.back().first) return loglog_line(grid_[grid_.size() - 2], grid_.back(), x);
    auto it = std::upper_bound(grid_.begin(), grid_.end(), std::make_pair(x, -std::numeric_limits<double>::infinity()));
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (x - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
  }

  ProfileKind kind_;
  double alpha_ = 0.5, beta_ = 2.0, gamma_ = 1.0;
  double a_threshold_ = 1.0;
  double tolerance_ = 1e-10;
  std::vector<std::pair<double, double>> grid_;
};

inline double eval_rho(const CompressionProfile& p, double x) { return p.rho(x); }

/// x ≥ a with |τ(x) − y| ≤ tolerance·y, by bracketing bisection.
inline double tau_inverse(const CompressionProfile& p, double y) {
  const double a = p.a_threshold();
  const double ta = p.tau(a);
  if (!(y >= ta * (1 - 1e-15)))
    throw Error(ErrorKind::kDomain, "tau_inverse(" + std::to_string(y) + ") below tau(a) = " + std::to_string(ta));
  const double tol = p.tolerance() * y;
  if (std::abs(ta - y) <= tol) return a;
  double lo = a, hi = 2 * a;
  while (p.tau(hi) < y) {
    lo = hi;
    hi *= 2;
    if (hi > 1e300) throw Error(ErrorKind::kOverflow, "tau_inverse bracket exceeded 1e300 for y = " + std::to_string(y));
  }
  for (int it = 0; it < 4000; ++it) {
    const double mid = hi / lo > 4 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double t = p.tau(mid);
    if (std::abs(t - y) <= tol) return mid;
    (t < y ? lo : hi) = mid;
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) return mid;
  }
  throw Error(ErrorKind::kNoConvergence, "tau_inverse bisection did not converge for y = " + std::to_string(y));
}

struct ScalingEntry {
  int k = 0;
  double v = 0;
  double y = 0;
  double lambda = 0;
  int m = 0;
  int mu = 1;
  bool selected = false;
};

struct ScalingSequence {
  std::vector<ScalingEntry> entries;

  std::vector<ScalingEntry> selected() const {
    std::vector<ScalingEntry> out;
    for (const auto& e : entries)
      if (e.selected) out.push_back(e);
    return out;
  }
};

inline int m_from_lambda(double lambda, int k) {
  if (k <= 1) return 0;
  return std::max(0, static_cast<int>(std::floor((lambda - 1.0) / 2.0)));
}

/// Entry k (1-based) uses v[k−1]. The greedy subsequence keeps k = 1 and then
/// every k whose λ exceeds the last kept λ by at least 4.
inline ScalingSequence scaling_sequence(const CompressionProfile& p, const std::vector<double>& v) {
  if (v.empty()) throw Error(ErrorKind::kInvalidArgument, "empty cardinality list");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw Error(ErrorKind::kInvalidArgument, "cardinalities must be strictly increasing");
  ScalingSequence s;
  double last_kept = -INFINITY;
  for (std::size_t i = 0; i < v.size(); ++i) {
    ScalingEntry e;
    e.k = static_cast<int>(i) + 1;
    e.v = v[i];
    e.y = std::log(v[i]);
    e.lambda = tau_inverse(p, e.y) / e.y;
    e.m = m_from_lambda(e.lambda, e.k);
    e.mu = 2 * e.m + 1;
    if (i == 0 || e.lambda - last_kept >= 4.0) {
      e.selected = true;
      last_kept = e.lambda;
    }
    s.entries.push_back(e);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Class membership

struct ConditionResult {
  std::string name;
  bool pass = true;
  std::string first_violation;  // empty when none
  std::size_t advisory_violations = 0;  // violations below the tail start
};

struct MembershipReport {
  double a_star = 1.0;  // measured start of the tail on which conditions hold
  double x_end = 0;
  std::vector<ConditionResult> conditions;
  bool pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
  }
};

struct MembershipOptions {
  double x_end = 1e12;
  std::size_t grid_points = 2000;
  std::size_t subadditive_side = 100;  // side² sampled pairs
  double rel_eps = 1e-12;
};

inline std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return g;
}

/// Grid checks of the class conditions. The conditions only need to hold
/// past some a, so the report locates the smallest grid point a* from which
/// every monotonicity check succeeds. a* must lie in the lower half of the
/// logarithmic grid; violations below it are counted as advisory.
inline MembershipReport check_class_membership(const CompressionProfile& p, const MembershipOptions& opt = {}) {
  MembershipReport rep;
  rep.x_end = opt.x_end;
  const auto grid = geometric_grid(1.0, opt.x_end, opt.grid_points);
  const std::size_t n = grid.size();
  std::vector<double> rho(n), tau(n), tau_log(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = p.rho(grid[i]);
    tau[i] = grid[i] / rho[i];
    tau_log[i] = grid[i] > 1 ? tau[i] / std::log(grid[i]) : INFINITY;
  }
  const auto fmt = [](double x, double fx, double fy) {
    std::ostringstream os;
    os.precision(12);
    os << "x=" << x << " f(x)=" << fx << " f(next)=" << fy;
    return os.str();
  };
  struct Mono {
    const char* name;
    const std::vector<double>* values;
    bool strict;
    std::size_t first_bad = SIZE_MAX, last_bad = SIZE_MAX, count = 0;
  };
  std::vector<Mono> mono{{"rho_increasing", &rho, true},
                         {"tau_increasing", &tau, true},
                         {"tau_over_log_nondecreasing", &tau_log, false}};
  for (auto& c : mono) {
    const auto& f = *c.values;
    for (std::size_t i = 1; i + 1 < n; ++i) {  // skip x = 1 where log x = 0
      const double tol = opt.rel_eps * std::max(std::abs(f[i]), 1e-300);
      const bool ok = c.strict ? f[i + 1] > f[i] : f[i + 1] >= f[i] - tol;
      if (!std::isfinite(f[i]) || !std::isfinite(f[i + 1]) || !ok) {
        if (c.first_bad == SIZE_MAX) c.first_bad = i;
        c.last_bad = i;
        ++c.count;
      }
    }
  }
  std::size_t start = 1;
  for (const auto& c : mono)
    if (c.last_bad != SIZE_MAX) start = std::max(start, c.last_bad + 1);
  const bool tail_ok = start <= n / 2;
  rep.a_star = grid[std::min(start, n - 1)];
  for (const auto& c : mono) {
    ConditionResult r;
    r.name = c.name;
    r.pass = tail_ok;
    if (c.first_bad != SIZE_MAX) {
      const auto& f = *c.values;
      const std::size_t shown = tail_ok ? c.first_bad : c.last_bad;
      r.first_violation = fmt(grid[shown], f[shown], f[shown + 1]);
      r.advisory_violations = tail_ok ? c.count : 0;
    }
    rep.conditions.push_back(r);
  }

  {
    ConditionResult r;
    r.name = "rho_unbounded";
    const double r_a = p.rho(rep.a_star);
    const double r_end = rho.back();
    const double r_prev = p.rho(opt.x_end / 10);
    r.pass = tail_ok && std::isfinite(r_end) && r_end - r_a >= 1.0 && r_end > r_prev;
    if (!r.pass) {
      std::ostringstream os;
      os.precision(12);
      os << "rho(" << rep.a_star << ")=" << r_a << " rho(" << opt.x_end << ")=" << r_end;
      r.first_violation = os.str();
    }
    rep.conditions.push_back(r);
  }

  {
    ConditionResult r;
    r.name = "subadditive";
    const auto side = geometric_grid(rep.a_star, opt.x_end / 2, opt.subadditive_side);
    for (double x : side) {
      if (!r.pass) break;
      for (double y : side) {
        const double lhs = p.rho(x + y), rhs = p.rho(x) + p.rho(y);
        if (lhs > rhs * (1 + opt.rel_eps)) {
          r.pass = false;
          std::ostringstream os;
          os.precision(12);
          os << "x=" << x << " y=" << y << " rho(x+y)=" << lhs << " rho(x)+rho(y)=" << rhs;
          r.first_violation = os.str();
          break;
        }
      }
    }
    rep.conditions.push_back(r);
  }

  {
    ConditionResult r;
    r.name = "rho_one_positive";
    const double r1 = p.rho(1.0);
    r.pass = r1 > 0;
    if (!r.pass) r.first_violation = "rho(1)=" + std::to_string(r1);
    rep.conditions.push_back(r);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Growth constants for the consecutive-ratio argument

struct RatioConstantReport {
  double c = 0, c1 = 0;        // least-squares fit y_k ≈ c·k, |residual| ≤ c1
  double C1 = 0;               // max consecutive gap of y over selected indices
  double theta = INFINITY;     // smallest θ with τ(x)+1 ≤ τ(θx) on the grid
  double C = INFINITY;         // θ^⌈C1⌉
  double measured_max_ratio = 0;  // max z_n / z_{n−1} over consecutive selected
  bool pass = false;
};

inline RatioConstantReport ratio_constant(const CompressionProfile& p, const ScalingSequence& s,
                                          double a_start, double x_end = 1e12) {
  RatioConstantReport rep;
  const auto& e = s.entries;
  const double nk = static_cast<double>(e.size());
  if (e.size() >= 2) {
    double sk = 0, sy = 0, skk = 0, sky = 0;
    for (const auto& x : e) {
      sk += x.k;
      sy += x.y;
      skk += double(x.k) * x.k;
      sky += x.k * x.y;
    }
    rep.c = (nk * sky - sk * sy) / (nk * skk - sk * sk);
    const double icpt = (sy - rep.c * sk) / nk;
    for (const auto& x : e) rep.c1 = std::max(rep.c1, std::abs(x.y - rep.c * x.k - icpt) + std::abs(icpt));
  }
  const auto sel = s.selected();
  for (std::size_t i = 1; i < sel.size(); ++i) {
    rep.C1 = std::max(rep.C1, sel[i].y - sel[i - 1].y);
    rep.measured_max_ratio =
        std::max(rep.measured_max_ratio, (sel[i].lambda * sel[i].y) / (sel[i - 1].lambda * sel[i - 1].y));
  }
  const auto grid = geometric_grid(std::max(a_start, 1.0), x_end, 400);
  const auto holds = [&](double th) {
    for (double x : grid)
      if (p.tau(x) + 1 > p.tau(th * x)) return false;
    return true;
  };
  double lo = 1.0, hi = 2.0;
  while (!holds(hi) && hi < 1e6) hi *= 2;
  if (holds(hi)) {
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid) ? hi : lo) = mid;
    }
    rep.theta = hi;
    rep.C = std::pow(rep.theta, std::ceil(std::max(rep.C1, 1e-12)));
  }
  rep.pass = sel.size() < 2 || rep.measured_max_ratio <= rep.C * (1 + 1e-9);
  return rep;
}

}  // namespace cgap
