#pragma once

// Second-largest adjacency eigenpair, dense or matrix-free.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "cgap/error.hpp"

namespace cgap {

struct SecondEigenpair {
  double value = 0;
  Eigen::VectorXd vector;  // unit norm, orthogonal to constants
  double residual = 0;     // ‖A x − value·x‖
};

inline SecondEigenpair second_eigenpair_dense(const Eigen::MatrixXd& a) {
  if (a.rows() < 2) throw Error(ErrorKind::kDomain, "spectrum needs at least two vertices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::kNoConvergence, "dense eigensolver failed");
  const Eigen::Index n = a.rows();
  SecondEigenpair out;
  out.value = solver.eigenvalues()(n - 2);
  Eigen::VectorXd x = solver.eigenvectors().col(n - 2);
  x.array() -= x.mean();
  x.normalize();
  out.vector = x;
  out.residual = (a * x - out.value * x).norm();
  return out;
}

/// Lanczos with full reorthogonalization on A restricted to the complement of
/// the constant vector; explicitly restarted from the top Ritz vector.
inline SecondEigenpair second_eigenpair_lanczos(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& apply, Eigen::Index n,
    double tolerance, int max_matvecs, int krylov_dim = 160, std::uint64_t seed = 7) {
  if (n < 2) throw Error(ErrorKind::kDomain, "spectrum needs at least two vertices");
  const auto deflate = [](Eigen::VectorXd& x) { x.array() -= x.mean(); };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = normal(rng);
  deflate(start);
  start.normalize();

  const Eigen::Index kmax = std::min<Eigen::Index>(krylov_dim, n - 1);
  Eigen::MatrixXd q(n, kmax);
  Eigen::VectorXd w(n), ritz(n), aw(n);
  int matvecs = 0;
  double theta = 0, residual = INFINITY;
  while (matvecs < max_matvecs) {
    Eigen::VectorXd alpha(kmax), beta(kmax);
    q.col(0) = start;
    Eigen::Index k = 0;
    for (; k < kmax; ++k) {
      apply(q.col(k), w);
      ++matvecs;
      deflate(w);
      alpha[k] = q.col(k).dot(w);
      // Two passes of classical Gram-Schmidt.
      for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * w);
      beta[k] = w.norm();
      if (k + 1 == kmax || beta[k] < 1e-13) {
        ++k;
        break;
      }
      q.col(k + 1) = w / beta[k];
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
    theta = small.eigenvalues()(k - 1);
    ritz = q.leftCols(k) * small.eigenvectors().col(k - 1);
    deflate(ritz);
    ritz.normalize();
    apply(ritz, aw);
    ++matvecs;
    deflate(aw);
    theta = ritz.dot(aw);
    residual = (aw - theta * ritz).norm();
    if (residual <= tolerance) return {theta, ritz, residual};
    start = ritz;
  }
  throw Error(ErrorKind::kNoConvergence, "Lanczos stopped after " + std::to_string(matvecs) +
                                             " products with residual " + std::to_string(residual));
}

}  // namespace cgap
