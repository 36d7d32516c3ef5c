#include "lgk/eigs.hpp"

#include "lgk/error.hpp"
#include "lgk/rng.hpp"

#include <cmath>
#include <limits>

namespace lgk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gram-Schmidt orthonormalization, dropping near-dependent vectors.
std::vector<Eigen::VectorXd> orthonormalize(const std::vector<Eigen::VectorXd>& basis) {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::VectorXd v : basis) {
    for (const auto& u : out) v -= u.dot(v) * u;
    double n = v.norm();
    if (n > 1e-12) out.push_back(v / n);
  }
  return out;
}

void project_out(Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& ortho) {
  for (const auto& u : ortho) v -= u.dot(v) * u;
}

Eigen::VectorXd random_unit(int dim, RngStream& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = 2.0 * rng.next_double() - 1.0;
  return v.normalized();
}

// Eigenvalues of a symmetric tridiagonal matrix.
Eigen::VectorXd tridiag_eigenvalues(const std::vector<double>& alpha,
                                    const std::vector<double>& beta) {
  int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

GapResult dense_spectral_gap(const Eigen::MatrixXd& a, double zero_tol) {
  if (a.rows() == 1) return {kInf, 1};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  int zero_mult = 0;
  double gap = kInf;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < zero_tol) {
      ++zero_mult;
    } else if (ev[i] < gap) {
      gap = ev[i];
    }
  }
  return {gap, zero_mult};
}

double psd_upper_bound(const Eigen::VectorXd& diagonal) {
  return 2.0 * diagonal.maxCoeff() + 1.0;
}

double lanczos_smallest_deflated(const LinOp& apply, int dim,
                                 const std::vector<Eigen::VectorXd>& kernel_basis,
                                 double upper_bound, double tol, int max_iter) {
  std::vector<Eigen::VectorXd> ker = orthonormalize(kernel_basis);
  int active = dim - static_cast<int>(ker.size());
  if (active <= 0) return kInf;

  // Lanczos on B = c I - A: the largest eigenvalue of B on the deflated
  // subspace is c - (smallest deflated eigenvalue of A).
  const double c = upper_bound;
  RngStream rng(0x1309u, 0, RngPurpose::Generic);
  Eigen::VectorXd q = random_unit(dim, rng);
  project_out(q, ker);
  q.normalize();

  std::vector<Eigen::VectorXd> qs{q};
  std::vector<double> alpha, beta;
  Eigen::VectorXd w(dim), aq(dim);
  double prev_best = -kInf;
  int iters = std::min(max_iter, active);
  for (int j = 0; j < iters; ++j) {
    apply(qs[j], aq);
    w = c * qs[j] - aq;
    double aj = qs[j].dot(w);
    alpha.push_back(aj);
    w -= aj * qs[j];
    if (j > 0) w -= beta[j - 1] * qs[j - 1];
    project_out(w, ker);
    for (const auto& qq : qs) w -= qq.dot(w) * qq;  // full reorthogonalization
    double bj = w.norm();
    Eigen::VectorXd evs = tridiag_eigenvalues(alpha, beta);
    double best = evs.maxCoeff();
    if (bj < 1e-12) return c - best;  // invariant subspace exhausted
    if (j >= 8 && std::abs(best - prev_best) < tol * std::max(1.0, std::abs(best)) * 1e-2)
      return c - best;
    prev_best = best;
    beta.push_back(bj);
    qs.push_back(w / bj);
  }
  if (alpha.empty()) fail(Errc::EigensolveFailure, "Lanczos made no progress");
  return c - tridiag_eigenvalues(alpha, beta).maxCoeff();
}

double dense_rayleigh_ratio(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            double kernel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  const Eigen::VectorXd& mu = es.eigenvalues();
  double scale = std::max(1.0, mu.maxCoeff());
  int n = static_cast<int>(mu.size());
  std::vector<int> range_idx;
  for (int i = 0; i < n; ++i) {
    if (mu[i] > kernel_tol * scale) {
      range_idx.push_back(i);
    } else {
      // ker(B) must sit inside ker(A) for a finite ratio.
      if ((a * es.eigenvectors().col(i)).norm() > kernel_tol * scale * 10) return kInf;
    }
  }
  if (range_idx.empty()) return 0.0;  // both forms vanish
  Eigen::MatrixXd w(n, range_idx.size());
  for (std::size_t c = 0; c < range_idx.size(); ++c)
    w.col(c) = es.eigenvectors().col(range_idx[c]) / std::sqrt(mu[range_idx[c]]);
  Eigen::MatrixXd m = w.transpose() * a * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(m, Eigen::EigenvaluesOnly);
  return es2.eigenvalues().maxCoeff();
}

double iterative_rayleigh_ratio(const LinOp& apply_a, const LinOp& apply_b, int dim,
                                const std::vector<Eigen::VectorXd>& kernel_basis,
                                double tol, int max_iter) {
  std::vector<Eigen::VectorXd> ker = orthonormalize(kernel_basis);
  // Finiteness requires ker(B) inside ker(A).
  Eigen::VectorXd tmp(dim);
  for (const auto& u : ker) {
    apply_a(u, tmp);
    if (tmp.norm() > 1e-8) return kInf;
  }
  int active = dim - static_cast<int>(ker.size());
  if (active <= 0) return 0.0;

  // Projected CG for B z = rhs on the complement of ker(B).
  auto solve_b = [&](const Eigen::VectorXd& rhs, Eigen::VectorXd& z) {
    z.setZero(dim);
    Eigen::VectorXd r = rhs;
    project_out(r, ker);
    Eigen::VectorXd p = r, bp(dim);
    double rr = r.squaredNorm();
    double rr0 = rr;
    for (int it = 0; it < 5 * dim + 200 && rr > 1e-24 * std::max(1.0, rr0); ++it) {
      apply_b(p, bp);
      project_out(bp, ker);
      double denom = p.dot(bp);
      if (denom <= 0) break;
      double step = rr / denom;
      z += step * p;
      r -= step * bp;
      double rr_new = r.squaredNorm();
      p = r + (rr_new / rr) * p;
      rr = rr_new;
    }
    project_out(z, ker);
  };

  // Lanczos in the B-inner product on T = B^+ A.
  RngStream rng(0x52C1u, 0, RngPurpose::Generic);
  Eigen::VectorXd v = random_unit(dim, rng);
  project_out(v, ker);
  Eigen::VectorXd bv(dim);
  apply_b(v, bv);
  double nb = std::sqrt(std::max(v.dot(bv), 0.0));
  if (nb <= 0) fail(Errc::EigensolveFailure, "degenerate start in generalized Lanczos");
  v /= nb;

  std::vector<Eigen::VectorXd> qs{v}, bqs;
  bqs.emplace_back(dim);
  apply_b(qs[0], bqs[0]);
  std::vector<double> alpha, beta;
  Eigen::VectorXd av(dim), w(dim);
  double prev_best = -kInf;
  int iters = std::min(max_iter, active);
  for (int j = 0; j < iters; ++j) {
    apply_a(qs[j], av);
    solve_b(av, w);  // w = B^+ A q_j
    double aj = qs[j].dot(av);  // = <q_j, T q_j>_B
    alpha.push_back(aj);
    w -= aj * qs[j];
    if (j > 0) w -= beta[j - 1] * qs[j - 1];
    for (std::size_t i = 0; i < qs.size(); ++i) w -= bqs[i].dot(w) * qs[i];  // B-reorth
    project_out(w, ker);
    Eigen::VectorXd bw(dim);
    apply_b(w, bw);
    double bj = std::sqrt(std::max(w.dot(bw), 0.0));
    Eigen::VectorXd evs = tridiag_eigenvalues(alpha, beta);
    double best = evs.maxCoeff();
    if (bj < 1e-10) return best;
    if (j >= 6 && std::abs(best - prev_best) < tol * std::max(1.0, std::abs(best)))
      return best;
    prev_best = best;
    beta.push_back(bj);
    qs.push_back(w / bj);
    bqs.push_back(bw / bj);
  }
  return tridiag_eigenvalues(alpha, beta).maxCoeff();
}

}  // namespace lgk
