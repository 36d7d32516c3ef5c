#include "lgk/velocity.hpp"

#include "lgk/error.hpp"
#include "lgk/theta.hpp"

#include <algorithm>
#include <cmath>

namespace lgk {

namespace {

// Exact rational rank by Gaussian elimination.
int rational_rank(std::vector<std::vector<Rational>> m) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[rank], m[piv]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == static_cast<std::size_t>(rank) || m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

ExactVector lift(const ExactVector& v, std::size_t basis_size) {
  ExactVector out = ExactVector::zero(v.dim + 1, basis_size);
  out.coeffs[0][0] = 1;
  for (int j = 0; j < v.dim; ++j) out.coeffs[j + 1] = v.coeffs[j];
  return out;
}

}  // namespace

const Eigen::MatrixXd& VelocitySet::a_matrix() const {
  if (!a_matrix_) fail(Errc::GramNotInvertible, "A_V requires an invertible gram matrix");
  return *a_matrix_;
}

double VelocitySet::coupling(int k, int i, int j, int l) const {
  if (coupling_.empty()) fail(Errc::GramNotInvertible, "coupling tensor requires A_V");
  int D = dim_ + 1;
  return coupling_[((k * D + i) * D + j) * dim_ + (l - 1)];
}

VelocitySet build_velocity_set(const SymbolBasis& basis, std::vector<ExactVector> velocities,
                               std::optional<PairForm> pair_form) {
  if (velocities.empty()) fail(Errc::EmptySet, "no velocities given");
  int d = velocities.front().dim;
  if (d < 1) fail(Errc::ConfigInvalid, "dimension must be >= 1");
  for (const auto& v : velocities)
    if (v.dim != d) fail(Errc::ConfigInvalid, "velocity dimension mismatch");
  for (std::size_t i = 0; i < velocities.size(); ++i)
    for (std::size_t j = i + 1; j < velocities.size(); ++j)
      if (velocities[i] == velocities[j])
        fail(Errc::DuplicateVelocity, "velocities " + std::to_string(i) + " and " +
                                          std::to_string(j) + " coincide");

  VelocitySet vs;
  vs.dim_ = d;
  vs.basis_ = basis;
  vs.velocities_ = std::move(velocities);
  vs.pair_form_ = std::move(pair_form);

  int V = vs.species_count();
  for (int i = 0; i < V; ++i) {
    vs.lifted_exact_.push_back(lift(vs.velocities_[i], basis.size()));
    Eigen::VectorXd num = vs.lifted_exact_.back().numeric(basis);
    for (int j = 0; j < num.size(); ++j)
      if (!std::isfinite(num[j])) fail(Errc::ConfigInvalid, "non-finite velocity component");
    vs.lifted_.push_back(std::move(num));
  }

  for (int i = 0; i < V; ++i)
    for (int j = 1; j < d + 1; ++j)
      vs.v_max_ = std::max(vs.v_max_, std::abs(vs.lifted_[i][j]));

  // Effective collision quadruples: exact momentum closure plus the four
  // effectiveness filters (repeated or overlapping velocities give a zero
  // indicator for every configuration).
  for (int a = 0; a < V; ++a)
    for (int b = 0; b < V; ++b)
      for (int c = 0; c < V; ++c)
        for (int e = 0; e < V; ++e) {
          if (a == b || c == e) continue;
          if (c == a || c == b || e == a || e == b) continue;
          ExactVector diff = vs.velocities_[a] + vs.velocities_[b] - vs.velocities_[c] -
                             vs.velocities_[e];
          if (diff.is_zero()) vs.collision_set_.push_back({a, b, c, e});
        }

  int D = d + 1;
  vs.gram_ = Eigen::MatrixXd::Zero(D, D);
  for (int i = 0; i < V; ++i) vs.gram_ += vs.lifted_[i] * vs.lifted_[i].transpose();

  vs.p_star_exact_ = ExactVector::zero(D, basis.size());
  for (const auto& bv : vs.lifted_exact_) vs.p_star_exact_ = vs.p_star_exact_ + bv;
  vs.p_star_exact_ = vs.p_star_exact_ * Rational(1, 2);
  vs.p_star_ = vs.p_star_exact_.numeric(basis);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(vs.gram_);
  lu.setThreshold(1e-12);
  if (lu.isInvertible()) {
    Eigen::MatrixXd a_mat = 2.0 * lu.inverse();
    // C_kijl = sum_v v_k (A bv)_i (A bv)_j v_l; symmetric in (i, j).
    vs.coupling_.assign(static_cast<std::size_t>(D) * D * D * d, 0.0);
    for (int s = 0; s < V; ++s) {
      Eigen::VectorXd abv = a_mat * vs.lifted_[s];
      const Eigen::VectorXd& bv = vs.lifted_[s];
      for (int k = 0; k < D; ++k)
        for (int i = 0; i < D; ++i)
          for (int j = 0; j < D; ++j)
            for (int l = 1; l <= d; ++l)
              vs.coupling_[((k * D + i) * D + j) * d + (l - 1)] +=
                  bv[k] * abv[i] * abv[j] * bv[l];
    }
    vs.a_matrix_ = std::move(a_mat);
  }

  return vs;
}

VelocitySet build_velocity_set(const SymbolBasis& basis, const PairForm& pf) {
  if (pf.generators.empty()) fail(Errc::EmptySet, "pair form needs at least one generator");
  std::vector<ExactVector> velocities;
  for (const auto& g : pf.generators) {
    velocities.push_back(pf.v_star + g);
    velocities.push_back(pf.v_star - g);
  }
  for (std::size_t i = 0; i < velocities.size(); ++i)
    for (std::size_t j = i + 1; j < velocities.size(); ++j)
      if (velocities[i] == velocities[j])
        fail(Errc::DegeneratePairForm, "pair form expands to coinciding velocities");
  return build_velocity_set(basis, std::move(velocities), pf);
}

SpanReport check_span(const VelocitySet& vs) {
  if (!vs.pair_form()) fail(Errc::MissingPairForm, "check_span needs a pair form");
  const auto& gens = vs.pair_form()->generators;
  int d = vs.dim();
  Eigen::MatrixXd m(d, static_cast<int>(gens.size()));
  for (std::size_t c = 0; c < gens.size(); ++c) m.col(c) = gens[c].numeric(vs.basis());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  int rank = static_cast<int>(lu.rank());
  return {rank == d, rank};
}

bool check_integer_independence(const VelocitySet& vs) {
  if (!vs.pair_form()) fail(Errc::MissingPairForm, "check_integer_independence needs a pair form");
  const auto& gens = vs.pair_form()->generators;
  std::size_t n = gens.size();
  std::size_t S = vs.basis().size();
  int d = vs.dim();
  // Stacked (d*S) x n coefficient matrix over Q; trivial kernel iff rank n.
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(d) * S,
                                       std::vector<Rational>(n, Rational(0)));
  for (std::size_t c = 0; c < n; ++c)
    for (int j = 0; j < d; ++j)
      for (std::size_t s = 0; s < S; ++s) m[j * S + s][c] = gens[c].coeffs[j][s];
  return rational_rank(std::move(m)) == static_cast<int>(n);
}

AvReport assumption_av_report(const VelocitySet& vs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vs.gram());
  double min_ev = es.eigenvalues().minCoeff();
  return {vs.gram_invertible(), min_ev};
}

Eigen::VectorXd big_p(const VelocitySet& vs, const Eigen::VectorXd& lambda) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(vs.dim() + 1);
  for (const auto& bv : vs.lifted()) out += bv * theta(lambda.dot(bv));
  return out;
}

Eigen::MatrixXd big_p_jacobian(const VelocitySet& vs, const Eigen::VectorXd& lambda) {
  int D = vs.dim() + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(D, D);
  for (const auto& bv : vs.lifted()) out += bv * bv.transpose() * theta_prime(lambda.dot(bv));
  return out;
}

Eigen::VectorXd lambda_of_p(const VelocitySet& vs, const Eigen::VectorXd& p, double tol,
                            int max_iter) {
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(vs.dim() + 1);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd residual = big_p(vs, lambda) - p;
    if (residual.lpNorm<Eigen::Infinity>() < tol) return lambda;
    Eigen::MatrixXd jac = big_p_jacobian(vs, lambda);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) fail(Errc::NewtonDiverged, "singular Jacobian in Newton iteration");
    lambda -= lu.solve(residual);
  }
  if ((big_p(vs, lambda) - p).lpNorm<Eigen::Infinity>() < tol) return lambda;
  fail(Errc::NewtonDiverged, "residual above tolerance after max iterations");
}

int kappa_exponent(const VelocitySet& vs) {
  if (!vs.pair_form()) fail(Errc::MissingPairForm, "kappa is defined through the pair form");
  int n = static_cast<int>(vs.pair_form()->generators.size());
  return (2 * n + 1) * vs.dim() + 2;
}

}  // namespace lgk
