#pragma once

#include "lgk/lattice.hpp"
#include "lgk/rng.hpp"
#include "lgk/theta.hpp"
#include "lgk/velocity.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lgk {

// Chemical-potential field lambda(x) on the torus; either one constant vector
// or one (d+1)-vector per site.
class PotentialField {
public:
  PotentialField(const Torus& torus, Eigen::VectorXd constant);
  PotentialField(const Torus& torus, std::vector<Eigen::VectorXd> per_site);

  const Torus& torus() const { return *torus_; }
  bool constant() const { return per_site_.empty(); }
  const Eigen::VectorXd& at(std::int64_t site) const {
    return per_site_.empty() ? constant_ : per_site_[site];
  }

private:
  const Torus* torus_;
  Eigen::VectorXd constant_;
  std::vector<Eigen::VectorXd> per_site_;
};

// Smooth perturbation phi : T^d -> R^{d+1} given as a finite Fourier series
// phi(u) = sum_m re_m cos(2 pi k_m . u) + im_m sin(2 pi k_m . u).
struct FourierMode {
  std::vector<int> k;   // size d
  Eigen::VectorXd re;   // size d+1
  Eigen::VectorXd im;   // size d+1
};

class PerturbationField {
public:
  PerturbationField(int dim, std::vector<FourierMode> modes, double scaling_exponent);

  int dim() const { return dim_; }
  double scaling_exponent() const { return a_; }
  const std::vector<FourierMode>& modes() const { return modes_; }

  Eigen::VectorXd eval(const Eigen::VectorXd& u) const;

private:
  int dim_;
  std::vector<FourierMode> modes_;
  double a_;
};

// lambda(x) = Lambda(p_* + N^{-a} phi(x/N)).
PotentialField lambda_field_from_phi(const VelocitySet& vs, const PerturbationField& phi,
                                     const Torus& torus);

// Independent Bernoulli(theta(lambda(x) . bv)) draw per (x, v).
Configuration sample(const PotentialField& field, const VelocitySet& vs, RngStream& rng);

// Exact log-probability of cfg under the product measure.
double log_weight(const Configuration& cfg, const PotentialField& field, const VelocitySet& vs);

// H(mu_{field1} | mu_{field2}), closed form for product Bernoulli measures.
double product_relative_entropy(const PotentialField& field1, const PotentialField& field2,
                                const VelocitySet& vs);

}  // namespace lgk
