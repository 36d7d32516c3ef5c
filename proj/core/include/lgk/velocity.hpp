#pragma once

#include "lgk/symbols.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace lgk {

// Collision channel (v, w, v', w'), stored as indices into the velocity list.
struct Quadruple {
  int v, w, vp, wp;
  Quadruple reversed() const { return {vp, wp, v, w}; }
  bool operator==(const Quadruple&) const = default;
};

struct PairForm {
  ExactVector v_star;               // common drift
  std::vector<ExactVector> generators;  // v_1, ..., v_n
};

// Velocity set with every derived constant of the limit equation.
// Immutable after construction; all operations on it are pure.
class VelocitySet {
public:
  int dim() const { return dim_; }
  int species_count() const { return static_cast<int>(velocities_.size()); }
  const SymbolBasis& basis() const { return basis_; }
  const std::vector<ExactVector>& velocities() const { return velocities_; }
  const std::optional<PairForm>& pair_form() const { return pair_form_; }

  // Lifted vector bv = (1, v) of species v, numeric.
  const Eigen::VectorXd& lifted(int v) const { return lifted_[v]; }
  const std::vector<Eigen::VectorXd>& lifted() const { return lifted_; }
  // Lifted vector with exact rational symbol coordinates.
  const ExactVector& lifted_exact(int v) const { return lifted_exact_[v]; }

  // Effective collision quadruples: v+w = v'+w' exactly, v != w, v' != w',
  // {v,w} and {v',w'} disjoint. Ordered quadruples are kept as distinct channels.
  const std::vector<Quadruple>& collision_set() const { return collision_set_; }

  // Gram matrix sum of bv (x) bv, (d+1) x (d+1).
  const Eigen::MatrixXd& gram() const { return gram_; }
  bool gram_invertible() const { return a_matrix_.has_value(); }
  // A = 2 * gram^{-1}; throws GramNotInvertible when absent.
  const Eigen::MatrixXd& a_matrix() const;

  const ExactVector& p_star_exact() const { return p_star_exact_; }
  const Eigen::VectorXd& p_star() const { return p_star_; }

  // Coupling constants C[k][i][j][l-1], shape (d+1)^3 x d.
  double coupling(int k, int i, int j, int l) const;

  // Largest |v_j| over species and components (numeric).
  double v_max() const { return v_max_; }

  friend VelocitySet build_velocity_set(const SymbolBasis&, std::vector<ExactVector> velocities,
                                        std::optional<PairForm> pair_form);

private:
  int dim_ = 0;
  SymbolBasis basis_;
  std::vector<ExactVector> velocities_;
  std::optional<PairForm> pair_form_;
  std::vector<Eigen::VectorXd> lifted_;
  std::vector<ExactVector> lifted_exact_;
  std::vector<Quadruple> collision_set_;
  Eigen::MatrixXd gram_;
  std::optional<Eigen::MatrixXd> a_matrix_;
  ExactVector p_star_exact_{};
  Eigen::VectorXd p_star_;
  std::vector<double> coupling_;  // empty when gram not invertible
  double v_max_ = 0.0;
};

// Builds from an explicit velocity list; pair_form, when given, must expand to
// exactly the same list (use expand_pair_form for the usual entry point).
VelocitySet build_velocity_set(const SymbolBasis& basis, std::vector<ExactVector> velocities,
                               std::optional<PairForm> pair_form = std::nullopt);

// Builds the set {v_* + v_l, v_* - v_l}.
VelocitySet build_velocity_set(const SymbolBasis& basis, const PairForm& pf);

struct SpanReport {
  bool spans;
  int rank;
};

// Prop.-style admissibility checks on the pair form.
SpanReport check_span(const VelocitySet& vs);
bool check_integer_independence(const VelocitySet& vs);

struct AvReport {
  bool invertible;
  double min_eigenvalue;
};
AvReport assumption_av_report(const VelocitySet& vs);

// P(lambda) = sum_v bv * theta(lambda . bv).
Eigen::VectorXd big_p(const VelocitySet& vs, const Eigen::VectorXd& lambda);

// Jacobian of P: sum_v bv (x) bv * theta'(lambda . bv).
Eigen::MatrixXd big_p_jacobian(const VelocitySet& vs, const Eigen::VectorXd& lambda);

// Newton inversion of P around lambda = 0; throws NewtonDiverged outside the basin.
Eigen::VectorXd lambda_of_p(const VelocitySet& vs, const Eigen::VectorXd& p,
                            double tol = 1e-12, int max_iter = 50);

// kappa = (2n+1)d + 2 from the pair form; throws MissingPairForm.
int kappa_exponent(const VelocitySet& vs);

}  // namespace lgk
