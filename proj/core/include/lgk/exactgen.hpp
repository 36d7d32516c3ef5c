#pragma once

#include "lgk/lattice.hpp"
#include "lgk/velocity.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <functional>

namespace lgk {

// Full generators on the enumerated state space X_N.  Rate convention:
// off-diagonal entries are jump rates, rows sum to zero.  State index =
// occupancy bits as an integer, species-major (bit v * N^d + x).
struct GeneratorMatrices {
  const VelocitySet* vs = nullptr;
  int N = 0;
  double a = 0.0;
  int bits = 0;
  std::int64_t n_states = 0;
  Torus torus{1, 1};

  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  Sparse ex;       // N^2 L_ex (symmetric + drift rates)
  Sparse ex_sym;   // N^2 L_ex,s
  Sparse ex_anti;  // N^2 L_ex,a (drift part, entries may be negative)
  Sparse c;        // N^2 L_c

  bool dense_available() const { return bits <= 12; }
};

GeneratorMatrices build_generators(int N, int d, double a, const VelocitySet& vs);

std::int64_t config_to_state(const GeneratorMatrices& gen, const Configuration& cfg);
Configuration state_to_config(const GeneratorMatrices& gen, std::int64_t state);

// Probability vector of mu_lambda over the enumerated states.
Eigen::VectorXd stationary_weights(const GeneratorMatrices& gen, const Eigen::VectorXd& lambda);

// max-norm of mu_lambda^T (L_ex + L_c); requires the dense path.
double stationarity_residual(const GeneratorMatrices& gen, const Eigen::VectorXd& lambda);

struct AdjointResiduals {
  double sym_ex;   // ||D L_ex_sym - L_ex_sym^T D||_inf
  double anti_ex;  // ||D L_ex_anti + L_ex_anti^T D||_inf
  double sym_c;    // ||D L_c - L_c^T D||_inf
};
AdjointResiduals adjoint_residuals(const GeneratorMatrices& gen, const Eigen::VectorXd& lambda);

// ||L_c f||_inf for f(eta) = f_tilde((I(eta_x))_x); the per-site vectors are
// passed in site order.
using IFieldFunction = std::function<double(const std::vector<Eigen::VectorXd>&)>;
double lnc_annihilation(const GeneratorMatrices& gen, const IFieldFunction& f_tilde);

// ||L_c f||_inf for an arbitrary state functional (negative controls).
double lnc_residual_raw(const GeneratorMatrices& gen, const Eigen::VectorXd& f);

}  // namespace lgk
