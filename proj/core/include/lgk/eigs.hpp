#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace lgk {

using LinOp = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct GapResult {
  double gap;               // +inf sentinel when no nonzero eigenvalue exists
  int zero_multiplicity;
};

// All eigenvalues of a symmetric PSD matrix; gap = smallest above zero_tol.
GapResult dense_spectral_gap(const Eigen::MatrixXd& a, double zero_tol = 1e-10);

// Smallest eigenvalue of a PSD operator restricted to the orthogonal
// complement of kernel_basis (orthonormalized internally), via Lanczos with
// full reorthogonalization on upper_bound*I - A.
double lanczos_smallest_deflated(const LinOp& apply, int dim,
                                 const std::vector<Eigen::VectorXd>& kernel_basis,
                                 double upper_bound, double tol = 1e-9, int max_iter = 1000);

// Gershgorin-style upper bound 2 * max diagonal for A = D - W with W >= 0;
// caller supplies the diagonal.
double psd_upper_bound(const Eigen::VectorXd& diagonal);

// sup_{f perp ker B} A(f)/B(f) for dense symmetric PSD forms;
// +inf when ker(B) is not contained in ker(A).
double dense_rayleigh_ratio(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            double kernel_tol = 1e-10);

// Same quantity, matrix-free: Lanczos in the B-inner product on B^+ A with
// projected conjugate-gradient solves.  kernel_basis spans ker(B).
double iterative_rayleigh_ratio(const LinOp& apply_a, const LinOp& apply_b, int dim,
                                const std::vector<Eigen::VectorXd>& kernel_basis,
                                double tol = 1e-8, int max_iter = 300);

}  // namespace lgk
