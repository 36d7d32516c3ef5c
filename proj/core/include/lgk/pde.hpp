#pragma once

#include "lgk/measure.hpp"
#include "lgk/velocity.hpp"

#include <vector>

namespace lgk {

// Finite-difference state of the coupled parabolic system on the unit torus:
// d_t phi_k = sum_{ijl} C_kijl phi_i D_l phi_j + Lap phi_k.
// Storage is site-major, (d+1) components per grid point, row-major sites.
struct PdeState {
  const VelocitySet* vs = nullptr;
  int grid = 0;  // points per axis, spacing 1/grid
  double t = 0.0;
  std::vector<double> phi;

  int dim() const { return vs->dim(); }
  int comps() const { return vs->dim() + 1; }
  double h() const { return 1.0 / grid; }
  std::int64_t site_count() const;
  double& at(std::int64_t site, int comp) { return phi[site * comps() + comp]; }
  double at(std::int64_t site, int comp) const { return phi[site * comps() + comp]; }
};

// Samples the Fourier-series initial datum on the grid.
PdeState make_pde_state(const VelocitySet& vs, const PerturbationField& phi0, int grid);

// Right-hand side with second-order central differences and the (2d+1)-point
// Laplacian; include_nonlinear = false drops the coupling term (diffusion
// control runs).
std::vector<double> pde_rhs(const PdeState& state, bool include_nonlinear = true);

// Trapezoid-rule value of int F(u) . phi(u) du on the periodic grid.
double pde_functional(const PdeState& state, const FourierMode& f);

struct FunctionalSample {
  double t;
  int functional_id;
  double value;
};

// Classic fourth-order Runge-Kutta with dt = c_cfl h^2, shortened on the last
// step and at sample times.  Throws BlowUpDetected on non-finite values.
PdeState pde_integrate(PdeState state, double t_end, const std::vector<double>& sample_times,
                       const std::vector<FourierMode>& functionals,
                       std::vector<FunctionalSample>* samples, double c_cfl = 0.2,
                       bool include_nonlinear = true);

}  // namespace lgk
