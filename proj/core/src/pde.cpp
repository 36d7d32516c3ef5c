#include "lgk/pde.hpp"

#include "lgk/error.hpp"

#include <cmath>
#include <numbers>

namespace lgk {

namespace {

struct Grid {
  int d, G;
  std::vector<std::int64_t> strides;

  Grid(int dim, int grid) : d(dim), G(grid), strides(dim) {
    std::int64_t s = 1;
    for (int j = d - 1; j >= 0; --j) {
      strides[j] = s;
      s *= G;
    }
  }
  std::int64_t count() const { return strides[0] * G; }
  std::int64_t shift(std::int64_t site, int axis, int delta) const {
    std::int64_t c = (site / strides[axis]) % G;
    std::int64_t c2 = (c + delta + G) % G;
    return site + (c2 - c) * strides[axis];
  }
  Eigen::VectorXd point(std::int64_t site) const {
    Eigen::VectorXd u(d);
    for (int j = 0; j < d; ++j) u[j] = static_cast<double>((site / strides[j]) % G) / G;
    return u;
  }
};

void check_finite(const PdeState& s) {
  for (double x : s.phi)
    if (!std::isfinite(x)) fail(Errc::BlowUpDetected, "non-finite value at t=" + std::to_string(s.t));
}

}  // namespace

std::int64_t PdeState::site_count() const {
  std::int64_t n = 1;
  for (int j = 0; j < dim(); ++j) n *= grid;
  return n;
}

PdeState make_pde_state(const VelocitySet& vs, const PerturbationField& phi0, int grid) {
  if (grid < 3) fail(Errc::ConfigInvalid, "grid must have at least 3 points per axis");
  PdeState s;
  s.vs = &vs;
  s.grid = grid;
  Grid g(vs.dim(), grid);
  int D = vs.dim() + 1;
  s.phi.resize(g.count() * D);
  for (std::int64_t site = 0; site < g.count(); ++site) {
    Eigen::VectorXd val = phi0.eval(g.point(site));
    for (int k = 0; k < D; ++k) s.phi[site * D + k] = val[k];
  }
  return s;
}

std::vector<double> pde_rhs(const PdeState& state, bool include_nonlinear) {
  const VelocitySet& vs = *state.vs;
  int d = state.dim();
  int D = d + 1;
  Grid g(d, state.grid);
  double h = state.h();
  double inv_h2 = 1.0 / (h * h);
  double inv_2h = 1.0 / (2.0 * h);

  std::vector<double> out(state.phi.size());
  std::vector<double> grad(D * d);  // D_l phi_j at the current site
  for (std::int64_t site = 0; site < g.count(); ++site) {
    for (int j = 0; j < D; ++j) {
      for (int l = 0; l < d; ++l) {
        double fp = state.at(g.shift(site, l, +1), j);
        double fm = state.at(g.shift(site, l, -1), j);
        grad[j * d + l] = (fp - fm) * inv_2h;
      }
    }
    for (int k = 0; k < D; ++k) {
      double lap = 0.0;
      for (int l = 0; l < d; ++l) {
        lap += state.at(g.shift(site, l, +1), k) + state.at(g.shift(site, l, -1), k) -
               2.0 * state.at(site, k);
      }
      double acc = lap * inv_h2;
      if (include_nonlinear) {
        for (int i = 0; i < D; ++i) {
          double pi = state.at(site, i);
          if (pi == 0.0) continue;
          for (int j = 0; j < D; ++j)
            for (int l = 1; l <= d; ++l) acc += vs.coupling(k, i, j, l) * pi * grad[j * d + (l - 1)];
        }
      }
      out[site * D + k] = acc;
    }
  }
  return out;
}

double pde_functional(const PdeState& state, const FourierMode& f) {
  int d = state.dim();
  int D = d + 1;
  Grid g(d, state.grid);
  double acc = 0.0;
  for (std::int64_t site = 0; site < g.count(); ++site) {
    Eigen::VectorXd u = g.point(site);
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase += f.k[j] * u[j];
    phase *= 2.0 * std::numbers::pi;
    double c = std::cos(phase), s = std::sin(phase);
    for (int k = 0; k < D; ++k) acc += (f.re[k] * c + f.im[k] * s) * state.at(site, k);
  }
  return acc / static_cast<double>(g.count());
}

namespace {

void rk4_step(PdeState& s, double dt, bool nonlinear) {
  std::size_t n = s.phi.size();
  std::vector<double> k1 = pde_rhs(s, nonlinear);
  PdeState tmp = s;
  for (std::size_t i = 0; i < n; ++i) tmp.phi[i] = s.phi[i] + 0.5 * dt * k1[i];
  std::vector<double> k2 = pde_rhs(tmp, nonlinear);
  for (std::size_t i = 0; i < n; ++i) tmp.phi[i] = s.phi[i] + 0.5 * dt * k2[i];
  std::vector<double> k3 = pde_rhs(tmp, nonlinear);
  for (std::size_t i = 0; i < n; ++i) tmp.phi[i] = s.phi[i] + dt * k3[i];
  std::vector<double> k4 = pde_rhs(tmp, nonlinear);
  for (std::size_t i = 0; i < n; ++i)
    s.phi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  s.t += dt;
}

}  // namespace

PdeState pde_integrate(PdeState state, double t_end, const std::vector<double>& sample_times,
                       const std::vector<FourierMode>& functionals,
                       std::vector<FunctionalSample>* samples, double c_cfl,
                       bool include_nonlinear) {
  if (t_end < state.t) fail(Errc::ConfigInvalid, "t_end before the current time");
  double dt_max = c_cfl * state.h() * state.h();
  std::size_t next = 0;
  auto record = [&]() {
    while (next < sample_times.size() && sample_times[next] <= state.t + 1e-14) {
      if (samples) {
        for (std::size_t fi = 0; fi < functionals.size(); ++fi)
          samples->push_back({sample_times[next], static_cast<int>(fi),
                              pde_functional(state, functionals[fi])});
      }
      ++next;
    }
  };
  record();
  while (state.t < t_end - 1e-14) {
    double dt = std::min(dt_max, t_end - state.t);
    if (next < sample_times.size()) dt = std::min(dt, sample_times[next] - state.t);
    rk4_step(state, dt, include_nonlinear);
    check_finite(state);
    record();
  }
  return state;
}

}  // namespace lgk
