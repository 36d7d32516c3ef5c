#include "lgk/exactgen.hpp"

#include "lgk/error.hpp"
#include "lgk/measure.hpp"

#include <cmath>
#include <vector>

namespace lgk {

namespace {

// Species-major bit of (x, v) in the state integer.
inline std::int64_t state_bit(std::int64_t n_sites, std::int64_t x, int v) {
  return v * n_sites + x;
}

}  // namespace

std::int64_t config_to_state(const GeneratorMatrices& gen, const Configuration& cfg) {
  std::int64_t n_sites = gen.torus.site_count();
  std::int64_t s = 0;
  for (int v = 0; v < cfg.species_count(); ++v)
    for (std::int64_t x = 0; x < n_sites; ++x)
      if (cfg.get(x, v)) s |= std::int64_t(1) << state_bit(n_sites, x, v);
  return s;
}

Configuration state_to_config(const GeneratorMatrices& gen, std::int64_t state) {
  std::int64_t n_sites = gen.torus.site_count();
  Configuration cfg(gen.torus, gen.vs->species_count());
  for (int v = 0; v < cfg.species_count(); ++v)
    for (std::int64_t x = 0; x < n_sites; ++x)
      if ((state >> state_bit(n_sites, x, v)) & 1) cfg.set(x, v, true);
  return cfg;
}

GeneratorMatrices build_generators(int N, int d, double a, const VelocitySet& vs) {
  GeneratorMatrices gen;
  gen.vs = &vs;
  gen.N = N;
  gen.a = a;
  gen.torus = Torus(d, N);
  std::int64_t n_sites = gen.torus.site_count();
  gen.bits = static_cast<int>(n_sites) * vs.species_count();
  if (gen.bits > 20) fail(Errc::StateSpaceTooLarge, "state space above 20 bits");
  gen.n_states = std::int64_t(1) << gen.bits;

  double Nsq = static_cast<double>(N) * N;
  double drift_scale = std::pow(static_cast<double>(N), a - 1.0);
  int V = vs.species_count();

  using T = Eigen::Triplet<double>;
  std::vector<T> t_ex, t_sym, t_anti, t_c;

  for (std::int64_t s = 0; s < gen.n_states; ++s) {
    double diag_ex = 0.0, diag_sym = 0.0, diag_anti = 0.0, diag_c = 0.0;
    // Exchange moves: site x, direction dir, species v.
    for (std::int64_t x = 0; x < n_sites; ++x) {
      for (int dir = 0; dir < 2 * d; ++dir) {
        std::int64_t y = gen.torus.neighbor(x, dir);
        for (int v = 0; v < V; ++v) {
          bool occ_x = (s >> state_bit(n_sites, x, v)) & 1;
          bool occ_y = (s >> state_bit(n_sites, y, v)) & 1;
          if (!occ_x || occ_y) continue;
          std::int64_t target = s ^ (std::int64_t(1) << state_bit(n_sites, x, v)) ^
                                (std::int64_t(1) << state_bit(n_sites, y, v));
          double zv = Torus::direction_sign(dir) * vs.lifted(v)[Torus::direction_axis(dir) + 1];
          double r_sym = Nsq;
          double r_anti = Nsq * zv * drift_scale;
          t_sym.emplace_back(s, target, r_sym);
          t_anti.emplace_back(s, target, r_anti);
          t_ex.emplace_back(s, target, r_sym + r_anti);
          diag_sym -= r_sym;
          diag_anti -= r_anti;
          diag_ex -= r_sym + r_anti;
        }
      }
    }
    // Collision moves.
    for (std::int64_t x = 0; x < n_sites; ++x) {
      for (const Quadruple& q : vs.collision_set()) {
        bool ok = ((s >> state_bit(n_sites, x, q.v)) & 1) &&
                  ((s >> state_bit(n_sites, x, q.w)) & 1) &&
                  !((s >> state_bit(n_sites, x, q.vp)) & 1) &&
                  !((s >> state_bit(n_sites, x, q.wp)) & 1);
        if (!ok) continue;
        std::int64_t target = s ^ (std::int64_t(1) << state_bit(n_sites, x, q.v)) ^
                              (std::int64_t(1) << state_bit(n_sites, x, q.w)) ^
                              (std::int64_t(1) << state_bit(n_sites, x, q.vp)) ^
                              (std::int64_t(1) << state_bit(n_sites, x, q.wp));
        t_c.emplace_back(s, target, Nsq);
        diag_c -= Nsq;
      }
    }
    t_ex.emplace_back(s, s, diag_ex);
    t_sym.emplace_back(s, s, diag_sym);
    t_anti.emplace_back(s, s, diag_anti);
    t_c.emplace_back(s, s, diag_c);
  }

  auto fill = [&](GeneratorMatrices::Sparse& m, std::vector<T>& t) {
    m.resize(gen.n_states, gen.n_states);
    m.setFromTriplets(t.begin(), t.end());
    m.prune(0.0, 0.0);
    t.clear();
    t.shrink_to_fit();
  };
  fill(gen.ex, t_ex);
  fill(gen.ex_sym, t_sym);
  fill(gen.ex_anti, t_anti);
  fill(gen.c, t_c);
  return gen;
}

Eigen::VectorXd stationary_weights(const GeneratorMatrices& gen, const Eigen::VectorXd& lambda) {
  PotentialField field(gen.torus, lambda);
  Eigen::VectorXd mu(gen.n_states);
  for (std::int64_t s = 0; s < gen.n_states; ++s)
    mu[s] = std::exp(log_weight(state_to_config(gen, s), field, *gen.vs));
  return mu;
}

double stationarity_residual(const GeneratorMatrices& gen, const Eigen::VectorXd& lambda) {
  if (!gen.dense_available()) fail(Errc::StateSpaceTooLarge, "dense path requires <= 12 bits");
  Eigen::VectorXd mu = stationary_weights(gen, lambda);
  Eigen::VectorXd res = (gen.ex.transpose() * mu) + (gen.c.transpose() * mu);
  return res.lpNorm<Eigen::Infinity>();
}

AdjointResiduals adjoint_residuals(const GeneratorMatrices& gen, const Eigen::VectorXd& lambda) {
  if (!gen.dense_available()) fail(Errc::StateSpaceTooLarge, "dense path requires <= 12 bits");
  Eigen::VectorXd mu = stationary_weights(gen, lambda);
  Eigen::MatrixXd D = mu.asDiagonal();
  Eigen::MatrixXd sym = Eigen::MatrixXd(gen.ex_sym);
  Eigen::MatrixXd anti = Eigen::MatrixXd(gen.ex_anti);
  Eigen::MatrixXd col = Eigen::MatrixXd(gen.c);
  auto inf_norm = [](const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); };
  return {
      inf_norm(D * sym - sym.transpose() * D),
      inf_norm(D * anti + anti.transpose() * D),
      inf_norm(D * col - col.transpose() * D),
  };
}

double lnc_annihilation(const GeneratorMatrices& gen, const IFieldFunction& f_tilde) {
  std::int64_t n_sites = gen.torus.site_count();
  Eigen::VectorXd f(gen.n_states);
  std::vector<Eigen::VectorXd> field(n_sites);
  for (std::int64_t s = 0; s < gen.n_states; ++s) {
    Configuration cfg = state_to_config(gen, s);
    for (std::int64_t x = 0; x < n_sites; ++x) field[x] = local_mass_momentum(cfg, *gen.vs, x);
    f[s] = f_tilde(field);
  }
  return lnc_residual_raw(gen, f);
}

double lnc_residual_raw(const GeneratorMatrices& gen, const Eigen::VectorXd& f) {
  return (gen.c * f).lpNorm<Eigen::Infinity>();
}

}  // namespace lgk
