#include "lgk/dynamics.hpp"

#include "lgk/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lgk {

void SimParams::validate() const {
  if (!vs) fail(Errc::ConfigInvalid, "velocity set missing");
  if (N < 1) fail(Errc::ConfigInvalid, "N must be >= 1");
  if (!(a > 0.0 && a < 1.0)) fail(Errc::ConfigInvalid, "a must be in (0,1)");
  if (horizon < 0.0) fail(Errc::ConfigInvalid, "horizon must be nonnegative");
  if (vs->v_max() > std::pow(static_cast<double>(N), 1.0 - a))
    fail(Errc::NegativeRate, "v_max > N^{1-a}: p_N(z,v) can be negative at this N");
  double prev = 0.0;
  for (double t : snapshot_times) {
    if (t < prev || t > horizon)
      fail(Errc::ConfigInvalid, "snapshot times must be sorted within [0, T]");
    prev = t;
  }
}

double exchange_rate(const SimParams& params, const Configuration& cfg, std::int64_t x,
                     std::int64_t y, int v) {
  const Torus& torus = cfg.torus();
  if (!torus.are_neighbors(x, y)) fail(Errc::NotNeighbors, "exchange requires |x-y| = 1");
  if (!cfg.get(x, v) || cfg.get(y, v)) return 0.0;
  // Determine (y-x) . v from the direction of the bond.
  double zv = 0.0;
  for (int dir = 0; dir < 2 * torus.dim(); ++dir) {
    if (torus.neighbor(x, dir) == y) {
      int axis = Torus::direction_axis(dir);
      zv = Torus::direction_sign(dir) * params.vs->lifted(v)[axis + 1];
      break;
    }
  }
  double N = static_cast<double>(params.N);
  double rate = N * N * (1.0 + zv * std::pow(N, params.a - 1.0));
  if (rate < 0.0) fail(Errc::NegativeRate, "negative exchange rate");
  return rate;
}

Stepper::Stepper(const SimParams& params) : params_(&params) {
  params.validate();
  const VelocitySet& vs = *params.vs;
  double N = static_cast<double>(params.N);
  double n_sites = std::pow(N, vs.dim());
  drift_scale_ = std::pow(N, params.a - 1.0);
  exchange_max_rate_ = N * N * (1.0 + vs.v_max() * drift_scale_);
  collision_max_rate_ = N * N;
  exchange_weight_ = n_sites * 2 * vs.dim() * vs.species_count() * exchange_max_rate_;
  total_rate_ = exchange_weight_ +
                n_sites * static_cast<double>(vs.collision_set().size()) * collision_max_rate_;
}

StepResult Stepper::step(Configuration& cfg, RngStream& rng) {
  double wait = draw_waiting_time(rng);
  StepResult res = propose(cfg, rng);
  res.waiting_time = wait;
  return res;
}

StepResult Stepper::propose(Configuration& cfg, RngStream& rng) {
  const VelocitySet& vs = *params_->vs;
  const Torus& torus = cfg.torus();
  StepResult res{};
  res.waiting_time = 0.0;
  res.type = EventType::Rejected;

  bool exchange = rng.next_double() * total_rate_ < exchange_weight_;
  if (exchange) {
    ++counters_.exchange_attempts;
    std::int64_t x = static_cast<std::int64_t>(rng.next_below(torus.site_count()));
    int dir = static_cast<int>(rng.next_below(2 * torus.dim()));
    int v = static_cast<int>(rng.next_below(vs.species_count()));
    std::int64_t y = torus.neighbor(x, dir);
    double u = rng.next_double();
    if (!cfg.get(x, v) || cfg.get(y, v)) return res;
    double zv = Torus::direction_sign(dir) * vs.lifted(v)[Torus::direction_axis(dir) + 1];
    double N = static_cast<double>(params_->N);
    double rate = N * N * (1.0 + zv * drift_scale_);
    if (u * exchange_max_rate_ >= rate) return res;
    apply_swap(cfg, x, y, v);
    ++counters_.exchange_accepts;
    res.type = EventType::Exchange;
    res.site = x;
    res.dir = dir;
    res.species = v;
  } else {
    ++counters_.collision_attempts;
    std::int64_t x = static_cast<std::int64_t>(rng.next_below(torus.site_count()));
    int qi = static_cast<int>(rng.next_below(vs.collision_set().size()));
    const Quadruple& q = vs.collision_set()[qi];
    if (!collision_indicator(cfg, x, q)) return res;
    apply_collision(cfg, x, q);
    ++counters_.collision_accepts;
    res.type = EventType::Collision;
    res.site = x;
    res.quadruple = qi;
  }
  return res;
}

Trajectory simulate(const SimParams& params, Configuration initial) {
  params.validate();
  Stepper stepper(params);
  RngStream rng(params.seed, params.replica, RngPurpose::Dynamics);

  Trajectory traj;
  double t = 0.0;
  std::size_t next_snap = 0;
  auto record_until = [&](double now) {
    while (next_snap < params.snapshot_times.size() && params.snapshot_times[next_snap] <= now) {
      traj.times.push_back(params.snapshot_times[next_snap]);
      traj.snapshots.push_back(initial);
      ++next_snap;
    }
  };

  while (t < params.horizon) {
    double t_next = t + stepper.draw_waiting_time(rng);
    // The state is constant on [t, t_next); snapshots in that window see the
    // pre-event state.
    record_until(std::min(t_next, params.horizon));
    if (t_next > params.horizon) {
      t = t_next;
      break;
    }
    stepper.propose(initial, rng);
    t = t_next;
  }
  // Snapshots at the horizon itself.
  while (next_snap < params.snapshot_times.size()) {
    traj.times.push_back(params.snapshot_times[next_snap]);
    traj.snapshots.push_back(initial);
    ++next_snap;
  }
  traj.counters = stepper.counters();
  return traj;
}

double empirical_field(const Configuration& cfg, const VelocitySet& vs, double a,
                       const FourierMode& F) {
  const Torus& torus = cfg.torus();
  double N = static_cast<double>(torus.side());
  int d = torus.dim();
  double acc = 0.0;
  for (std::int64_t x = 0; x < torus.site_count(); ++x) {
    std::vector<int> c = torus.coords(x);
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase += F.k[j] * c[j] / N;
    phase *= 2.0 * std::numbers::pi;
    Eigen::VectorXd f = F.re * std::cos(phase) + F.im * std::sin(phase);
    acc += f.dot(local_mass_momentum(cfg, vs, x) - vs.p_star());
  }
  return std::pow(N, a - d) * acc;
}

}  // namespace lgk
