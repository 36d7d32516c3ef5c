#include "lgk/harness.hpp"

#include "lgk/error.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace lgk {

namespace {

std::uint64_t replica_key(int N, int r) {
  return (static_cast<std::uint64_t>(N) << 32) | static_cast<std::uint32_t>(r);
}

// Runs task(i) for i in [0, count) on a transient worker pool; tasks write to
// disjoint slots, so the schedule does not affect the output.
void parallel_for(int count, int threads, const std::function<void(int)>& task) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<double> run_replicas(const ExperimentConfig& cfg, int N, int threads,
                                 std::vector<EventCounters>* counters) {
  const VelocitySet& vs = cfg.vs;
  int d = vs.dim();
  PerturbationField phi(d, cfg.phi_modes, cfg.a);
  Torus torus(d, N);
  PotentialField lambda = lambda_field_from_phi(vs, phi, torus);

  std::size_t n_snap = cfg.snapshot_times.size();
  std::size_t n_fun = cfg.functionals.size();
  std::vector<double> values(static_cast<std::size_t>(cfg.replicas) * n_snap * n_fun);
  if (counters) counters->assign(cfg.replicas, EventCounters{});

  parallel_for(cfg.replicas, threads, [&](int r) {
    RngStream init_rng(cfg.master_seed, replica_key(N, r), RngPurpose::InitialSample);
    Configuration initial = sample(lambda, vs, init_rng);

    SimParams params;
    params.vs = &vs;
    params.N = N;
    params.a = cfg.a;
    params.horizon = cfg.horizon;
    params.snapshot_times = cfg.snapshot_times;
    params.seed = cfg.master_seed;
    params.replica = replica_key(N, r);
    Trajectory traj = simulate(params, std::move(initial));

    for (std::size_t i = 0; i < n_snap; ++i)
      for (std::size_t f = 0; f < n_fun; ++f)
        values[(r * n_snap + i) * n_fun + f] =
            empirical_field(traj.snapshots[i], vs, cfg.a, cfg.functionals[f]);
    if (counters) (*counters)[r] = traj.counters;
  });
  return values;
}

ComparisonReport run_comparison(const ExperimentConfig& cfg, int threads) {
  auto start = std::chrono::steady_clock::now();
  cfg.validate();
  const VelocitySet& vs = cfg.vs;
  int d = vs.dim();
  std::size_t n_snap = cfg.snapshot_times.size();
  std::size_t n_fun = cfg.functionals.size();

  // PDE reference, solved once.
  PerturbationField phi(d, cfg.phi_modes, cfg.a);
  PdeState state = make_pde_state(vs, phi, cfg.pde_grid);
  std::vector<FunctionalSample> pde_samples;
  pde_integrate(std::move(state), cfg.horizon, cfg.snapshot_times, cfg.functionals, &pde_samples);
  std::vector<double> pde_value(n_snap * n_fun, 0.0);
  {
    std::size_t snap = 0;
    for (const FunctionalSample& s : pde_samples) {
      while (snap + 1 < n_snap && cfg.snapshot_times[snap] < s.t - 1e-12) ++snap;
      pde_value[snap * n_fun + s.functional_id] = s.value;
    }
  }

  ComparisonReport report;
  for (int N : cfg.n_list) {
    std::vector<double> values = run_replicas(cfg, N, threads);
    int R = cfg.replicas;
    for (std::size_t i = 0; i < n_snap; ++i) {
      for (std::size_t f = 0; f < n_fun; ++f) {
        double sum = 0.0;
        for (int r = 0; r < R; ++r) sum += values[(r * n_snap + i) * n_fun + f];
        double mean = sum / R;
        double ss = 0.0;
        for (int r = 0; r < R; ++r) {
          double x = values[(r * n_snap + i) * n_fun + f] - mean;
          ss += x * x;
        }
        double se = R >= 2 ? std::sqrt(ss / (static_cast<double>(R) * (R - 1))) : 0.0;
        double pv = pde_value[i * n_fun + f];
        double gap = std::abs(mean - pv);
        double gis;
        if (se > 0.0) {
          gis = gap / se;
        } else {
          gis = gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
        report.rows.push_back({N, cfg.snapshot_times[i], static_cast<int>(f), mean, se, pv, gap,
                               gis});
      }
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace lgk
