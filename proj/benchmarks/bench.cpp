#include "lgk/dynamics.hpp"
#include "lgk/measure.hpp"
#include "lgk/microcanonical.hpp"
#include "lgk/pde.hpp"
#include "lgk/rng.hpp"
#include "lgk/velocity.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace lgk;

VelocitySet pm1_sqrt2() {
  SymbolBasis basis({"sqrt2"}, {1.4142135623730951});
  ExactVector g1 = ExactVector::zero(1, basis.size());
  g1.coeffs[0][0] = 1;
  ExactVector g2 = ExactVector::zero(1, basis.size());
  g2.coeffs[0][1] = 1;
  PairForm pf;
  pf.v_star = ExactVector::zero(1, basis.size());
  pf.generators = {g1, g2};
  return build_velocity_set(basis, pf);
}

void bm_stepper_proposals(benchmark::State& state) {
  VelocitySet vs = pm1_sqrt2();
  int n = static_cast<int>(state.range(0));
  Torus torus(1, n);
  PotentialField field(torus, Eigen::VectorXd::Zero(2));
  RngStream init(1, 0, RngPurpose::InitialSample);
  Configuration cfg = sample(field, vs, init);

  SimParams params;
  params.vs = &vs;
  params.N = n;
  params.a = 0.5;
  params.horizon = 0.0;
  params.seed = 1;
  params.replica = 0;
  params.validate();
  Stepper stepper(params);
  RngStream rng(1, 0, RngPurpose::Dynamics);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stepper.draw_waiting_time(rng));
    benchmark::DoNotOptimize(stepper.propose(cfg, rng));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_stepper_proposals)->Arg(64)->Arg(256);

void bm_surface_form_apply(benchmark::State& state) {
  VelocitySet vs = pm1_sqrt2();
  SurfaceSet set = enumerate_surfaces(2, vs);
  // Pick the largest surface for a representative sparse apply.
  int best = 0;
  for (std::size_t s = 0; s < set.surfaces.size(); ++s)
    if (set.surfaces[s].members.size() > set.surfaces[best].members.size())
      best = static_cast<int>(s);
  SurfaceForm form(set, best, {FormKind::NnExclusion, FormKind::LocalCollision});
  Eigen::Index n = static_cast<Eigen::Index>(set.surfaces[best].members.size());
  Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  Eigen::VectorXd out(n);
  for (auto _ : state) {
    form.apply(f, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_surface_form_apply);

void bm_pde_step(benchmark::State& state) {
  VelocitySet vs = pm1_sqrt2();
  FourierMode mode;
  mode.k = {1};
  mode.re = Eigen::VectorXd::Zero(2);
  mode.im = Eigen::VectorXd::Zero(2);
  mode.re[0] = 0.3;
  PerturbationField phi(1, {mode}, 0.5);
  int g = static_cast<int>(state.range(0));
  PdeState init = make_pde_state(vs, phi, g);
  double h = 1.0 / g;
  double dt = 0.2 * h * h;
  for (auto _ : state) {
    PdeState s = init;
    benchmark::DoNotOptimize(pde_integrate(std::move(s), 10 * dt, {}, {}, nullptr));
  }
  state.SetItemsProcessed(state.iterations() * 10 * g);
}
BENCHMARK(bm_pde_step)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
