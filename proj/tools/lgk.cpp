#include "lgk/config.hpp"
#include "lgk/error.hpp"
#include "lgk/exactgen.hpp"
#include "lgk/harness.hpp"
#include "lgk/microcanonical.hpp"
#include "lgk/pde.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lgk;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitTolerance = 2;

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(Errc::IoFailure, "cannot open " + path + " for writing");
  return os;
}

// Accepts either a bare velocity-set file or a full experiment config.
VelocitySet velocity_set_from_config(const std::string& path) {
  try {
    return load_velocity_set(path);
  } catch (const std::exception&) {
    return load_experiment(path).vs;
  }
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) fail(Errc::ConfigInvalid, "empty integer list");
  return out;
}

int cmd_check(const std::string& config) {
  VelocitySet vs = velocity_set_from_config(config);
  std::cout << "species: " << vs.species_count() << "\n";
  std::cout << "effective collisions: " << vs.collision_set().size() << "\n";

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vs.gram());
  std::cout << "gram eigenvalues:";
  for (int i = 0; i < es.eigenvalues().size(); ++i) std::cout << ' ' << es.eigenvalues()[i];
  std::cout << "\n";
  std::cout << "p_star:";
  for (int i = 0; i < vs.p_star().size(); ++i) std::cout << ' ' << vs.p_star()[i];
  std::cout << "\n";

  bool ok = vs.gram_invertible();
  if (ok) {
    std::cout << "A_V:\n" << vs.a_matrix() << "\n";
    std::cout << "coupling (k,i,j,l,value):\n";
    int D = vs.dim() + 1;
    for (int k = 0; k < D; ++k)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          for (int l = 1; l <= vs.dim(); ++l)
            if (vs.coupling(k, i, j, l) != 0.0)
              std::cout << k << ',' << i << ',' << j << ',' << l << ','
                        << format_double(vs.coupling(k, i, j, l)) << "\n";
  } else {
    std::cout << "gram matrix is singular\n";
  }

  if (vs.pair_form()) {
    SpanReport span = check_span(vs);
    bool indep = check_integer_independence(vs);
    std::cout << "span: " << (span.spans ? "yes" : "no") << " (rank " << span.rank << ")\n";
    std::cout << "integer independence: " << (indep ? "yes" : "no") << "\n";
    std::cout << "kappa: " << kappa_exponent(vs) << "\n";
    ok = ok && span.spans && indep;
  } else {
    std::cout << "no pair form declared\n";
  }
  return ok ? kExitOk : kExitTolerance;
}

int cmd_exact(const std::string& config, std::uint64_t seed) {
  ExperimentConfig cfg = load_experiment(config);
  int N = *std::min_element(cfg.n_list.begin(), cfg.n_list.end());
  GeneratorMatrices gen = build_generators(N, cfg.vs.dim(), cfg.a, cfg.vs);
  if (!gen.dense_available())
    fail(Errc::StateSpaceTooLarge, "exact residuals need at most 12 occupancy bits");

  const double tol = 1e-10;
  RngStream rng(seed, 0, RngPurpose::Generic);
  double worst_stat = 0.0, worst_sym = 0.0, worst_anti = 0.0, worst_c = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd lambda(cfg.vs.dim() + 1);
    for (int i = 0; i < lambda.size(); ++i) lambda[i] = 2.0 * rng.next_double() - 1.0;
    worst_stat = std::max(worst_stat, stationarity_residual(gen, lambda));
    AdjointResiduals adj = adjoint_residuals(gen, lambda);
    worst_sym = std::max(worst_sym, adj.sym_ex);
    worst_anti = std::max(worst_anti, adj.anti_ex);
    worst_c = std::max(worst_c, adj.sym_c);
  }
  nlohmann::json j;
  j["N"] = N;
  j["states"] = gen.n_states;
  j["stationarity_residual"] = worst_stat;
  j["symmetric_adjoint_residual"] = worst_sym;
  j["antisymmetric_adjoint_residual"] = worst_anti;
  j["collision_adjoint_residual"] = worst_c;
  j["tolerance"] = tol;
  std::cout << j.dump(2) << "\n";
  bool pass = worst_stat <= tol && worst_sym <= tol && worst_anti <= tol && worst_c <= tol;
  return pass ? kExitOk : kExitTolerance;
}

int cmd_gap(const std::string& config, const std::string& m_list, const std::string& out) {
  VelocitySet vs = velocity_set_from_config(config);
  int kappa = vs.pair_form() ? kappa_exponent(vs) : 0;
  std::ofstream os = open_out(out);
  os << "M,i,size,zero_multiplicity,gap,scaled_gap\n";
  bool ergodic = true;
  for (int M : parse_int_list(m_list)) {
    SurfaceSet set = enumerate_surfaces(M, vs);
    double scale = std::pow(2.0 * M + 1.0, kappa);
    for (std::size_t s = 0; s < set.surfaces.size(); ++s) {
      GapResult r = surface_spectral_gap(set, static_cast<int>(s));
      ergodic = ergodic && r.zero_multiplicity == 1;
      os << M << ",\"" << set.surfaces[s].key.key() << "\"," << set.surfaces[s].members.size()
         << ',' << r.zero_multiplicity << ',' << format_double(r.gap) << ','
         << format_double(std::isfinite(r.gap) ? r.gap * scale : r.gap) << "\n";
    }
  }
  return ergodic ? kExitOk : kExitTolerance;
}

int cmd_chain(const std::string& config, const std::string& m_list, const std::string& out) {
  VelocitySet vs = velocity_set_from_config(config);
  std::ofstream os = open_out(out);
  os << "M,i,k_start,length,sector_size,ok\n";
  bool all_ok = true;
  for (int M : parse_int_list(m_list)) {
    KSpaceSet kset = enumerate_kspaces(M, vs);
    for (const KSpace& ks : kset.spaces) {
      int star = find_maximizer(ks, vs);
      for (const auto& k : ks.members) {
        bool ok = true;
        std::size_t len = 0;
        try {
          len = build_k_chain(ks, vs, k, ks.members[star]).size();
        } catch (const Error&) {
          ok = false;
          all_ok = false;
        }
        os << M << ",\"" << ks.key.key() << "\",\"";
        for (std::size_t i = 0; i < k.size(); ++i) os << (i ? " " : "") << k[i];
        os << "\"," << len << ',' << ks.members.size() << ',' << (ok ? 1 : 0) << "\n";
      }
    }
  }
  return all_ok ? kExitOk : kExitTolerance;
}

int cmd_simulate(const std::string& config, int replicas, int threads, std::uint64_t seed,
                 const std::string& out_dir) {
  ExperimentConfig cfg = load_experiment(config);
  if (replicas > 0) cfg.replicas = replicas;
  if (seed != 0) cfg.master_seed = seed;
  std::filesystem::create_directories(out_dir);

  auto start = std::chrono::steady_clock::now();
  int N = cfg.n_list.front();
  std::vector<EventCounters> counters;
  std::vector<double> values = run_replicas(cfg, N, threads, &counters);

  std::size_t n_snap = cfg.snapshot_times.size();
  std::size_t n_fun = cfg.functionals.size();
  for (int r = 0; r < cfg.replicas; ++r) {
    std::ofstream os = open_out(out_dir + "/replica_" + std::to_string(r) + ".csv");
    os << "t,functional_id,value\n";
    for (std::size_t i = 0; i < n_snap; ++i)
      for (std::size_t f = 0; f < n_fun; ++f)
        os << format_double(cfg.snapshot_times[i]) << ',' << f << ','
           << format_double(values[(r * n_snap + i) * n_fun + f]) << "\n";
  }

  EventCounters total;
  for (const EventCounters& c : counters) {
    total.exchange_attempts += c.exchange_attempts;
    total.exchange_accepts += c.exchange_accepts;
    total.collision_attempts += c.collision_attempts;
    total.collision_accepts += c.collision_accepts;
  }
  nlohmann::json j;
  j["version"] = version_string();
  j["N"] = N;
  j["a"] = cfg.a;
  j["T"] = cfg.horizon;
  j["replicas"] = cfg.replicas;
  j["seed"] = cfg.master_seed;
  j["exchange_attempts"] = total.exchange_attempts;
  j["exchange_accepts"] = total.exchange_accepts;
  j["collision_attempts"] = total.collision_attempts;
  j["collision_accepts"] = total.collision_accepts;
  j["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  open_out(out_dir + "/manifest.json") << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_pde(const std::string& config, int grid, double t_end, const std::string& out) {
  ExperimentConfig cfg = load_experiment(config);
  if (grid > 0) cfg.pde_grid = grid;
  if (t_end >= 0.0) cfg.horizon = t_end;
  PerturbationField phi(cfg.vs.dim(), cfg.phi_modes, cfg.a);
  PdeState state = make_pde_state(cfg.vs, phi, cfg.pde_grid);
  std::vector<double> times = cfg.snapshot_times;
  if (times.empty() || times.back() < cfg.horizon) times.push_back(cfg.horizon);
  std::vector<FunctionalSample> samples;
  pde_integrate(std::move(state), cfg.horizon, times, cfg.functionals, &samples);
  std::ofstream os = open_out(out);
  os << "t,functional_id,value\n";
  for (const FunctionalSample& s : samples)
    os << format_double(s.t) << ',' << s.functional_id << ',' << format_double(s.value) << "\n";
  return kExitOk;
}

int cmd_compare(const std::string& config, int threads, std::uint64_t seed,
                const std::string& out_dir) {
  ExperimentConfig cfg = load_experiment(config);
  if (seed != 0) cfg.master_seed = seed;
  std::filesystem::create_directories(out_dir);
  ComparisonReport report = run_comparison(cfg, threads);
  {
    std::ofstream os = open_out(out_dir + "/report.csv");
    write_csv(report, os);
  }
  {
    std::ofstream os = open_out(out_dir + "/manifest.json");
    write_manifest(report, cfg, os);
  }
  {
    std::ofstream os = open_out(out_dir + "/gaps.svg");
    write_svg(report, os);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice gas toolkit: simulation, exact verification, spectra, PDE comparison"};
  app.require_subcommand(1);

  std::string config, out = "out";
  int threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config, "configuration file")->configurable(false);
  app.add_option("--out", out, "output file or directory");
  app.add_option("--threads", threads, "worker threads (default: LGK_THREADS or 1)");
  app.add_option("--seed", seed, "master seed override");
  app.fallthrough();

  auto* check = app.add_subcommand("check", "velocity-set admissibility report");
  auto* exact = app.add_subcommand("exact", "generator residuals on the enumerated state space");
  auto* gap = app.add_subcommand("gap", "micro-canonical spectral gaps");
  auto* chain = app.add_subcommand("chain", "count-vector chain audits");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble");
  auto* pde = app.add_subcommand("pde", "limit equation solver");
  auto* compare = app.add_subcommand("compare", "ensemble vs PDE comparison");
  auto* version = app.add_subcommand("version", "print the version");

  std::string m_list = "1,2";
  gap->add_option("--M-list", m_list, "comma-separated box radii");
  chain->add_option("--M-list", m_list, "comma-separated box radii");
  int replicas = 0;
  simulate->add_option("--replicas", replicas, "replica count override");
  int grid = 0;
  double t_end = -1.0;
  pde->add_option("--grid", grid, "grid points per axis");
  pde->add_option("--Tend", t_end, "end time override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (version->parsed()) {
      std::cout << lgk::version_string() << "\n";
      return kExitOk;
    }
    if (config.empty()) {
      std::cerr << "error: --config is required\n";
      return kExitInvalid;
    }
    threads = lgk::resolve_threads(threads);
    if (check->parsed()) return cmd_check(config);
    if (exact->parsed()) return cmd_exact(config, seed);
    if (gap->parsed()) return cmd_gap(config, m_list, out);
    if (chain->parsed()) return cmd_chain(config, m_list, out);
    if (simulate->parsed()) return cmd_simulate(config, replicas, threads, seed, out);
    if (pde->parsed()) return cmd_pde(config, grid, t_end, out);
    if (compare->parsed()) return cmd_compare(config, threads, seed, out);
  } catch (const lgk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
