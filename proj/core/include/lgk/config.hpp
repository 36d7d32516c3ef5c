#pragma once

#include "lgk/measure.hpp"
#include "lgk/velocity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lgk {

// Velocity-set definition file: {"dimension": d, "symbols": {name: value},
// "pair_form": {"v_star": vec, "generators": [vec...]}} or {"velocities":
// [vec...]}.  A vector is a list of components; each component is either a
// rational string over the unit symbol or a list of rational strings, one per
// basis symbol (unit first, declared symbols in alphabetical order).
VelocitySet load_velocity_set(const std::string& path);
VelocitySet parse_velocity_set(const std::string& json_text);

struct ExperimentConfig {
  VelocitySet vs;
  double a = 0.0;
  std::vector<int> n_list;
  double horizon = 0.0;
  std::vector<double> snapshot_times;
  int replicas = 1;
  std::vector<FourierMode> phi_modes;
  std::vector<FourierMode> functionals;
  int pde_grid = 64;
  std::uint64_t master_seed = 0;
  std::string tag;  // "theorem-regime" or "exploratory"

  void validate() const;
};

ExperimentConfig load_experiment(const std::string& path);
ExperimentConfig parse_experiment(const std::string& json_text, const std::string& base_dir);

// --threads value if positive, else LGK_THREADS, else 1.
int resolve_threads(int cli_threads);

std::string version_string();

}  // namespace lgk
