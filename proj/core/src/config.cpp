#include "lgk/config.hpp"

#include "lgk/error.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lgk {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::ConfigInvalid, "malformed JSON in " + what);
  return j;
}

std::vector<Rational> parse_component(const json& c, std::size_t basis_size) {
  std::vector<Rational> coeffs(basis_size, Rational(0));
  if (c.is_string()) {
    coeffs[0] = parse_rational(c.get<std::string>());
  } else if (c.is_number_integer()) {
    coeffs[0] = Rational(c.get<long long>());
  } else if (c.is_array()) {
    if (c.size() != basis_size)
      fail(Errc::ConfigInvalid, "component coefficient list does not match the symbol count");
    for (std::size_t s = 0; s < basis_size; ++s) coeffs[s] = parse_rational(c[s].get<std::string>());
  } else {
    fail(Errc::ConfigInvalid, "vector component must be a rational string or a list");
  }
  return coeffs;
}

ExactVector parse_vector(const json& v, int dim, std::size_t basis_size) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    fail(Errc::ConfigInvalid, "vector must list exactly one entry per dimension");
  ExactVector out = ExactVector::zero(dim, basis_size);
  for (int j = 0; j < dim; ++j) out.coeffs[j] = parse_component(v[j], basis_size);
  return out;
}

FourierMode parse_mode(const json& m, int d) {
  FourierMode f;
  f.k = m.at("k").get<std::vector<int>>();
  if (static_cast<int>(f.k.size()) != d) fail(Errc::ConfigInvalid, "mode k must have d entries");
  auto vec = [&](const char* name) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d + 1);
    if (m.contains(name)) {
      auto raw = m.at(name).get<std::vector<double>>();
      if (static_cast<int>(raw.size()) != d + 1)
        fail(Errc::ConfigInvalid, std::string(name) + " must have d+1 entries");
      for (int i = 0; i <= d; ++i) out[i] = raw[i];
    }
    return out;
  };
  f.re = vec("re");
  f.im = vec("im");
  return f;
}

VelocitySet velocity_set_from_json(const json& j) {
  int d = j.at("dimension").get<int>();
  std::vector<std::string> names;
  std::vector<double> values;
  if (j.contains("symbols")) {
    // nlohmann objects iterate keys alphabetically, fixing the symbol order.
    for (const auto& [name, value] : j.at("symbols").items()) {
      names.push_back(name);
      values.push_back(value.get<double>());
    }
  }
  SymbolBasis basis(names, values);

  if (j.contains("pair_form")) {
    const json& pf = j.at("pair_form");
    PairForm form;
    form.v_star = parse_vector(pf.at("v_star"), d, basis.size());
    for (const json& g : pf.at("generators")) form.generators.push_back(parse_vector(g, d, basis.size()));
    return build_velocity_set(basis, form);
  }
  if (j.contains("velocities")) {
    std::vector<ExactVector> vel;
    for (const json& v : j.at("velocities")) vel.push_back(parse_vector(v, d, basis.size()));
    return build_velocity_set(basis, std::move(vel));
  }
  fail(Errc::ConfigInvalid, "velocity set needs either pair_form or velocities");
}

}  // namespace

VelocitySet parse_velocity_set(const std::string& json_text) {
  return velocity_set_from_json(parse_json(json_text, "velocity set"));
}

VelocitySet load_velocity_set(const std::string& path) {
  return parse_velocity_set(slurp(path));
}

void ExperimentConfig::validate() const {
  if (!(a > 0.0 && a < 1.0)) fail(Errc::ConfigInvalid, "a must be in (0,1)");
  if (n_list.empty()) fail(Errc::ConfigInvalid, "N list is empty");
  for (int n : n_list)
    if (n < 2) fail(Errc::ConfigInvalid, "each N must be >= 2");
  if (horizon < 0.0) fail(Errc::ConfigInvalid, "T must be nonnegative");
  if (replicas < 1) fail(Errc::ConfigInvalid, "replicas must be >= 1");
  if (pde_grid < 3) fail(Errc::ConfigInvalid, "pde grid too small");
  if (tag != "theorem-regime" && tag != "exploratory")
    fail(Errc::ConfigInvalid, "tag must be theorem-regime or exploratory");
  if (tag == "theorem-regime") {
    if (!vs.pair_form())
      fail(Errc::ConfigInvalid, "theorem-regime requires a pair-form velocity set");
    if (!check_integer_independence(vs))
      fail(Errc::ConfigInvalid, "theorem-regime requires integer-independent generators");
    int kappa = kappa_exponent(vs);
    double limit = static_cast<double>(vs.dim()) / (kappa + 2 * vs.dim());
    if (!(a < limit))
      fail(Errc::ConfigInvalid, "theorem-regime requires a < d/(kappa+2d) = " +
                                    std::to_string(limit));
  }
}

ExperimentConfig parse_experiment(const std::string& json_text, const std::string& base_dir) {
  json j = parse_json(json_text, "experiment config");
  ExperimentConfig cfg;
  const json& vset = j.at("velocity_set");
  if (vset.is_string()) {
    std::filesystem::path p = vset.get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    cfg.vs = load_velocity_set(p.string());
  } else {
    cfg.vs = velocity_set_from_json(vset);
  }
  int d = cfg.vs.dim();
  cfg.a = j.at("a").get<double>();
  cfg.n_list = j.at("N_list").get<std::vector<int>>();
  cfg.horizon = j.at("T").get<double>();
  cfg.snapshot_times = j.value("snapshot_times", std::vector<double>{cfg.horizon});
  cfg.replicas = j.value("replicas", 1);
  for (const json& m : j.value("phi_modes", json::array())) cfg.phi_modes.push_back(parse_mode(m, d));
  for (const json& m : j.value("functionals", json::array()))
    cfg.functionals.push_back(parse_mode(m, d));
  cfg.pde_grid = j.value("pde_grid", 64);
  cfg.master_seed = j.value("seed", std::uint64_t{0});
  cfg.tag = j.value("tag", "exploratory");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  return parse_experiment(slurp(path), std::filesystem::path(path).parent_path().string());
}

int resolve_threads(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("LGK_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::string version_string() { return "lgk 0.1.0"; }

}  // namespace lgk
