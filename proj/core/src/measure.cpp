#include "lgk/measure.hpp"

#include "lgk/error.hpp"

#include <cmath>
#include <numbers>

namespace lgk {

PotentialField::PotentialField(const Torus& torus, Eigen::VectorXd constant)
    : torus_(&torus), constant_(std::move(constant)) {
  if (!constant_.allFinite()) fail(Errc::ConfigInvalid, "non-finite potential value");
}

PotentialField::PotentialField(const Torus& torus, std::vector<Eigen::VectorXd> per_site)
    : torus_(&torus), per_site_(std::move(per_site)) {
  if (static_cast<std::int64_t>(per_site_.size()) != torus.site_count())
    fail(Errc::ConfigInvalid, "potential field size does not match the torus");
  for (const auto& v : per_site_)
    if (!v.allFinite()) fail(Errc::ConfigInvalid, "non-finite potential value");
}

PerturbationField::PerturbationField(int dim, std::vector<FourierMode> modes,
                                     double scaling_exponent)
    : dim_(dim), modes_(std::move(modes)), a_(scaling_exponent) {
  if (!(a_ > 0.0 && a_ < 1.0)) fail(Errc::ConfigInvalid, "scaling exponent must be in (0,1)");
  for (const auto& m : modes_)
    if (static_cast<int>(m.k.size()) != dim || m.re.size() != dim + 1 || m.im.size() != dim + 1)
      fail(Errc::ConfigInvalid, "Fourier mode shape mismatch");
}

Eigen::VectorXd PerturbationField::eval(const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_ + 1);
  for (const auto& m : modes_) {
    double phase = 0.0;
    for (int j = 0; j < dim_; ++j) phase += m.k[j] * u[j];
    phase *= 2.0 * std::numbers::pi;
    out += m.re * std::cos(phase) + m.im * std::sin(phase);
  }
  return out;
}

PotentialField lambda_field_from_phi(const VelocitySet& vs, const PerturbationField& phi,
                                     const Torus& torus) {
  double N = static_cast<double>(torus.side());
  double scale = std::pow(N, -phi.scaling_exponent());
  std::vector<Eigen::VectorXd> values;
  values.reserve(torus.site_count());
  for (std::int64_t s = 0; s < torus.site_count(); ++s) {
    std::vector<int> c = torus.coords(s);
    Eigen::VectorXd u(torus.dim());
    for (int j = 0; j < torus.dim(); ++j) u[j] = c[j] / N;
    Eigen::VectorXd p = vs.p_star() + scale * phi.eval(u);
    try {
      values.push_back(lambda_of_p(vs, p));
    } catch (const Error& e) {
      if (e.code() == Errc::NewtonDiverged)
        fail(Errc::NewtonDiverged,
             "site " + std::to_string(s) + ": p outside the invertibility neighborhood");
      throw;
    }
  }
  return PotentialField(torus, std::move(values));
}

Configuration sample(const PotentialField& field, const VelocitySet& vs, RngStream& rng) {
  const Torus& torus = field.torus();
  Configuration cfg(torus, vs.species_count());
  for (std::int64_t x = 0; x < torus.site_count(); ++x) {
    const Eigen::VectorXd& lambda = field.at(x);
    for (int v = 0; v < vs.species_count(); ++v)
      if (rng.next_bernoulli(theta(lambda.dot(vs.lifted(v))))) cfg.set(x, v, true);
  }
  return cfg;
}

double log_weight(const Configuration& cfg, const PotentialField& field, const VelocitySet& vs) {
  const Torus& torus = field.torus();
  double out = 0.0;
  for (std::int64_t x = 0; x < torus.site_count(); ++x) {
    const Eigen::VectorXd& lambda = field.at(x);
    for (int v = 0; v < vs.species_count(); ++v) {
      double alpha = lambda.dot(vs.lifted(v));
      // log of e^{alpha eta} / (e^alpha + 1), stable for large |alpha|.
      double log_norm = alpha > 0 ? alpha + std::log1p(std::exp(-alpha))
                                  : std::log1p(std::exp(alpha));
      out += (cfg.get(x, v) ? alpha : 0.0) - log_norm;
    }
  }
  return out;
}

double product_relative_entropy(const PotentialField& field1, const PotentialField& field2,
                                const VelocitySet& vs) {
  const Torus& torus = field1.torus();
  double out = 0.0;
  for (std::int64_t x = 0; x < torus.site_count(); ++x) {
    for (int v = 0; v < vs.species_count(); ++v) {
      double a1 = field1.at(x).dot(vs.lifted(v));
      double a2 = field2.at(x).dot(vs.lifted(v));
      double t1 = theta(a1), t2 = theta(a2);
      out += t1 * std::log(t1 / t2) + (1.0 - t1) * std::log((1.0 - t1) / (1.0 - t2));
    }
  }
  return out;
}

}  // namespace lgk
