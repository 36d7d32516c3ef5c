#include "helpers.hpp"

#include "lgk/error.hpp"
#include "lgk/microcanonical.hpp"
#include "lgk/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

using namespace lgk;
using lgk::testing::make_pm1;
using lgk::testing::make_pm1_sqrt2;
using lgk::testing::make_single_plus1;

TEST_CASE("surface partition at M=1 for pm1") {
  VelocitySet vs = make_pm1();
  SurfaceSet set = enumerate_surfaces(1, vs);
  CHECK(set.bits == 6);

  // Full partition of the 64 configurations.
  std::size_t total = 0;
  for (const MicroSurface& s : set.surfaces) total += s.members.size();
  CHECK(total == 64);
  for (std::uint32_t code = 0; code < 64; ++code) {
    std::int32_t s = set.surface_of_code[code];
    REQUIRE(s >= 0);
    CHECK(set.surfaces[s].members[set.local_index[code]] == code);
  }

  // i = (2/3, 0): one +1 and one -1 particle, 3 x 3 placements.
  ExactVector key = ExactVector::from_rationals({Rational(2, 3), Rational(0)}, vs.basis().size());
  int idx = set.index_by_key(key.key());
  REQUIRE(idx >= 0);
  CHECK(set.surfaces[idx].members.size() == 9);

  // Empty and full configurations are singleton surfaces.
  CHECK(set.surfaces[set.surface_of_code[0]].members.size() == 1);
  CHECK(set.surfaces[set.surface_of_code[63]].members.size() == 1);
}

TEST_CASE("enumerate_surfaces rejects oversized boxes") {
  VelocitySet vs = make_pm1_sqrt2();
  CHECK_THROWS_AS((void)enumerate_surfaces(3, vs), Error);  // 7 sites x 4 species = 28 bits
}

TEST_CASE("path-graph gap: one particle on 3 sites") {
  VelocitySet vs = make_single_plus1();
  SurfaceSet set = enumerate_surfaces(1, vs);
  // Find the one-particle surface.
  int idx = -1;
  for (std::size_t s = 0; s < set.surfaces.size(); ++s)
    if (set.surfaces[s].members.size() == 3) idx = static_cast<int>(s);
  REQUIRE(idx >= 0);

  GapResult gap = surface_spectral_gap(set, idx);
  CHECK(gap.zero_multiplicity == 1);
  CHECK(gap.gap == doctest::Approx(1.0));

  // Full spectrum of the path Laplacian is {0, 1, 3}.
  SurfaceForm form(set, idx, {FormKind::NnExclusion, FormKind::LocalCollision});
  Eigen::MatrixXd dense = form.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  CHECK(es.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(es.eigenvalues()[1] == doctest::Approx(1.0));
  CHECK(es.eigenvalues()[2] == doctest::Approx(3.0));
}

TEST_CASE("singleton surfaces report the +inf sentinel") {
  VelocitySet vs = make_pm1();
  SurfaceSet set = enumerate_surfaces(1, vs);
  int idx = set.surface_of_code[0];
  GapResult gap = surface_spectral_gap(set, idx);
  CHECK(std::isinf(gap.gap));
  CHECK(gap.zero_multiplicity == 1);
}

TEST_CASE("ergodicity at M=1 for pm1_sqrt2: every surface has a simple kernel") {
  VelocitySet vs = make_pm1_sqrt2();
  SurfaceSet set = enumerate_surfaces(1, vs);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < set.surfaces.size(); ++s) {
    GapResult gap = surface_spectral_gap(set, static_cast<int>(s));
    CHECK(gap.zero_multiplicity == 1);
    CHECK(gap.gap > 0.0);
    min_gap = std::min(min_gap, gap.gap);
  }
  CHECK(min_gap > 0.0);
  CHECK(min_gap < std::numeric_limits<double>::infinity());
}

TEST_CASE("uniform vector is in the kernel of all four forms") {
  VelocitySet vs = make_pm1_sqrt2();
  SurfaceSet set = enumerate_surfaces(1, vs);
  ExactVector key = ExactVector::from_rationals({Rational(2, 3), Rational(0)}, vs.basis().size());
  int idx = set.index_by_key(key.key());
  REQUIRE(idx >= 0);

  for (FormKind kind : {FormKind::NnExclusion, FormKind::LocalCollision,
                        FormKind::MeanFieldExclusion, FormKind::MeanFieldCollision}) {
    SurfaceForm form(set, idx, {kind});
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(form.dim());
    Eigen::VectorXd out(form.dim());
    form.apply(ones, out);
    CHECK(out.cwiseAbs().maxCoeff() < 1e-12);
    // PSD: smallest eigenvalue of the dense form is >= -1e-10.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(form.dense());
    CHECK(es.eigenvalues()[0] > -1e-10);
  }
}

TEST_CASE("gap-variance duality on a reference surface") {
  VelocitySet vs = make_pm1_sqrt2();
  SurfaceSet set = enumerate_surfaces(1, vs);
  ExactVector key = ExactVector::from_rationals({Rational(2), Rational(0)}, vs.basis().size());
  int idx = set.index_by_key(key.key());
  if (idx < 0) {
    // Fall back to the largest surface.
    std::size_t best = 0;
    for (std::size_t s = 0; s < set.surfaces.size(); ++s)
      if (set.surfaces[s].members.size() > set.surfaces[best].members.size()) best = s;
    idx = static_cast<int>(best);
  }
  int n = static_cast<int>(set.surfaces[idx].members.size());
  REQUIRE(n >= 2);

  GapResult gap = surface_spectral_gap(set, idx);
  REQUIRE(gap.zero_multiplicity == 1);
  SurfaceForm form(set, idx, {FormKind::NnExclusion, FormKind::LocalCollision});
  Eigen::MatrixXd a = form.dense();

  RngStream rng(41, 0, RngPurpose::Generic);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = 2 * rng.next_double() - 1;
    f.array() -= f.mean();
    double var = f.squaredNorm() / n;
    double dir = f.dot(a * f) / n;
    CHECK(var <= dir / gap.gap * (1 + 1e-8) + 1e-14);
  }
}

TEST_CASE("rayleigh ratio scaling identities") {
  VelocitySet vs = make_pm1_sqrt2();
  SurfaceSet set = enumerate_surfaces(1, vs);
  ExactVector key = ExactVector::from_rationals({Rational(2, 3), Rational(0)}, vs.basis().size());
  int idx = set.index_by_key(key.key());
  REQUIRE(idx >= 0);

  double one = surface_rayleigh_ratio(set, idx, {FormKind::NnExclusion}, {FormKind::NnExclusion});
  CHECK(one == doctest::Approx(1.0).epsilon(1e-8));
  double two = surface_rayleigh_ratio(set, idx, {FormKind::NnExclusion, FormKind::NnExclusion},
                                      {FormKind::NnExclusion});
  CHECK(two == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("mean-field exclusion vs nearest-neighbor: M^2 bound (single species)") {
  VelocitySet vs = make_single_plus1();
  std::map<int, double> worst;
  for (int m = 1; m <= 3; ++m) {
    SurfaceSet set = enumerate_surfaces(m, vs);
    double w = 0.0;
    for (std::size_t s = 0; s < set.surfaces.size(); ++s) {
      double ratio = surface_rayleigh_ratio(set, static_cast<int>(s),
                                            {FormKind::MeanFieldExclusion}, {FormKind::NnExclusion});
      CHECK(std::isfinite(ratio));
      w = std::max(w, ratio);
    }
    worst[m] = w / (m * m);
  }
  // ratio / M^2 bounded across M: within a fixed constant of each other.
  for (int m = 1; m <= 3; ++m) {
    CHECK(worst[m] > 0.0);
    CHECK(worst[m] < 10.0 * worst[1] + 10.0);
  }
}

TEST_CASE("nu-bar disintegration matches surface counting exactly") {
  VelocitySet vs = make_pm1_sqrt2();
  KSpaceSet kset = enumerate_kspaces(1, vs);
  SurfaceSet sset = enumerate_surfaces(1, vs);
  REQUIRE(kset.spaces.size() == sset.surfaces.size());

  for (std::size_t s = 0; s < kset.spaces.size(); ++s) {
    const KSpace& ks = kset.spaces[s];
    const MicroSurface& surf = sset.surfaces[s];
    CHECK(ks.key.key() == surf.key.key());
    CHECK(ks.total == surf.size());

    // Count surface members per species-count vector.
    std::map<std::vector<int>, long> counts;
    for (std::uint32_t code : surf.members) ++counts[species_counts_of_code(sset, code)];
    REQUIRE(counts.size() == ks.members.size());
    Rational nu_sum = 0;
    for (std::size_t m = 0; m < ks.members.size(); ++m) {
      CHECK(BigInt(counts[ks.members[m]]) == ks.weights[m]);
      nu_sum += ks.nu(static_cast<int>(m));
    }
    CHECK(nu_sum == Rational(1));
  }
}

TEST_CASE("surface forms connect exactly the surface (component counts)") {
  VelocitySet vs = make_pm1_sqrt2();
  SurfaceSet set = enumerate_surfaces(1, vs);
  for (std::size_t s = 0; s < set.surfaces.size(); ++s) {
    SurfaceForm local(set, static_cast<int>(s),
                      {FormKind::NnExclusion, FormKind::LocalCollision});
    CHECK(local.component_count() == 1);
  }
}

TEST_CASE("ratio finiteness shortcut agrees with the dense ratio") {
  VelocitySet vs = make_pm1_sqrt2();
  SurfaceSet set = enumerate_surfaces(1, vs);
  for (std::size_t s = 0; s < set.surfaces.size(); ++s) {
    double ratio = surface_rayleigh_ratio(
        set, static_cast<int>(s), {FormKind::MeanFieldCollision},
        {FormKind::MeanFieldExclusion, FormKind::LocalCollision});
    bool finite = surface_ratio_finite(set, static_cast<int>(s), {FormKind::MeanFieldCollision},
                                       {FormKind::MeanFieldExclusion, FormKind::LocalCollision});
    CHECK(std::isfinite(ratio) == finite);
  }
}
