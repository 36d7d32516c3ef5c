#include "helpers.hpp"

#include "lgk/error.hpp"
#include "lgk/microcanonical.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace lgk;
using lgk::testing::make_model1_d2;
using lgk::testing::make_pm1_sqrt2;

namespace {

// Direct check of the maximizer condition: nu(k) >= nu(k^q) for every channel.
bool is_weight_maximal(const KSpace& ks, const VelocitySet& vs, int m) {
  for (const Quadruple& q : vs.collision_set()) {
    KMove move = k_move(ks.members[m], q, ks.box_size);
    if (move.p == 0) continue;
    int target = ks.index_of(move.k);
    REQUIRE(target >= 0);
    if (ks.weights[target] > ks.weights[m]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("h_alpha values and monotonicity") {
  CHECK(h_alpha(3, 0, 1) == Rational(1));
  CHECK(h_alpha(3, 0, 0) == Rational(1, 9));
  CHECK(h_alpha(3, 0, 2) == Rational(9));
  CHECK(h_alpha(3, 0, 0) < h_alpha(3, 0, 1));
  CHECK(h_alpha(3, 0, 1) < h_alpha(3, 0, 2));

  CHECK_THROWS_AS((void)h_alpha(3, 0, 3), Error);   // denominator zero
  CHECK_THROWS_AS((void)h_alpha(3, 5, 2), Error);   // k - alpha + 1 < 0
}

TEST_CASE("k_move: collision kernel and conservation") {
  VelocitySet vs = make_pm1_sqrt2();
  Quadruple q{0, 1, 2, 3};

  KMove move = k_move({1, 1, 0, 0}, q, 3);
  CHECK(move.p == BigInt(9));
  CHECK(move.k == std::vector<int>{0, 0, 1, 1});

  KMove frozen = k_move({0, 2, 1, 1}, q, 3);
  CHECK(frozen.p == BigInt(0));
  CHECK(frozen.k == std::vector<int>{0, 2, 1, 1});

  // Momentum conservation, exact: sum_u k^q_u v_u unchanged.
  KSpaceSet kset = enumerate_kspaces(1, vs);
  for (const KSpace& ks : kset.spaces) {
    for (const std::vector<int>& k : ks.members) {
      for (const Quadruple& qq : vs.collision_set()) {
        KMove mv = k_move(k, qq, ks.box_size);
        ExactVector before = ExactVector::zero(1, vs.basis().size());
        ExactVector after = before;
        for (int v = 0; v < 4; ++v) {
          before = before + vs.velocities()[v] * Rational(k[v]);
          after = after + vs.velocities()[v] * Rational(mv.k[v]);
        }
        CHECK((before - after).is_zero());
      }
    }
  }
}

TEST_CASE("sector size bound |D| <= (2M+2)^{n-1}") {
  VelocitySet vs = make_pm1_sqrt2();  // n = 2 generators, d = 1
  for (int m = 1; m <= 3; ++m) {
    KSpaceSet kset = enumerate_kspaces(m, vs);
    std::size_t bound = static_cast<std::size_t>(2 * m + 2);
    for (const KSpace& ks : kset.spaces) CHECK(ks.members.size() <= bound);
  }
}

TEST_CASE("find_maximizer attains the exhaustive maximum") {
  VelocitySet vs = make_pm1_sqrt2();
  for (int m = 1; m <= 2; ++m) {
    KSpaceSet kset = enumerate_kspaces(m, vs);
    for (const KSpace& ks : kset.spaces) {
      int star = find_maximizer(ks, vs);
      BigInt max_w = *std::max_element(ks.weights.begin(), ks.weights.end());
      CHECK(ks.weights[star] == max_w);

      // All condition solutions differ componentwise by at most 1.
      std::vector<int> solutions;
      for (std::size_t i = 0; i < ks.members.size(); ++i)
        if (is_weight_maximal(ks, vs, static_cast<int>(i)))
          solutions.push_back(static_cast<int>(i));
      REQUIRE(!solutions.empty());
      bool star_found =
          std::find(solutions.begin(), solutions.end(), star) != solutions.end();
      CHECK(star_found);
      for (int a : solutions)
        for (int b : solutions)
          for (std::size_t c = 0; c < ks.members[a].size(); ++c)
            CHECK(std::abs(ks.members[a][c] - ks.members[b][c]) <= 1);

      if (ks.members.size() == 1) CHECK(star == 0);
    }
  }
}

TEST_CASE("k-chains: monotone, short, and complete") {
  VelocitySet vs = make_pm1_sqrt2();
  for (int m = 1; m <= 2; ++m) {
    KSpaceSet kset = enumerate_kspaces(m, vs);
    for (const KSpace& ks : kset.spaces) {
      int star = find_maximizer(ks, vs);
      const std::vector<int>& k_star = ks.members[star];

      // Empty chain from the maximizer itself.
      CHECK(build_k_chain(ks, vs, k_star, k_star).empty());

      for (const std::vector<int>& k0 : ks.members) {
        std::vector<ChainStep> chain = build_k_chain(ks, vs, k0, k_star);
        CHECK(chain.size() <= ks.members.size());
        std::vector<int> cur = k0;
        BigInt w = ks.weights[ks.index_of(cur)];
        for (const ChainStep& step : chain) {
          KMove mv = k_move(cur, vs.collision_set()[step.q_index], ks.box_size);
          CHECK(mv.p > 0);
          CHECK(mv.k == step.k);
          BigInt w2 = ks.weights[ks.index_of(step.k)];
          CHECK(w2 >= w);
          w = w2;
          cur = step.k;
        }
        CHECK(cur == k_star);
      }
    }
  }
}

TEST_CASE("variance vs k-space Dirichlet form bound") {
  VelocitySet vs = make_pm1_sqrt2();
  for (int m = 1; m <= 2; ++m) {
    KSpaceSet kset = enumerate_kspaces(m, vs);
    for (const KSpace& ks : kset.spaces) {
      CorSgReport report = verify_cor_sg_k(ks, vs);
      CHECK(report.pass);
      CHECK(report.bound ==
            doctest::Approx(std::pow(static_cast<double>(ks.members.size()), 2)));
      if (ks.members.size() == 1) CHECK(report.ratio == 0.0);
    }
  }
}

TEST_CASE("staircase routes") {
  BoxLattice box2(2, 2);  // 5x5 box, coords in {-2..2}^2
  std::int64_t x = box2.site({0, 0});
  std::int64_t y = box2.site({2, 1});
  std::vector<std::int64_t> route = nn_route(box2, x, y);
  REQUIRE(route.size() == 4);
  CHECK(route[0] == x);
  CHECK(route[1] == box2.site({1, 0}));
  CHECK(route[2] == box2.site({2, 0}));
  CHECK(route[3] == y);

  CHECK(nn_route(box2, x, x) == std::vector<std::int64_t>{x});
}

TEST_CASE("route census: directed bond usage bound") {
  for (int d = 1; d <= 2; ++d) {
    for (int m = 1; m <= 2; ++m) {
      BoxLattice box(d, m);
      std::map<std::pair<std::int64_t, std::int64_t>, long> usage;
      for (std::int64_t x = 0; x < box.site_count(); ++x)
        for (std::int64_t y = 0; y < box.site_count(); ++y) {
          std::vector<std::int64_t> route = nn_route(box, x, y);
          for (std::size_t i = 0; i + 1 < route.size(); ++i)
            ++usage[{route[i], route[i + 1]}];
        }
      long bound = std::lround(std::pow(2 * m + 1, d + 1));
      for (const auto& [bond, count] : usage) CHECK(count <= bound);
    }
  }
}

TEST_CASE("kernel consistency is exact for any canonical member") {
  VelocitySet vs = make_pm1_sqrt2();
  for (int m = 1; m <= 2; ++m) {
    KSpaceSet kset = enumerate_kspaces(m, vs);
    for (const KSpace& ks : kset.spaces) {
      CHECK(kernel_consistency(ks, vs, 0) == 0.0);
      CHECK(kernel_consistency(ks, vs, 1) == 0.0);
    }
  }
}

TEST_CASE("kspace weights are products of binomials") {
  VelocitySet vs = make_model1_d2();
  KSpaceSet kset = enumerate_kspaces(1, vs);
  for (const KSpace& ks : kset.spaces) {
    BigInt total = 0;
    for (std::size_t m = 0; m < ks.members.size(); ++m) {
      BigInt w = 1;
      for (int v = 0; v < vs.species_count(); ++v) w *= binomial(ks.box_size, ks.members[m][v]);
      CHECK(w == ks.weights[m]);
      total += w;
    }
    CHECK(total == ks.total);
  }
}
