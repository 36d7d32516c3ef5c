#include "helpers.hpp"

#include "lgk/error.hpp"
#include "lgk/rng.hpp"
#include "lgk/theta.hpp"
#include "lgk/velocity.hpp"

#include <doctest.h>

#include <cmath>

using namespace lgk;
using lgk::testing::make_model1_d2;
using lgk::testing::make_pm1;
using lgk::testing::make_pm1_sqrt2;
using lgk::testing::make_single_plus1;

namespace {

// Central-difference Jacobian of lambda_of_p at p_star.
Eigen::MatrixXd fd_lambda_jacobian(const VelocitySet& vs, double step) {
  int m = vs.dim() + 1;
  Eigen::MatrixXd jac(m, m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd pp = vs.p_star(), pm = vs.p_star();
    pp[j] += step;
    pm[j] -= step;
    jac.col(j) = (lambda_of_p(vs, pp) - lambda_of_p(vs, pm)) / (2 * step);
  }
  return jac;
}

// Max-norm of the central-difference Hessian of every component of lambda_of_p.
double fd_lambda_hessian_norm(const VelocitySet& vs, double step) {
  int m = vs.dim() + 1;
  double worst = 0.0;
  Eigen::VectorXd center = lambda_of_p(vs, vs.p_star());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd p1 = vs.p_star(), p2 = vs.p_star(), p3 = vs.p_star(), p4 = vs.p_star();
      p1[i] += step;
      p1[j] += step;
      p2[i] += step;
      p2[j] -= step;
      p3[i] -= step;
      p3[j] += step;
      p4[i] -= step;
      p4[j] -= step;
      Eigen::VectorXd h = (lambda_of_p(vs, p1) - lambda_of_p(vs, p2) - lambda_of_p(vs, p3) +
                           lambda_of_p(vs, p4)) /
                          (4 * step * step);
      worst = std::max(worst, h.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("pm1 set: expansion, empty collision set, gram, A, p_star") {
  VelocitySet vs = make_pm1();
  REQUIRE(vs.species_count() == 2);
  CHECK(vs.velocities()[0].numeric(vs.basis())[0] == doctest::Approx(1.0));
  CHECK(vs.velocities()[1].numeric(vs.basis())[0] == doctest::Approx(-1.0));
  CHECK(vs.collision_set().empty());

  Eigen::MatrixXd gram = vs.gram();
  CHECK(gram(0, 0) == doctest::Approx(2.0));
  CHECK(gram(0, 1) == doctest::Approx(0.0));
  CHECK(gram(1, 1) == doctest::Approx(2.0));
  CHECK((vs.a_matrix() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((vs.a_matrix() * vs.gram() - 2 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);

  CHECK(vs.p_star()[0] == doctest::Approx(1.0));
  CHECK(vs.p_star()[1] == doctest::Approx(0.0));
}

TEST_CASE("single velocity: rank-1 gram is not invertible") {
  VelocitySet vs = make_single_plus1();
  Eigen::MatrixXd gram = vs.gram();
  CHECK(gram(0, 0) == doctest::Approx(1.0));
  CHECK(gram(0, 1) == doctest::Approx(1.0));
  CHECK(gram(1, 0) == doctest::Approx(1.0));
  CHECK(gram(1, 1) == doctest::Approx(1.0));
  AvReport report = assumption_av_report(vs);
  CHECK(!report.invertible);
  CHECK(!vs.gram_invertible());
  CHECK_THROWS_AS((void)vs.a_matrix(), Error);
}

TEST_CASE("Model I d=2: collision structure and gram diagonal") {
  VelocitySet vs = make_model1_d2();
  REQUIRE(vs.species_count() == 4);
  REQUIRE(vs.collision_set().size() == 8);
  for (const Quadruple& q : vs.collision_set()) {
    // All channels are (v, -v, w, -w) with distinct pairs.
    Eigen::VectorXd sv = vs.velocities()[q.v].numeric(vs.basis()) +
                         vs.velocities()[q.w].numeric(vs.basis());
    Eigen::VectorXd sp = vs.velocities()[q.vp].numeric(vs.basis()) +
                         vs.velocities()[q.wp].numeric(vs.basis());
    CHECK(sv.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(sp.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(q.v != q.w);
    CHECK(q.vp != q.wp);
    CHECK(q.v != q.vp);
    CHECK(q.v != q.wp);
    CHECK(q.w != q.vp);
    CHECK(q.w != q.wp);
  }

  Eigen::MatrixXd gram = vs.gram();
  CHECK(gram(0, 0) == doctest::Approx(4.0));
  CHECK(gram(1, 1) == doctest::Approx(2.0));
  CHECK(gram(2, 2) == doctest::Approx(2.0));
  CHECK(std::abs(gram(0, 1)) + std::abs(gram(0, 2)) + std::abs(gram(1, 2)) < 1e-15);
  Eigen::MatrixXd a = vs.a_matrix();
  CHECK(a(0, 0) == doctest::Approx(0.5));
  CHECK(a(1, 1) == doctest::Approx(1.0));
  CHECK(a(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("pm1_sqrt2: four velocities, effective collisions, exact closure") {
  VelocitySet vs = make_pm1_sqrt2();
  REQUIRE(vs.species_count() == 4);
  CHECK(!vs.collision_set().empty());

  // Contains the channel (+1, -1, +sqrt2, -sqrt2): indices 0,1,2,3.
  bool found = false;
  for (const Quadruple& q : vs.collision_set())
    if (q.v == 0 && q.w == 1 && q.vp == 2 && q.wp == 3) found = true;
  CHECK(found);

  // Exact momentum closure in rational-symbol arithmetic.
  for (const Quadruple& q : vs.collision_set()) {
    ExactVector diff = vs.velocities()[q.v] + vs.velocities()[q.w] -
                       vs.velocities()[q.vp] - vs.velocities()[q.wp];
    CHECK(diff.is_zero());
  }
}

TEST_CASE("pair collisions pair up plus/minus generators") {
  VelocitySet vs = make_pm1_sqrt2();
  // Species order is [+g1, -g1, +g2, -g2]; every channel must take a
  // {+g_l, -g_l} pair to a {+g_l', -g_l'} pair.
  for (const Quadruple& q : vs.collision_set()) {
    CHECK(q.v / 2 == q.w / 2);
    CHECK(q.v != q.w);
    CHECK(q.vp / 2 == q.wp / 2);
    CHECK(q.vp != q.wp);
    CHECK(q.v / 2 != q.vp / 2);
  }
}

TEST_CASE("span checks") {
  CHECK(check_span(make_model1_d2()).spans);
  CHECK(check_span(make_model1_d2()).rank == 2);
  CHECK(check_span(make_pm1_sqrt2()).spans);
  CHECK(check_span(make_pm1_sqrt2()).rank == 1);

  // Collinear generators in d=2 fail the span check.
  SymbolBasis basis;
  ExactVector e1 = ExactVector::from_rationals({Rational(1), Rational(0)}, basis.size());
  ExactVector e1x2 = ExactVector::from_rationals({Rational(2), Rational(0)}, basis.size());
  PairForm pf;
  pf.v_star = ExactVector::from_rationals({Rational(0), Rational(1)}, basis.size());
  pf.generators = {e1, e1x2};
  VelocitySet collinear = build_velocity_set(basis, pf);
  SpanReport report = check_span(collinear);
  CHECK(!report.spans);
  CHECK(report.rank == 1);

  CHECK_THROWS_AS((void)check_span(make_single_plus1()), Error);
}

TEST_CASE("integer independence") {
  CHECK(check_integer_independence(make_pm1_sqrt2()));
  CHECK(check_integer_independence(make_model1_d2()));

  // Generators {1, 2} over the unit basis satisfy 2 g1 - g2 = 0.
  SymbolBasis basis;
  PairForm pf;
  pf.v_star = ExactVector::from_rationals({Rational(0)}, basis.size());
  pf.generators = {ExactVector::from_rationals({Rational(1)}, basis.size()),
                   ExactVector::from_rationals({Rational(2)}, basis.size())};
  VelocitySet dependent = build_velocity_set(basis, pf);
  CHECK(!check_integer_independence(dependent));
}

TEST_CASE("coupling tensor values for pm1") {
  VelocitySet vs = make_pm1();
  CHECK(vs.coupling(0, 0, 1, 1) == doctest::Approx(2.0));
  CHECK(vs.coupling(0, 1, 0, 1) == doctest::Approx(2.0));
  CHECK(vs.coupling(0, 0, 0, 1) == doctest::Approx(0.0));
  CHECK(vs.coupling(0, 1, 1, 1) == doctest::Approx(0.0));
  CHECK(vs.coupling(1, 0, 0, 1) == doctest::Approx(2.0));
  CHECK(vs.coupling(1, 1, 1, 1) == doctest::Approx(2.0));
  CHECK(vs.coupling(1, 0, 1, 1) == doctest::Approx(0.0));
}

TEST_CASE("coupling tensor symmetric in (i, j)") {
  for (const VelocitySet& vs : {make_pm1(), make_pm1_sqrt2(), make_model1_d2()}) {
    int m = vs.dim() + 1;
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int l = 1; l <= vs.dim(); ++l)
            CHECK(vs.coupling(k, i, j, l) == doctest::Approx(vs.coupling(k, j, i, l)));
  }
}

TEST_CASE("big_p at zero and at ln 3") {
  VelocitySet vs = make_pm1();
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  CHECK((big_p(vs, zero) - vs.p_star()).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::VectorXd lam(2);
  lam << std::log(3.0), 0.0;
  Eigen::VectorXd p = big_p(vs, lam);
  CHECK(p[0] == doctest::Approx(1.5));
  CHECK(p[1] == doctest::Approx(0.0));
}

TEST_CASE("big_p finite-difference Jacobian at zero equals gram / 4") {
  for (const VelocitySet& vs : {make_pm1(), make_pm1_sqrt2(), make_model1_d2()}) {
    int m = vs.dim() + 1;
    double step = 1e-6;
    Eigen::MatrixXd jac(m, m);
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd lp = Eigen::VectorXd::Zero(m), lm = Eigen::VectorXd::Zero(m);
      lp[j] += step;
      lm[j] -= step;
      jac.col(j) = (big_p(vs, lp) - big_p(vs, lm)) / (2 * step);
    }
    CHECK((jac - vs.gram() / 4.0).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((big_p_jacobian(vs, Eigen::VectorXd::Zero(m)) - vs.gram() / 4.0).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("lambda_of_p inverts big_p") {
  VelocitySet vs = make_pm1();
  CHECK(lambda_of_p(vs, vs.p_star()).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::VectorXd p(2);
  p << 1.5, 0.0;
  Eigen::VectorXd lam = lambda_of_p(vs, p);
  CHECK(lam[0] == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(std::abs(lam[1]) < 1e-10);
}

TEST_CASE("lambda_of_p round trip for random small lambda") {
  RngStream rng(7, 0, RngPurpose::Generic);
  for (const VelocitySet& vs : {make_pm1(), make_pm1_sqrt2(), make_model1_d2()}) {
    int m = vs.dim() + 1;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd lam(m);
      for (int j = 0; j < m; ++j) lam[j] = 0.2 * rng.next_double() - 0.1;
      Eigen::VectorXd back = lambda_of_p(vs, big_p(vs, lam));
      CHECK((back - lam).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("lambda_of_p diverges far outside the basin") {
  VelocitySet vs = make_pm1();
  Eigen::VectorXd p(2);
  p << 5.0, 0.0;  // mass above the saturation value 2
  CHECK_THROWS_AS((void)lambda_of_p(vs, p), Error);
}

TEST_CASE("Lambda derivatives: gradient 2A, vanishing Hessian") {
  for (const VelocitySet& vs : {make_pm1(), make_pm1_sqrt2(), make_model1_d2()}) {
    Eigen::MatrixXd jac = fd_lambda_jacobian(vs, 1e-5);
    CHECK((jac - 2.0 * vs.a_matrix()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(fd_lambda_hessian_norm(vs, 1e-4) < 1e-4);
  }
}

TEST_CASE("theta identities") {
  RngStream rng(11, 0, RngPurpose::Generic);
  for (int i = 0; i < 1000; ++i) {
    double alpha = 20.0 * rng.next_double() - 10.0;
    CHECK(std::abs(theta(alpha) + theta(-alpha) - 1.0) < 1e-14);
    double fd = (theta(alpha + 5e-6) - theta(alpha - 5e-6)) / 1e-5;
    CHECK(std::abs(fd - theta_prime(alpha)) < 1e-8);
    CHECK(std::abs(compressibility(theta(alpha)) - theta_prime(alpha)) < 1e-14);
  }
  CHECK(theta(0.0) == doctest::Approx(0.5));
}

TEST_CASE("kappa exponent") {
  CHECK(kappa_exponent(make_pm1()) == 5);        // n=1, d=1
  CHECK(kappa_exponent(make_pm1_sqrt2()) == 7);  // n=2, d=1
  CHECK(kappa_exponent(make_model1_d2()) == 12); // n=2, d=2
  CHECK_THROWS_AS((void)kappa_exponent(make_single_plus1()), Error);
}

TEST_CASE("degenerate and duplicate velocity sets are rejected") {
  SymbolBasis basis;
  // v_* + g = v_* - g when g = 0.
  PairForm pf;
  pf.v_star = ExactVector::from_rationals({Rational(1)}, basis.size());
  pf.generators = {ExactVector::from_rationals({Rational(0)}, basis.size())};
  CHECK_THROWS_AS((void)build_velocity_set(basis, pf), Error);

  std::vector<ExactVector> dup = {ExactVector::from_rationals({Rational(1)}, basis.size()),
                                  ExactVector::from_rationals({Rational(1)}, basis.size())};
  CHECK_THROWS_AS((void)build_velocity_set(basis, std::move(dup)), Error);

  CHECK_THROWS_AS((void)build_velocity_set(basis, std::vector<ExactVector>{}), Error);
}
