#pragma once

#include "lgk/velocity.hpp"

#include <vector>

namespace lgk::testing {

// d=1, V = {+1, -1} via the pair form v_* = 0, generators {1}.
inline VelocitySet make_pm1() {
  SymbolBasis basis;
  PairForm pf;
  pf.v_star = ExactVector::from_rationals({Rational(0)}, basis.size());
  pf.generators = {ExactVector::from_rationals({Rational(1)}, basis.size())};
  return build_velocity_set(basis, pf);
}

// d=1, V = {+1, -1, +sqrt2, -sqrt2} via the pair form with generators {1, sqrt2}.
inline VelocitySet make_pm1_sqrt2() {
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

// d=2, V = {e1, -e1, e2, -e2} via the pair form with generators {e1, e2}.
inline VelocitySet make_model1_d2() {
  SymbolBasis basis;
  ExactVector e1 = ExactVector::from_rationals({Rational(1), Rational(0)}, basis.size());
  ExactVector e2 = ExactVector::from_rationals({Rational(0), Rational(1)}, basis.size());
  PairForm pf;
  pf.v_star = ExactVector::zero(2, basis.size());
  pf.generators = {e1, e2};
  return build_velocity_set(basis, pf);
}

// d=1, single species {+1}, explicit list (no pair form).
inline VelocitySet make_single_plus1() {
  SymbolBasis basis;
  std::vector<ExactVector> vels = {ExactVector::from_rationals({Rational(1)}, basis.size())};
  return build_velocity_set(basis, std::move(vels));
}

}  // namespace lgk::testing
