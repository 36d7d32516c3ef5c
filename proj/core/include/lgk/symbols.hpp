#pragma once

#include "lgk/rational.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace lgk {

// Declared real numbers asserted linearly independent over the rationals.
// The first symbol is always the rational unit 1.
class SymbolBasis {
public:
  // Creates the basis {1}.
  SymbolBasis();
  // names/values for the symbols beyond the unit (e.g. {"sqrt2"}, {1.41421356...}).
  SymbolBasis(std::vector<std::string> extra_names, std::vector<double> extra_values);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t s) const { return names_[s]; }
  double value(std::size_t s) const { return values_[s]; }

private:
  std::vector<std::string> names_;
  std::vector<double> values_;
};

// Vector in R^d whose components are rational combinations of basis symbols.
struct ExactVector {
  int dim = 0;
  // coeffs[j][s]: coefficient of symbol s in component j.
  std::vector<std::vector<Rational>> coeffs;

  static ExactVector zero(int dim, std::size_t basis_size);
  // Component j = value (single-symbol shortcut over the unit symbol).
  static ExactVector from_rationals(const std::vector<Rational>& comps, std::size_t basis_size);

  Eigen::VectorXd numeric(const SymbolBasis& basis) const;

  ExactVector operator+(const ExactVector& o) const;
  ExactVector operator-(const ExactVector& o) const;
  ExactVector operator*(const Rational& c) const;
  bool operator==(const ExactVector& o) const;
  bool is_zero() const;

  // Canonical text form, usable as a map key ("1/2,0;0,1" style).
  std::string key() const;
};

}  // namespace lgk
