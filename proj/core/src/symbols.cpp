#include "lgk/symbols.hpp"

#include "lgk/error.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace lgk {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DuplicateVelocity: return "DuplicateVelocity";
    case Errc::EmptySet: return "EmptySet";
    case Errc::DegeneratePairForm: return "DegeneratePairForm";
    case Errc::MissingPairForm: return "MissingPairForm";
    case Errc::GramNotInvertible: return "GramNotInvertible";
    case Errc::NewtonDiverged: return "NewtonDiverged";
    case Errc::NotNeighbors: return "NotNeighbors";
    case Errc::CollisionNotEnabled: return "CollisionNotEnabled";
    case Errc::BoxTooLarge: return "BoxTooLarge";
    case Errc::NegativeRate: return "NegativeRate";
    case Errc::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case Errc::EigensolveFailure: return "EigensolveFailure";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::NoSolution: return "NoSolution";
    case Errc::ChainInvariantViolated: return "ChainInvariantViolated";
    case Errc::BlowUpDetected: return "BlowUpDetected";
    case Errc::IoFailure: return "IoFailure";
    case Errc::ConfigInvalid: return "ConfigInvalid";
  }
  return "UnknownError";
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::exception&) {
    fail(Errc::ConfigInvalid, "bad rational literal '" + s + "'");
  }
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

BigInt binomial(long n, long k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (k > n - k) k = n - k;
  BigInt out = 1;
  for (long j = 1; j <= k; ++j) {
    out *= n - k + j;
    out /= j;
  }
  return out;
}

SymbolBasis::SymbolBasis() : names_{"1"}, values_{1.0} {}

SymbolBasis::SymbolBasis(std::vector<std::string> extra_names, std::vector<double> extra_values)
    : SymbolBasis() {
  if (extra_names.size() != extra_values.size())
    fail(Errc::ConfigInvalid, "symbol names/values size mismatch");
  std::set<std::string> seen{"1"};
  for (std::size_t s = 0; s < extra_names.size(); ++s) {
    if (!seen.insert(extra_names[s]).second)
      fail(Errc::ConfigInvalid, "duplicate symbol '" + extra_names[s] + "'");
    if (!std::isfinite(extra_values[s]))
      fail(Errc::ConfigInvalid, "non-finite symbol value for '" + extra_names[s] + "'");
    names_.push_back(std::move(extra_names[s]));
    values_.push_back(extra_values[s]);
  }
}

ExactVector ExactVector::zero(int dim, std::size_t basis_size) {
  ExactVector v;
  v.dim = dim;
  v.coeffs.assign(dim, std::vector<Rational>(basis_size, Rational(0)));
  return v;
}

ExactVector ExactVector::from_rationals(const std::vector<Rational>& comps, std::size_t basis_size) {
  ExactVector v = zero(static_cast<int>(comps.size()), basis_size);
  for (std::size_t j = 0; j < comps.size(); ++j) v.coeffs[j][0] = comps[j];
  return v;
}

Eigen::VectorXd ExactVector::numeric(const SymbolBasis& basis) const {
  Eigen::VectorXd out(dim);
  for (int j = 0; j < dim; ++j) {
    double acc = 0.0;
    for (std::size_t s = 0; s < coeffs[j].size(); ++s)
      acc += to_double(coeffs[j][s]) * basis.value(s);
    out[j] = acc;
  }
  return out;
}

ExactVector ExactVector::operator+(const ExactVector& o) const {
  ExactVector out = *this;
  for (int j = 0; j < dim; ++j)
    for (std::size_t s = 0; s < coeffs[j].size(); ++s) out.coeffs[j][s] += o.coeffs[j][s];
  return out;
}

ExactVector ExactVector::operator-(const ExactVector& o) const {
  ExactVector out = *this;
  for (int j = 0; j < dim; ++j)
    for (std::size_t s = 0; s < coeffs[j].size(); ++s) out.coeffs[j][s] -= o.coeffs[j][s];
  return out;
}

ExactVector ExactVector::operator*(const Rational& c) const {
  ExactVector out = *this;
  for (auto& row : out.coeffs)
    for (auto& x : row) x *= c;
  return out;
}

bool ExactVector::operator==(const ExactVector& o) const {
  return dim == o.dim && coeffs == o.coeffs;
}

bool ExactVector::is_zero() const {
  for (const auto& row : coeffs)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

std::string ExactVector::key() const {
  std::ostringstream os;
  for (int j = 0; j < dim; ++j) {
    if (j) os << ';';
    for (std::size_t s = 0; s < coeffs[j].size(); ++s) {
      if (s) os << ',';
      os << coeffs[j][s];
    }
  }
  return os.str();
}

}  // namespace lgk
