#pragma once

#include <cmath>

namespace lgk {

// Logistic occupancy curve: density of a species with chemical potential alpha.
inline double theta(double alpha) { return 1.0 / (1.0 + std::exp(-alpha)); }

// theta' = theta(1-theta); also the compressibility chi at density theta(alpha).
inline double theta_prime(double alpha) {
  double t = theta(alpha);
  return t * (1.0 - t);
}

inline double compressibility(double density) { return density * (1.0 - density); }

}  // namespace lgk
