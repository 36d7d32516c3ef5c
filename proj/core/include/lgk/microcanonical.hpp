#pragma once

#include "lgk/eigs.hpp"
#include "lgk/rational.hpp"
#include "lgk/symbols.hpp"
#include "lgk/velocity.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lgk {

// Cube of side 2M+1 with free boundary (no wrap), row-major linearization.
// Coordinates run over {-M, ..., M}^d.
class BoxLattice {
public:
  BoxLattice(int dim, int radius);

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  int side() const { return side_; }
  std::int64_t site_count() const { return site_count_; }

  std::vector<int> coords(std::int64_t site) const;
  std::int64_t site(const std::vector<int>& coords) const;

  // Interior nearest-neighbor bonds, each unordered pair listed once.
  const std::vector<std::pair<std::int64_t, std::int64_t>>& bonds() const { return bonds_; }

private:
  int dim_, radius_, side_;
  std::int64_t site_count_;
  std::vector<std::pair<std::int64_t, std::int64_t>> bonds_;
};

// Particle-number sector: all count vectors k sharing the same averaged
// mass-momentum value, with the product-of-binomials weights.
struct KSpace {
  ExactVector key;                        // box-averaged mass-momentum value
  int box_size = 0;                       // number of sites
  std::vector<std::vector<int>> members;  // count vectors, sorted lexicographically
  std::vector<BigInt> weights;            // prod_v binom(box_size, k_v)
  BigInt total = 0;                       // sum of weights = surface size

  // Normalized weight of members[m].
  Rational nu(int m) const { return Rational(weights[m], total); }
  int index_of(const std::vector<int>& k) const;  // -1 when absent
};

struct KSpaceSet {
  const VelocitySet* vs = nullptr;
  int M = 0;
  BoxLattice box{1, 0};
  std::vector<KSpace> spaces;  // sorted by canonical key string
};

KSpaceSet enumerate_kspaces(int M, const VelocitySet& vs);

// All occupancy configurations on the box sharing one averaged mass-momentum
// value.  Configuration code: bit index = site * species_count + v.
struct MicroSurface {
  ExactVector key;
  std::vector<std::uint32_t> members;  // sorted ascending
  BigInt size() const { return BigInt(members.size()); }
};

struct SurfaceSet {
  const VelocitySet* vs = nullptr;
  int M = 0;
  int bits = 0;
  BoxLattice box{1, 0};
  std::vector<MicroSurface> surfaces;        // same order as the KSpaceSet
  std::vector<std::int32_t> surface_of_code;  // size 2^bits
  std::vector<std::int32_t> local_index;      // rank of the code inside its surface

  int index_by_key(const std::string& key) const;  // -1 when absent
};

// Full partition of {0,1}^{box x V}; requires box_size * V <= 24 bits.
SurfaceSet enumerate_surfaces(int M, const VelocitySet& vs);

std::vector<int> species_counts_of_code(const SurfaceSet& set, std::uint32_t code);

// The four Dirichlet forms on a surface, as the PSD operator -L restricted to
// the surface in the uniform inner product.
enum class FormKind {
  NnExclusion,         // unit-rate swaps across interior bonds
  LocalCollision,      // unit-rate on-site collisions, ordered channels
  MeanFieldExclusion,  // all-pair swaps, prefactor 1/box_size
  MeanFieldCollision,  // four-site collisions, prefactor 1/box_size^3
};

class SurfaceForm {
public:
  SurfaceForm(const SurfaceSet& set, int surface, std::vector<FormKind> kinds);

  int dim() const { return n_; }
  void apply(const Eigen::VectorXd& f, Eigen::VectorXd& out) const;
  Eigen::VectorXd diagonal() const;
  Eigen::MatrixXd dense() const;

  // Connected-component label per member under the form's moves.
  std::vector<int> components() const;
  int component_count() const;

private:
  void for_each_move(int m, const std::function<void(int target, double rate)>& emit) const;

  const SurfaceSet* set_;
  int surface_;
  int n_;
  std::vector<FormKind> kinds_;
};

// Smallest nonzero eigenvalue of -(L^{ex,s} + L^c) on the surface plus the
// kernel dimension (ergodic component count).  Dense solve up to 512 states,
// deflated Lanczos above.
GapResult surface_spectral_gap(const SurfaceSet& set, int surface, int max_iter = 600);

// sup A(f)/B(f) over f orthogonal to ker(B); +inf when ker(B) is not
// contained in ker(A).
double surface_rayleigh_ratio(const SurfaceSet& set, int surface,
                              const std::vector<FormKind>& form_a,
                              const std::vector<FormKind>& form_b);

// True when every kernel vector of form B (component indicators) is
// annihilated by form A, so sup A/B is finite.  Much cheaper than computing
// the ratio on large surfaces.
bool surface_ratio_finite(const SurfaceSet& set, int surface,
                          const std::vector<FormKind>& form_a,
                          const std::vector<FormKind>& form_b);

// (k+1)(k-alpha+1) / [(box_size-k)(box_size-k+alpha)], exact.
Rational h_alpha(int box_size, int alpha, int k);

struct KMove {
  std::vector<int> k;
  BigInt p;  // k_v k_w (box_size - k_{v'}) (box_size - k_{w'})
};
KMove k_move(const std::vector<int>& k, const Quadruple& q, int box_size);

// Member index of a count vector where every pair collision is
// weight-nonincreasing; by exhaustive comparison this is the weight maximum.
int find_maximizer(const KSpace& ks, const VelocitySet& vs);

struct ChainStep {
  int q_index;         // index into vs.collision_set()
  std::vector<int> k;  // count vector after the step
};

// Weight-monotone collision chain from k_start to k_star: greedy strict
// ascent, then equal-weight pair swaps.  Throws ChainInvariantViolated when
// the weight decreases or the length exceeds the sector size.
std::vector<ChainStep> build_k_chain(const KSpace& ks, const VelocitySet& vs,
                                     const std::vector<int>& k_start,
                                     const std::vector<int>& k_star);

struct CorSgReport {
  double ratio;  // extremal Var(g) / Dirichlet(g) on the count-vector graph
  double bound;  // |D|^2
  bool pass;
};
CorSgReport verify_cor_sg_k(const KSpace& ks, const VelocitySet& vs);

// Staircase route from x to y, one coordinate at a time in axis order.
std::vector<std::int64_t> nn_route(const BoxLattice& box, std::int64_t x, std::int64_t y);

// Max over (k, q) of |sum_r p(r, q, eta) - p(q, k)|, with eta a canonical
// member built from each count vector (species v fills k_v sites starting at
// `shift`, cyclically); exact integers, expected 0 for any member choice.
double kernel_consistency(const KSpace& ks, const VelocitySet& vs, int shift = 0);

}  // namespace lgk
