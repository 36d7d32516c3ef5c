#pragma once

#include "lgk/velocity.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace lgk {

// d-dimensional discrete torus of side N, row-major site linearization with
// precomputed neighbor tables (2d neighbors per site).
class Torus {
public:
  Torus(int dim, int side);

  int dim() const { return dim_; }
  int side() const { return side_; }
  std::int64_t site_count() const { return site_count_; }

  std::vector<int> coords(std::int64_t site) const;
  std::int64_t site(const std::vector<int>& coords) const;

  // Neighbor in direction dir = 2*axis + (sign > 0 ? 1 : 0).
  std::int64_t neighbor(std::int64_t site, int dir) const {
    return neighbors_[site * 2 * dim_ + dir];
  }
  static int direction_axis(int dir) { return dir / 2; }
  static int direction_sign(int dir) { return (dir % 2) ? +1 : -1; }

  bool are_neighbors(std::int64_t x, std::int64_t y) const;

private:
  int dim_, side_;
  std::int64_t site_count_;
  std::vector<std::int64_t> strides_;
  std::vector<std::int64_t> neighbors_;
};

// Occupancy field eta_x(v) in {0,1} with cached per-species particle counts.
// Bit index = site * species_count + v, packed into 64-bit words.
class Configuration {
public:
  Configuration(const Torus& torus, int species_count);

  const Torus& torus() const { return *torus_; }
  int species_count() const { return species_count_; }

  bool get(std::int64_t site, int v) const {
    std::uint64_t b = bit_index(site, v);
    return (words_[b >> 6] >> (b & 63)) & 1;
  }
  void set(std::int64_t site, int v, bool value);

  // Occupancy bits of one site as a mask (species_count <= 64).
  std::uint64_t site_mask(std::int64_t site) const;

  const std::vector<std::int64_t>& species_counts() const { return counts_; }
  std::int64_t count(int v) const { return counts_[v]; }

  // Conserved totals sum_x I(eta_x), computed from the integer species counts.
  Eigen::VectorXd totals(const VelocitySet& vs) const;

  // Full recount of the cache; used by tests to validate incremental updates.
  std::vector<std::int64_t> recount() const;

  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const Configuration& o) const {
    return species_count_ == o.species_count_ && words_ == o.words_;
  }

private:
  std::uint64_t bit_index(std::int64_t site, int v) const {
    return static_cast<std::uint64_t>(site) * species_count_ + v;
  }

  const Torus* torus_;
  int species_count_;
  std::vector<std::uint64_t> words_;
  std::vector<std::int64_t> counts_;
};

// Box x + Lambda_M wrapped around the torus.
struct Box {
  std::int64_t center;
  int radius;
  std::vector<std::int64_t> members;  // (2M+1)^d sites
};

Box make_box(const Torus& torus, std::int64_t center, int radius);

Eigen::VectorXd local_mass_momentum(const Configuration& cfg, const VelocitySet& vs,
                                    std::int64_t x);
Eigen::VectorXd block_average(const Configuration& cfg, const VelocitySet& vs, std::int64_t x,
                              int radius);

// Swaps occupancies of species v at neighboring sites x, y.
void apply_swap(Configuration& cfg, std::int64_t x, std::int64_t y, int v);

// 0/1 indicator that collision q can happen at x.
int collision_indicator(const Configuration& cfg, std::int64_t x, const Quadruple& q);

// Applies collision q at x; requires collision_indicator == 1.
void apply_collision(Configuration& cfg, std::int64_t x, const Quadruple& q);

// Byte-exact snapshot format: ASCII header "lgkcfg d N V\n" followed by the
// species order line and the packed occupancy bits, little-endian bit order
// within bytes (bit index = site * V + v).
void write_snapshot(std::ostream& os, const Configuration& cfg);
Configuration read_snapshot(std::istream& is, const Torus& torus);

}  // namespace lgk
