#include "lgk/lattice.hpp"

#include "lgk/error.hpp"

#include <istream>
#include <ostream>

namespace lgk {

Torus::Torus(int dim, int side) : dim_(dim), side_(side) {
  if (dim < 1 || side < 1) fail(Errc::ConfigInvalid, "torus needs dim >= 1 and side >= 1");
  site_count_ = 1;
  strides_.assign(dim, 1);
  for (int j = dim - 1; j >= 0; --j) {
    strides_[j] = site_count_;
    site_count_ *= side;
  }
  neighbors_.resize(site_count_ * 2 * dim);
  std::vector<int> c(dim);
  for (std::int64_t s = 0; s < site_count_; ++s) {
    std::int64_t rem = s;
    for (int j = 0; j < dim; ++j) {
      c[j] = static_cast<int>(rem / strides_[j]);
      rem %= strides_[j];
    }
    for (int j = 0; j < dim; ++j) {
      int minus = (c[j] + side - 1) % side;
      int plus = (c[j] + 1) % side;
      neighbors_[s * 2 * dim + 2 * j] = s + (minus - c[j]) * strides_[j];
      neighbors_[s * 2 * dim + 2 * j + 1] = s + (plus - c[j]) * strides_[j];
    }
  }
}

std::vector<int> Torus::coords(std::int64_t site) const {
  std::vector<int> c(dim_);
  for (int j = 0; j < dim_; ++j) {
    c[j] = static_cast<int>(site / strides_[j]);
    site %= strides_[j];
  }
  return c;
}

std::int64_t Torus::site(const std::vector<int>& coords) const {
  std::int64_t s = 0;
  for (int j = 0; j < dim_; ++j) {
    int c = ((coords[j] % side_) + side_) % side_;
    s += c * strides_[j];
  }
  return s;
}

bool Torus::are_neighbors(std::int64_t x, std::int64_t y) const {
  for (int dir = 0; dir < 2 * dim_; ++dir)
    if (neighbor(x, dir) == y) return true;
  return false;
}

Configuration::Configuration(const Torus& torus, int species_count)
    : torus_(&torus), species_count_(species_count) {
  if (species_count < 1 || species_count > 64)
    fail(Errc::ConfigInvalid, "species count must be in [1, 64]");
  std::uint64_t bits = static_cast<std::uint64_t>(torus.site_count()) * species_count;
  words_.assign((bits + 63) / 64, 0);
  counts_.assign(species_count, 0);
}

void Configuration::set(std::int64_t site, int v, bool value) {
  std::uint64_t b = bit_index(site, v);
  std::uint64_t word = words_[b >> 6];
  std::uint64_t mask = 1ull << (b & 63);
  bool old = word & mask;
  if (old == value) return;
  words_[b >> 6] = value ? (word | mask) : (word & ~mask);
  counts_[v] += value ? 1 : -1;
}

std::uint64_t Configuration::site_mask(std::int64_t site) const {
  std::uint64_t first = bit_index(site, 0);
  std::uint64_t w = first >> 6, off = first & 63;
  std::uint64_t lo = words_[w] >> off;
  if (off + species_count_ > 64 && w + 1 < words_.size()) lo |= words_[w + 1] << (64 - off);
  return species_count_ == 64 ? lo : lo & ((1ull << species_count_) - 1);
}

Eigen::VectorXd Configuration::totals(const VelocitySet& vs) const {
  // Accumulate exact symbol coordinates first so that any move conserving the
  // totals exactly also leaves the rounded doubles bit-identical.
  ExactVector acc = ExactVector::zero(vs.dim() + 1, vs.basis().size());
  for (int v = 0; v < species_count_; ++v)
    acc = acc + vs.lifted_exact(v) * Rational(counts_[v]);
  return acc.numeric(vs.basis());
}

std::vector<std::int64_t> Configuration::recount() const {
  std::vector<std::int64_t> c(species_count_, 0);
  for (std::int64_t s = 0; s < torus_->site_count(); ++s)
    for (int v = 0; v < species_count_; ++v)
      if (get(s, v)) ++c[v];
  return c;
}

Box make_box(const Torus& torus, std::int64_t center, int radius) {
  if (2 * radius + 1 > torus.side()) fail(Errc::BoxTooLarge, "2M+1 exceeds the torus side");
  Box box{center, radius, {}};
  std::vector<int> cc = torus.coords(center);
  int side = 2 * radius + 1;
  std::int64_t n = 1;
  for (int j = 0; j < torus.dim(); ++j) n *= side;
  std::vector<int> offset(torus.dim());
  for (std::int64_t m = 0; m < n; ++m) {
    std::int64_t rem = m;
    std::vector<int> c = cc;
    for (int j = torus.dim() - 1; j >= 0; --j) {
      c[j] += static_cast<int>(rem % side) - radius;
      rem /= side;
    }
    box.members.push_back(torus.site(c));
  }
  return box;
}

Eigen::VectorXd local_mass_momentum(const Configuration& cfg, const VelocitySet& vs,
                                    std::int64_t x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(vs.dim() + 1);
  std::uint64_t mask = cfg.site_mask(x);
  while (mask) {
    int v = __builtin_ctzll(mask);
    out += vs.lifted(v);
    mask &= mask - 1;
  }
  return out;
}

Eigen::VectorXd block_average(const Configuration& cfg, const VelocitySet& vs, std::int64_t x,
                              int radius) {
  Box box = make_box(cfg.torus(), x, radius);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(vs.dim() + 1);
  for (std::int64_t z : box.members) out += local_mass_momentum(cfg, vs, z);
  return out / static_cast<double>(box.members.size());
}

void apply_swap(Configuration& cfg, std::int64_t x, std::int64_t y, int v) {
  if (!cfg.torus().are_neighbors(x, y)) fail(Errc::NotNeighbors, "swap requires |x-y| = 1");
  bool bx = cfg.get(x, v), by = cfg.get(y, v);
  if (bx == by) return;
  cfg.set(x, v, by);
  cfg.set(y, v, bx);
}

int collision_indicator(const Configuration& cfg, std::int64_t x, const Quadruple& q) {
  std::uint64_t mask = cfg.site_mask(x);
  std::uint64_t need = (1ull << q.v) | (1ull << q.w);
  std::uint64_t forbid = (1ull << q.vp) | (1ull << q.wp);
  return ((mask & need) == need && (mask & forbid) == 0) ? 1 : 0;
}

void apply_collision(Configuration& cfg, std::int64_t x, const Quadruple& q) {
  if (!collision_indicator(cfg, x, q))
    fail(Errc::CollisionNotEnabled, "indicator is 0 for this collision");
  cfg.set(x, q.v, false);
  cfg.set(x, q.w, false);
  cfg.set(x, q.vp, true);
  cfg.set(x, q.wp, true);
}

void write_snapshot(std::ostream& os, const Configuration& cfg) {
  os << "lgkcfg " << cfg.torus().dim() << ' ' << cfg.torus().side() << ' '
     << cfg.species_count() << '\n';
  os << "species";
  for (int v = 0; v < cfg.species_count(); ++v) os << ' ' << v;
  os << '\n';
  std::uint64_t bits =
      static_cast<std::uint64_t>(cfg.torus().site_count()) * cfg.species_count();
  std::uint64_t bytes = (bits + 7) / 8;
  const auto& words = cfg.words();
  for (std::uint64_t b = 0; b < bytes; ++b)
    os.put(static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xFF));
}

Configuration read_snapshot(std::istream& is, const Torus& torus) {
  std::string magic;
  int d, N, V;
  is >> magic >> d >> N >> V;
  if (!is || magic != "lgkcfg") fail(Errc::IoFailure, "bad snapshot header");
  if (d != torus.dim() || N != torus.side())
    fail(Errc::IoFailure, "snapshot geometry does not match the torus");
  std::string line;
  std::getline(is, line);  // rest of header line
  std::getline(is, line);  // species order line
  Configuration cfg(torus, V);
  std::uint64_t bits = static_cast<std::uint64_t>(torus.site_count()) * V;
  std::uint64_t bytes = (bits + 7) / 8;
  for (std::uint64_t b = 0; b < bytes; ++b) {
    int ch = is.get();
    if (ch == EOF) fail(Errc::IoFailure, "snapshot truncated");
    for (int bit = 0; bit < 8; ++bit) {
      std::uint64_t idx = 8 * b + bit;
      if (idx >= bits) break;
      if ((ch >> bit) & 1) cfg.set(static_cast<std::int64_t>(idx / V), static_cast<int>(idx % V), true);
    }
  }
  return cfg;
}

}  // namespace lgk
