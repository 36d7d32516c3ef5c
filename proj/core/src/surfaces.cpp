#include "lgk/microcanonical.hpp"

#include "lgk/error.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

namespace lgk {

namespace {

inline int bit_of(std::int64_t site, int v, int V) { return static_cast<int>(site) * V + v; }

// Disjoint-set forest over member indices.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

BoxLattice::BoxLattice(int dim, int radius) : dim_(dim), radius_(radius), side_(2 * radius + 1) {
  site_count_ = 1;
  for (int j = 0; j < dim_; ++j) site_count_ *= side_;
  for (std::int64_t s = 0; s < site_count_; ++s) {
    std::vector<int> c = coords(s);
    for (int j = 0; j < dim_; ++j) {
      if (c[j] < radius_) {
        std::vector<int> c2 = c;
        ++c2[j];
        bonds_.emplace_back(s, site(c2));
      }
    }
  }
}

std::vector<int> BoxLattice::coords(std::int64_t s) const {
  std::vector<int> c(dim_);
  for (int j = dim_ - 1; j >= 0; --j) {
    c[j] = static_cast<int>(s % side_) - radius_;
    s /= side_;
  }
  return c;
}

std::int64_t BoxLattice::site(const std::vector<int>& c) const {
  std::int64_t s = 0;
  for (int j = 0; j < dim_; ++j) s = s * side_ + (c[j] + radius_);
  return s;
}

int KSpace::index_of(const std::vector<int>& k) const {
  auto it = std::lower_bound(members.begin(), members.end(), k);
  if (it == members.end() || *it != k) return -1;
  return static_cast<int>(it - members.begin());
}

KSpaceSet enumerate_kspaces(int M, const VelocitySet& vs) {
  KSpaceSet out;
  out.vs = &vs;
  out.M = M;
  out.box = BoxLattice(vs.dim(), M);
  int box_size = static_cast<int>(out.box.site_count());
  int V = vs.species_count();

  // Exact lifted vectors (1, v) rebuilt from the velocity list.
  std::size_t S = vs.basis().size();
  std::vector<ExactVector> lifted;
  for (const ExactVector& v : vs.velocities()) {
    ExactVector bv = ExactVector::zero(v.dim + 1, S);
    bv.coeffs[0][0] = 1;
    for (int j = 0; j < v.dim; ++j) bv.coeffs[j + 1] = v.coeffs[j];
    lifted.push_back(std::move(bv));
  }

  std::map<std::string, KSpace> groups;
  std::vector<int> k(V, 0);
  for (;;) {
    ExactVector sum = ExactVector::zero(vs.dim() + 1, S);
    for (int v = 0; v < V; ++v) sum = sum + lifted[v] * Rational(k[v]);
    sum = sum * Rational(1, box_size);
    std::string key = sum.key();
    KSpace& ks = groups[key];
    if (ks.members.empty()) {
      ks.key = sum;
      ks.box_size = box_size;
    }
    BigInt w = 1;
    for (int v = 0; v < V; ++v) w *= binomial(box_size, k[v]);
    ks.members.push_back(k);
    ks.weights.push_back(w);
    ks.total += w;

    int j = V - 1;
    while (j >= 0 && k[j] == box_size) k[j--] = 0;
    if (j < 0) break;
    ++k[j];
  }

  for (auto& [key, ks] : groups) {
    // std::map iterates keys in order; members were pushed in lexicographic
    // order of k already.
    out.spaces.push_back(std::move(ks));
  }
  return out;
}

int SurfaceSet::index_by_key(const std::string& key) const {
  for (std::size_t i = 0; i < surfaces.size(); ++i)
    if (surfaces[i].key.key() == key) return static_cast<int>(i);
  return -1;
}

SurfaceSet enumerate_surfaces(int M, const VelocitySet& vs) {
  SurfaceSet out;
  out.vs = &vs;
  out.M = M;
  out.box = BoxLattice(vs.dim(), M);
  int box_size = static_cast<int>(out.box.site_count());
  int V = vs.species_count();
  out.bits = box_size * V;
  if (out.bits > 24) fail(Errc::BoxTooLarge, "box state space above 24 bits");

  KSpaceSet kset = enumerate_kspaces(M, vs);
  // Map count vector -> surface index.
  std::map<std::vector<int>, int> surface_of_k;
  for (std::size_t i = 0; i < kset.spaces.size(); ++i) {
    for (const auto& k : kset.spaces[i].members) surface_of_k[k] = static_cast<int>(i);
    MicroSurface s;
    s.key = kset.spaces[i].key;
    out.surfaces.push_back(std::move(s));
  }

  std::vector<std::uint32_t> species_mask(V, 0);
  for (int v = 0; v < V; ++v)
    for (std::int64_t x = 0; x < box_size; ++x)
      species_mask[v] |= std::uint32_t(1) << bit_of(x, v, V);

  std::uint32_t n_codes = std::uint32_t(1) << out.bits;
  out.surface_of_code.assign(n_codes, -1);
  out.local_index.assign(n_codes, -1);
  std::vector<int> k(V);
  for (std::uint32_t code = 0; code < n_codes; ++code) {
    for (int v = 0; v < V; ++v) k[v] = std::popcount(code & species_mask[v]);
    int si = surface_of_k.at(k);
    out.surface_of_code[code] = si;
    out.local_index[code] = static_cast<std::int32_t>(out.surfaces[si].members.size());
    out.surfaces[si].members.push_back(code);
  }
  return out;
}

std::vector<int> species_counts_of_code(const SurfaceSet& set, std::uint32_t code) {
  int V = set.vs->species_count();
  std::vector<int> k(V, 0);
  for (std::int64_t x = 0; x < set.box.site_count(); ++x)
    for (int v = 0; v < V; ++v) k[v] += (code >> bit_of(x, v, V)) & 1;
  return k;
}

SurfaceForm::SurfaceForm(const SurfaceSet& set, int surface, std::vector<FormKind> kinds)
    : set_(&set), surface_(surface), kinds_(std::move(kinds)) {
  n_ = static_cast<int>(set.surfaces[surface].members.size());
}

void SurfaceForm::for_each_move(int m, const std::function<void(int, double)>& emit) const {
  const MicroSurface& surf = set_->surfaces[surface_];
  std::uint32_t code = surf.members[m];
  const VelocitySet& vs = *set_->vs;
  const BoxLattice& box = set_->box;
  int V = vs.species_count();
  int box_size = static_cast<int>(box.site_count());
  auto local = [&](std::uint32_t c) { return static_cast<int>(set_->local_index[c]); };

  for (FormKind kind : kinds_) {
    switch (kind) {
      case FormKind::NnExclusion:
        for (const auto& [x, y] : box.bonds()) {
          for (int v = 0; v < V; ++v) {
            std::uint32_t bx = std::uint32_t(1) << bit_of(x, v, V);
            std::uint32_t by = std::uint32_t(1) << bit_of(y, v, V);
            bool ox = code & bx, oy = code & by;
            if (ox != oy) emit(local(code ^ bx ^ by), 1.0);
          }
        }
        break;
      case FormKind::LocalCollision:
        for (std::int64_t x = 0; x < box_size; ++x) {
          for (const Quadruple& q : vs.collision_set()) {
            std::uint32_t need = (std::uint32_t(1) << bit_of(x, q.v, V)) |
                                 (std::uint32_t(1) << bit_of(x, q.w, V));
            std::uint32_t forbid = (std::uint32_t(1) << bit_of(x, q.vp, V)) |
                                   (std::uint32_t(1) << bit_of(x, q.wp, V));
            if ((code & need) == need && (code & forbid) == 0)
              emit(local(code ^ need ^ forbid), 1.0);
          }
        }
        break;
      case FormKind::MeanFieldExclusion: {
        double rate = 1.0 / box_size;
        for (std::int64_t x = 0; x < box_size; ++x) {
          for (std::int64_t y = x + 1; y < box_size; ++y) {
            for (int v = 0; v < V; ++v) {
              std::uint32_t bx = std::uint32_t(1) << bit_of(x, v, V);
              std::uint32_t by = std::uint32_t(1) << bit_of(y, v, V);
              bool ox = code & bx, oy = code & by;
              if (ox != oy) emit(local(code ^ bx ^ by), rate);
            }
          }
        }
        break;
      }
      case FormKind::MeanFieldCollision: {
        double rate = 1.0 / (static_cast<double>(box_size) * box_size * box_size);
        // Occupied / vacant site lists per species.
        std::vector<std::vector<int>> occ(V), vac(V);
        for (std::int64_t x = 0; x < box_size; ++x)
          for (int v = 0; v < V; ++v)
            ((code >> bit_of(x, v, V)) & 1 ? occ[v] : vac[v]).push_back(static_cast<int>(x));
        for (const Quadruple& q : vs.collision_set()) {
          for (int x : occ[q.v])
            for (int y : occ[q.w]) {
              for (int xp : vac[q.vp])
                for (int yp : vac[q.wp]) {
                  std::uint32_t flips = (std::uint32_t(1) << bit_of(x, q.v, V)) ^
                                        (std::uint32_t(1) << bit_of(y, q.w, V)) ^
                                        (std::uint32_t(1) << bit_of(xp, q.vp, V)) ^
                                        (std::uint32_t(1) << bit_of(yp, q.wp, V));
                  emit(local(code ^ flips), rate);
                }
            }
        }
        break;
      }
    }
  }
}

void SurfaceForm::apply(const Eigen::VectorXd& f, Eigen::VectorXd& out) const {
  out.setZero(n_);
  for (int m = 0; m < n_; ++m) {
    double fm = f[m];
    double acc = 0.0;
    for_each_move(m, [&](int target, double rate) { acc += rate * (fm - f[target]); });
    out[m] = acc;
  }
}

Eigen::VectorXd SurfaceForm::diagonal() const {
  Eigen::VectorXd d(n_);
  for (int m = 0; m < n_; ++m) {
    double acc = 0.0;
    for_each_move(m, [&](int, double rate) { acc += rate; });
    d[m] = acc;
  }
  return d;
}

Eigen::MatrixXd SurfaceForm::dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (int m = 0; m < n_; ++m) {
    for_each_move(m, [&](int target, double rate) {
      a(m, m) += rate;
      a(m, target) -= rate;
    });
  }
  return a;
}

std::vector<int> SurfaceForm::components() const {
  UnionFind uf(n_);
  for (int m = 0; m < n_; ++m)
    for_each_move(m, [&](int target, double) { uf.unite(m, target); });
  std::vector<int> label(n_, -1);
  int next = 0;
  for (int m = 0; m < n_; ++m) {
    int r = uf.find(m);
    if (label[r] < 0) label[r] = next++;
    label[m] = label[r];
  }
  return label;
}

int SurfaceForm::component_count() const {
  std::vector<int> label = components();
  return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

GapResult surface_spectral_gap(const SurfaceSet& set, int surface, int max_iter) {
  SurfaceForm form(set, surface, {FormKind::NnExclusion, FormKind::LocalCollision});
  int n = form.dim();
  if (n == 1) return {std::numeric_limits<double>::infinity(), 1};
  if (n <= 512) return dense_spectral_gap(form.dense());

  std::vector<int> label = form.components();
  int n_comp = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<Eigen::VectorXd> kernel(n_comp, Eigen::VectorXd::Zero(n));
  for (int m = 0; m < n; ++m) kernel[label[m]][m] = 1.0;

  double bound = psd_upper_bound(form.diagonal());
  auto apply = [&form](const Eigen::VectorXd& f, Eigen::VectorXd& out) { form.apply(f, out); };
  double gap = lanczos_smallest_deflated(apply, n, kernel, bound, 1e-9, max_iter);
  return {gap, n_comp};
}

double surface_rayleigh_ratio(const SurfaceSet& set, int surface,
                              const std::vector<FormKind>& form_a,
                              const std::vector<FormKind>& form_b) {
  SurfaceForm a(set, surface, form_a);
  SurfaceForm b(set, surface, form_b);
  int n = a.dim();
  if (n == 1) return 0.0;
  if (n <= 512) return dense_rayleigh_ratio(a.dense(), b.dense());

  std::vector<int> label = b.components();
  int n_comp = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<Eigen::VectorXd> kernel(n_comp, Eigen::VectorXd::Zero(n));
  for (int m = 0; m < n; ++m) kernel[label[m]][m] = 1.0;
  auto apply_a = [&a](const Eigen::VectorXd& f, Eigen::VectorXd& out) { a.apply(f, out); };
  auto apply_b = [&b](const Eigen::VectorXd& f, Eigen::VectorXd& out) { b.apply(f, out); };
  return iterative_rayleigh_ratio(apply_a, apply_b, n, kernel);
}

bool surface_ratio_finite(const SurfaceSet& set, int surface,
                          const std::vector<FormKind>& form_a,
                          const std::vector<FormKind>& form_b) {
  SurfaceForm a(set, surface, form_a);
  SurfaceForm b(set, surface, form_b);
  int n = a.dim();
  if (n == 1) return true;
  std::vector<int> label = b.components();
  int n_comp = *std::max_element(label.begin(), label.end()) + 1;
  double scale = 1.0 + a.diagonal().maxCoeff();
  Eigen::VectorXd out(n);
  for (int c = 0; c < n_comp; ++c) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    int count = 0;
    for (int m = 0; m < n; ++m)
      if (label[m] == c) {
        u[m] = 1.0;
        ++count;
      }
    u /= std::sqrt(static_cast<double>(count));
    a.apply(u, out);
    if (out.cwiseAbs().maxCoeff() > 1e-8 * scale) return false;
  }
  return true;
}

}  // namespace lgk
