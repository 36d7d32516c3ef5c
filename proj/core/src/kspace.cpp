#include "lgk/microcanonical.hpp"

#include "lgk/error.hpp"

#include <algorithm>
#include <limits>

namespace lgk {

namespace {

// h as a (numerator, denominator) pair with denominator >= 0; denominator 0
// with positive numerator encodes +infinity (the move up is blocked).
struct HFrac {
  BigInt num, den;
};

HFrac h_frac(int box, int alpha, int k) {
  return {BigInt(k + 1) * (k - alpha + 1), BigInt(box - k) * (box - k + alpha)};
}

// sign of a - b for nonnegative fractions with the +infinity convention.
int h_compare(const HFrac& a, const HFrac& b) {
  BigInt lhs = a.num * b.den, rhs = b.num * a.den;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

BigInt k_weight(const std::vector<int>& k, int box) {
  BigInt w = 1;
  for (int kv : k) w *= binomial(box, kv);
  return w;
}

// Pair decomposition of the species list: species 2l, 2l+1 are v_* +- v_l.
int pair_count(const VelocitySet& vs) {
  if (!vs.pair_form()) fail(Errc::MissingPairForm, "operation requires a pair-form velocity set");
  return static_cast<int>(vs.pair_form()->generators.size());
}

}  // namespace

Rational h_alpha(int box_size, int alpha, int k) {
  if (k + 1 < 0 || k + 1 > box_size || k - alpha + 1 < 0 || k - alpha + 1 > box_size)
    fail(Errc::OutOfDomain, "h argument outside the binomial range");
  if (box_size - k <= 0 || box_size - k + alpha <= 0)
    fail(Errc::OutOfDomain, "h denominator not positive");
  HFrac f = h_frac(box_size, alpha, k);
  return Rational(f.num, f.den);
}

KMove k_move(const std::vector<int>& k, const Quadruple& q, int box_size) {
  for (int kv : k)
    if (kv < 0 || kv > box_size) fail(Errc::OutOfDomain, "count outside [0, box_size]");
  KMove out;
  out.p = BigInt(k[q.v]) * k[q.w] * (box_size - k[q.vp]) * (box_size - k[q.wp]);
  out.k = k;
  if (out.p > 0) {
    --out.k[q.v];
    --out.k[q.w];
    ++out.k[q.vp];
    ++out.k[q.wp];
  }
  return out;
}

int find_maximizer(const KSpace& ks, const VelocitySet& vs) {
  int n = pair_count(vs);
  for (std::size_t m = 0; m < ks.members.size(); ++m) {
    const std::vector<int>& k = ks.members[m];
    bool ok = true;
    for (int l = 0; l < n && ok; ++l) {
      int al = k[2 * l] - k[2 * l + 1];
      HFrac lower = h_frac(ks.box_size, al, k[2 * l] - 1);
      for (int lp = 0; lp < n; ++lp) {
        int alp = k[2 * lp] - k[2 * lp + 1];
        HFrac upper = h_frac(ks.box_size, alp, k[2 * lp]);
        if (h_compare(lower, upper) > 0) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return static_cast<int>(m);
  }
  fail(Errc::NoSolution, "no count vector satisfies the maximizer condition");
}

std::vector<ChainStep> build_k_chain(const KSpace& ks, const VelocitySet& vs,
                                     const std::vector<int>& k_start,
                                     const std::vector<int>& k_star) {
  pair_count(vs);
  const auto& quads = vs.collision_set();
  std::vector<ChainStep> chain;
  std::vector<int> k = k_start;
  BigInt w = k_weight(k, ks.box_size);

  auto push = [&](int qi, std::vector<int> k_next) {
    BigInt w_next = k_weight(k_next, ks.box_size);
    if (w_next < w)
      fail(Errc::ChainInvariantViolated, "weight decreased along the chain");
    if (chain.size() + 1 > ks.members.size())
      fail(Errc::ChainInvariantViolated, "chain longer than the sector");
    chain.push_back({qi, k_next});
    k = std::move(k_next);
    w = std::move(w_next);
  };

  // Greedy strict ascent.
  for (;;) {
    int best_q = -1;
    std::vector<int> best_k;
    BigInt best_w = w;
    for (std::size_t qi = 0; qi < quads.size(); ++qi) {
      KMove mv = k_move(k, quads[qi], ks.box_size);
      if (mv.k == k) continue;
      BigInt mw = k_weight(mv.k, ks.box_size);
      if (mw > best_w) {
        best_w = mw;
        best_q = static_cast<int>(qi);
        best_k = std::move(mv.k);
      }
    }
    if (best_q < 0) break;
    push(best_q, std::move(best_k));
  }

  // Equal-weight lateral swaps toward k_star: move a full +- pair from an
  // overfull generator slot to an underfull one.
  while (k != k_star) {
    int from = -1, to = -1;
    int n = static_cast<int>(k.size()) / 2;
    for (int l = 0; l < n; ++l) {
      if (k[2 * l] == k_star[2 * l] + 1) from = l;
      if (k[2 * l] == k_star[2 * l] - 1) to = l;
    }
    if (from < 0 || to < 0)
      fail(Errc::ChainInvariantViolated, "no lateral pair move toward the maximizer");
    int qi = -1;
    for (std::size_t i = 0; i < quads.size(); ++i) {
      const Quadruple& q = quads[i];
      if (q.v == 2 * from && q.w == 2 * from + 1 && q.vp == 2 * to && q.wp == 2 * to + 1) {
        qi = static_cast<int>(i);
        break;
      }
    }
    if (qi < 0) fail(Errc::ChainInvariantViolated, "lateral pair collision not in the set");
    KMove mv = k_move(k, quads[qi], ks.box_size);
    if (mv.k == k) fail(Errc::ChainInvariantViolated, "lateral move has zero kernel");
    push(qi, std::move(mv.k));
  }

  // All visited count vectors must be distinct.
  std::vector<std::vector<int>> seen{k_start};
  for (const ChainStep& st : chain) seen.push_back(st.k);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    fail(Errc::ChainInvariantViolated, "chain revisits a count vector");
  return chain;
}

CorSgReport verify_cor_sg_k(const KSpace& ks, const VelocitySet& vs) {
  int n = static_cast<int>(ks.members.size());
  double bound = static_cast<double>(n) * n;
  if (n == 1) return {0.0, bound, true};

  Eigen::VectorXd nu(n);
  for (int m = 0; m < n; ++m) nu[m] = to_double(ks.nu(m));
  // Variance form and the collision Dirichlet form on the count-vector graph.
  Eigen::MatrixXd var = Eigen::MatrixXd(nu.asDiagonal()) - nu * nu.transpose();
  Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    for (const Quadruple& q : vs.collision_set()) {
      KMove mv = k_move(ks.members[m], q, ks.box_size);
      if (mv.k == ks.members[m]) continue;
      int t = ks.index_of(mv.k);
      if (t < 0) fail(Errc::ChainInvariantViolated, "collision move leaves the sector");
      double r = nu[m] * static_cast<double>(mv.p);
      dir(m, m) += r;
      dir(m, t) -= r;
    }
  }
  // The kernel is reversible with respect to nu, so g' dir g equals half the
  // full sum over (k, q); symmetrizing without the 1/2 restores it.
  dir = dir + Eigen::MatrixXd(dir.transpose());
  double ratio = dense_rayleigh_ratio(var, dir);
  return {ratio, bound, ratio <= bound};
}

std::vector<std::int64_t> nn_route(const BoxLattice& box, std::int64_t x, std::int64_t y) {
  std::vector<int> c = box.coords(x);
  std::vector<int> target = box.coords(y);
  std::vector<std::int64_t> route{x};
  for (int j = 0; j < box.dim(); ++j) {
    int step = target[j] > c[j] ? 1 : -1;
    while (c[j] != target[j]) {
      c[j] += step;
      route.push_back(box.site(c));
    }
  }
  return route;
}

double kernel_consistency(const KSpace& ks, const VelocitySet& vs, int shift) {
  int V = vs.species_count();
  int box_size = ks.box_size;
  BigInt worst = 0;
  std::vector<char> occ(static_cast<std::size_t>(box_size) * V);
  for (std::size_t m = 0; m < ks.members.size(); ++m) {
    const std::vector<int>& k = ks.members[m];
    std::fill(occ.begin(), occ.end(), 0);
    for (int v = 0; v < V; ++v)
      for (int j = 0; j < k[v]; ++j) occ[((shift + j) % box_size) * V + v] = 1;
    for (const Quadruple& q : vs.collision_set()) {
      // The four flipped bits involve four distinct species, so they are
      // distinct for every site tuple and the indicator product factorizes.
      BigInt lhs = 0;
      for (int x = 0; x < box_size; ++x)
        for (int y = 0; y < box_size; ++y)
          for (int xp = 0; xp < box_size; ++xp)
            for (int yp = 0; yp < box_size; ++yp) {
              bool p = occ[x * V + q.v] && occ[y * V + q.w] && !occ[xp * V + q.vp] &&
                       !occ[yp * V + q.wp];
              if (p) ++lhs;
            }
      BigInt rhs = BigInt(k[q.v]) * k[q.w] * (box_size - k[q.vp]) * (box_size - k[q.wp]);
      BigInt diff = lhs > rhs ? lhs - rhs : rhs - lhs;
      if (diff > worst) worst = diff;
    }
  }
  return static_cast<double>(worst);
}

}  // namespace lgk
