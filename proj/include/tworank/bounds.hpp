#pragma once

// Numeric bounds on free actions on products of spheres and projective
// spaces, plus exhaustive audits of the two rank inequalities
//   rk W/H <= dim V - dim V^W   (faithful permutation modules)
//   rk Q   <= (dim V)^2 / 4     (elementary abelian Q in GL(V))
// All arithmetic is exact.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tworank/error.hpp"
#include "tworank/phigroup.hpp"

namespace tworank {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow2(std::size_t e)
{
  BigInt r = 1;
  r <<= e;
  return r;
}

inline constexpr std::size_t kMaxBoundBits = std::size_t{1} << 20;

struct FreeRankResult
{
  std::uint64_t value = 0;
  bool small_m_caveat = false;  // m <= 7, below the standing dimension assumption
};

/// Free 2-rank of symmetry of (RP^m)^n.
inline FreeRankResult free_rank_rp(std::uint64_t m, std::uint64_t n)
{
  require(m >= 1 && n >= 1, "free_rank_rp requires m >= 1 and n >= 1");
  FreeRankResult r;
  switch (m % 4) {
  case 1: r.value = n; break;
  case 3: r.value = 2 * n; break;
  default: r.value = 0; break;
  }
  r.small_m_caveat = m <= 7;
  return r;
}

/// Least m with dim_gv - t <= m t.
inline std::uint64_t browder_min_m(std::uint64_t dim_gv, std::uint64_t t)
{
  require(t >= 1, "browder_min_m requires t >= 1");
  if (dim_gv <= t)
    return 0;
  return (dim_gv - t + t - 1) / t;
}

struct CarlssonBound
{
  BigInt exact;       // least m with (m + 1)^t >= 2^dim_gv
  BigInt paper_weak;  // 2^floor(dim_gv / t) - 1
};

inline CarlssonBound carlsson_min_m(std::uint64_t dim_gv, std::uint64_t t)
{
  require(t >= 1, "carlsson_min_m requires t >= 1");
  guard(dim_gv <= kMaxBoundBits && t <= kMaxBoundBits, "bound_bits", "bound arithmetic limited to 2^20 bits");
  auto const target = pow2(dim_gv);
  auto ok = [&](BigInt const &m) {
    return boost::multiprecision::pow(BigInt(m + 1), static_cast<unsigned>(t)) >= target;
  };
  BigInt lo = 0;
  BigInt hi = pow2((dim_gv + t - 1) / t) - 1;  // (hi + 1)^t >= 2^dim_gv
  while (lo < hi) {
    BigInt mid = (lo + hi) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return {lo, pow2(dim_gv / t) - 1};
}

inline bool olshanskii_condition(std::uint64_t n, std::uint64_t t, std::uint64_t k)
{
  require(n >= 1 && t >= 1 && k >= 1, "olshanskii_condition requires positive inputs");
  return olshanskii_holds(n, t, k);
}

struct HeadlineReport
{
  std::uint64_t n = 0, t = 0, k = 0;
  bool condition_holds = false;
  std::uint64_t T_bound = 0;  // t + k - 1
  std::uint64_t N_bound = 0;  // n - k + 1
  BigInt sphere_dim;          // 2^(n + t - 1) - 1 = |G|/2 - 1
  std::uint64_t browder_min_m = 0;
  BigInt carlsson_min_m;
  BigInt carlsson_paper_weak;
};

/// Bounds for G_Phi with parameters (n, t, k); the Browder and Carlsson
/// minima take dim G/V = N_bound and t = T_bound.
inline HeadlineReport headline_report(std::uint64_t n, std::uint64_t t, std::uint64_t k)
{
  require(n >= 1 && t >= 1 && k >= 1, "headline_report requires positive inputs");
  require(k <= n + 1, "headline_report requires k <= n + 1 so that N_bound is nonnegative");
  guard(n + t - 1 <= kMaxBoundBits, "bound_bits", "bound arithmetic limited to 2^20 bits");
  HeadlineReport r;
  r.n = n;
  r.t = t;
  r.k = k;
  r.condition_holds = olshanskii_condition(n, t, k);
  r.T_bound = t + k - 1;
  r.N_bound = n - k + 1;
  r.sphere_dim = pow2(n + t - 1) - 1;
  r.browder_min_m = browder_min_m(r.N_bound, r.T_bound);
  auto const c = carlsson_min_m(r.N_bound, r.T_bound);
  r.carlsson_min_m = c.exact;
  r.carlsson_paper_weak = c.paper_weak;
  return r;
}

// ---------------------------------------------------------------------------
// Permutation-module audit

inline constexpr std::size_t kMaxPermAuditPoints = 7;

using Perm = std::vector<std::uint8_t>;

struct PermAuditCase
{
  std::size_t rank = 0;
  std::size_t orbits = 0;
  std::size_t slack = 0;           // n - orbits - rank
  std::vector<Perm> generators;    // basis of the subgroup
};

struct PermAuditResult
{
  bool ok = true;
  std::size_t subgroups_checked = 0;
  PermAuditCase tightest;
};

namespace detail {

inline Perm compose(Perm const &p, Perm const &q)
{
  // (p q)(i) = p(q(i))
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    r[i] = p[q[i]];
  return r;
}

// Elementary abelian subgroups are stored as sorted lists of element indices
// into a table of the identity and all involutions.
struct InvolutionTable
{
  std::vector<Perm> elems;                 // index 0 is the identity
  std::vector<std::vector<int>> product;   // -1 when the product is not in the table

  explicit InvolutionTable(std::size_t n)
  {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    elems.push_back(p);
    do {
      if (compose(p, p) == elems[0] && p != elems[0])
        elems.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::map<Perm, int> index;
    for (std::size_t i = 0; i < elems.size(); ++i)
      index.emplace(elems[i], static_cast<int>(i));
    product.assign(elems.size(), std::vector<int>(elems.size(), -1));
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (std::size_t j = 0; j < elems.size(); ++j)
        if (auto it = index.find(compose(elems[i], elems[j])); it != index.end())
          product[i][j] = it->second;
  }

  bool commute(int a, int b) const
  {
    auto const x = product[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    return x >= 0 && x == product[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
  }
};

inline std::size_t orbit_count(std::size_t n, std::vector<Perm> const &perms)
{
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto const &p : perms)
    for (std::size_t i = 0; i < n; ++i)
      parent[find(i)] = find(p[i]);
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i)
    c += find(i) == i;
  return c;
}

} // namespace detail

/// Checks rank <= n - #orbits for every elementary abelian 2-subgroup of S_n.
/// The tightest case minimizes the slack, then maximizes the rank, then is
/// the lexicographically first subgroup.
inline PermAuditResult perm_rank_audit(std::size_t n)
{
  guard(n <= kMaxPermAuditPoints, "perm_audit_points", "permutation audit requires n <= 7");
  require(n >= 1, "permutation audit requires n >= 1");
  detail::InvolutionTable tab(n);

  PermAuditResult result;
  bool have = false;
  std::vector<int> tight_elems;
  std::set<std::vector<int>> level{{0}};
  std::size_t r = 0;
  while (!level.empty()) {
    std::set<std::vector<int>> next;
    for (auto const &H : level) {
      std::vector<Perm> perms;
      for (auto x : H)
        perms.push_back(tab.elems[static_cast<std::size_t>(x)]);
      auto const orbits = detail::orbit_count(n, perms);
      ++result.subgroups_checked;
      if (r + orbits > n) {
        result.ok = false;
      }
      auto const slack = static_cast<std::size_t>(std::max<long long>(0, static_cast<long long>(n) - orbits - r));
      bool better = !have || slack < result.tightest.slack ||
                    (slack == result.tightest.slack && r > result.tightest.rank);
      if (better) {
        have = true;
        result.tightest.rank = r;
        result.tightest.orbits = orbits;
        result.tightest.slack = slack;
        tight_elems = H;
      }

      for (int v = 1; v < static_cast<int>(tab.elems.size()); ++v) {
        if (std::binary_search(H.begin(), H.end(), v))
          continue;
        if (!std::all_of(H.begin(), H.end(), [&](int h) { return tab.commute(v, h); }))
          continue;
        auto K = H;
        for (auto h : H)
          K.push_back(tab.product[static_cast<std::size_t>(v)][static_cast<std::size_t>(h)]);
        std::sort(K.begin(), K.end());
        next.insert(std::move(K));
      }
    }
    level = std::move(next);
    ++r;
  }

  // basis of the tightest subgroup: greedy over its sorted elements
  std::set<int> span{0};
  for (auto x : tight_elems) {
    if (span.count(x))
      continue;
    result.tightest.generators.push_back(tab.elems[static_cast<std::size_t>(x)]);
    std::set<int> grown = span;
    for (auto s : span)
      grown.insert(tab.product[static_cast<std::size_t>(x)][static_cast<std::size_t>(s)]);
    span = std::move(grown);
  }
  return result;
}

// ---------------------------------------------------------------------------
// GL(n, 2) audit

inline constexpr std::size_t kMaxGlAuditDim = 4;

struct GlAuditResult
{
  std::size_t max_rank = 0;
  std::size_t bound = 0;                 // floor(n^2 / 4)
  bool ok = true;
  std::vector<BitMatrix> witness;        // generators of a subgroup of maximal rank
};

namespace detail {

// n x n matrices packed row-major into the low n^2 bits; row i occupies
// bits [i n, i n + n).
struct PackedGl
{
  std::size_t n;

  std::uint32_t row(std::uint32_t a, std::size_t i) const { return (a >> (i * n)) & ((1U << n) - 1); }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const
  {
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t acc = 0;
      auto const ar = row(a, i);
      for (std::size_t k = 0; k < n; ++k)
        if ((ar >> k) & 1U)
          acc ^= row(b, k);
      r |= acc << (i * n);
    }
    return r;
  }

  std::uint32_t identity() const
  {
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < n; ++i)
      r |= 1U << (i * n + i);
    return r;
  }

  BitMatrix unpack(std::uint32_t a) const
  {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if ((row(a, i) >> j) & 1U)
          m.set(i, j);
    return m;
  }
};

class GlSearch
{
public:
  explicit GlSearch(std::size_t n)
  : gl_{n}, member_(std::size_t{1} << (n * n), 0)
  {
    auto const id = gl_.identity();
    for (std::uint32_t a = 0; a < (1U << (n * n)); ++a)
      if (a != id && gl_.mul(a, a) == id)
        cands_.push_back(a);  // A^2 = I implies A invertible
  }

  std::pair<std::size_t, std::vector<std::uint32_t>> run()
  {
    std::vector<std::uint32_t> H{gl_.identity()};
    member_[H[0]] = 1;
    std::vector<std::uint32_t> gens;
    search(H, gens, cands_);
    return {best_, best_gens_};
  }

private:
  void search(std::vector<std::uint32_t> &H, std::vector<std::uint32_t> &gens, std::vector<std::uint32_t> const &cands)
  {
    auto const d = gens.size();
    if (d > best_) {
      best_ = d;
      best_gens_ = gens;
    }
    for (std::size_t idx = 0; idx < cands.size(); ++idx) {
      auto const remaining = (cands.size() - idx) / H.size();
      std::size_t j = 0;
      while ((std::size_t{1} << (j + 1)) - 1 <= remaining)
        ++j;
      if (d + j <= best_)
        break;
      auto const v = cands[idx];
      auto const old = H.size();
      for (std::size_t i = 0; i < old; ++i) {
        auto const x = gl_.mul(v, H[i]);
        H.push_back(x);
        member_[x] = 1;
      }
      std::vector<std::uint32_t> next;
      for (std::size_t k = idx + 1; k < cands.size(); ++k) {
        auto const w = cands[k];
        if (!member_[w] && gl_.mul(v, w) == gl_.mul(w, v))
          next.push_back(w);
      }
      gens.push_back(v);
      search(H, gens, next);
      gens.pop_back();
      for (std::size_t i = old; i < H.size(); ++i)
        member_[H[i]] = 0;
      H.resize(old);
    }
  }

  PackedGl gl_;
  std::vector<char> member_;
  std::vector<std::uint32_t> cands_;
  std::size_t best_ = 0;
  std::vector<std::uint32_t> best_gens_;
};

} // namespace detail

/// Largest elementary abelian 2-subgroup of GL(n, 2) against floor(n^2/4).
inline GlAuditResult gl_rank_audit(std::size_t n)
{
  guard(n <= kMaxGlAuditDim, "gl_audit_dim", "GL audit requires n <= 4");
  require(n >= 1, "GL audit requires n >= 1");
  auto const [rank, gens] = detail::GlSearch(n).run();
  GlAuditResult r;
  r.max_rank = rank;
  r.bound = n * n / 4;
  r.ok = rank <= r.bound;
  detail::PackedGl gl{n};
  for (auto g : gens)
    r.witness.push_back(gl.unpack(g));
  return r;
}

} // namespace tworank
