#pragma once

// The class-two group G_Phi generated by a_1..a_n, b_1..b_t with the a_i,
// b_j involutions, the b_j central, and [a_i, a_j] = prod_s b_s^{phi_s(a_i, a_j)}.
// Elements are kept in normal form a_1^{e_1} ... a_n^{e_n} b_1^{f_1} ... b_t^{f_t}.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tworank/error.hpp"
#include "tworank/forms.hpp"
#include "tworank/gf2.hpp"
#include "tworank/random.hpp"

namespace tworank {

struct GroupElement
{
  BitVector a;  // exponents of a_1..a_n
  BitVector b;  // exponents of b_1..b_t

  friend bool operator==(GroupElement const &, GroupElement const &) = default;
  friend auto operator<=>(GroupElement const &, GroupElement const &) = default;
};

class PhiGroup
{
public:
  explicit PhiGroup(FormFamily fam)
  : fam_(std::move(fam))
  {
    require(fam_.t() <= 64, "PhiGroup supports at most 64 central generators");
  }

  FormFamily const &family() const noexcept { return fam_; }
  std::size_t n() const noexcept { return fam_.n(); }
  std::size_t t() const noexcept { return fam_.t(); }

  /// |G| = 2^(n+t).
  std::size_t order_exponent() const noexcept { return n() + t(); }

  GroupElement identity() const { return {BitVector(n()), BitVector(t())}; }
  GroupElement a(std::size_t i) const { return {BitVector::unit(n(), i), BitVector(t())}; }
  GroupElement b(std::size_t j) const { return {BitVector(n()), BitVector::unit(t(), j)}; }

  /// (e, f)(e', f') = (e + e', f + f' + beta(e, e')).
  GroupElement multiply(GroupElement const &g, GroupElement const &h) const
  {
    check(g);
    check(h);
    return {g.a + h.a, g.b + h.b + fam_.cocycle(g.a, h.a)};
  }

  GroupElement inverse(GroupElement const &g) const
  {
    check(g);
    return {g.a, g.b + quadratic_refinement(fam_, g.a)};
  }

  /// g^-1 h^-1 g h.
  GroupElement commutator(GroupElement const &g, GroupElement const &h) const
  { return multiply(multiply(inverse(g), inverse(h)), multiply(g, h)); }

  /// 1, 2 or 4.
  int element_order(GroupElement const &g) const
  {
    check(g);
    if (g.a.none() && g.b.none())
      return 1;
    return quadratic_refinement(fam_, g.a).none() ? 2 : 4;
  }

  // Dense indexing for n + t <= 64: a-part in the low n bits, b-part above.

  std::uint64_t to_index(GroupElement const &g) const
  {
    check(g);
    require(n() + t() <= 64, "element indexing requires n + t <= 64");
    return g.a.low_word() | (t() == 0 ? 0 : g.b.low_word() << n());
  }

  GroupElement from_index(std::uint64_t idx) const
  {
    require(n() + t() <= 64, "element indexing requires n + t <= 64");
    return {BitVector::from_word(n(), idx), BitVector::from_word(t(), n() >= 64 ? 0 : idx >> n())};
  }

  /// Word-level multiplication on dense indices.
  std::uint64_t multiply_index(std::uint64_t g, std::uint64_t h) const noexcept
  {
    auto const amask = n() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n()) - 1;
    auto const ga = g & amask;
    auto const ha = h & amask;
    auto const beta = fam_.cocycle_word(ga, ha);
    return (g ^ h) ^ (beta << n());
  }

private:
  void check(GroupElement const &g) const
  {
    if (g.a.size() != n() || g.b.size() != t())
      throw ValidationError("group element dimensions do not match the group");
  }

  FormFamily fam_;
};

struct CenterInfo
{
  Subspace radical;              // a-parts of central elements
  Subspace qzero_radical;        // {e in radical : q(e) = 0}
  std::size_t order_exponent;    // log2 |Z(G)| = t + dim radical
  std::size_t elementary_rank;   // t + dim qzero_radical
  bool has_order4_central;       // qzero_radical != radical
};

/// The center is {(e, f) : e in the common radical}. On the radical q is
/// additive, so its zero set is a subspace; that subspace plus B is the
/// elementary abelian part of the center.
inline CenterInfo center(PhiGroup const &G)
{
  auto const &fam = G.family();
  auto rad = common_radical(fam);
  BitMatrix qmap(fam.t(), rad.dim());
  for (std::size_t i = 0; i < rad.dim(); ++i) {
    auto const q = quadratic_refinement(fam, rad.basis()[i]);
    for (std::size_t s = 0; s < fam.t(); ++s)
      if (q.test(s))
        qmap.set(s, i);
  }
  auto const coeffs = kernel(qmap);
  std::vector<BitVector> gens;
  for (auto const &c : coeffs.basis()) {
    BitVector v(fam.n());
    for (std::size_t i = 0; i < rad.dim(); ++i)
      if (c.test(i))
        v ^= rad.basis()[i];
    gens.push_back(std::move(v));
  }
  auto qzero = Subspace::span(fam.n(), gens);
  CenterInfo info{rad, qzero, fam.t() + rad.dim(), fam.t() + qzero.dim(), qzero.dim() != rad.dim()};
  return info;
}

// ---------------------------------------------------------------------------
// Maximal q-zero totally isotropic subspaces

enum class SearchMode { exhaustive, branch_and_bound };

struct IsotropicResult
{
  std::size_t dim = 0;
  Subspace witness;
};

inline constexpr std::size_t kMaxExhaustiveIsotropicDim = 16;
inline constexpr std::size_t kMaxBranchAndBoundDim = 24;

namespace detail {

// Canonical RREF over 64-bit words (pivot = lowest set bit), sorted by pivot.
using WordBasis = std::vector<std::uint64_t>;

inline std::uint64_t reduce_word(WordBasis const &basis, std::uint64_t v) noexcept
{
  for (auto row : basis)
    if (v & (row & (~row + 1)))
      v ^= row;
  return v;
}

inline WordBasis insert_word(WordBasis basis, std::uint64_t v)
{
  v = reduce_word(basis, v);
  if (v == 0)
    return basis;
  auto const pivot = v & (~v + 1);
  for (auto &row : basis)
    if (row & pivot)
      row ^= v;
  auto pos = std::find_if(basis.begin(), basis.end(),
                          [&](auto row) { return (row & (~row + 1)) > pivot; });
  basis.insert(pos, v);
  return basis;
}

inline std::size_t word_rank(std::vector<std::uint64_t> vs) noexcept
{
  std::size_t r = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i] == 0)
      continue;
    ++r;
    auto const pivot = vs[i] & (~vs[i] + 1);
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (vs[j] & pivot)
        vs[j] ^= vs[i];
  }
  return r;
}

inline Subspace to_subspace(std::size_t n, WordBasis const &basis)
{
  std::vector<BitVector> vs;
  for (auto w : basis)
    vs.push_back(BitVector::from_word(n, w));
  return Subspace::span(n, vs);
}

inline bool is_qzero(FormFamily const &fam, std::uint64_t v) noexcept
{ return fam.cocycle_word(v, v) == 0; }

// Nonzero vectors with q(v) = 0, ordered by weight then value.
inline std::vector<std::uint64_t> qzero_vectors(FormFamily const &fam)
{
  std::vector<std::uint64_t> out;
  std::uint64_t const end = std::uint64_t{1} << fam.n();
  for (std::uint64_t v = 1; v < end; ++v)
    if (is_qzero(fam, v))
      out.push_back(v);
  std::stable_sort(out.begin(), out.end(), [](auto x, auto y) {
    auto const px = std::popcount(x), py = std::popcount(y);
    return px != py ? px < py : x < y;
  });
  return out;
}

// Level-by-level closure: level d holds every q-zero totally isotropic
// subspace of dimension d. Every such subspace of dimension d+1 contains
// one of dimension d, so the walk is complete.
inline IsotropicResult isotropic_exhaustive(FormFamily const &fam)
{
  auto const n = fam.n();
  guard(n <= kMaxExhaustiveIsotropicDim, "isotropic_exhaustive_dim",
        "exhaustive isotropic search requires n <= 16");
  std::vector<std::uint64_t> qzero;
  for (std::uint64_t v = 1; v < (std::uint64_t{1} << n); ++v)
    if (is_qzero(fam, v))
      qzero.push_back(v);

  std::set<WordBasis> level{WordBasis{}};
  std::size_t dim = 0;
  WordBasis witness;
  while (!level.empty()) {
    witness = *level.begin();
    std::set<WordBasis> next;
    for (auto const &U : level)
      for (auto v : qzero) {
        if (reduce_word(U, v) != v)
          continue;  // one representative per coset of U
        bool ok = true;
        for (auto u : U)
          if (fam.pairing_word(u, v) != 0) {
            ok = false;
            break;
          }
        if (ok)
          next.insert(insert_word(U, v));
      }
    if (next.empty())
      break;
    ++dim;
    level = std::move(next);
  }
  return {dim, to_subspace(n, witness)};
}

// Depth-first search over q-zero totally isotropic subspaces in reduced
// row-echelon form. A new row v must have its pivot (lowest set bit) above
// every pivot of U, and every row of U must vanish at that pivot, so each
// subspace is visited exactly once, from the span of its first rows.
//
// Bound: the rows added below U span a subspace X of span(cands) that is
// singular for every q_s, so dim X is at most the Witt-type bound of each
// q_s on span(cands).
class IsotropicBranchAndBound
{
public:
  IsotropicBranchAndBound(FormFamily const &fam, std::size_t stop_at)
  : fam_(fam), stop_at_(stop_at)
  {}

  IsotropicResult run()
  {
    auto cands = qzero_vectors(fam_);
    WordBasis U;
    best_dim_ = 0;
    best_.clear();
    search(U, cands);
    return {best_dim_, to_subspace(fam_.n(), best_)};
  }

private:
  static std::uint64_t low_bit(std::uint64_t v) noexcept { return v & (~v + 1); }

  // Largest singular subspace of q_s on span(vs), for independent vs:
  // symplectic reduction leaves m hyperbolic pairs and the radical R; the
  // answer is m + dim ker(q|R) - arf when q|R = 0, and m + dim R - 1 else.
  std::size_t singular_bound(std::size_t s, std::vector<std::uint64_t> vs) const
  {
    auto const r = vs.size();
    auto q = [&](std::uint64_t v) { return fam_.cocycle_bit(s, v, v); };
    std::size_t pairs = 0;
    bool arf = false;
    for (;;) {
      std::size_t ei = vs.size(), fi = vs.size();
      for (std::size_t i = 0; i < vs.size() && ei == vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
          if (fam_.pairing_bit(s, vs[i], vs[j])) {
            ei = i;
            fi = j;
            break;
          }
      if (ei == vs.size())
        break;
      auto const e = vs[ei], f = vs[fi];
      ++pairs;
      arf ^= q(e) && q(f);
      std::vector<std::uint64_t> rest;
      for (std::size_t k = 0; k < vs.size(); ++k) {
        if (k == ei || k == fi)
          continue;
        auto z = vs[k];
        if (fam_.pairing_bit(s, z, f))
          z ^= e;
        if (fam_.pairing_bit(s, z, e))
          z ^= f;
        rest.push_back(z);
      }
      vs = std::move(rest);
    }
    bool const q_on_radical = std::any_of(vs.begin(), vs.end(), q);
    return q_on_radical ? r - pairs - 1 : r - pairs - (arf ? 1 : 0);
  }

  std::size_t extension_bound(std::vector<std::uint64_t> const &cands) const
  {
    WordBasis basis;
    for (auto w : cands) {
      basis = insert_word(std::move(basis), w);
      if (basis.size() == fam_.n())
        break;
    }
    std::size_t bound = basis.size();
    for (std::size_t s = 0; s < fam_.t() && bound > 0; ++s)
      bound = std::min(bound, singular_bound(s, basis));
    return bound;
  }

  void search(WordBasis const &U, std::vector<std::uint64_t> const &cands)
  {
    auto const d = U.size();
    if (d > best_dim_) {
      best_dim_ = d;
      best_ = U;
    }
    if (done() || cands.empty())
      return;
    if (d + extension_bound(cands) <= best_dim_)
      return;

    for (auto const v : cands) {
      auto const pv = low_bit(v);
      std::vector<std::uint64_t> next;
      for (auto const w : cands) {
        auto const pw = low_bit(w);
        if (pw > pv && (v & pw) == 0 && fam_.pairing_word(v, w) == 0)
          next.push_back(w);
      }
      auto W = U;
      W.push_back(v);
      search(W, next);
      if (done())
        return;
    }
  }

  bool done() const noexcept { return best_dim_ >= stop_at_; }

  FormFamily const &fam_;
  std::size_t stop_at_;
  std::size_t best_dim_ = 0;
  WordBasis best_;
};

} // namespace detail

/// Largest d such that some d-dimensional U has phi_s(U, U) = 0 and q = 0 on
/// U, with one witness. `stop_at` lets callers end the branch-and-bound
/// search as soon as a subspace of that dimension is found.
inline IsotropicResult max_isotropic_qzero(FormFamily const &fam, SearchMode mode = SearchMode::branch_and_bound,
                                           std::size_t stop_at = std::numeric_limits<std::size_t>::max())
{
  if (mode == SearchMode::exhaustive)
    return detail::isotropic_exhaustive(fam);
  guard(fam.n() <= kMaxBranchAndBoundDim, "isotropic_bnb_dim",
        "branch-and-bound isotropic search requires n <= 24");
  return detail::IsotropicBranchAndBound(fam, stop_at).run();
}

inline std::size_t group_rank(PhiGroup const &G, SearchMode mode = SearchMode::branch_and_bound)
{ return G.t() + max_isotropic_qzero(G.family(), mode).dim; }

// ---------------------------------------------------------------------------
// Extension profile 1 -> V -> G -> W -> 1

struct ExtensionProfile
{
  std::size_t T = 0;  // rank of V
  std::size_t N = 0;  // rank of W = G/V
  Subspace v_witness; // a-part U of V
};

/// V = {(u, f) : u in U} for a maximal q-zero isotropic U. Throws
/// InternalError if the lifted subgroup fails to be elementary abelian and
/// normal.
inline ExtensionProfile extension_profile(PhiGroup const &G, SearchMode mode = SearchMode::branch_and_bound)
{
  auto const res = max_isotropic_qzero(G.family(), mode);
  auto const &U = res.witness;

  std::vector<GroupElement> lifts;
  for (auto const &u : U.basis())
    lifts.push_back({u, BitVector(G.t())});
  for (std::size_t j = 0; j < G.t(); ++j)
    lifts.push_back(G.b(j));

  auto const e = G.identity();
  for (std::size_t i = 0; i < lifts.size(); ++i) {
    if (G.multiply(lifts[i], lifts[i]) != e)
      throw InternalError("extension profile: lifted generator is not an involution");
    for (std::size_t j = 0; j < i; ++j)
      if (G.commutator(lifts[i], lifts[j]) != e)
        throw InternalError("extension profile: lifted generators do not commute");
    for (std::size_t k = 0; k < G.n(); ++k)
      if (G.commutator(lifts[i], G.a(k)).a.any())
        throw InternalError("extension profile: lifted subgroup is not normal");
  }
  return {G.t() + res.dim, G.n() - res.dim, U};
}

// ---------------------------------------------------------------------------
// Randomized search for families with small isotropic subspaces

/// 2n < t(k - 1), the hypothesis under which suitable families exist.
inline bool olshanskii_holds(std::uint64_t n, std::uint64_t t, std::uint64_t k)
{
  if (k == 0)
    return false;
  auto const lhs = static_cast<unsigned __int128>(n) * 2;
  auto const rhs = static_cast<unsigned __int128>(t) * (k - 1);
  return lhs < rhs;
}

struct SearchOutcome
{
  bool condition_holds = false;
  std::optional<FormFamily> family;
  std::optional<std::uint64_t> trial_index;
  std::optional<std::uint64_t> trial_seed;
  std::uint64_t trials_run = 0;
  std::optional<std::string> guard_hit;
};

/// Draws families with per-trial seeds derive_seed(seed, i) and returns the
/// lowest-index one whose maximal q-zero isotropic subspaces have dimension
/// <= k - 1. Trials are evaluated in batches of `threads`; the result does
/// not depend on the thread count.
inline SearchOutcome search_forms(std::size_t n, std::size_t t, std::size_t k, std::uint64_t trials,
                                  std::uint64_t seed, unsigned threads = 1)
{
  SearchOutcome out;
  out.condition_holds = olshanskii_holds(n, t, k);
  require(n >= 1 && t >= 1 && k >= 1, "search_forms requires positive n, t, k");
  if (n > kMaxBranchAndBoundDim || t > 64) {
    out.guard_hit = "isotropic_bnb_dim";
    return out;
  }
  threads = std::max(1U, threads);

  auto qualifies = [&](std::uint64_t trial) {
    auto fam = random_family(n, t, derive_seed(seed, trial));
    auto const res = max_isotropic_qzero(fam, SearchMode::branch_and_bound, k);
    return res.dim <= k - 1;
  };

  for (std::uint64_t base = 0; base < trials; base += threads) {
    auto const batch = std::min<std::uint64_t>(threads, trials - base);
    std::vector<char> ok(batch, 0);
    if (batch == 1) {
      ok[0] = qualifies(base);
    } else {
      std::vector<std::future<bool>> jobs;
      for (std::uint64_t i = 0; i < batch; ++i)
        jobs.push_back(std::async(std::launch::async, qualifies, base + i));
      for (std::uint64_t i = 0; i < batch; ++i)
        ok[i] = jobs[i].get();
    }
    for (std::uint64_t i = 0; i < batch; ++i) {
      if (ok[i]) {
        auto const trial = base + i;
        out.trials_run = trial + 1;
        out.trial_index = trial;
        out.trial_seed = derive_seed(seed, trial);
        out.family = random_family(n, t, *out.trial_seed);
        return out;
      }
    }
    out.trials_run = base + batch;
  }
  return out;
}

} // namespace tworank
