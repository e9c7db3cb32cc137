#pragma once

// Finite groups as multiplication oracles, monomial representations induced
// from +-1 characters, and exact fixed-point analysis of diagonal actions on
// products of the unit spheres S(V_1) x ... x S(V_k).
//
// A signed permutation matrix has +1 as an eigenvalue exactly when one of
// its cycles has sign product +1, so every question here is combinatorial.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tworank/error.hpp"
#include "tworank/phigroup.hpp"

namespace tworank {

using ElementId = std::uint32_t;

inline constexpr std::size_t kMaxOracleOrder = std::size_t{1} << 16;
inline constexpr std::size_t kAssociativityCheckOrder = 512;
inline constexpr std::size_t kMaxIsotropyOrder = 4096;

enum class Provenance { cayley_table, phi_group };

/// Group of order <= 2^16 with id 0 the identity. Backed by a full Cayley
/// table, or (for large G_Phi) by the group law on dense indices.
class GroupOracle
{
public:
  /// `table[g * order + h]` = g h. Validates identity, Latin-square and
  /// (for order <= 512) associativity laws.
  static GroupOracle from_table(std::size_t order, std::vector<ElementId> table)
  {
    require(order >= 1, "group order must be positive");
    guard(order <= kMaxOracleOrder, "group_order", "group oracles are limited to order 2^16");
    require(table.size() == order * order, "Cayley table must have order^2 entries");
    for (auto x : table)
      require(x < order, "Cayley table entry out of range");

    GroupOracle G;
    G.order_ = order;
    G.table_ = std::move(table);
    G.provenance_ = Provenance::cayley_table;
    G.validate();
    return G;
  }

  /// Elements of G_Phi indexed as in PhiGroup::to_index; needs n + t <= 16.
  static GroupOracle from_phi_group(PhiGroup const &P)
  {
    guard(P.order_exponent() <= 16, "group_order", "G_Phi oracles require n + t <= 16");
    GroupOracle G;
    G.order_ = std::size_t{1} << P.order_exponent();
    G.phi_ = std::make_shared<PhiGroup const>(P);
    G.provenance_ = Provenance::phi_group;
    if (G.order_ <= 1024) {
      G.table_.resize(G.order_ * G.order_);
      for (std::size_t g = 0; g < G.order_; ++g)
        for (std::size_t h = 0; h < G.order_; ++h)
          G.table_[g * G.order_ + h] = static_cast<ElementId>(P.multiply_index(g, h));
    }
    G.validate();
    return G;
  }

  static GroupOracle cyclic(std::size_t m)
  {
    std::vector<ElementId> t(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        t[i * m + j] = static_cast<ElementId>((i + j) % m);
    return from_table(m, std::move(t));
  }

  /// (Z/2)^r with ids read as bit vectors (XOR law).
  static GroupOracle elementary_abelian(std::size_t r)
  {
    auto const m = std::size_t{1} << r;
    std::vector<ElementId> t(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        t[i * m + j] = static_cast<ElementId>(i ^ j);
    return from_table(m, std::move(t));
  }

  /// Dihedral group of order 2m: id = s * m + k stands for x^k y^s with
  /// x a rotation of order m and y a reflection.
  static GroupOracle dihedral(std::size_t m)
  {
    auto const order = 2 * m;
    std::vector<ElementId> t(order * order);
    for (std::size_t g = 0; g < order; ++g)
      for (std::size_t h = 0; h < order; ++h) {
        auto const k1 = g % m, s1 = g / m, k2 = h % m, s2 = h / m;
        // x^k1 y^s1 x^k2 y^s2 = x^(k1 + (-1)^s1 k2) y^(s1 + s2)
        auto const k = s1 ? (k1 + m - k2) % m : (k1 + k2) % m;
        t[g * order + h] = static_cast<ElementId>(((s1 + s2) % 2) * m + k);
      }
    return from_table(order, std::move(t));
  }

  /// Q8 with ids 0..7 = 1, -1, i, -i, j, -j, k, -k.
  static GroupOracle quaternion()
  {
    // unit products: unit[a][b] = (sign, unit) with units 0=1, 1=i, 2=j, 3=k
    constexpr std::array<std::array<std::pair<int, int>, 4>, 4> unit{{
      {{{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
      {{{1, 1}, {-1, 0}, {1, 3}, {-1, 2}}},
      {{{1, 2}, {-1, 3}, {-1, 0}, {1, 1}}},
      {{{1, 3}, {1, 2}, {-1, 1}, {-1, 0}}},
    }};
    std::vector<ElementId> t(64);
    for (int g = 0; g < 8; ++g)
      for (int h = 0; h < 8; ++h) {
        auto const [s, u] = unit[static_cast<std::size_t>(g / 2)][static_cast<std::size_t>(h / 2)];
        int const sign = s * (g % 2 ? -1 : 1) * (h % 2 ? -1 : 1);
        t[static_cast<std::size_t>(g * 8 + h)] = static_cast<ElementId>(u * 2 + (sign < 0 ? 1 : 0));
      }
    return from_table(8, std::move(t));
  }

  std::size_t order() const noexcept { return order_; }
  Provenance provenance() const noexcept { return provenance_; }
  PhiGroup const *phi_group() const noexcept { return phi_.get(); }
  bool has_table() const noexcept { return !table_.empty(); }

  ElementId mul(ElementId g, ElementId h) const
  {
    if (!table_.empty())
      return table_[static_cast<std::size_t>(g) * order_ + h];
    return static_cast<ElementId>(phi_->multiply_index(g, h));
  }

  ElementId inverse(ElementId g) const { return inverse_[g]; }

  bool commute(ElementId g, ElementId h) const { return mul(g, h) == mul(h, g); }
  bool is_involution(ElementId g) const { return g != 0 && mul(g, g) == 0; }

  std::vector<ElementId> involutions() const
  {
    std::vector<ElementId> out;
    for (ElementId g = 1; g < order_; ++g)
      if (is_involution(g))
        out.push_back(g);
    return out;
  }

  /// Subgroup generated by `gens`, identity first, then in discovery order.
  std::vector<ElementId> closure(std::span<ElementId const> gens) const
  {
    for (auto g : gens)
      require(g < order_, "element id out of range");
    std::vector<char> seen(order_, 0);
    std::vector<ElementId> out{0};
    seen[0] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (auto g : gens) {
        auto const y = mul(out[i], g);
        if (!seen[y]) {
          seen[y] = 1;
          out.push_back(y);
        }
      }
    return out;
  }

private:
  GroupOracle() = default;

  void validate()
  {
    for (ElementId g = 0; g < order_; ++g)
      if (mul(0, g) != g || mul(g, 0) != g)
        throw ValidationError("element 0 is not a two-sided identity");

    inverse_.assign(order_, 0);
    if (phi_ && table_.empty()) {
      for (ElementId g = 0; g < order_; ++g)
        inverse_[g] = static_cast<ElementId>(phi_->to_index(phi_->inverse(phi_->from_index(g))));
    } else {
      // Latin square: every row and column is a permutation.
      for (ElementId g = 0; g < order_; ++g) {
        std::vector<char> seen(order_, 0);
        for (ElementId h = 0; h < order_; ++h) {
          auto const x = mul(g, h);
          if (seen[x])
            throw ValidationError("Cayley table row is not a permutation");
          seen[x] = 1;
          if (x == 0)
            inverse_[g] = h;
        }
      }
      for (ElementId h = 0; h < order_; ++h) {
        std::vector<char> seen(order_, 0);
        for (ElementId g = 0; g < order_; ++g) {
          auto const x = mul(g, h);
          if (seen[x])
            throw ValidationError("Cayley table column is not a permutation");
          seen[x] = 1;
        }
      }
    }
    for (ElementId g = 0; g < order_; ++g)
      if (mul(g, inverse_[g]) != 0 || mul(inverse_[g], g) != 0)
        throw ValidationError("element without a two-sided inverse");

    if (order_ <= kAssociativityCheckOrder)
      for (ElementId g = 0; g < order_; ++g)
        for (ElementId h = 0; h < order_; ++h) {
          auto const gh = mul(g, h);
          for (ElementId k = 0; k < order_; ++k)
            if (mul(gh, k) != mul(g, mul(h, k)))
              throw ValidationError("multiplication is not associative");
        }
  }

  std::size_t order_ = 0;
  std::vector<ElementId> table_;
  std::vector<ElementId> inverse_;
  std::shared_ptr<PhiGroup const> phi_;
  Provenance provenance_ = Provenance::cayley_table;
};

using GroupPtr = std::shared_ptr<GroupOracle const>;

/// g e_i = sign[i] e_{image[i]}.
struct SignedPermutation
{
  std::vector<std::uint32_t> image;
  std::vector<int> sign;

  std::size_t dim() const noexcept { return image.size(); }

  int trace() const
  {
    int t = 0;
    for (std::size_t i = 0; i < image.size(); ++i)
      if (image[i] == i)
        t += sign[i];
    return t;
  }
};

/// Ind_C^G(chi) for a +-1 character chi of the subgroup C. Basis vector i
/// corresponds to the left coset r_i C; coset representatives are the
/// smallest ids not yet covered.
class MonomialRep
{
public:
  MonomialRep(GroupPtr group, std::vector<ElementId> c_gens, std::vector<int> character_on_gens)
  : group_(std::move(group)), subgroup_gens_(std::move(c_gens)), gen_chars_(std::move(character_on_gens))
  {
    require(group_ != nullptr, "representation needs a group");
    require(subgroup_gens_.size() == gen_chars_.size(), "one character value per subgroup generator");
    auto const &G = *group_;
    for (auto g : subgroup_gens_)
      require(g < G.order(), "subgroup generator id out of range");
    for (auto c : gen_chars_)
      require(c == 1 || c == -1, "character values must be +1 or -1");

    // Enumerate C while propagating chi along generator edges; a clash on
    // any edge means chi does not extend to a homomorphism.
    chi_.assign(G.order(), 0);
    chi_[0] = 1;
    subgroup_.push_back(0);
    for (std::size_t i = 0; i < subgroup_.size(); ++i)
      for (std::size_t k = 0; k < subgroup_gens_.size(); ++k) {
        auto const x = subgroup_[i];
        auto const y = G.mul(x, subgroup_gens_[k]);
        auto const value = static_cast<std::int8_t>(chi_[x] * gen_chars_[k]);
        if (chi_[y] == 0) {
          chi_[y] = value;
          subgroup_.push_back(y);
        } else if (chi_[y] != value) {
          throw InconsistentCharacter("character does not extend to a homomorphism on the subgroup");
        }
      }

    coset_of_.assign(G.order(), kUnset);
    for (ElementId g = 0; g < G.order(); ++g) {
      if (coset_of_[g] != kUnset)
        continue;
      auto const idx = static_cast<std::uint32_t>(cosets_.size());
      cosets_.push_back(g);
      for (auto c : subgroup_)
        coset_of_[G.mul(g, c)] = idx;
    }
    if (cosets_.size() * subgroup_.size() != G.order())
      throw InternalError("cosets do not partition the group");
  }

  GroupOracle const &group() const noexcept { return *group_; }
  GroupPtr const &group_ptr() const noexcept { return group_; }
  std::size_t dim() const noexcept { return cosets_.size(); }
  std::vector<ElementId> const &subgroup() const noexcept { return subgroup_; }
  std::vector<ElementId> const &subgroup_gens() const noexcept { return subgroup_gens_; }
  std::vector<int> const &character_on_gens() const noexcept { return gen_chars_; }
  std::vector<ElementId> const &cosets() const noexcept { return cosets_; }

  /// chi(c) for c in C, 0 outside C.
  int character(ElementId c) const { return chi_[c]; }

  /// g r_i = r_j c with c in C gives g e_i = chi(c) e_j.
  SignedPermutation action(ElementId g) const
  {
    auto const &G = *group_;
    require(g < G.order(), "element id out of range");
    SignedPermutation p;
    p.image.resize(dim());
    p.sign.resize(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      auto const x = G.mul(g, cosets_[i]);
      auto const j = coset_of_[x];
      auto const c = G.mul(G.inverse(cosets_[j]), x);
      p.image[i] = j;
      p.sign[i] = chi_[c];
    }
    return p;
  }

  int trace(ElementId g) const { return action(g).trace(); }

private:
  static constexpr std::uint32_t kUnset = 0xffffffffU;

  GroupPtr group_;
  std::vector<ElementId> subgroup_gens_;
  std::vector<int> gen_chars_;
  std::vector<ElementId> subgroup_;
  std::vector<std::int8_t> chi_;
  std::vector<ElementId> cosets_;
  std::vector<std::uint32_t> coset_of_;
};

inline MonomialRep build_induced(GroupPtr group, std::vector<ElementId> c_gens, std::vector<int> character_on_gens)
{ return MonomialRep(std::move(group), std::move(c_gens), std::move(character_on_gens)); }

/// True iff some cycle of the signed permutation has sign product +1.
inline bool has_plus_one_eigenvalue(SignedPermutation const &p)
{
  std::vector<char> seen(p.dim(), 0);
  for (std::size_t start = 0; start < p.dim(); ++start) {
    if (seen[start])
      continue;
    int product = 1;
    for (auto i = start; !seen[i]; i = p.image[i]) {
      seen[i] = 1;
      product *= p.sign[i];
    }
    if (product == 1)
      return true;
  }
  return false;
}

inline bool has_plus_one_eigenvalue(MonomialRep const &rep, ElementId g)
{ return has_plus_one_eigenvalue(rep.action(g)); }

/// dim V^H = (1/|H|) sum_h trace(h).
inline std::size_t fixed_subspace_dim(MonomialRep const &rep, std::span<ElementId const> h_gens)
{
  auto const H = rep.group().closure(h_gens);
  long long sum = 0;
  for (auto h : H)
    sum += rep.trace(h);
  auto const order = static_cast<long long>(H.size());
  if (sum < 0 || sum % order != 0)
    throw InternalError("character average is not a nonnegative integer");
  return static_cast<std::size_t>(sum / order);
}

namespace detail {

inline void check_same_group(GroupOracle const &G, std::span<MonomialRep const> reps)
{
  for (auto const &r : reps)
    require(&r.group() == &G, "all representations must be over the given group");
}

} // namespace detail

struct FreenessResult
{
  bool free = true;
  std::optional<ElementId> witness;  // smallest non-identity element with a fixed point
};

/// The diagonal action on S(V_1) x ... x S(V_k) is free iff no g != 1 has
/// eigenvalue +1 on every factor.
inline FreenessResult is_free_on_product(GroupOracle const &G, std::span<MonomialRep const> reps)
{
  detail::check_same_group(G, reps);
  for (ElementId g = 1; g < G.order(); ++g) {
    bool fixes = std::all_of(reps.begin(), reps.end(),
                             [g](auto const &r) { return has_plus_one_eigenvalue(r, g); });
    if (fixes)
      return {false, g};
  }
  return {true, std::nullopt};
}

struct IsotropyResult
{
  std::size_t rank = 0;
  std::vector<ElementId> witness_gens;
};

namespace detail {

// Clique-style search over commuting involutions. Elements are added in
// increasing id order; for a target subgroup K reached greedily, every
// element of K outside the current subgroup lies after the last choice.
class IsotropySearch
{
public:
  IsotropySearch(GroupOracle const &G, std::span<MonomialRep const> reps)
  : G_(G), traces_(reps.size(), std::vector<int>(G.order(), 0)), member_(G.order(), 0)
  {
    for (std::size_t r = 0; r < reps.size(); ++r)
      for (ElementId g = 0; g < G.order(); ++g)
        traces_[r][g] = reps[r].trace(g);
    for (auto g : G.involutions()) {
      bool ok = true;
      for (auto const &rep : reps)
        ok = ok && has_plus_one_eigenvalue(rep, g);
      if (ok)
        cands_.push_back(g);
    }
  }

  IsotropyResult run()
  {
    std::vector<ElementId> H{0};
    member_[0] = 1;
    std::vector<long long> sums(traces_.size());
    for (std::size_t r = 0; r < traces_.size(); ++r)
      sums[r] = traces_[r][0];
    std::vector<ElementId> gens;
    search(H, gens, sums, cands_);
    return best_;
  }

private:
  void search(std::vector<ElementId> &H, std::vector<ElementId> &gens, std::vector<long long> const &sums,
              std::vector<ElementId> const &cands)
  {
    auto const d = gens.size();
    if (d > best_.rank) {
      best_.rank = d;
      best_.witness_gens = gens;
    }
    for (std::size_t idx = 0; idx < cands.size(); ++idx) {
      auto const remaining = (cands.size() - idx) / H.size();
      std::size_t j = 0;
      while ((std::size_t{1} << (j + 1)) - 1 <= remaining)
        ++j;
      if (d + j <= best_.rank)
        break;

      auto const v = cands[idx];
      std::vector<ElementId> coset;
      coset.reserve(H.size());
      for (auto h : H)
        coset.push_back(G_.mul(v, h));
      auto next_sums = sums;
      bool fixed = true;
      for (std::size_t r = 0; r < traces_.size(); ++r) {
        for (auto x : coset)
          next_sums[r] += traces_[r][x];
        fixed = fixed && next_sums[r] > 0;
      }
      if (!fixed)
        continue;

      auto const old_size = H.size();
      H.insert(H.end(), coset.begin(), coset.end());
      for (auto x : coset)
        member_[x] = 1;
      std::vector<ElementId> next;
      for (std::size_t k = idx + 1; k < cands.size(); ++k) {
        auto const w = cands[k];
        if (!member_[w] && G_.commute(v, w))
          next.push_back(w);
      }
      gens.push_back(v);
      search(H, gens, next_sums, next);
      gens.pop_back();
      for (auto x : coset)
        member_[x] = 0;
      H.resize(old_size);
    }
  }

  GroupOracle const &G_;
  std::vector<std::vector<int>> traces_;
  std::vector<char> member_;
  std::vector<ElementId> cands_;
  IsotropyResult best_;
};

} // namespace detail

/// Largest rank of an elementary abelian H <= G with a common fixed point on
/// the product of spheres, i.e. dim V_r^H > 0 for every factor. With no
/// factors this is the rank of G.
inline IsotropyResult max_isotropy_rank(GroupOracle const &G, std::span<MonomialRep const> reps)
{
  guard(G.order() <= kMaxIsotropyOrder, "isotropy_order", "isotropy search requires group order <= 4096");
  detail::check_same_group(G, reps);
  return detail::IsotropySearch(G, reps).run();
}

/// Largest rank of an elementary abelian subgroup.
inline std::size_t elementary_abelian_rank(GroupOracle const &G)
{ return max_isotropy_rank(G, {}).rank; }

/// Every involution is central.
inline bool is_two_central(GroupOracle const &G)
{
  for (ElementId x = 1; x < G.order(); ++x) {
    if (!G.is_involution(x))
      continue;
    for (ElementId g = 0; g < G.order(); ++g)
      if (!G.commute(x, g))
        return false;
  }
  return true;
}

} // namespace tworank
