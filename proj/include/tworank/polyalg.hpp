#pragma once

// Homogeneous polynomials over GF(2) in degree-one variables x_1..x_n (the
// mod-2 cohomology ring of (Z/2)^n), Hilbert functions of quotients by
// homogeneous ideals, regular-sequence certification for square systems,
// Euler classes of monomial representations restricted to elementary
// abelian subgroups, and the power-span equivariance test.

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "tworank/error.hpp"
#include "tworank/gf2.hpp"
#include "tworank/repaction.hpp"

namespace tworank {

inline constexpr std::size_t kMaxPolyVars = 16;
inline constexpr std::size_t kMaxEulerDegree = 64;
inline constexpr std::size_t kMaxPolyTerms = 1U << 21;
inline constexpr std::size_t kMaxHilbertBasis = 1U << 16;

using Exponents = std::array<std::uint16_t, kMaxPolyVars>;

/// Homogeneous element of GF(2)[x_1..x_n]; a set of exponent vectors all of
/// total degree `degree`.
class GradedPoly
{
public:
  GradedPoly() = default;

  GradedPoly(std::size_t nvars, std::size_t degree)
  : nvars_(nvars), degree_(degree)
  {
    require(nvars <= kMaxPolyVars, "polynomials are limited to 16 variables");
  }

  static GradedPoly one(std::size_t nvars)
  {
    GradedPoly p(nvars, 0);
    p.monomials_.insert(Exponents{});
    return p;
  }

  static GradedPoly monomial(std::size_t nvars, std::span<std::size_t const> exps)
  {
    require(exps.size() == nvars, "exponent vector length differs from nvars");
    Exponents e{};
    std::size_t deg = 0;
    for (std::size_t i = 0; i < nvars; ++i) {
      e[i] = static_cast<std::uint16_t>(exps[i]);
      deg += exps[i];
    }
    GradedPoly p(nvars, deg);
    p.monomials_.insert(e);
    return p;
  }

  static GradedPoly variable(std::size_t nvars, std::size_t i)
  {
    require(i < nvars, "variable index out of range");
    GradedPoly p(nvars, 1);
    Exponents e{};
    e[i] = 1;
    p.monomials_.insert(e);
    return p;
  }

  /// sum_{i : coeffs_i = 1} x_i.
  static GradedPoly linear(BitVector const &coeffs)
  {
    GradedPoly p(coeffs.size(), 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (coeffs.test(i)) {
        Exponents e{};
        e[i] = 1;
        p.monomials_.insert(e);
      }
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t degree() const noexcept { return degree_; }
  std::set<Exponents> const &monomials() const noexcept { return monomials_; }
  bool is_zero() const noexcept { return monomials_.empty(); }

  /// Adds a monomial mod 2.
  void toggle(Exponents const &e)
  {
    std::size_t deg = 0;
    for (std::size_t i = 0; i < kMaxPolyVars; ++i) {
      require(i < nvars_ || e[i] == 0, "monomial uses a variable beyond nvars");
      deg += e[i];
    }
    require(deg == degree_, "monomial degree differs from polynomial degree");
    if (auto it = monomials_.find(e); it != monomials_.end())
      monomials_.erase(it);
    else
      monomials_.insert(e);
  }

  /// Coefficient vector of a degree-one polynomial.
  BitVector linear_coeffs() const
  {
    require(degree_ == 1, "linear_coeffs requires a degree-one polynomial");
    BitVector v(nvars_);
    for (auto const &e : monomials_)
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i])
          v.set(i);
    return v;
  }

  GradedPoly &operator+=(GradedPoly const &other)
  {
    require(nvars_ == other.nvars_ && degree_ == other.degree_, "sum of polynomials of different shape");
    for (auto const &e : other.monomials_)
      if (auto it = monomials_.find(e); it != monomials_.end())
        monomials_.erase(it);
      else
        monomials_.insert(e);
    return *this;
  }

  friend GradedPoly operator+(GradedPoly a, GradedPoly const &b) { return a += b; }

  friend GradedPoly operator*(GradedPoly const &a, GradedPoly const &b)
  {
    require(a.nvars_ == b.nvars_, "product of polynomials in different rings");
    GradedPoly r(a.nvars_, a.degree_ + b.degree_);
    for (auto const &x : a.monomials_)
      for (auto const &y : b.monomials_) {
        Exponents e{};
        for (std::size_t i = 0; i < kMaxPolyVars; ++i)
          e[i] = static_cast<std::uint16_t>(x[i] + y[i]);
        if (auto it = r.monomials_.find(e); it != r.monomials_.end())
          r.monomials_.erase(it);
        else
          r.monomials_.insert(e);
      }
    guard(r.monomials_.size() <= kMaxPolyTerms, "poly_terms", "polynomial exceeds the term guard");
    return r;
  }

  GradedPoly pow(std::size_t k) const
  {
    auto r = one(nvars_);
    for (std::size_t i = 0; i < k; ++i)
      r = r * *this;
    return r;
  }

  /// Ring map x_j -> sum_i A[i][j] x_i, i.e. the action of A on linear
  /// forms c -> A c extended multiplicatively.
  GradedPoly substitute(BitMatrix const &A) const
  {
    require(A.square() && A.rows() == nvars_, "substitution matrix must be nvars x nvars");
    auto const At = A.transpose();
    std::vector<GradedPoly> images;
    for (std::size_t j = 0; j < nvars_; ++j)
      images.push_back(linear(At.row(j)));
    GradedPoly r(nvars_, degree_);
    for (auto const &e : monomials_) {
      auto term = one(nvars_);
      for (std::size_t j = 0; j < nvars_; ++j)
        if (e[j])
          term = term * images[j].pow(e[j]);
      r += term;
    }
    return r;
  }

  friend bool operator==(GradedPoly const &, GradedPoly const &) = default;

private:
  std::size_t nvars_ = 0;
  std::size_t degree_ = 0;
  std::set<Exponents> monomials_;
};

struct IdealGens
{
  std::size_t nvars = 0;
  std::vector<GradedPoly> gens;

  void validate() const
  {
    require(nvars <= kMaxPolyVars, "polynomials are limited to 16 variables");
    for (auto const &g : gens)
      require(g.nvars() == nvars, "ideal generators must share nvars");
  }
};

/// All exponent vectors of total degree d in n variables, in lexicographic order.
inline std::vector<Exponents> monomials_of_degree(std::size_t n, std::size_t d)
{
  std::vector<Exponents> out;
  if (n == 0) {
    if (d == 0)
      out.push_back(Exponents{});
    return out;
  }
  Exponents e{};
  auto rec = [&](auto &&self, std::size_t i, std::size_t left) -> void {
    if (i + 1 == n) {
      e[i] = static_cast<std::uint16_t>(left);
      out.push_back(e);
      return;
    }
    for (std::size_t k = left + 1; k-- > 0;) {
      e[i] = static_cast<std::uint16_t>(k);
      self(self, i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(rec, 0, d);
  guard(out.size() <= kMaxHilbertBasis, "hilbert_basis", "degree-d monomial basis exceeds the guard");
  return out;
}

/// dim_F2 of the degree-d part of F2[x]/I.
inline std::size_t hilbert_function(IdealGens const &I, std::size_t d)
{
  I.validate();
  auto const basis = monomials_of_degree(I.nvars, d);
  std::map<Exponents, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i)
    index.emplace(basis[i], i);

  Subspace span(basis.size());
  for (auto const &g : I.gens) {
    if (g.degree() > d || g.is_zero())
      continue;
    for (auto const &m : monomials_of_degree(I.nvars, d - g.degree())) {
      BitVector row(basis.size());
      for (auto const &e : g.monomials()) {
        Exponents prod{};
        for (std::size_t i = 0; i < kMaxPolyVars; ++i)
          prod[i] = static_cast<std::uint16_t>(m[i] + e[i]);
        row.flip(index.at(prod));
      }
      span.insert(std::move(row));
      if (span.dim() == basis.size())
        return 0;
    }
  }
  return basis.size() - span.dim();
}

namespace detail {

// Degree just past the socle of a complete intersection: sum (d_i - 1) + 1.
inline std::size_t artinian_cutoff(IdealGens const &I)
{
  I.validate();
  if (I.gens.size() != I.nvars)
    throw NonSquareSystem("regularity is decided only for square systems (as many generators as variables)");
  std::size_t cutoff = 1;
  for (auto const &g : I.gens) {
    require(g.degree() >= 1, "ideal generators must have positive degree");
    cutoff += g.degree() - 1;
  }
  return cutoff;
}

} // namespace detail

/// For n homogeneous elements in n variables: regular iff the quotient
/// vanishes in degree sum (d_i - 1) + 1.
inline bool is_regular_sequence(IdealGens const &I)
{ return hilbert_function(I, detail::artinian_cutoff(I)) == 0; }

/// Total dimension of the quotient when the generators are regular.
inline std::optional<std::size_t> quotient_total_dim(IdealGens const &I)
{
  auto const cutoff = detail::artinian_cutoff(I);
  if (hilbert_function(I, cutoff) != 0)
    return std::nullopt;
  std::size_t total = 0;
  for (std::size_t d = 0; d < cutoff; ++d)
    total += hilbert_function(I, d);
  return total;
}

// ---------------------------------------------------------------------------
// Euler classes

struct EulerClass
{
  /// Multiplicity of the character lambda_c(e_S) = (-1)^{|c & S|}, indexed by c.
  std::vector<long long> multiplicities;
  /// prod_c (sum_{i in c} x_i)^{m_c}; nullopt is the zero class (a trivial
  /// summand is present).
  std::optional<GradedPoly> euler;
};

namespace detail {

// Elements e_S = prod_{i in S} gens[i] of the elementary abelian subgroup.
inline std::vector<ElementId> elementary_abelian_elements(GroupOracle const &G, std::span<ElementId const> gens,
                                                          std::size_t rank)
{
  require(gens.size() == rank, "E_gens must list exactly E_rank generators");
  guard(rank <= kMaxPolyVars, "euler_nvars", "Euler classes are limited to rank 16");
  for (auto g : gens) {
    require(g < G.order(), "element id out of range");
    require(G.is_involution(g), "E generators must be involutions");
    for (auto h : gens)
      require(G.commute(g, h), "E generators must commute");
  }
  std::vector<ElementId> elems(std::size_t{1} << rank, 0);
  for (std::size_t S = 1; S < elems.size(); ++S) {
    auto const low = static_cast<std::size_t>(std::countr_zero(S));
    elems[S] = G.mul(elems[S & (S - 1)], gens[low]);
  }
  std::vector<ElementId> sorted = elems;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "E generators are not independent");
  return elems;
}

} // namespace detail

inline EulerClass euler_class_restriction(MonomialRep const &rep, std::span<ElementId const> e_gens, std::size_t e_rank)
{
  auto const elems = detail::elementary_abelian_elements(rep.group(), e_gens, e_rank);
  guard(rep.dim() <= kMaxEulerDegree, "euler_degree", "Euler classes are limited to degree 64");
  auto const size = static_cast<long long>(elems.size());

  std::vector<int> traces(elems.size());
  for (std::size_t S = 0; S < elems.size(); ++S)
    traces[S] = rep.trace(elems[S]);

  EulerClass out;
  out.multiplicities.resize(elems.size());
  long long total = 0;
  for (std::size_t c = 0; c < elems.size(); ++c) {
    long long sum = 0;
    for (std::size_t S = 0; S < elems.size(); ++S)
      sum += (std::popcount(c & S) & 1) ? -traces[S] : traces[S];
    if (sum < 0 || sum % size != 0)
      throw InternalError("character multiplicity is not a nonnegative integer");
    out.multiplicities[c] = sum / size;
    total += out.multiplicities[c];
  }
  if (total != static_cast<long long>(rep.dim()))
    throw InternalError("character multiplicities do not add up to the dimension");

  if (out.multiplicities[0] > 0)
    return out;
  auto poly = GradedPoly::one(e_rank);
  for (std::size_t c = 1; c < elems.size(); ++c)
    if (out.multiplicities[c] > 0)
      poly = poly * GradedPoly::linear(BitVector::from_word(e_rank, c))
                      .pow(static_cast<std::size_t>(out.multiplicities[c]));
  out.euler = std::move(poly);
  return out;
}

struct TransgressionResult
{
  bool regular = false;
  std::vector<EulerClass> classes;
};

/// Euler classes of the factors restricted to E form a regular sequence in
/// H^*(E) = F2[x_1..x_n].
inline TransgressionResult transgression_check(GroupOracle const &G, std::span<MonomialRep const> reps,
                                               std::span<ElementId const> e_gens)
{
  detail::check_same_group(G, reps);
  require(e_gens.size() == reps.size(), "E must have rank equal to the number of spheres");
  for (auto const &r : reps)
    require(r.dim() == reps.front().dim(), "spheres must be equidimensional");

  TransgressionResult out;
  IdealGens I{e_gens.size(), {}};
  bool all_nonzero = true;
  for (auto const &r : reps) {
    out.classes.push_back(euler_class_restriction(r, e_gens, e_gens.size()));
    if (out.classes.back().euler)
      I.gens.push_back(*out.classes.back().euler);
    else
      all_nonzero = false;
  }
  out.regular = all_nonzero && is_regular_sequence(I);
  return out;
}

// ---------------------------------------------------------------------------
// Power-span test

struct LinearAction
{
  std::size_t nvars = 0;
  std::vector<BitMatrix> generators;

  void validate() const
  {
    for (auto const &g : generators) {
      require(g.square() && g.rows() == nvars, "action generators must be nvars x nvars");
      require(rank(g) == nvars, "action generators must be invertible");
    }
  }
};

struct PowerSpanResult
{
  bool stable = false;
  bool permuted = false;
};

/// stable: span{y_i^p} is carried into itself by every generator.
/// permuted: every generator maps the set {y_i} to itself.
inline PowerSpanResult power_span_test(LinearAction const &act, std::span<GradedPoly const> ys, std::size_t p)
{
  act.validate();
  require(p >= 1, "power must be positive");
  std::vector<BitVector> coeffs;
  for (auto const &y : ys) {
    require(y.nvars() == act.nvars && y.degree() == 1, "ys must be degree-one polynomials in nvars variables");
    coeffs.push_back(y.linear_coeffs());
  }
  require(Subspace::span(act.nvars, coeffs).dim() == coeffs.size(), "ys must be linearly independent");

  auto const basis = monomials_of_degree(act.nvars, p);
  std::map<Exponents, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i)
    index.emplace(basis[i], i);
  auto to_vec = [&](GradedPoly const &f) {
    BitVector v(basis.size());
    for (auto const &e : f.monomials())
      v.flip(index.at(e));
    return v;
  };

  Subspace powers(basis.size());
  for (auto const &y : ys)
    powers.insert(to_vec(y.pow(p)));

  PowerSpanResult out{true, true};
  for (auto const &A : act.generators)
    for (auto const &c : coeffs) {
      auto const image = A * c;
      if (std::find(coeffs.begin(), coeffs.end(), image) == coeffs.end())
        out.permuted = false;
      if (!powers.contains(to_vec(GradedPoly::linear(image).pow(p))))
        out.stable = false;
    }
  return out;
}

} // namespace tworank
