#pragma once

// Alternating bilinear forms over GF(2), families of them, their quadratic
// refinements, and exhaustive common-zero search for quadratic systems.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "tworank/error.hpp"
#include "tworank/gf2.hpp"
#include "tworank/random.hpp"

namespace tworank {

/// phi(x, y) = x^T G y with G symmetric and zero on the diagonal.
class AlternatingForm
{
public:
  AlternatingForm() = default;

  explicit AlternatingForm(BitMatrix gram)
  : gram_(std::move(gram))
  {
    require(gram_.square(), "gram matrix must be square");
    require(gram_.symmetric(), "gram matrix must be symmetric");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      require(!gram_.test(i, i), "gram matrix must have zero diagonal");
  }

  static AlternatingForm zero(std::size_t n) { return AlternatingForm(BitMatrix(n, n)); }

  std::size_t n() const noexcept { return gram_.rows(); }
  BitMatrix const &gram() const noexcept { return gram_; }

  friend bool operator==(AlternatingForm const &, AlternatingForm const &) = default;

private:
  BitMatrix gram_;
};

inline bool evaluate(AlternatingForm const &phi, BitVector const &x, BitVector const &y)
{
  require(x.size() == phi.n() && y.size() == phi.n(), "form argument length mismatch");
  bool acc = false;
  for (std::size_t i = 0; i < phi.n(); ++i)
    if (x.test(i))
      acc ^= phi.gram().row(i).dot(y);
  return acc;
}

/// Phi = (phi_1, ..., phi_t) on GF(2)^n together with the strictly lower
/// triangles L_s of the gram matrices. The cocycle
///   beta_s(e, f) = e^T L_s f = sum_{i > j} e_i f_j G_s[i][j]
/// drives both the group law of G_Phi and the quadratic refinement
/// q_s(e) = beta_s(e, e).
class FormFamily
{
public:
  FormFamily() = default;

  FormFamily(std::size_t n, std::vector<AlternatingForm> forms)
  : n_(n), forms_(std::move(forms))
  {
    require(n_ <= 64, "forms are limited to dimension 64");
    for (auto const &f : forms_)
      require(f.n() == n_, "all forms in a family must share the dimension n");
    build_masks();
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t t() const noexcept { return forms_.size(); }
  std::vector<AlternatingForm> const &forms() const noexcept { return forms_; }

  /// Strictly lower triangle of form s: entry (i, j) = G_s[i][j] for i > j.
  BitMatrix lower(std::size_t s) const
  {
    BitMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (forms_[s].gram().test(i, j))
          m.set(i, j);
    return m;
  }

  // Word-level kernels; vectors are the low n bits of a 64-bit word.

  std::uint64_t lower_row(std::size_t s, std::size_t i) const noexcept { return lower_[s * n_ + i]; }
  std::uint64_t gram_row(std::size_t s, std::size_t i) const noexcept { return gram_[s * n_ + i]; }

  bool cocycle_bit(std::size_t s, std::uint64_t e, std::uint64_t f) const noexcept
  {
    std::uint64_t acc = 0;
    for (auto w = e; w != 0; w &= w - 1)
      acc ^= lower_row(s, static_cast<std::size_t>(std::countr_zero(w))) & f;
    return std::popcount(acc) & 1;
  }

  bool pairing_bit(std::size_t s, std::uint64_t e, std::uint64_t f) const noexcept
  {
    std::uint64_t acc = 0;
    for (auto w = e; w != 0; w &= w - 1)
      acc ^= gram_row(s, static_cast<std::size_t>(std::countr_zero(w))) & f;
    return std::popcount(acc) & 1;
  }

  /// Bit s of the result is beta_s(e, f); requires t <= 64.
  std::uint64_t cocycle_word(std::uint64_t e, std::uint64_t f) const noexcept
  {
    std::uint64_t r = 0;
    for (std::size_t s = 0; s < forms_.size(); ++s)
      if (cocycle_bit(s, e, f))
        r |= std::uint64_t{1} << s;
    return r;
  }

  std::uint64_t pairing_word(std::uint64_t e, std::uint64_t f) const noexcept
  {
    std::uint64_t r = 0;
    for (std::size_t s = 0; s < forms_.size(); ++s)
      if (pairing_bit(s, e, f))
        r |= std::uint64_t{1} << s;
    return r;
  }

  /// (beta_s(e, f))_s as a vector of length t.
  BitVector cocycle(BitVector const &e, BitVector const &f) const
  {
    check_len(e);
    check_len(f);
    BitVector r(t());
    for (std::size_t s = 0; s < t(); ++s)
      if (cocycle_bit(s, e.low_word(), f.low_word()))
        r.set(s);
    return r;
  }

  /// (phi_s(e, f))_s as a vector of length t.
  BitVector pairing(BitVector const &e, BitVector const &f) const
  {
    check_len(e);
    check_len(f);
    BitVector r(t());
    for (std::size_t s = 0; s < t(); ++s)
      if (pairing_bit(s, e.low_word(), f.low_word()))
        r.set(s);
    return r;
  }

  friend bool operator==(FormFamily const &a, FormFamily const &b)
  { return a.n_ == b.n_ && a.forms_ == b.forms_; }

private:
  void check_len(BitVector const &v) const
  {
    if (v.size() != n_)
      throw ValidationError("vector length differs from family dimension n");
  }

  void build_masks()
  {
    lower_.assign(forms_.size() * n_, 0);
    gram_.assign(forms_.size() * n_, 0);
    for (std::size_t s = 0; s < forms_.size(); ++s)
      for (std::size_t i = 0; i < n_; ++i) {
        auto const row = forms_[s].gram().row(i).low_word();
        gram_[s * n_ + i] = row;
        lower_[s * n_ + i] = i == 0 ? 0 : row & ((std::uint64_t{1} << i) - 1);
      }
  }

  std::size_t n_ = 0;
  std::vector<AlternatingForm> forms_;
  std::vector<std::uint64_t> lower_;
  std::vector<std::uint64_t> gram_;
};

/// q(e) = (e^T L_s e)_s, the b-part of the square of the normal-form word
/// with a-exponents e.
inline BitVector quadratic_refinement(FormFamily const &fam, BitVector const &e)
{ return fam.cocycle(e, e); }

/// Intersection of the kernels of all gram matrices.
inline Subspace common_radical(FormFamily const &fam)
{
  std::vector<BitVector> rows;
  for (auto const &f : fam.forms())
    rows.insert(rows.end(), f.gram().row_data().begin(), f.gram().row_data().end());
  return kernel(BitMatrix::from_rows(std::move(rows), fam.n()));
}

/// Each strictly-lower entry is one fair bit of the splitmix64 stream seeded
/// with `seed`, drawn form by form, row by row, column by column.
inline FormFamily random_family(std::size_t n, std::size_t t, std::uint64_t seed)
{
  require(n >= 1 && t >= 1, "random_family requires n >= 1 and t >= 1");
  require(n <= 64, "forms are limited to dimension 64");
  SplitMix64 rng(seed);
  std::vector<AlternatingForm> forms;
  forms.reserve(t);
  for (std::size_t s = 0; s < t; ++s) {
    BitMatrix g(n, n);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (rng.bit()) {
          g.set(i, j);
          g.set(j, i);
        }
    forms.emplace_back(std::move(g));
  }
  return FormFamily(n, std::move(forms));
}

// ---------------------------------------------------------------------------
// Quadratic systems

/// Monomial of degree <= 2 as a sorted list of variable indices; {} is the
/// constant 1 and {i, i} is x_i^2.
using QuadMonomial = std::vector<std::size_t>;

/// Polynomial over GF(2) with monomials of degree <= 2 (set semantics).
class QuadraticPoly
{
public:
  QuadraticPoly() = default;

  /// Adds a monomial mod 2: inserting a present monomial cancels it.
  void toggle(QuadMonomial m)
  {
    require(m.size() <= 2, "quadratic polynomial monomial has degree above 2");
    std::sort(m.begin(), m.end());
    if (auto it = monomials_.find(m); it != monomials_.end())
      monomials_.erase(it);
    else
      monomials_.insert(std::move(m));
  }

  std::set<QuadMonomial> const &monomials() const noexcept { return monomials_; }

  std::size_t max_variable_bound() const
  {
    std::size_t v = 0;
    for (auto const &m : monomials_)
      for (auto i : m)
        v = std::max(v, i + 1);
    return v;
  }

  /// Value at the point with coordinates given by the bits of x.
  bool evaluate(std::uint64_t x) const
  {
    bool acc = false;
    for (auto const &m : monomials_) {
      bool term = true;
      for (auto i : m)
        term = term && ((x >> i) & 1U);
      acc ^= term;
    }
    return acc;
  }

  friend bool operator==(QuadraticPoly const &, QuadraticPoly const &) = default;

private:
  std::set<QuadMonomial> monomials_;
};

struct QuadraticSystem
{
  std::size_t v = 0;
  std::vector<QuadraticPoly> polys;

  void validate() const
  {
    for (auto const &p : polys)
      require(p.max_variable_bound() <= v, "quadratic system references a variable beyond v");
  }
};

namespace detail {

// p(x) = c + <lin, x> + sum_i x_i <quad[i], x>, with quad[i] holding j > i.
struct CompiledQuadratic
{
  bool constant = false;
  std::uint64_t lin = 0;
  std::vector<std::uint64_t> quad;

  CompiledQuadratic(QuadraticPoly const &p, std::size_t v)
  : quad(v, 0)
  {
    for (auto const &m : p.monomials()) {
      if (m.empty())
        constant = !constant;
      else if (m.size() == 1 || m[0] == m[1])
        lin ^= std::uint64_t{1} << m[0];  // x_i^2 = x_i on GF(2)-points
      else
        quad[m[0]] ^= std::uint64_t{1} << m[1];
    }
  }

  bool operator()(std::uint64_t x) const noexcept
  {
    std::uint64_t acc = lin & x;
    for (auto w = x; w != 0; w &= w - 1)
      acc ^= quad[static_cast<std::size_t>(std::countr_zero(w))] & x;
    return constant ^ static_cast<bool>(std::popcount(acc) & 1);
  }
};

} // namespace detail

inline constexpr std::size_t kMaxZeroSearchVars = 24;

/// Smallest (as an integer, coordinate 0 least significant) nonzero common
/// zero over GF(2), or nullopt when none exists. The scan is exhaustive.
inline std::optional<BitVector> common_zero_quadratics(QuadraticSystem const &sys)
{
  guard(sys.v <= kMaxZeroSearchVars, "common_zero_vars",
        "common-zero search requires at most 24 variables");
  sys.validate();
  std::vector<detail::CompiledQuadratic> compiled;
  compiled.reserve(sys.polys.size());
  for (auto const &p : sys.polys)
    compiled.emplace_back(p, sys.v);

  std::uint64_t const end = std::uint64_t{1} << sys.v;
  for (std::uint64_t x = 1; x < end; ++x) {
    if (std::none_of(compiled.begin(), compiled.end(), [x](auto const &p) { return p(x); }))
      return BitVector::from_word(sys.v, x);
  }
  return std::nullopt;
}

/// The t quadratic refinements q_s as polynomials in n variables.
inline QuadraticSystem refinement_system(FormFamily const &fam)
{
  QuadraticSystem sys;
  sys.v = fam.n();
  for (std::size_t s = 0; s < fam.t(); ++s) {
    QuadraticPoly p;
    for (std::size_t i = 0; i < fam.n(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (fam.forms()[s].gram().test(i, j))
          p.toggle({j, i});
    sys.polys.push_back(std::move(p));
  }
  return sys;
}

/// q homogeneous quadratics in v variables; every monomial x_i x_j (i <= j)
/// is present with probability 1/2. No constant terms, so 0 is always a
/// common zero and only nonzero zeros are of interest.
inline QuadraticSystem random_quadratic_system(std::size_t q, std::size_t v, std::uint64_t seed)
{
  SplitMix64 rng(seed);
  QuadraticSystem sys;
  sys.v = v;
  for (std::size_t k = 0; k < q; ++k) {
    QuadraticPoly p;
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t j = i; j < v; ++j)
        if (rng.bit())
          p.toggle({i, j});
    sys.polys.push_back(std::move(p));
  }
  return sys;
}

} // namespace tworank
