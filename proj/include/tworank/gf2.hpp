#pragma once

// Exact linear algebra over GF(2): packed vectors, dense matrices and
// canonical (reduced row-echelon) subspaces.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "tworank/error.hpp"

namespace tworank {

/// Vector over GF(2). Coordinate i lives at bit (i % 64) of word (i / 64);
/// bits above size() are always zero.
class BitVector
{
public:
  BitVector() = default;

  explicit BitVector(std::size_t len)
  : len_(len), words_((len + 63) / 64, 0)
  {}

  static BitVector unit(std::size_t len, std::size_t i)
  {
    BitVector v(len);
    v.set(i);
    return v;
  }

  /// Low `len` bits of `w` as coordinates 0..len-1; len <= 64.
  static BitVector from_word(std::size_t len, std::uint64_t w)
  {
    require(len <= 64, "BitVector::from_word: length above 64");
    BitVector v(len);
    if (len > 0)
      v.words_[0] = len == 64 ? w : (w & ((std::uint64_t{1} << len) - 1));
    return v;
  }

  /// Parses '0'/'1' characters; the leftmost character is coordinate 0.
  static BitVector from_string(std::string_view s)
  {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        v.set(i);
      else if (s[i] != '0')
        throw ValidationError("bit string contains a character other than 0/1");
    }
    return v;
  }

  std::size_t size() const noexcept { return len_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::span<std::uint64_t const> words() const noexcept { return words_; }

  /// First word, for vectors known to fit in 64 bits.
  std::uint64_t low_word() const noexcept { return words_.empty() ? 0 : words_[0]; }

  bool test(std::size_t i) const noexcept
  { return (words_[i >> 6] >> (i & 63)) & 1U; }

  void set(std::size_t i, bool value = true) noexcept
  {
    auto const mask = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(std::size_t i) noexcept
  { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool any() const noexcept
  { return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; }); }

  bool none() const noexcept { return !any(); }

  std::size_t popcount() const noexcept
  {
    std::size_t c = 0;
    for (auto w : words_)
      c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Lowest set coordinate.
  std::optional<std::size_t> lowest() const noexcept
  {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] != 0)
        return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return std::nullopt;
  }

  /// Standard bilinear pairing sum_i x_i y_i.
  bool dot(BitVector const &other) const
  {
    check_len(other);
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < words_.size(); ++k)
      acc ^= words_[k] & other.words_[k];
    return std::popcount(acc) & 1;
  }

  BitVector &operator^=(BitVector const &other)
  {
    check_len(other);
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] ^= other.words_[k];
    return *this;
  }

  BitVector &operator&=(BitVector const &other)
  {
    check_len(other);
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] &= other.words_[k];
    return *this;
  }

  friend BitVector operator^(BitVector a, BitVector const &b) { return a ^= b; }
  friend BitVector operator+(BitVector a, BitVector const &b) { return a ^= b; }
  friend BitVector operator&(BitVector a, BitVector const &b) { return a &= b; }

  friend bool operator==(BitVector const &, BitVector const &) = default;

  /// Orders by length, then by value read as a binary integer with
  /// coordinate 0 as the least significant bit.
  friend std::strong_ordering operator<=>(BitVector const &a, BitVector const &b)
  {
    if (auto c = a.len_ <=> b.len_; c != 0)
      return c;
    for (std::size_t k = a.words_.size(); k-- > 0;)
      if (auto c = a.words_[k] <=> b.words_[k]; c != 0)
        return c;
    return std::strong_ordering::equal;
  }

  /// Concatenation: coordinates of `*this` followed by those of `tail`.
  BitVector concat(BitVector const &tail) const
  {
    BitVector r(len_ + tail.len_);
    for (std::size_t i = 0; i < len_; ++i)
      if (test(i))
        r.set(i);
    for (std::size_t i = 0; i < tail.len_; ++i)
      if (tail.test(i))
        r.set(len_ + i);
    return r;
  }

  std::string to_string() const
  {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
      if (test(i))
        s[i] = '1';
    return s;
  }

  std::size_t hash() const noexcept
  {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ len_;
    for (auto w : words_) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }

private:
  void check_len(BitVector const &other) const
  {
    if (other.len_ != len_)
      throw ValidationError("BitVector length mismatch");
  }

  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitVectorHash
{
  std::size_t operator()(BitVector const &v) const noexcept { return v.hash(); }
};

/// Dense matrix over GF(2), stored as packed rows.
class BitMatrix
{
public:
  BitMatrix() = default;

  BitMatrix(std::size_t rows, std::size_t cols)
  : cols_(cols), rows_(rows, BitVector(cols))
  {}

  static BitMatrix identity(std::size_t n)
  {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m.set(i, i);
    return m;
  }

  static BitMatrix from_rows(std::vector<BitVector> rows, std::size_t cols)
  {
    for (auto const &r : rows)
      require(r.size() == cols, "BitMatrix row length differs from column count");
    BitMatrix m;
    m.cols_ = cols;
    m.rows_ = std::move(rows);
    return m;
  }

  static BitMatrix from_strings(std::vector<std::string> const &rows, std::size_t cols)
  {
    std::vector<BitVector> data;
    data.reserve(rows.size());
    for (auto const &r : rows)
      data.push_back(BitVector::from_string(r));
    return from_rows(std::move(data), cols);
  }

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_.size() == cols_; }

  BitVector const &row(std::size_t i) const { return rows_[i]; }
  std::vector<BitVector> const &row_data() const noexcept { return rows_; }

  bool test(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
  void set(std::size_t i, std::size_t j, bool value = true) { rows_[i].set(j, value); }

  BitMatrix transpose() const
  {
    BitMatrix t(cols_, rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (rows_[i].test(j))
          t.set(j, i);
    return t;
  }

  BitVector operator*(BitVector const &v) const
  {
    require(v.size() == cols_, "matrix-vector dimension mismatch");
    BitVector r(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (rows_[i].dot(v))
        r.set(i);
    return r;
  }

  BitMatrix operator*(BitMatrix const &other) const
  {
    require(cols_ == other.rows(), "matrix product dimension mismatch");
    BitMatrix r(rows_.size(), other.cols());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t k = 0; k < cols_; ++k)
        if (rows_[i].test(k))
          r.rows_[i] ^= other.rows_[k];
    return r;
  }

  BitMatrix &operator+=(BitMatrix const &other)
  {
    require(rows() == other.rows() && cols_ == other.cols_, "matrix sum dimension mismatch");
    for (std::size_t i = 0; i < rows_.size(); ++i)
      rows_[i] ^= other.rows_[i];
    return *this;
  }

  friend BitMatrix operator+(BitMatrix a, BitMatrix const &b) { return a += b; }

  bool symmetric() const
  {
    if (!square())
      return false;
    for (std::size_t i = 0; i < cols_; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (test(i, j) != test(j, i))
          return false;
    return true;
  }

  friend bool operator==(BitMatrix const &, BitMatrix const &) = default;

private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

/// Subspace of GF(2)^n in canonical form: reduced row-echelon basis, pivot =
/// lowest set coordinate, pivots strictly increasing, each pivot column
/// holding a single 1. Equal subspaces have identical bases.
class Subspace
{
public:
  Subspace() = default;

  explicit Subspace(std::size_t ambient_dim)
  : ambient_(ambient_dim)
  {}

  static Subspace full(std::size_t n)
  {
    Subspace s(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.basis_.push_back(BitVector::unit(n, i));
      s.pivots_.push_back(i);
    }
    return s;
  }

  /// Span of `vectors` inside GF(2)^ambient_dim.
  static Subspace span(std::size_t ambient_dim, std::span<BitVector const> vectors)
  {
    Subspace s(ambient_dim);
    for (auto const &v : vectors)
      s.insert(v);
    return s;
  }

  /// Adds `v` to the spanning set; returns false if it was already inside.
  bool insert(BitVector v)
  {
    require(v.size() == ambient_, "vector length differs from ambient dimension");
    v = reduce(std::move(v));
    auto const p = v.lowest();
    if (!p)
      return false;
    for (auto &row : basis_)
      if (row.test(*p))
        row ^= v;
    auto const pos = static_cast<std::size_t>(
      std::lower_bound(pivots_.begin(), pivots_.end(), *p) - pivots_.begin());
    basis_.insert(basis_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), *p);
    return true;
  }

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  std::vector<BitVector> const &basis() const noexcept { return basis_; }
  std::vector<std::size_t> const &pivots() const noexcept { return pivots_; }

  /// Unique representative of v modulo the subspace (no pivot bits set).
  BitVector reduce(BitVector v) const
  {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (v.test(pivots_[i]))
        v ^= basis_[i];
    return v;
  }

  bool contains(BitVector const &v) const
  {
    require(v.size() == ambient_, "vector length differs from ambient dimension");
    return reduce(v).none();
  }

  bool contains(Subspace const &other) const
  {
    return std::all_of(other.basis_.begin(), other.basis_.end(),
                       [&](auto const &v) { return contains(v); });
  }

  /// Calls f on every vector of the subspace (2^dim of them, zero first).
  template<typename F>
  void for_each_vector(F &&f) const
  {
    BitVector cur(ambient_);
    f(static_cast<BitVector const &>(cur));
    std::uint64_t const count = std::uint64_t{1} << basis_.size();
    for (std::uint64_t k = 1; k < count; ++k) {
      cur ^= basis_[static_cast<std::size_t>(std::countr_zero(k))];
      f(static_cast<BitVector const &>(cur));
    }
  }

  friend bool operator==(Subspace const &a, Subspace const &b)
  { return a.ambient_ == b.ambient_ && a.basis_ == b.basis_; }

private:
  friend class SubspaceEnumerator;

  std::size_t ambient_ = 0;
  std::vector<BitVector> basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace subspace_span(std::span<BitVector const> vectors)
{
  if (vectors.empty())
    return Subspace(0);
  return Subspace::span(vectors.front().size(), vectors);
}

inline Subspace subspace_span(std::size_t ambient_dim, std::span<BitVector const> vectors)
{ return Subspace::span(ambient_dim, vectors); }

inline std::size_t rank(BitMatrix const &m)
{ return Subspace::span(m.cols(), m.row_data()).dim(); }

/// Null space {v : m v = 0}.
inline Subspace kernel(BitMatrix const &m)
{
  auto const n = m.cols();
  auto const rowspace = Subspace::span(n, m.row_data());
  auto const &pivots = rowspace.pivots();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots)
    is_pivot[p] = true;

  std::vector<BitVector> gens;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f])
      continue;
    BitVector x = BitVector::unit(n, f);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (rowspace.basis()[i].test(f))
        x.set(pivots[i]);
    gens.push_back(std::move(x));
  }
  return Subspace::span(n, gens);
}

inline Subspace intersect(Subspace const &a, Subspace const &b)
{
  require(a.ambient_dim() == b.ambient_dim(), "intersection of subspaces in different ambient spaces");
  // v in a and v in b  <=>  v in a and v annihilates b's annihilator.
  auto const n = a.ambient_dim();
  auto const ann_b = kernel(BitMatrix::from_rows(b.basis(), n));
  if (a.dim() == 0)
    return Subspace(n);
  // Coordinates c (w.r.t. a's basis) with sum c_i <a_i, w> = 0 for all w in ann_b.
  BitMatrix constraints(ann_b.dim(), a.dim());
  for (std::size_t r = 0; r < ann_b.dim(); ++r)
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (a.basis()[i].dot(ann_b.basis()[r]))
        constraints.set(r, i);
  auto const coeffs = kernel(constraints);
  std::vector<BitVector> gens;
  for (auto const &c : coeffs.basis()) {
    BitVector v(n);
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (c.test(i))
        v ^= a.basis()[i];
    gens.push_back(std::move(v));
  }
  return Subspace::span(n, gens);
}

namespace detail {

inline std::size_t check_action(std::span<BitMatrix const> action, std::optional<std::size_t> n)
{
  std::size_t dim = n.value_or(action.empty() ? 0 : action.front().rows());
  for (auto const &g : action)
    require(g.square() && g.rows() == dim, "action matrices must be square of a common dimension");
  return dim;
}

} // namespace detail

/// Fixed subspace of the group generated by `action`: intersection of
/// ker(g + I) over the generators. `n` is needed when the list is empty.
inline Subspace invariants(std::span<BitMatrix const> action, std::optional<std::size_t> n = std::nullopt)
{
  require(n.has_value() || !action.empty(), "invariants of an empty generator list need the dimension n");
  auto const dim = detail::check_action(action, n);
  std::vector<BitVector> rows;
  auto const id = BitMatrix::identity(dim);
  for (auto const &g : action) {
    auto const d = g + id;
    rows.insert(rows.end(), d.row_data().begin(), d.row_data().end());
  }
  return kernel(BitMatrix::from_rows(std::move(rows), dim));
}

/// dim V - dim sum_g im(g + I).
inline std::size_t coinvariants_dim(std::span<BitMatrix const> action, std::optional<std::size_t> n = std::nullopt)
{
  require(n.has_value() || !action.empty(), "coinvariants of an empty generator list need the dimension n");
  auto const dim = detail::check_action(action, n);
  Subspace image(dim);
  auto const id = BitMatrix::identity(dim);
  for (auto const &g : action) {
    auto const cols = (g + id).transpose();
    for (auto const &col : cols.row_data())
      image.insert(col);
  }
  return dim - image.dim();
}

inline constexpr std::size_t kMaxEnumerationDim = 16;

/// Walks every d-dimensional subspace of GF(2)^n exactly once by running
/// over pivot sets and the free entries of the corresponding RREF matrices.
class SubspaceEnumerator
{
public:
  SubspaceEnumerator(std::size_t n, std::size_t d)
  : n_(n), d_(d)
  {
    guard(n <= kMaxEnumerationDim, "enumerate_subspaces",
          "subspace enumeration requires ambient dimension <= 16");
    require(d <= n, "subspace dimension exceeds ambient dimension");
  }

  /// f(Subspace const&) may return void, or bool where false stops the walk.
  /// Returns false if the walk was stopped early.
  template<typename F>
  bool run(F &&f) const
  {
    std::vector<std::size_t> pivots(d_);
    for (std::size_t i = 0; i < d_; ++i)
      pivots[i] = i;

    while (true) {
      if (!run_pivots(pivots, f))
        return false;
      // next combination
      std::size_t i = d_;
      while (i > 0 && pivots[i - 1] == n_ - d_ + i - 1)
        --i;
      if (i == 0)
        return true;
      ++pivots[i - 1];
      for (std::size_t j = i; j < d_; ++j)
        pivots[j] = pivots[j - 1] + 1;
    }
  }

private:
  template<typename F>
  bool run_pivots(std::vector<std::size_t> const &pivots, F &f) const
  {
    std::vector<bool> is_pivot(n_, false);
    for (auto p : pivots)
      is_pivot[p] = true;

    // free slots (row, column)
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t r = 0; r < d_; ++r)
      for (std::size_t c = pivots[r] + 1; c < n_; ++c)
        if (!is_pivot[c])
          slots.emplace_back(r, c);

    Subspace s(n_);
    s.pivots_ = pivots;
    s.basis_.reserve(d_);
    for (std::size_t r = 0; r < d_; ++r)
      s.basis_.push_back(BitVector::unit(n_, pivots[r]));

    std::vector<bool> counter(slots.size(), false);
    while (true) {
      if constexpr (std::is_same_v<std::invoke_result_t<F &, Subspace const &>, bool>) {
        if (!f(static_cast<Subspace const &>(s)))
          return false;
      } else {
        f(static_cast<Subspace const &>(s));
      }
      // binary increment over the free slots
      std::size_t k = 0;
      while (k < slots.size() && counter[k]) {
        counter[k] = false;
        s.basis_[slots[k].first].flip(slots[k].second);
        ++k;
      }
      if (k == slots.size())
        return true;
      counter[k] = true;
      s.basis_[slots[k].first].flip(slots[k].second);
    }
  }

  std::size_t n_;
  std::size_t d_;
};

template<typename F>
bool for_each_subspace(std::size_t n, std::size_t d, F &&f)
{ return SubspaceEnumerator(n, d).run(std::forward<F>(f)); }

inline std::vector<Subspace> enumerate_subspaces(std::size_t n, std::size_t d)
{
  std::vector<Subspace> out;
  for_each_subspace(n, d, [&](Subspace const &s) { out.push_back(s); });
  return out;
}

} // namespace tworank
