#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "tworank/gf2.hpp"
#include "tworank/random.hpp"

using namespace tworank;

namespace {

BitMatrix random_matrix(std::size_t r, std::size_t c, SplitMix64 &rng)
{
  BitMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m.set(i, j, rng.bit());
  return m;
}

oracle::Rows to_rows(BitMatrix const &m)
{
  oracle::Rows rows(m.rows(), std::vector<int>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      rows[i][j] = m.test(i, j);
  return rows;
}

BitMatrix perm_matrix(std::vector<std::size_t> const &images)
{
  BitMatrix m(images.size(), images.size());
  for (std::size_t j = 0; j < images.size(); ++j)
    m.set(images[j], j);
  return m;
}

} // namespace

TEST(BitVector, StringRoundTrip)
{
  auto v = BitVector::from_string("10110");
  EXPECT_EQ(v.size(), 5u);
  EXPECT_TRUE(v.test(0));
  EXPECT_FALSE(v.test(1));
  EXPECT_EQ(v.to_string(), "10110");
  EXPECT_EQ(v.popcount(), 3u);
  EXPECT_EQ(v.lowest(), 0u);
}

TEST(BitVector, WideVectorsCrossWordBoundary)
{
  BitVector a(130), b(130);
  a.set(64);
  a.set(129);
  b.set(129);
  EXPECT_EQ((a ^ b).popcount(), 1u);
  EXPECT_TRUE(a.dot(b));
  EXPECT_EQ((a ^ b).lowest(), 64u);
  EXPECT_THROW(a ^= BitVector(3), ValidationError);
}

TEST(Rank, SmallCases)
{
  EXPECT_EQ(rank(BitMatrix::identity(3)), 3u);
  EXPECT_EQ(rank(BitMatrix::from_strings({"11", "11"}, 2)), 1u);
  EXPECT_EQ(rank(BitMatrix(4, 5)), 0u);
}

TEST(Rank, AgreesWithNaiveElimination)
{
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = 1 + rng.below(9), c = 1 + rng.below(9);
    auto m = random_matrix(r, c, rng);
    EXPECT_EQ(rank(m), oracle::rank_mod2(to_rows(m)));
  }
}

TEST(Kernel, SmallCases)
{
  EXPECT_EQ(kernel(BitMatrix::identity(3)).dim(), 0u);
  EXPECT_EQ(kernel(BitMatrix(3, 3)).dim(), 3u);
  auto k = kernel(BitMatrix::from_strings({"11", "00"}, 2));
  ASSERT_EQ(k.dim(), 1u);
  EXPECT_TRUE(k.contains(BitVector::from_string("11")));
}

TEST(Kernel, ExhaustiveMembership)
{
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = 1 + rng.below(6), c = 1 + rng.below(7);
    auto m = random_matrix(r, c, rng);
    auto k = kernel(m);
    std::size_t count = 0;
    for (std::uint64_t x = 0; x < (1u << c); ++x) {
      auto v = BitVector::from_word(c, x);
      bool in_kernel = (m * v).none();
      count += in_kernel;
      EXPECT_EQ(k.contains(v), in_kernel);
    }
    EXPECT_EQ(count, std::size_t{1} << k.dim());
    EXPECT_EQ(k.dim() + rank(m), c);
  }
}

TEST(Span, Examples)
{
  std::vector<BitVector> a{BitVector::from_string("10"), BitVector::from_string("11")};
  EXPECT_EQ(subspace_span(a).dim(), 2u);
  EXPECT_EQ(subspace_span(3, {}).dim(), 0u);
  std::vector<BitVector> b{BitVector::from_string("110"), BitVector::from_string("011"),
                           BitVector::from_string("101")};
  EXPECT_EQ(subspace_span(b).dim(), 2u);
}

TEST(Subspace, IntersectionMatchesMembership)
{
  SplitMix64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t const n = 6;
    Subspace a(n), b(n);
    for (int k = 0; k < 3; ++k) {
      a.insert(BitVector::from_word(n, rng.below(64)));
      b.insert(BitVector::from_word(n, rng.below(64)));
    }
    auto c = intersect(a, b);
    std::size_t count = 0;
    for (std::uint64_t x = 0; x < 64; ++x) {
      auto v = BitVector::from_word(n, x);
      bool both = a.contains(v) && b.contains(v);
      count += both;
      EXPECT_EQ(c.contains(v), both);
    }
    EXPECT_EQ(count, std::size_t{1} << c.dim());
  }
}

TEST(Invariants, Examples)
{
  EXPECT_EQ(invariants({}, 3).dim(), 3u);
  std::vector<BitMatrix> swap{perm_matrix({1, 0})};
  auto inv = invariants(swap);
  ASSERT_EQ(inv.dim(), 1u);
  EXPECT_TRUE(inv.contains(BitVector::from_string("11")));
  std::vector<BitMatrix> cycle{perm_matrix({1, 2, 0})};
  auto inv3 = invariants(cycle);
  ASSERT_EQ(inv3.dim(), 1u);
  EXPECT_TRUE(inv3.contains(BitVector::from_string("111")));
  EXPECT_THROW(invariants({}), ValidationError);
}

TEST(Invariants, ExhaustiveFixedVectors)
{
  SplitMix64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t const n = 5;
    std::vector<BitMatrix> gens{random_matrix(n, n, rng), random_matrix(n, n, rng)};
    auto inv = invariants(gens);
    std::size_t count = 0;
    for (std::uint64_t x = 0; x < 32; ++x) {
      auto v = BitVector::from_word(n, x);
      bool fixed = gens[0] * v == v && gens[1] * v == v;
      count += fixed;
      EXPECT_EQ(inv.contains(v), fixed);
    }
    EXPECT_EQ(count, std::size_t{1} << inv.dim());
  }
}

TEST(Coinvariants, Examples)
{
  EXPECT_EQ(coinvariants_dim({}, 4), 4u);
  std::vector<BitMatrix> swap{perm_matrix({1, 0})};
  EXPECT_EQ(coinvariants_dim(swap), 1u);
  std::vector<BitMatrix> cycle{perm_matrix({1, 2, 0})};
  EXPECT_EQ(coinvariants_dim(cycle), 1u);
}

TEST(Enumerate, CountsMatchGaussianBinomial)
{
  EXPECT_EQ(enumerate_subspaces(2, 1).size(), 3u);
  EXPECT_EQ(enumerate_subspaces(5, 4).size(), 31u);
  EXPECT_EQ(enumerate_subspaces(4, 2).size(), 35u);
  for (std::size_t n = 0; n <= 6; ++n)
    for (std::size_t d = 0; d <= n; ++d) {
      auto subs = enumerate_subspaces(n, d);
      EXPECT_EQ(subs.size(), oracle::gaussian_binomial(n, d)) << n << " " << d;
      std::set<std::vector<BitVector>> distinct;
      for (auto const &s : subs) {
        EXPECT_EQ(s.dim(), d);
        distinct.insert(s.basis());
      }
      EXPECT_EQ(distinct.size(), subs.size());
    }
}

TEST(Enumerate, GuardAndEarlyStop)
{
  EXPECT_THROW(enumerate_subspaces(17, 1), GuardExceeded);
  std::size_t seen = 0;
  for_each_subspace(6, 3, [&](Subspace const &) {
    ++seen;
    return seen < 10;
  });
  EXPECT_EQ(seen, 10u);
}
