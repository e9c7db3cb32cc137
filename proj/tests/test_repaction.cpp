#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tworank/repaction.hpp"

using namespace tworank;

namespace {

GroupPtr share(GroupOracle G) { return std::make_shared<GroupOracle const>(std::move(G)); }

FormFamily d8_family()
{
  return FormFamily(2, {AlternatingForm(BitMatrix::from_strings({"01", "10"}, 2))});
}

oracle::Table table_of(GroupOracle const &G)
{
  return oracle::Table::build(G.order(), [&](std::uint32_t a, std::uint32_t b) { return G.mul(a, b); });
}

void expect_eigen_agreement(MonomialRep const &rep)
{
  for (ElementId g = 0; g < rep.group().order(); ++g) {
    auto const M = oracle::induced_matrix(rep, g);
    EXPECT_EQ(has_plus_one_eigenvalue(rep, g), oracle::rational_fixed_dim(M) > 0) << "g=" << g;
    int tr = 0;
    for (std::size_t i = 0; i < M.size(); ++i)
      tr += M[i][i];
    EXPECT_EQ(rep.trace(g), tr);
  }
}

} // namespace

TEST(GroupOracle, BuiltinTablesValidate)
{
  EXPECT_EQ(GroupOracle::cyclic(4).order(), 4u);
  EXPECT_EQ(GroupOracle::dihedral(4).order(), 8u);
  EXPECT_EQ(GroupOracle::quaternion().order(), 8u);
  EXPECT_EQ(GroupOracle::elementary_abelian(3).order(), 8u);
  EXPECT_EQ(GroupOracle::from_phi_group(PhiGroup(d8_family())).order(), 8u);
}

TEST(GroupOracle, RejectsBadTables)
{
  // not a Latin square
  EXPECT_THROW(GroupOracle::from_table(2, {0, 1, 1, 1}), ValidationError);
  // identity not at 0
  EXPECT_THROW(GroupOracle::from_table(2, {1, 0, 0, 1}), ValidationError);
  // Latin square with identity 0 that is not associative (order 5 loop)
  std::vector<ElementId> loop{0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0};
  EXPECT_THROW(GroupOracle::from_table(5, loop), ValidationError);
}

TEST(GroupOracle, PhiGroupD8IsDihedral)
{
  auto P = GroupOracle::from_phi_group(PhiGroup(d8_family()));
  PhiGroup G(d8_family());
  std::vector<std::uint32_t> gens{static_cast<std::uint32_t>(G.to_index(G.a(0))),
                                  static_cast<std::uint32_t>(G.to_index(G.a(1)))};
  EXPECT_TRUE(oracle::isomorphic(table_of(P), table_of(GroupOracle::dihedral(4)), gens));
}

TEST(BuildInduced, Dimensions)
{
  auto C4 = share(GroupOracle::cyclic(4));
  EXPECT_EQ(build_induced(C4, {2}, {-1}).dim(), 2u);

  PhiGroup P(d8_family());
  auto D = share(GroupOracle::from_phi_group(P));
  auto b = static_cast<ElementId>(P.to_index(P.b(0)));
  EXPECT_EQ(build_induced(D, {b}, {-1}).dim(), 4u);

  auto whole = build_induced(C4, {1}, {1});
  EXPECT_EQ(whole.dim(), 1u);
  for (ElementId g = 0; g < 4; ++g)
    EXPECT_EQ(whole.trace(g), 1);

  EXPECT_THROW(build_induced(C4, {2}, {-1, 1}), ValidationError);
  // chi(x) = -1 on the generator of C4 but x^2 = 2 forced to +1 clashes with chi(2) = -1
  EXPECT_THROW(build_induced(C4, {1, 2}, {1, -1}), InconsistentCharacter);
}

TEST(PlusOneEigenvalue, Examples)
{
  auto C4 = share(GroupOracle::cyclic(4));
  auto r = build_induced(C4, {2}, {-1});
  EXPECT_TRUE(has_plus_one_eigenvalue(r, 0));
  EXPECT_FALSE(has_plus_one_eigenvalue(r, 1));
  EXPECT_FALSE(has_plus_one_eigenvalue(r, 3));

  auto E = share(GroupOracle::elementary_abelian(2));
  auto v1 = build_induced(E, {1}, {-1});
  EXPECT_TRUE(has_plus_one_eigenvalue(v1, 3));
  EXPECT_FALSE(has_plus_one_eigenvalue(v1, 1));
}

TEST(PlusOneEigenvalue, AgreesWithRationalNullspace)
{
  auto C4 = share(GroupOracle::cyclic(4));
  expect_eigen_agreement(build_induced(C4, {2}, {-1}));
  expect_eigen_agreement(build_induced(C4, {}, {}));

  auto Q = share(GroupOracle::quaternion());
  expect_eigen_agreement(build_induced(Q, {1}, {-1}));
  expect_eigen_agreement(build_induced(Q, {2}, {-1}));

  auto D = share(GroupOracle::dihedral(4));
  expect_eigen_agreement(build_induced(D, {4}, {-1}));
  expect_eigen_agreement(build_induced(D, {2, 4}, {-1, 1}));

  auto E = share(GroupOracle::elementary_abelian(2));
  expect_eigen_agreement(build_induced(E, {1}, {-1}));
  expect_eigen_agreement(build_induced(E, {2}, {-1}));

  PhiGroup P(random_family(3, 2, 8));
  auto G = share(GroupOracle::from_phi_group(P));
  for (std::size_t j = 0; j < 2; ++j)
    expect_eigen_agreement(build_induced(G, {static_cast<ElementId>(P.to_index(P.b(j)))}, {-1}));
}

TEST(FixedSubspace, Examples)
{
  auto E = share(GroupOracle::elementary_abelian(2));
  auto v1 = build_induced(E, {1}, {-1});
  EXPECT_EQ(fixed_subspace_dim(v1, {}), v1.dim());
  std::vector<ElementId> x2{2};
  EXPECT_EQ(fixed_subspace_dim(v1, x2), 1u);

  PhiGroup P(d8_family());
  auto D = share(GroupOracle::from_phi_group(P));
  auto b = static_cast<ElementId>(P.to_index(P.b(0)));
  auto rep = build_induced(D, {b}, {-1});
  std::vector<ElementId> hb{b};
  EXPECT_EQ(fixed_subspace_dim(rep, hb), 0u);
}

TEST(FixedSubspace, AgreesWithRationalNullspace)
{
  auto D = share(GroupOracle::dihedral(4));
  auto rep = build_induced(D, {4}, {-1});
  for (ElementId h = 0; h < 8; ++h) {
    std::vector<ElementId> H{h};
    // cyclic subgroup: fixed space of the generator
    EXPECT_EQ(fixed_subspace_dim(rep, H), oracle::rational_fixed_dim(oracle::induced_matrix(rep, h)));
  }
}

TEST(Freeness, Examples)
{
  auto C4 = share(GroupOracle::cyclic(4));
  std::vector<MonomialRep> c4{build_induced(C4, {2}, {-1})};
  EXPECT_TRUE(is_free_on_product(*C4, c4).free);

  auto Q = share(GroupOracle::quaternion());
  std::vector<MonomialRep> q{build_induced(Q, {1}, {-1})};
  EXPECT_EQ(q[0].dim(), 4u);
  EXPECT_TRUE(is_free_on_product(*Q, q).free);

  auto E = share(GroupOracle::elementary_abelian(2));
  std::vector<MonomialRep> e{build_induced(E, {1}, {-1}), build_induced(E, {2}, {-1})};
  auto res = is_free_on_product(*E, e);
  EXPECT_FALSE(res.free);
  EXPECT_EQ(res.witness, std::optional<ElementId>(3));

  auto other = share(GroupOracle::cyclic(4));
  EXPECT_THROW(is_free_on_product(*other, c4), ValidationError);
}

TEST(Isotropy, Examples)
{
  auto C4 = share(GroupOracle::cyclic(4));
  std::vector<MonomialRep> c4{build_induced(C4, {2}, {-1})};
  EXPECT_EQ(max_isotropy_rank(*C4, c4).rank, 0u);

  auto D = share(GroupOracle::dihedral(4));
  std::vector<MonomialRep> trivial{build_induced(D, {1, 4}, {1, 1})};
  EXPECT_EQ(max_isotropy_rank(*D, trivial).rank, 2u);
  EXPECT_EQ(elementary_abelian_rank(*D), 2u);
}

TEST(Isotropy, MatchesBruteForceOnDeskGroups)
{
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    PhiGroup P(random_family(3, 2, seed));
    auto G = share(GroupOracle::from_phi_group(P));
    std::vector<MonomialRep> reps;
    for (std::size_t j = 0; j < 2; ++j)
      reps.push_back(build_induced(G, {static_cast<ElementId>(P.to_index(P.b(j)))}, {-1}));
    auto res = max_isotropy_rank(*G, reps);

    // brute force: largest elementary abelian K whose fixed space is nonzero on every factor
    auto T = table_of(*G);
    std::size_t best = 0;
    std::vector<ElementId> inv = G->involutions();
    std::function<void(std::vector<ElementId>, std::size_t, std::size_t)> rec =
      [&](std::vector<ElementId> gens, std::size_t r, std::size_t from) {
        bool fixes = std::all_of(reps.begin(), reps.end(),
                                 [&](auto const &rep) { return fixed_subspace_dim(rep, gens) > 0; });
        if (!fixes)
          return;
        best = std::max(best, r);
        auto K = oracle::generated(T, {gens.begin(), gens.end()});
        for (std::size_t i = from; i < inv.size(); ++i) {
          auto v = inv[i];
          if (std::find(K.begin(), K.end(), v) != K.end())
            continue;
          bool ok = std::all_of(gens.begin(), gens.end(), [&](ElementId g) { return G->commute(g, v); });
          if (!ok)
            continue;
          auto next = gens;
          next.push_back(v);
          rec(next, r + 1, i + 1);
        }
      };
    rec({}, 0, 0);
    EXPECT_EQ(res.rank, best) << seed;

    std::vector<ElementId> w = res.witness_gens;
    EXPECT_EQ(w.size(), res.rank);
    for (auto const &rep : reps)
      EXPECT_GT(fixed_subspace_dim(rep, w), 0u);
  }
}

TEST(TwoCentral, Examples)
{
  EXPECT_TRUE(is_two_central(GroupOracle::quaternion()));
  EXPECT_FALSE(is_two_central(GroupOracle::dihedral(4)));
  EXPECT_FALSE(is_two_central(GroupOracle::from_phi_group(PhiGroup(d8_family()))));
  EXPECT_TRUE(is_two_central(GroupOracle::cyclic(6)));
  EXPECT_TRUE(is_two_central(GroupOracle::elementary_abelian(3)));
}
