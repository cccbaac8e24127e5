#include "support.hpp"

using namespace qtest;

namespace {

std::vector<std::string> labels_of(const IndecUniverse& u) {
  std::vector<std::string> l;
  for (std::size_t i = 0; i < u.size(); ++i) l.push_back(u.label(i));
  return l;
}

// Iso-class bijection between two universes of the same algebra.
void expect_same_classes(const IndecUniverse& x, const IndecUniverse& y) {
  ASSERT_EQ(x.size(), y.size()) << x.strategy() << " vs " << y.strategy();
  std::vector<bool> used(y.size(), false);
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto j = y.find(x.module(i));
    ASSERT_TRUE(j.has_value()) << x.label(i) << " missing from " << y.strategy();
    EXPECT_FALSE(used[*j]);
    used[*j] = true;
  }
}

}  // namespace

TEST(Universe, ContractExamples) {
  for (Scalar p : primes()) {
    Fp f(p);
    for (auto s : {Strategy::AnalyticTypeA, Strategy::BruteForce, Strategy::Extension}) {
      auto u2 = build_universe(ka2(f), 2, s);
      EXPECT_EQ(labels_of(*u2), (std::vector<std::string>{"3", "2", "2/3"})) << to_string(s);
      auto u3 = build_universe(ka3(f), 3, s);
      EXPECT_EQ(u3->size(), 6u) << to_string(s);
      auto k = build_universe(path_algebra_a(1, f), 5, s);
      EXPECT_EQ(k->size(), 1u);
    }
  }
}

TEST(Universe, StrategiesAgreeOnTypeA) {
  for (Scalar p : {2u, 3u})
    for (std::size_t n = 1; n <= 4; ++n) {
      SCOPED_TRACE("A" + std::to_string(n) + " p=" + std::to_string(p));
      auto a = path_algebra_a(n, Fp(p));
      auto analytic = build_universe(a, n, Strategy::AnalyticTypeA);
      auto brute = build_universe(a, n, Strategy::BruteForce);
      auto ext = build_universe(a, n, Strategy::Extension);
      EXPECT_EQ(analytic->size(), n * (n + 1) / 2);
      expect_same_classes(*analytic, *brute);
      expect_same_classes(*analytic, *ext);
      EXPECT_EQ(labels_of(*analytic), labels_of(*brute));
      EXPECT_EQ(labels_of(*analytic), labels_of(*ext));
    }
}

TEST(Universe, StrategiesAgreeWithRelationsAndTriangularAlgebras) {
  Fp f(2);
  Quiver q{{"1", "2", "3"}, {{"a", "1", "2"}, {"b", "2", "3"}}};
  auto rad2 = algebra_from_quiver(q, {{{1, {"a", "b"}}}}, f);
  auto brute = build_universe(rad2, 3, Strategy::BruteForce);
  auto ext = build_universe(rad2, 3, Strategy::Extension);
  EXPECT_EQ(brute->size(), 5u);
  expect_same_classes(*brute, *ext);
  EXPECT_THROW(build_universe(rad2, 3, Strategy::AnalyticTypeA), InputError);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto ins = random_triangular(seed, f);
    SCOPED_TRACE(ins.describe());
    auto b = build_universe(ins.tri.algebra, 3, Strategy::BruteForce);
    auto e = build_universe(ins.tri.algebra, 3, Strategy::Extension);
    expect_same_classes(*b, *e);
  }
}

TEST(Universe, HomTableMatchesHomBasis) {
  for (Scalar p : primes()) {
    auto u = build_universe(ka3(Fp(p)), 3, Strategy::Extension);
    for (std::size_t i = 0; i < u->size(); ++i)
      for (std::size_t j = 0; j < u->size(); ++j) {
        EXPECT_EQ(u->hom_dim(i, j), hom_dim(u->module(i), u->module(j)));
        EXPECT_EQ(u->hom_basis(i, j).size(), u->hom_dim(i, j));
      }
  }
}

TEST(Universe, OrderingIsDeterministic) {
  auto a = ka3(Fp(3));
  auto x = build_universe(a, 3, Strategy::Extension);
  auto y = build_universe(a, 3, Strategy::Extension);
  ASSERT_EQ(x->size(), y->size());
  for (std::size_t i = 0; i < x->size(); ++i) EXPECT_TRUE(x->module(i) == y->module(i));
  for (std::size_t i = 1; i < x->size(); ++i) EXPECT_LE(x->module(i - 1).dim(), x->module(i).dim());
}

TEST(Universe, MembersAreIndecomposableAndDistinct) {
  for (Scalar p : primes()) {
    auto u = build_universe(path_algebra_a(4, Fp(p)), 4, Strategy::Extension);
    for (std::size_t i = 0; i < u->size(); ++i) {
      EXPECT_TRUE(is_indecomposable(u->module(i)));
      for (std::size_t j = i + 1; j < u->size(); ++j) EXPECT_FALSE(is_isomorphic(u->module(i), u->module(j)));
    }
  }
}

TEST(Universe, BoundRestrictsMembers) {
  auto u = build_universe(ka2(Fp(2)), 1, Strategy::Extension);
  EXPECT_EQ(u->size(), 2u);
  EXPECT_EQ(u->max_member_dim(), 1u);
  EXPECT_EQ(u->simple_ids().size(), 2u);
}

TEST(Universe, BruteForceBudget) {
  UniverseOptions opt;
  opt.bound = 4;
  opt.strategy = Strategy::BruteForce;
  opt.state_budget = 10;
  EXPECT_THROW(IndecUniverse::build(path_algebra_a(3, Fp(5)), opt), BudgetExceeded);
}

TEST(Universe, FromModulesRejectsDuplicatesAndDecomposables) {
  Fp f(2);
  auto a = ka2(f);
  EXPECT_THROW(IndecUniverse::from_modules(a, 2, "test", {simple(a, 0), simple(a, 0)}, {}, true), InputError);
  EXPECT_THROW(IndecUniverse::from_modules(a, 2, "test", {direct_sum({simple(a, 0), simple(a, 1)}, a)}, {}, true),
               InputError);
}

TEST(Universe, StrategyNamesRoundTrip) {
  for (auto s : {Strategy::AnalyticTypeA, Strategy::BruteForce, Strategy::Extension})
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_THROW(parse_strategy("guess"), InputError);
}
