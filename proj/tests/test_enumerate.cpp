#include "support.hpp"

using namespace qtest;

TEST(Bricks, Counts) {
  Fp f(2);
  EXPECT_EQ(all_bricks(*build_universe(ka2(f), 2, Strategy::Extension)).size(), 3u);
  EXPECT_EQ(all_bricks(*build_universe(ka3(f), 3, Strategy::Extension)).size(), 6u);
  EXPECT_EQ(all_bricks(*build_universe(path_algebra_a(1, f), 1, Strategy::Extension)).size(), 1u);
}

TEST(Monobricks, Counts) {
  for (Scalar p : primes()) {
    Fp f(p);
    auto m2 = all_monobricks(*build_universe(ka2(f), 2, Strategy::Extension));
    EXPECT_EQ(m2.sets.size(), 6u);
    EXPECT_EQ(m2.semibricks, 5u);
    EXPECT_EQ(m2.cofinally_closed, 5u);
    auto m1 = all_monobricks(*build_universe(path_algebra_a(1, f), 1, Strategy::Extension));
    EXPECT_EQ(m1.sets.size(), 2u);
    auto m3 = all_monobricks(*build_universe(ka3(f), 3, Strategy::Extension));
    EXPECT_EQ(m3.sets.size(), 22u);
    EXPECT_EQ(m3.semibricks, 14u);
    EXPECT_EQ(m3.cofinally_closed, 14u);
  }
}

TEST(Monobricks, DeterministicOrderAndFlags) {
  auto u = build_universe(ka3(Fp(3)), 3, Strategy::Extension);
  auto a = all_monobricks(*u), b = all_monobricks(*u);
  ASSERT_EQ(a.sets.size(), b.sets.size());
  for (std::size_t i = 0; i < a.sets.size(); ++i) {
    EXPECT_EQ(a.sets[i].ids, b.sets[i].ids);
    EXPECT_TRUE(is_monobrick(*u, a.sets[i].ids));
    EXPECT_EQ(a.sets[i].semibrick, is_semibrick(*u, a.sets[i].ids));
    EXPECT_EQ(a.sets[i].cofinally_closed, is_cofinally_closed(*u, a.sets[i].ids));
    if (i) {
      EXPECT_TRUE(detail::by_size_then_lex(a.sets[i - 1].ids, a.sets[i].ids));
    }
  }
  EXPECT_TRUE(a.sets.front().ids.empty());
}

TEST(Monobricks, BrickLimit) {
  EnumerationOptions opt;
  opt.max_bricks = 2;
  EXPECT_THROW(all_monobricks(*build_universe(ka2(Fp(2)), 2, Strategy::Extension), opt), BudgetExceeded);
}

TEST(LeftSchur, CountsAgreeWithOracle) {
  for (Scalar p : primes()) {
    Fp f(p);
    auto l2 = all_left_schur(*build_universe(ka2(f), 2, Strategy::Extension));
    EXPECT_TRUE(l2.oracle_run);
    EXPECT_TRUE(l2.representation_exact);
    EXPECT_EQ(l2.left_schur, 6u);
    EXPECT_EQ(l2.wide, 5u);
    EXPECT_EQ(l2.torf, 5u);
    auto l1 = all_left_schur(*build_universe(path_algebra_a(1, f), 1, Strategy::Extension));
    EXPECT_EQ(l1.left_schur, 2u);
    auto u3 = build_universe(ka3(f), 3, Strategy::Extension);
    auto mb = all_monobricks(*u3);
    auto l3 = all_left_schur(*u3, mb);
    EXPECT_TRUE(l3.oracle_run);
    EXPECT_EQ(l3.left_schur, mb.sets.size());
    EXPECT_EQ(l3.torf, 14u);
    EXPECT_EQ(l3.torf, mb.cofinally_closed);
    EXPECT_EQ(l3.wide, mb.semibricks);
    EXPECT_EQ(l3.select(&SubcategoryFlags::torf).size(), l3.torf);
  }
}

TEST(LeftSchur, OracleSkippedAboveCap) {
  EnumerationOptions opt;
  opt.oracle_cap = 8;
  auto u = build_universe(ka3(Fp(2)), 3, Strategy::Extension);
  auto l = all_left_schur(*u, all_monobricks(*u, opt), opt);
  EXPECT_FALSE(l.oracle_run);
  EXPECT_EQ(l.left_schur, 22u);
}

TEST(LeftSchur, CountingCorollariesOnFuzzedAlgebras) {
  Fp f(2);
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto ins = random_triangular(seed, f);
    auto u = build_universe(ins.tri.algebra, 4, Strategy::Extension);
    if (u->max_member_dim() + 2 > 4 || u->size() > 10) continue;
    auto mb = all_monobricks(*u);
    auto ls = all_left_schur(*u, mb);
    EXPECT_LE(mb.semibricks, mb.sets.size());
    EXPECT_LE(mb.cofinally_closed, mb.sets.size());
    if (!ls.representation_exact) continue;
    SCOPED_TRACE(ins.describe());
    EXPECT_EQ(ls.left_schur, mb.sets.size());
    EXPECT_EQ(ls.wide, mb.semibricks);
    EXPECT_EQ(ls.torf, mb.cofinally_closed);
    ++checked;
  }
  EXPECT_GT(checked, 5u);
}

TEST(Table1, ReproducedAtEveryCharacteristic) {
  for (Scalar p : primes()) {
    auto rep = reproduce_table1(Fp(p));
    SCOPED_TRACE("p=" + std::to_string(p));
    EXPECT_TRUE(rep.ok()) << (rep.failures.empty() ? "" : rep.failures.front());
    EXPECT_TRUE(rep.isomorphic_to_path_algebra);
    EXPECT_TRUE(rep.exact);
    EXPECT_EQ(rep.mbrick_b, 6u);
    EXPECT_EQ(rep.mbrick_c, 2u);
    EXPECT_EQ(rep.rows.size(), 12u);
    EXPECT_EQ(rep.distinct, 12u);
    EXPECT_EQ(rep.not_torf, 2u);
    EXPECT_EQ(rep.not_wide, 2u);
    const auto& r = *rep.rec;
    for (const auto& row : rep.rows) {
      EXPECT_TRUE(is_left_schur(r.ux(), row.ex));
      if (!row.flags.torf) {
        EXPECT_EQ(row.my, ids(r.uy(), {"2/3"}));
      }
      if (!row.flags.wide) {
        EXPECT_EQ(row.my, ids(r.uy(), {"3", "2/3"}));
      }
      if (row.my.empty() && row.mz.empty()) {
        EXPECT_TRUE(row.ex.empty());
      }
    }
  }
}

TEST(Fuzz, GeneratorIsDeterministic) {
  Fp f(3);
  for (std::uint64_t seed : {0u, 7u, 99u}) {
    auto a = random_triangular(seed, f), b = random_triangular(seed, f);
    EXPECT_EQ(a.describe(), b.describe());
    EXPECT_EQ(a.tri.algebra->hash(), b.tri.algebra->hash());
    EXPECT_LE(a.m_dim, 2u);
  }
}

TEST(Fuzz, GeneratorCoversAllShapes) {
  std::set<std::string> kinds;
  std::set<std::size_t> dims;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto ins = random_triangular(seed, Fp(2));
    kinds.insert(to_string(ins.b_kind) + "|" + to_string(ins.c_kind));
    dims.insert(ins.m_dim);
  }
  EXPECT_EQ(kinds.size(), 9u);
  EXPECT_EQ(dims, (std::set<std::size_t>{0, 1, 2}));
}
