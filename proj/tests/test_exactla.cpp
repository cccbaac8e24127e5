#include "support.hpp"

using namespace qtest;

TEST(Field, InverseAndNegation) {
  for (Scalar p : {2u, 3u, 5u, 7u, 251u}) {
    Fp f(p);
    for (Scalar a = 1; a < p; ++a) {
      EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
      EXPECT_EQ(f.add(a, f.neg(a)), 0u);
    }
    EXPECT_EQ(f.reduce(-1), p - 1);
  }
}

TEST(Field, RejectsComposites) {
  EXPECT_THROW(Fp(4), std::invalid_argument);
  EXPECT_THROW(Fp(1), std::invalid_argument);
  EXPECT_THROW(Fp(0), std::invalid_argument);
  EXPECT_THROW(Fp(2).inv(0), std::domain_error);
}

TEST(Rref, HandExample) {
  Fp f(5);
  auto m = Matrix::from_rows(f, {{1, 2, 3}, {2, 4, 2}, {0, 0, 0}});
  auto r = rref(m);
  EXPECT_EQ(r.rank(), 2u);
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(r.reduced, Matrix::from_rows(f, {{1, 2, 0}, {0, 0, 1}, {0, 0, 0}}));
  auto k = kernel_basis(m);
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_TRUE((m * k).is_zero());
}

TEST(Rref, NegativeLiteralsReduce) {
  Fp f(3);
  EXPECT_EQ(Matrix::from_rows(f, {{-1, 4}}), Matrix::from_rows(f, {{2, 1}}));
}

TEST(Rref, EmptyShapes) {
  Fp f(2);
  EXPECT_EQ(rank(Matrix(0, 3, f)), 0u);
  EXPECT_EQ(kernel_basis(Matrix(0, 3, f)).cols(), 3u);
  EXPECT_EQ(kernel_basis(Matrix(2, 0, f)).cols(), 0u);
  EXPECT_TRUE(solve(Matrix(2, 0, f), Matrix(2, 1, f)).has_value());
}

class LinearAlgebraProperties : public ::testing::TestWithParam<Scalar> {};

TEST_P(LinearAlgebraProperties, RankPlusNullity) {
  Fp f(GetParam());
  Gen g(11 + GetParam());
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = g.below(7), c = g.below(7);
    const Matrix m = g.matrix_of_rank_at_most(r, c, g.below(5), f);
    const Matrix k = kernel_basis(m);
    EXPECT_EQ(rank(m) + k.cols(), c);
    EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(rank(k), k.cols());
    EXPECT_EQ(rank(m), rank(m.transpose()));
  }
}

TEST_P(LinearAlgebraProperties, RrefIsIdempotent) {
  Fp f(GetParam());
  Gen g(23 + GetParam());
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix m = g.matrix_of_rank_at_most(g.below(6), g.below(6), g.below(4), f);
    const auto once = rref(m);
    const auto twice = rref(once.reduced);
    EXPECT_EQ(once.reduced, twice.reduced);
    EXPECT_EQ(once.pivots, twice.pivots);
  }
}

TEST_P(LinearAlgebraProperties, SolveAgreesWithRankTest) {
  Fp f(GetParam());
  Gen g(37 + GetParam());
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = 1 + g.below(5), c = 1 + g.below(5);
    const Matrix a = g.matrix_of_rank_at_most(r, c, g.below(4), f);
    // consistent right-hand side
    const Matrix x = g.matrix(c, 2, f);
    auto y = solve(a, a * x);
    ASSERT_TRUE(y.has_value());
    EXPECT_EQ(a * *y, a * x);
    // arbitrary right-hand side: solvable iff appending it keeps the rank
    const Matrix b = g.matrix(r, 1, f);
    EXPECT_EQ(solve(a, b).has_value(), rank(hstack(a, b)) == rank(a));
  }
}

TEST_P(LinearAlgebraProperties, InverseOfInvertible) {
  Fp f(GetParam());
  Gen g(41 + GetParam());
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + g.below(5);
    const Matrix m = g.matrix(n, n, f);
    auto inv = inverse(m);
    EXPECT_EQ(inv.has_value(), rank(m) == n);
    if (inv) {
      EXPECT_EQ(m * *inv, Matrix::identity(n, f));
      EXPECT_EQ(*inv * m, Matrix::identity(n, f));
    }
  }
}

TEST_P(LinearAlgebraProperties, SubspaceDimensionFormula) {
  Fp f(GetParam());
  Gen g(53 + GetParam());
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + g.below(6);
    const Matrix u = image_basis(g.matrix(n, g.below(n + 1), f));
    const Matrix w = image_basis(g.matrix(n, g.below(n + 1), f));
    const Matrix cap = subspace_intersection(u, w);
    EXPECT_EQ(subspace_sum(u, w).cols() + cap.cols(), u.cols() + w.cols());
    EXPECT_TRUE(in_span(u, cap));
    EXPECT_TRUE(in_span(w, cap));
    const Matrix q = quotient_basis(u, Matrix::identity(n, f));
    EXPECT_EQ(q.cols() + u.cols(), n);
    EXPECT_EQ(rank(hstack(u, q)), n);
    const Matrix t = g.matrix(u.cols(), u.cols(), f);
    if (is_invertible(t)) {
      EXPECT_EQ(canonical_span(u), canonical_span(u * t));
    }
  }
}

TEST_P(LinearAlgebraProperties, KroneckerMixedProduct) {
  Fp f(GetParam());
  Gen g(59 + GetParam());
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t a1 = 1 + g.below(3), a2 = 1 + g.below(3), a3 = 1 + g.below(3);
    const std::size_t b1 = 1 + g.below(3), b2 = 1 + g.below(3), b3 = 1 + g.below(3);
    const Matrix a = g.matrix(a1, a2, f), c = g.matrix(a2, a3, f);
    const Matrix b = g.matrix(b1, b2, f), d = g.matrix(b2, b3, f);
    EXPECT_EQ(kronecker_product(a, b) * kronecker_product(c, d), kronecker_product(a * c, b * d));
  }
}

INSTANTIATE_TEST_SUITE_P(Primes, LinearAlgebraProperties, ::testing::Values(2u, 3u, 5u));

TEST(Odometer, VisitsEveryVector) {
  Fp f(3);
  VectorOdometer od(3, f);
  std::set<std::vector<Scalar>> seen;
  do seen.insert(od.value());
  while (od.next());
  EXPECT_EQ(seen.size(), 27u);
  EXPECT_EQ(bounded_power(3, 3, 100), 27u);
  EXPECT_EQ(bounded_power(2, 40, 1000), 1001u);
}

TEST(Nilpotent, StrictlyTriangular) {
  Fp f(2);
  EXPECT_TRUE(is_nilpotent(Matrix::from_rows(f, {{0, 1, 1}, {0, 0, 1}, {0, 0, 0}})));
  EXPECT_FALSE(is_nilpotent(Matrix::from_rows(f, {{0, 1}, {1, 0}})));
}
