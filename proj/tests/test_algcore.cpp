#include "support.hpp"

using namespace qtest;

namespace {

void expect_associative(const Algebra& a) {
  const Fp f = a.field();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < a.dim(); ++k) {
        const auto x = a.unit_vector(i), y = a.unit_vector(j), z = a.unit_vector(k);
        ASSERT_EQ(a.multiply(a.multiply(x, y), z), a.multiply(x, a.multiply(y, z)))
            << a.labels()[i] << " " << a.labels()[j] << " " << a.labels()[k];
      }
  std::vector<Scalar> one(a.dim(), 0);
  for (auto e : a.idempotents()) one[e] = f.add(one[e], 1);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    EXPECT_EQ(a.multiply(one, a.unit_vector(i)), a.unit_vector(i));
    EXPECT_EQ(a.multiply(a.unit_vector(i), one), a.unit_vector(i));
  }
}

bool isomorphic(const AlgebraPtr& a, const AlgebraPtr& b) { return find_algebra_isomorphism(*a, *b).has_value(); }

// Paths of an acyclic quiver counted by depth-first search, trivial paths included.
std::size_t count_paths(const Quiver& q) {
  std::function<std::size_t(const std::string&)> from = [&](const std::string& v) {
    std::size_t n = 1;
    for (const auto& a : q.arrows)
      if (a.source == v) n += from(a.target);
    return n;
  };
  std::size_t total = 0;
  for (const auto& v : q.vertices) total += from(v);
  return total;
}

}  // namespace

TEST(AlgebraFromQuiver, TwoVertexPathAlgebra) {
  auto a = algebra_from_quiver(Quiver{{"2", "3"}, {{"b", "2", "3"}}}, {}, Fp(2));
  EXPECT_EQ(a->dim(), 3u);
  std::set<std::string> labels(a->labels().begin(), a->labels().end());
  EXPECT_EQ(labels, (std::set<std::string>{"e2", "e3", "b"}));
  expect_associative(*a);
}

TEST(AlgebraFromQuiver, SingleVertexIsTheField) {
  auto a = algebra_from_quiver(Quiver{{"1"}, {}}, {}, Fp(3));
  EXPECT_EQ(a->dim(), 1u);
  EXPECT_EQ(a->num_vertices(), 1u);
}

TEST(AlgebraFromQuiver, LinearA3HasSixPaths) {
  auto a = ka3(Fp(2));
  EXPECT_EQ(a->dim(), 6u);
  expect_associative(*a);
}

TEST(AlgebraFromQuiver, RadicalSquareZeroRelation) {
  Quiver q{{"1", "2", "3"}, {{"a", "1", "2"}, {"b", "2", "3"}}};
  auto a = algebra_from_quiver(q, {{{1, {"a", "b"}}}}, Fp(2));
  EXPECT_EQ(a->dim(), 5u);
  expect_associative(*a);
}

TEST(AlgebraFromQuiver, CommutativeSquare) {
  Quiver q{{"1", "2", "3", "4"}, {{"a", "1", "2"}, {"b", "1", "3"}, {"c", "2", "4"}, {"d", "3", "4"}}};
  auto a = algebra_from_quiver(q, {{{1, {"a", "c"}}, {-1, {"b", "d"}}}}, Fp(3));
  EXPECT_EQ(a->dim(), 4u + 4u + 1u);
  expect_associative(*a);
}

TEST(AlgebraFromQuiver, TruncatedLoop) {
  Quiver q{{"1"}, {{"x", "1", "1"}}};
  auto a = algebra_from_quiver(q, {{{1, {"x", "x", "x"}}}}, Fp(2));
  EXPECT_EQ(a->dim(), 3u);
  expect_associative(*a);
}

TEST(AlgebraFromQuiver, UnboundedCycleNamesTheCycle) {
  Quiver q{{"1", "2"}, {{"a", "1", "2"}, {"c", "2", "1"}}};
  try {
    algebra_from_quiver(q, {}, Fp(2));
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("a*c"), std::string::npos) << msg;
  }
}

TEST(AlgebraFromQuiver, MalformedInputs) {
  EXPECT_THROW(algebra_from_quiver(Quiver{{"1", "1"}, {}}, {}, Fp(2)), InputError);
  EXPECT_THROW(algebra_from_quiver(Quiver{{"1"}, {{"a", "1", "9"}}}, {}, Fp(2)), InputError);
  EXPECT_THROW(algebra_from_quiver(Quiver{{"1", "2"}, {{"a", "1", "2"}, {"a", "1", "2"}}}, {}, Fp(2)), InputError);
  Quiver q{{"1", "2", "3"}, {{"a", "1", "2"}, {"b", "2", "3"}}};
  EXPECT_THROW(algebra_from_quiver(q, {{{1, {"a"}}}}, Fp(2)), InputError);
  EXPECT_THROW(algebra_from_quiver(q, {{{1, {"b", "a"}}}}, Fp(2)), InputError);
}

TEST(AlgebraFromQuiver, DimensionCountsPathsOnRandomAcyclicQuivers) {
  Gen g(7);
  for (int trial = 0; trial < 60; ++trial) {
    Quiver q;
    const std::size_t n = 1 + g.below(4);
    for (std::size_t v = 0; v < n; ++v) q.vertices.push_back("v" + std::to_string(v));
    const std::size_t arrows = g.below(5);
    for (std::size_t k = 0; k < arrows && n > 1; ++k) {
      std::size_t s = g.below(n - 1);
      std::size_t t = s + 1 + g.below(n - 1 - s);
      q.arrows.push_back({"x" + std::to_string(k), q.vertices[s], q.vertices[t]});
    }
    auto a = algebra_from_quiver(q, {}, Fp(2));
    EXPECT_EQ(a->dim(), count_paths(q));
    expect_associative(*a);
  }
}

TEST(Corner, ExamplesOnA3) {
  Fp f(2);
  auto a = ka3(f);
  auto c1 = corner_algebra(*a, IdempotentSpec::of({0}));
  EXPECT_EQ(c1.algebra->dim(), 1u);
  EXPECT_FALSE(c1.degenerate);
  auto all = corner_algebra(*a, IdempotentSpec::of({0, 1, 2}));
  EXPECT_TRUE(all.degenerate);
  EXPECT_TRUE(isomorphic(all.algebra, a));
  auto c23 = corner_algebra(*a, IdempotentSpec::of({1, 2}));
  EXPECT_EQ(c23.algebra->dim(), 3u);
  EXPECT_TRUE(isomorphic(c23.algebra, ka2(f)));
  auto none = corner_algebra(*a, IdempotentSpec::of({}));
  EXPECT_TRUE(none.degenerate);
  EXPECT_EQ(none.algebra->dim(), 0u);
}

TEST(Quotient, ExamplesFromTheContract) {
  Fp f(2);
  auto a = ka3(f);
  auto q1 = quotient_by_idempotent_ideal(*a, IdempotentSpec::of({0}));
  EXPECT_EQ(q1.algebra->dim(), 3u);
  EXPECT_TRUE(isomorphic(q1.algebra, ka2(f)));
  auto qall = quotient_by_idempotent_ideal(*a, IdempotentSpec::of({0, 1, 2}));
  EXPECT_EQ(qall.algebra->dim(), 0u);
  auto b = ka2(f);
  auto q3 = quotient_by_idempotent_ideal(*b, IdempotentSpec::of({1}));
  EXPECT_EQ(q3.algebra->dim(), 1u);
  EXPECT_EQ(q3.algebra->vertex_names(), std::vector<std::string>{"2"});
  EXPECT_EQ(q3.ideal.cols(), 2u);
}

TEST(Triangular, ExampleAlgebraIsA3) {
  for (Scalar p : primes()) {
    Fp f(p);
    auto ex = table1_triangular(f);
    expect_associative(*ex.tri.algebra);
    EXPECT_TRUE(isomorphic(ex.tri.algebra, ka3(f)));
    EXPECT_TRUE(isomorphic(corner_algebra(*ex.tri.algebra, ex.tri.c_side).algebra, ex.c));
    EXPECT_TRUE(isomorphic(quotient_by_idempotent_ideal(*ex.tri.algebra, ex.tri.c_side).algebra, ex.b));
  }
}

TEST(Triangular, ZeroBimoduleGivesProduct) {
  Fp f(3);
  auto b = ka2(f);
  auto c = algebra_from_quiver(Quiver{{"1"}, {}}, {}, f);
  auto m = make_bimodule(*b, *c, 0, {}, {});
  auto t = triangular_matrix_algebra(*b, *c, m);
  auto product = algebra_from_quiver(Quiver{{"2", "3", "1"}, {{"b", "2", "3"}}}, {}, f);
  EXPECT_EQ(t.algebra->dim(), 4u);
  EXPECT_TRUE(isomorphic(t.algebra, product));
}

TEST(Triangular, FieldByFieldGivesA2) {
  Fp f(5);
  auto b = algebra_from_quiver(Quiver{{"2"}, {}}, {}, f);
  auto c = algebra_from_quiver(Quiver{{"1"}, {}}, {}, f);
  auto one = Matrix::identity(1, f);
  auto m = make_bimodule(*b, *c, 1, {{"e1", one}}, {{"e2", one}});
  auto t = triangular_matrix_algebra(*b, *c, m);
  EXPECT_TRUE(isomorphic(t.algebra, path_algebra_a(2, f, 1)));
}

TEST(Triangular, BrokenBimoduleNamesTheTriple) {
  Fp f(2);
  auto b = ka2(f);
  auto c = algebra_from_quiver(Quiver{{"1"}, {}}, {}, f);
  auto one = Matrix::identity(1, f);
  // both vertex idempotents of B act as the identity, so e2 * e3 = 0 fails
  try {
    auto m = make_bimodule(*b, *c, 1, {{"e1", one}}, {{"e2", one}, {"e3", one}, {"b", Matrix(1, 1, f)}});
    triangular_matrix_algebra(*b, *c, m);
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("triple"), std::string::npos) << e.what();
  }
}

TEST(Triangular, FuzzedInstancesRecoverBothSides) {
  Fp f(2);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto ins = random_triangular(seed, f);
    SCOPED_TRACE(ins.describe());
    expect_associative(*ins.tri.algebra);
    EXPECT_EQ(ins.tri.algebra->dim(), ins.b->dim() + ins.c->dim() + ins.m_dim);
    EXPECT_TRUE(isomorphic(corner_algebra(*ins.tri.algebra, ins.tri.c_side).algebra, ins.c));
    EXPECT_TRUE(isomorphic(quotient_by_idempotent_ideal(*ins.tri.algebra, ins.tri.c_side).algebra, ins.b));
  }
}

TEST(Projectives, DimensionsAndIndecomposability) {
  Fp f(2);
  auto k = algebra_from_quiver(Quiver{{"1"}, {}}, {}, f);
  ASSERT_EQ(indecomposable_projectives(k).size(), 1u);
  EXPECT_EQ(indecomposable_projectives(k)[0].dim(), 1u);
  auto p2 = indecomposable_projectives(ka2(f));
  ASSERT_EQ(p2.size(), 2u);
  EXPECT_EQ(p2[0].dim(), 2u);
  EXPECT_EQ(loewy_label(p2[0]), "2/3");
  EXPECT_EQ(p2[1].dim(), 1u);
  std::vector<std::size_t> dims;
  for (auto& p : indecomposable_projectives(ka3(f))) {
    dims.push_back(p.dim());
    EXPECT_TRUE(is_indecomposable(p));
  }
  EXPECT_EQ(dims, (std::vector<std::size_t>{3, 2, 1}));
}

TEST(IdempotentSpecTest, ComplementAndDegeneracy) {
  auto e = IdempotentSpec::of({2, 0, 2});
  EXPECT_EQ(e.vertices, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(e.complement(3).vertices, std::vector<std::size_t>{1});
  EXPECT_FALSE(e.degenerate(3));
  EXPECT_TRUE(IdempotentSpec::of({}).degenerate(3));
  EXPECT_THROW(corner_algebra(*ka3(Fp(2)), IdempotentSpec::of({5})), InputError);
}

TEST(Hash, DistinguishesAlgebras) {
  Fp f(2);
  EXPECT_EQ(ka3(f)->hash(), ka3(f)->hash());
  EXPECT_NE(ka3(f)->hash(), ka3(Fp(3))->hash());
  EXPECT_NE(ka3(f)->hash(), ka2(f)->hash());
}
