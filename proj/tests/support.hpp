#pragma once

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qrep/qrep.hpp"

namespace qtest {

using namespace qrep;

inline AlgebraPtr ka2(Fp f) { return path_algebra_a(2, f, 2); }
inline AlgebraPtr ka3(Fp f) { return path_algebra_a(3, f, 1); }

// Interval module of a linear A_n quiver supported on vertex indices [lo, hi].
inline Module interval(const AlgebraPtr& a, std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> dims(a->num_vertices(), 0);
  for (std::size_t v = lo; v <= hi; ++v) dims[v] = 1;
  std::vector<Matrix> blocks;
  for (auto g : a->generators()) {
    auto [s, t] = a->endpoints(g);
    Matrix b(dims[t], dims[s], a->field());
    if (dims[t] && dims[s]) b(0, 0) = 1;
    blocks.push_back(b);
  }
  return Module::from_blocks(a, dims, blocks);
}
inline Module simple(const AlgebraPtr& a, std::size_t v) { return interval(a, v, v); }

inline std::size_t id(const IndecUniverse& u, const std::string& label) {
  auto i = u.find_label(label);
  if (!i) throw std::runtime_error("no universe member labelled " + label);
  return *i;
}
inline IdSet ids(const IndecUniverse& u, std::initializer_list<const char*> labels) {
  IdSet out;
  for (auto l : labels) out.push_back(id(u, l));
  return normalize(out);
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }
  bool coin() { return rng_() & 1u; }
  Matrix matrix(std::size_t r, std::size_t c, Fp f) {
    Matrix m(r, c, f);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<Scalar>(rng_() % f.p());
    return m;
  }
  // Low-rank matrices show up more often than uniform sampling would give them.
  Matrix matrix_of_rank_at_most(std::size_t r, std::size_t c, std::size_t k, Fp f) {
    return matrix(r, k, f) * matrix(k, c, f);
  }
  // Arbitrary representation of a relation-free quiver algebra with the given dimension vector.
  Module module(const AlgebraPtr& a, const std::vector<std::size_t>& dims) {
    std::vector<Matrix> blocks;
    for (auto g : a->generators()) {
      auto [s, t] = a->endpoints(g);
      blocks.push_back(matrix(dims[t], dims[s], a->field()));
    }
    return Module::from_blocks(a, dims, blocks);
  }
  IdSet subset(std::size_t n) {
    IdSet s;
    for (std::size_t i = 0; i < n; ++i)
      if (coin()) s.push_back(i);
    return s;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline const std::vector<Scalar>& primes() {
  static const std::vector<Scalar> p{2, 3, 5};
  return p;
}

}  // namespace qtest
