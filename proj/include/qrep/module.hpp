#pragma once

// Right modules over an Algebra, stored in vertex-block coordinates.
//
// A module V = sum of V_v. For every basis element b, action(b) is the
// matrix of v -> v.b acting on column vectors, so action(b') * action(b)
// is the action of b*b'. An arrow s -> t maps V_s into V_t.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qrep/algebra.hpp"
#include "qrep/errors.hpp"
#include "qrep/exactla.hpp"

namespace qrep {

struct Limits {
  std::uint64_t threshold = 1u << 20;         // element scans of Hom / End / Ext spaces
  std::uint64_t submodule_budget = 1u << 16;  // distinct submodules per module
};

class Module {
 public:
  Module() = default;

  // Builds a module from the blocks of the generators (block g maps V_s to V_t).
  static Module from_blocks(AlgebraPtr alg, std::vector<std::size_t> dims, const std::vector<Matrix>& blocks,
                            bool validate = true) {
    const Fp f = alg->field();
    if (dims.size() != alg->num_vertices()) throw InputError("dimension vector has wrong length");
    if (blocks.size() != alg->generators().size()) throw InputError("need one block per generator");
    auto offs = offsets_of(dims);
    const std::size_t n = offs.back();
    std::map<std::size_t, Matrix> given;
    for (std::size_t v = 0; v < dims.size(); ++v) {
      Matrix p(n, n, f);
      for (std::size_t k = offs[v]; k < offs[v + 1]; ++k) p(k, k) = 1;
      given[alg->idempotent(v)] = p;
    }
    for (std::size_t g = 0; g < blocks.size(); ++g) {
      auto [s, t] = alg->endpoints(alg->generators()[g]);
      if (blocks[g].rows() != dims[t] || blocks[g].cols() != dims[s])
        throw InputError("generator block '" + alg->labels()[alg->generators()[g]] + "' has wrong shape");
      Matrix m(n, n, f);
      m.set_block(offs[t], offs[s], blocks[g]);
      given[alg->generators()[g]] = m;
    }
    Module mod;
    auto d = std::make_shared<Data>();
    d->alg = alg;
    d->dims = std::move(dims);
    d->offsets = std::move(offs);
    d->actions = n == 0 ? std::vector<Matrix>(alg->dim(), Matrix(0, 0, f)) : extend_actions(*alg, given, n, false);
    mod.d_ = d;
    if (validate) mod.check_axioms();
    return mod;
  }

  // Accepts actions on an arbitrary basis and re-expresses them in vertex-block
  // coordinates. `to_old` (new coords -> given coords) is returned through the out-parameter.
  static Module from_actions(AlgebraPtr alg, const std::vector<Matrix>& actions, Matrix* to_old = nullptr,
                             bool validate = true) {
    const Fp f = alg->field();
    if (actions.size() != alg->dim()) throw InputError("need one action matrix per basis element");
    const std::size_t n = actions.empty() ? 0 : actions[0].rows();
    Matrix t(n, 0, f);
    std::vector<std::size_t> dims;
    for (std::size_t v = 0; v < alg->num_vertices(); ++v) {
      Matrix piece = image_basis(actions[alg->idempotent(v)]);
      dims.push_back(piece.cols());
      t = hstack(t, piece);
    }
    if (t.cols() != n) throw InputError("idempotent actions do not decompose the space");
    auto tinv = inverse(t);
    if (!tinv) throw InputError("idempotent actions do not decompose the space");
    Module mod;
    auto d = std::make_shared<Data>();
    d->alg = alg;
    d->dims = dims;
    d->offsets = offsets_of(dims);
    d->actions.reserve(actions.size());
    for (const auto& a : actions) d->actions.push_back(*tinv * a * t);
    mod.d_ = d;
    if (validate) mod.check_axioms();
    if (to_old) *to_old = t;
    return mod;
  }

  static Module zero(AlgebraPtr alg) {
    return from_blocks(alg, std::vector<std::size_t>(alg->num_vertices(), 0), zero_blocks(*alg, {}), false);
  }

  static std::vector<Matrix> zero_blocks(const Algebra& alg, std::vector<std::size_t> dims) {
    if (dims.empty()) dims.assign(alg.num_vertices(), 0);
    std::vector<Matrix> b;
    for (auto g : alg.generators()) {
      auto [s, t] = alg.endpoints(g);
      b.emplace_back(dims[t], dims[s], alg.field());
    }
    return b;
  }

  const AlgebraPtr& algebra() const { return d_->alg; }
  const Fp& field() const { return d_->alg->field(); }
  std::size_t dim() const { return d_->offsets.back(); }
  bool is_zero() const { return dim() == 0; }
  const std::vector<std::size_t>& dim_vector() const { return d_->dims; }
  std::size_t offset(std::size_t v) const { return d_->offsets[v]; }
  const Matrix& action(std::size_t b) const { return d_->actions[b]; }
  const std::vector<Matrix>& actions() const { return d_->actions; }

  Matrix block(std::size_t generator) const {
    auto g = d_->alg->generators()[generator];
    auto [s, t] = d_->alg->endpoints(g);
    return action(g).block(offset(t), offset(s), d_->dims[t], d_->dims[s]);
  }
  std::vector<Matrix> blocks() const {
    std::vector<Matrix> r;
    for (std::size_t g = 0; g < d_->alg->generators().size(); ++g) r.push_back(block(g));
    return r;
  }
  // Columns of the identity spanning V_v.
  Matrix vertex_space(std::size_t v) const {
    Matrix m(dim(), d_->dims[v], field());
    for (std::size_t k = 0; k < d_->dims[v]; ++k) m(offset(v) + k, k) = 1;
    return m;
  }
  std::size_t vertex_of_coordinate(std::size_t k) const {
    for (std::size_t v = 0; v + 1 < d_->offsets.size(); ++v)
      if (k < d_->offsets[v + 1]) return v;
    throw std::out_of_range("coordinate out of range");
  }

  // Submodule generated by the columns of `vectors`.
  Matrix generated_span(const Matrix& vectors) const {
    Matrix cols = vectors;
    for (std::size_t b = 0; b < d_->alg->dim(); ++b) cols = hstack(cols, action(b) * vectors);
    return image_basis(cols);
  }
  bool is_submodule_span(const Matrix& u) const {
    for (std::size_t b = 0; b < d_->alg->dim(); ++b)
      if (!in_span(u, action(b) * u)) return false;
    return true;
  }
  // rad M = sum of images of the generators
  Matrix radical_span() const {
    Matrix r(dim(), 0, field());
    for (auto g : d_->alg->generators()) r = hstack(r, action(g));
    return image_basis(r);
  }

  void check_axioms() const {
    const Algebra& a = *d_->alg;
    const std::size_t n = dim();
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j) {
        Matrix expect(n, n, field());
        const auto& c = a.product(i, j);
        for (std::size_t k = 0; k < a.dim(); ++k)
          if (c[k] != 0) expect.axpy(c[k], action(k));
        if (!(action(j) * action(i) == expect))
          throw InputError("module violates the relation for (" + a.labels()[i] + ")*(" + a.labels()[j] + ")");
      }
  }

  friend bool operator==(const Module& x, const Module& y) {
    return x.d_->alg == y.d_->alg && x.d_->dims == y.d_->dims && x.d_->actions == y.d_->actions;
  }

 private:
  struct Data {
    AlgebraPtr alg;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> offsets;
    std::vector<Matrix> actions;
  };

  static std::vector<std::size_t> offsets_of(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> o{0};
    for (auto d : dims) o.push_back(o.back() + d);
    return o;
  }

  std::shared_ptr<const Data> d_;
};

struct Morphism {
  Module source;
  Module target;
  Matrix map;  // target.dim() x source.dim()

  bool is_zero() const { return map.is_zero(); }
};

inline void check_morphism(const Morphism& f) {
  if (f.map.rows() != f.target.dim() || f.map.cols() != f.source.dim()) throw InputError("morphism has wrong shape");
  for (std::size_t b = 0; b < f.source.algebra()->dim(); ++b)
    if (!(f.map * f.source.action(b) == f.target.action(b) * f.map))
      throw InputError("map does not intertwine the action of '" + f.source.algebra()->labels()[b] + "'");
}

inline bool is_injective(const Morphism& f) { return rank(f.map) == f.source.dim(); }
inline bool is_surjective(const Morphism& f) { return rank(f.map) == f.target.dim(); }

inline Morphism identity_morphism(const Module& m) { return {m, m, Matrix::identity(m.dim(), m.field())}; }
inline Morphism compose(const Morphism& g, const Morphism& f) { return {f.source, g.target, g.map * f.map}; }

// Basis of Hom(m, n), each element a block-diagonal matrix n.dim() x m.dim().
inline std::vector<Matrix> hom_basis(const Module& m, const Module& n) {
  const Algebra& a = *m.algebra();
  if (m.algebra() != n.algebra() && m.algebra()->hash() != n.algebra()->hash())
    throw InputError("modules over different algebras");
  const Fp f = m.field();
  const std::size_t nv = a.num_vertices();
  const auto& dm = m.dim_vector();
  const auto& dn = n.dim_vector();
  std::vector<std::size_t> var_off{0};
  for (std::size_t v = 0; v < nv; ++v) var_off.push_back(var_off.back() + dn[v] * dm[v]);
  const std::size_t nvar = var_off.back();
  if (nvar == 0) return {};
  auto var = [&](std::size_t v, std::size_t r, std::size_t c) { return var_off[v] + r * dm[v] + c; };
  std::size_t neq = 0;
  for (auto g : a.generators()) {
    auto [s, t] = a.endpoints(g);
    neq += dn[t] * dm[s];
  }
  Matrix sys(neq, nvar, f);
  std::size_t row = 0;
  for (std::size_t gi = 0; gi < a.generators().size(); ++gi) {
    auto [s, t] = a.endpoints(a.generators()[gi]);
    const Matrix x = m.block(gi);  // dm[t] x dm[s]
    const Matrix y = n.block(gi);  // dn[t] x dn[s]
    // f_t * x - y * f_s = 0
    for (std::size_t r = 0; r < dn[t]; ++r)
      for (std::size_t c = 0; c < dm[s]; ++c, ++row) {
        for (std::size_t k = 0; k < dm[t]; ++k)
          if (x(k, c) != 0) sys(row, var(t, r, k)) = f.add(sys(row, var(t, r, k)), x(k, c));
        for (std::size_t k = 0; k < dn[s]; ++k)
          if (y(r, k) != 0) sys(row, var(s, k, c)) = f.sub(sys(row, var(s, k, c)), y(r, k));
      }
  }
  const Matrix ker = kernel_basis(sys);
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    Matrix h(n.dim(), m.dim(), f);
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t r = 0; r < dn[v]; ++r)
        for (std::size_t c = 0; c < dm[v]; ++c) h(n.offset(v) + r, m.offset(v) + c) = ker(var(v, r, c), j);
    out.push_back(std::move(h));
  }
  return out;
}

inline std::size_t hom_dim(const Module& m, const Module& n) { return hom_basis(m, n).size(); }

inline Matrix combine(const std::vector<Matrix>& basis, const std::vector<Scalar>& coeffs, std::size_t rows,
                      std::size_t cols, Fp f) {
  Matrix r(rows, cols, f);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (coeffs[i] != 0) r.axpy(coeffs[i], basis[i]);
  return r;
}

// Calls visit on every element of span(basis); stops early when visit returns true.
inline bool scan_span(const std::vector<Matrix>& basis, std::size_t rows, std::size_t cols, Fp f,
                      const Limits& lim, const std::string& what, const std::function<bool(const Matrix&)>& visit) {
  if (bounded_power(f.p(), basis.size(), lim.threshold) > lim.threshold)
    throw BudgetExceeded(what + ": space of dimension " + std::to_string(basis.size()) + " over F_" +
                         std::to_string(f.p()) + " exceeds threshold " + std::to_string(lim.threshold) +
                         "; raise --threshold or use a smaller instance");
  VectorOdometer odo(basis.size(), f);
  do {
    if (visit(combine(basis, odo.value(), rows, cols, f))) return true;
  } while (odo.next());
  return false;
}

// Candidate elements tried before any exhaustive scan: basis elements and pairwise sums.
inline std::vector<Matrix> cheap_candidates(const std::vector<Matrix>& basis, Fp f) {
  std::vector<Matrix> c = basis;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      for (Scalar s = 1; s < f.p(); ++s) {
        Matrix x = basis[i];
        x.axpy(s, basis[j]);
        c.push_back(std::move(x));
      }
  return c;
}

namespace detail {

inline std::optional<Scalar> nilpotent_shift(const Matrix& phi) {
  const Fp f = phi.field();
  for (Scalar l = 0; l < f.p(); ++l) {
    Matrix x = phi;
    x.axpy(f.neg(l), Matrix::identity(phi.rows(), f));
    if (is_nilpotent(x)) return l;
  }
  return std::nullopt;
}

// span N of the nilpotent parts is a nilpotent subalgebra, so End = k.1 + N is local.
inline bool is_nilpotent_subalgebra(const std::vector<Matrix>& n) {
  if (n.empty()) return true;
  const Fp f = n[0].field();
  const std::size_t d = n[0].rows();
  auto flat = [&](const std::vector<Matrix>& ms) {
    Matrix out(d * d, ms.size(), f);
    for (std::size_t j = 0; j < ms.size(); ++j)
      for (std::size_t k = 0; k < d * d; ++k) out(k, j) = ms[j].data()[k];
    return out;
  };
  const Matrix span = flat(n);
  for (const auto& x : n)
    for (const auto& y : n)
      if (!in_span(span, flat({x * y}))) return false;
  // powers N^k shrink to zero
  std::vector<Matrix> power = n;
  for (std::size_t k = 0; k <= d; ++k) {
    std::vector<Matrix> next;
    for (const auto& x : power)
      for (const auto& y : n) {
        Matrix z = x * y;
        if (!z.is_zero()) next.push_back(z);
      }
    if (next.empty()) return true;
    Matrix b = image_basis(flat(next));
    power.clear();
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Matrix z(d, d, f);
      for (std::size_t k = 0; k < d * d; ++k) z(k / d, k % d) = b(k, j);
      power.push_back(z);
    }
  }
  return false;
}

}  // namespace detail

enum class EndKind { Zero, Brick, Local, Decomposable };

struct EndAnalysis {
  EndKind kind;
  std::size_t end_dim = 0;
  std::optional<Matrix> splitting;  // an endomorphism neither nilpotent nor invertible
};

inline EndAnalysis analyze_endomorphisms(const Module& m, const Limits& lim = {}) {
  if (m.is_zero()) return {EndKind::Zero, 0, std::nullopt};
  const auto end = hom_basis(m, m);
  const Fp f = m.field();
  const std::size_t d = m.dim();
  if (end.size() == 1) return {EndKind::Brick, 1, std::nullopt};
  bool has_nonzero_noninvertible = false;
  for (const auto& x : cheap_candidates(end, f)) {
    if (x.is_zero()) continue;
    const bool inv = is_invertible(x);
    const bool nil = !inv && is_nilpotent(x);
    if (!inv && !nil) return {EndKind::Decomposable, end.size(), x};
    if (!inv) has_nonzero_noninvertible = true;
  }
  std::vector<Matrix> nilparts;
  bool all_shift = true;
  for (const auto& x : end) {
    auto l = detail::nilpotent_shift(x);
    if (!l) {
      all_shift = false;
      break;
    }
    Matrix y = x;
    y.axpy(f.neg(*l), Matrix::identity(d, f));
    if (!y.is_zero()) nilparts.push_back(y);
  }
  if (all_shift && detail::is_nilpotent_subalgebra(nilparts)) {
    // End = k.1 + N with N a nonzero nilpotent ideal
    return {nilparts.empty() ? EndKind::Brick : EndKind::Local, end.size(), std::nullopt};
  }
  std::optional<Matrix> split;
  scan_span(end, d, d, f, lim, "endomorphism scan", [&](const Matrix& x) {
    if (x.is_zero()) return false;
    if (is_invertible(x)) return false;
    if (is_nilpotent(x)) {
      has_nonzero_noninvertible = true;
      return false;
    }
    split = x;
    return true;
  });
  if (split) return {EndKind::Decomposable, end.size(), split};
  return {has_nonzero_noninvertible ? EndKind::Local : EndKind::Brick, end.size(), std::nullopt};
}

inline bool is_indecomposable(const Module& m, const Limits& lim = {}) {
  auto k = analyze_endomorphisms(m, lim).kind;
  return k == EndKind::Brick || k == EndKind::Local;
}

inline bool is_brick(const Module& m, const Limits& lim = {}) {
  return analyze_endomorphisms(m, lim).kind == EndKind::Brick;
}

// Module structure on a subspace U (columns) that is closed under the action.
struct SubmoduleResult {
  Module module;
  Matrix inclusion;  // m.dim() x sub.dim()
};

inline SubmoduleResult submodule(const Module& m, const Matrix& u) {
  const Algebra& a = *m.algebra();
  const Matrix basis = image_basis(u);
  std::vector<Matrix> acts;
  for (std::size_t b = 0; b < a.dim(); ++b) {
    auto x = solve(basis, m.action(b) * basis);
    if (!x) throw InputError("subspace is not a submodule");
    acts.push_back(*x);
  }
  Matrix t;
  Module sub = Module::from_actions(m.algebra(), acts, &t, false);
  return {sub, basis * t};
}

struct QuotientResult {
  Module module;
  Matrix projection;  // q.dim() x m.dim()
};

inline QuotientResult quotient(const Module& m, const Matrix& u) {
  const Fp f = m.field();
  const Algebra& a = *m.algebra();
  const Matrix sub = image_basis(u);
  const Matrix comp = quotient_basis(sub, Matrix::identity(m.dim(), f));
  const std::size_t k = comp.cols();
  auto x = solve(hstack(comp, sub), Matrix::identity(m.dim(), f));
  if (!x) throw VerificationError("quotient coordinates failed");
  const Matrix proj = x->rows_range(0, k);
  std::vector<Matrix> acts;
  for (std::size_t b = 0; b < a.dim(); ++b) acts.push_back(proj * m.action(b) * comp);
  Matrix t;
  Module q = Module::from_actions(m.algebra(), acts, &t, false);
  return {q, *inverse(t) * proj};
}

inline SubmoduleResult kernel(const Morphism& f) { return submodule(f.source, kernel_basis(f.map)); }
inline SubmoduleResult image(const Morphism& f) { return submodule(f.target, image_basis(f.map)); }
inline QuotientResult cokernel(const Morphism& f) { return quotient(f.target, image_basis(f.map)); }

struct DirectSum {
  Module module;
  std::vector<Matrix> inclusions;   // sum.dim() x part.dim()
  std::vector<Matrix> projections;  // part.dim() x sum.dim()
};

inline DirectSum direct_sum(AlgebraPtr alg, const std::vector<Module>& parts) {
  const Fp f = alg->field();
  std::size_t n = 0;
  for (const auto& p : parts) n += p.dim();
  std::vector<Matrix> acts(alg->dim(), Matrix(n, n, f));
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t b = 0; b < alg->dim(); ++b) acts[b].set_block(off, off, p.action(b));
    off += p.dim();
  }
  Matrix t;
  DirectSum r{Module::from_actions(alg, acts, &t, false), {}, {}};
  const Matrix tinv = *inverse(t);
  off = 0;
  for (const auto& p : parts) {
    Matrix inc(n, p.dim(), f);
    for (std::size_t k = 0; k < p.dim(); ++k) inc(off + k, k) = 1;
    r.inclusions.push_back(tinv * inc);
    r.projections.push_back(inc.transpose() * t);
    off += p.dim();
  }
  return r;
}

inline Module direct_sum(const std::vector<Module>& parts, AlgebraPtr alg) { return direct_sum(alg, parts).module; }

// Fitting decomposition into indecomposable summands with their inclusions.
inline std::vector<SubmoduleResult> split_indecomposables(const Module& m, const Limits& lim = {}) {
  if (m.is_zero()) return {};
  auto an = analyze_endomorphisms(m, lim);
  if (an.kind != EndKind::Decomposable) return {{m, Matrix::identity(m.dim(), m.field())}};
  const Matrix phi = matrix_power(*an.splitting, m.dim());
  std::vector<SubmoduleResult> out;
  for (const Matrix& span : {image_basis(phi), kernel_basis(phi)}) {
    auto part = submodule(m, span);
    for (auto& s : split_indecomposables(part.module, lim)) out.push_back({s.module, part.inclusion * s.inclusion});
  }
  return out;
}

// Iso test between modules known to be indecomposable (local endomorphism rings).
inline bool indecomposables_isomorphic(const Module& x, const Module& y) {
  if (x.dim_vector() != y.dim_vector()) return false;
  if (x.is_zero()) return true;
  const auto f = hom_basis(x, y);
  if (f.empty()) return false;
  const auto g = hom_basis(y, x);
  for (const auto& fi : f)
    for (const auto& gj : g)
      if (is_invertible(gj * fi)) return true;
  return false;
}

inline std::optional<Matrix> find_isomorphism(const Module& x, const Module& y, const Limits& lim = {}) {
  if (x.dim_vector() != y.dim_vector()) return std::nullopt;
  if (x.is_zero()) return Matrix(0, 0, x.field());
  const auto f = hom_basis(x, y);
  if (f.empty() || hom_dim(x, x) != hom_dim(y, y) || f.size() != hom_dim(x, x)) return std::nullopt;
  for (const auto& c : cheap_candidates(f, x.field()))
    if (is_invertible(c)) return c;
  std::optional<Matrix> found;
  scan_span(f, y.dim(), x.dim(), x.field(), lim, "isomorphism scan", [&](const Matrix& h) {
    if (is_invertible(h)) {
      found = h;
      return true;
    }
    return false;
  });
  return found;
}

inline bool is_isomorphic(const Module& x, const Module& y, const Limits& lim = {}) {
  return find_isomorphism(x, y, lim).has_value();
}

// All submodules, as canonical spans (columns), ordered by dimension then discovery.
inline std::vector<Matrix> submodule_spans(const Module& m, const Limits& lim = {}) {
  const Fp f = m.field();
  const std::size_t n = m.dim();
  auto key = [&](const Matrix& span) {
    Matrix c = canonical_span(span);
    std::vector<Scalar> k{static_cast<Scalar>(c.rows())};
    k.insert(k.end(), c.data().begin(), c.data().end());
    return k;
  };
  // cyclic submodules of normalized vertex-homogeneous vectors
  std::vector<Matrix> cyclic;
  std::set<std::vector<Scalar>> cyclic_keys;
  for (std::size_t v = 0; v < m.algebra()->num_vertices(); ++v) {
    const std::size_t dv = m.dim_vector()[v];
    if (bounded_power(f.p(), dv, lim.submodule_budget * 4) > lim.submodule_budget * 4)
      throw BudgetExceeded("submodule search: vertex space too large in module of dimension " + std::to_string(n));
    VectorOdometer odo(dv, f);
    while (odo.next()) {
      const auto& c = odo.value();
      auto first = std::find_if(c.begin(), c.end(), [](Scalar s) { return s != 0; });
      if (*first != 1) continue;
      Matrix vec(n, 1, f);
      for (std::size_t k = 0; k < dv; ++k) vec(m.offset(v) + k, 0) = c[k];
      Matrix span = m.generated_span(vec);
      if (cyclic_keys.insert(key(span)).second) cyclic.push_back(span);
    }
  }
  std::vector<Matrix> all{Matrix(n, 0, f)};
  std::set<std::vector<Scalar>> seen{key(all[0])};
  for (std::size_t i = 0; i < all.size(); ++i)
    for (const auto& c : cyclic) {
      if (in_span(all[i], c)) continue;
      Matrix s = subspace_sum(all[i], c);
      if (seen.insert(key(s)).second) {
        all.push_back(s);
        if (all.size() > lim.submodule_budget) {
          std::string dv;
          for (auto x : m.dim_vector()) dv += (dv.empty() ? "" : ",") + std::to_string(x);
          throw BudgetExceeded("submodule budget exceeded for module with dimension vector (" + dv + ")");
        }
      }
    }
  std::stable_sort(all.begin(), all.end(), [](const Matrix& a, const Matrix& b) { return a.cols() < b.cols(); });
  return all;
}

inline std::vector<SubmoduleResult> submodules(const Module& m, const Limits& lim = {}) {
  std::vector<SubmoduleResult> out;
  for (const auto& s : submodule_spans(m, lim)) out.push_back(submodule(m, s));
  return out;
}

// e_v A with the regular right action; basis = basis elements starting at v.
inline Module indecomposable_projective(AlgebraPtr alg, std::size_t v) {
  const Fp f = alg->field();
  const auto idx = alg->basis_starting_in({v});
  const std::size_t n = idx.size();
  std::vector<Matrix> acts;
  for (std::size_t a = 0; a < alg->dim(); ++a) {
    Matrix r(n, n, f);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& c = alg->product(idx[j], a);
      for (std::size_t i = 0; i < n; ++i) r(i, j) = c[idx[i]];
    }
    acts.push_back(std::move(r));
  }
  return Module::from_actions(alg, acts);
}

inline std::vector<Module> indecomposable_projectives(AlgebraPtr alg) {
  std::vector<Module> out;
  for (std::size_t v = 0; v < alg->num_vertices(); ++v) out.push_back(indecomposable_projective(alg, v));
  return out;
}

// Position of e_v inside the basis of indecomposable_projective(alg, v) (after adaptation).
inline Matrix projective_top_vector(AlgebraPtr alg, std::size_t v) {
  const Fp f = alg->field();
  const auto idx = alg->basis_starting_in({v});
  const std::size_t n = idx.size();
  std::vector<Matrix> acts;
  for (std::size_t a = 0; a < alg->dim(); ++a) {
    Matrix r(n, n, f);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& c = alg->product(idx[j], a);
      for (std::size_t i = 0; i < n; ++i) r(i, j) = c[idx[i]];
    }
    acts.push_back(std::move(r));
  }
  Matrix t;
  Module::from_actions(alg, acts, &t, false);
  Matrix e(n, 1, f);
  for (std::size_t i = 0; i < n; ++i)
    if (idx[i] == alg->idempotent(v)) e(i, 0) = 1;
  return *inverse(t) * e;
}

struct ProjectiveCover {
  Module projective;
  Matrix cover;       // m.dim() x projective.dim(), surjective
  Module syzygy;      // kernel of cover
  Matrix syzygy_inc;  // projective.dim() x syzygy.dim()
};

inline ProjectiveCover projective_cover(const Module& m) {
  AlgebraPtr alg = m.algebra();
  const Fp f = m.field();
  const Matrix rad = m.radical_span();
  std::vector<Module> parts;
  std::vector<Matrix> maps;  // m.dim() x P_v.dim()
  for (std::size_t v = 0; v < alg->num_vertices(); ++v) {
    const Matrix top = quotient_basis(subspace_intersection(rad, m.vertex_space(v)), m.vertex_space(v));
    if (top.cols() == 0) continue;
    const Module pv = indecomposable_projective(alg, v);
    const Matrix ev = projective_top_vector(alg, v);
    for (std::size_t j = 0; j < top.cols(); ++j) {
      // the map e_v a -> x.a, determined by e_v -> x
      const Matrix x = top.col_matrix(j);
      auto homs = hom_basis(pv, m);
      Matrix sys(m.dim(), homs.size(), f);
      for (std::size_t h = 0; h < homs.size(); ++h) {
        const Matrix img = homs[h] * ev;
        for (std::size_t k = 0; k < m.dim(); ++k) sys(k, h) = img(k, 0);
      }
      auto c = solve(sys, x);
      if (!c) throw VerificationError("projective cover: no map hits the top vector");
      Matrix phi(m.dim(), pv.dim(), f);
      for (std::size_t h = 0; h < homs.size(); ++h) phi.axpy((*c)(h, 0), homs[h]);
      parts.push_back(pv);
      maps.push_back(phi);
    }
  }
  auto sum = direct_sum(alg, parts);
  Matrix cover(m.dim(), sum.module.dim(), f);
  for (std::size_t i = 0; i < parts.size(); ++i) cover = cover + maps[i] * sum.projections[i];
  if (rank(cover) != m.dim()) throw VerificationError("projective cover is not surjective");
  auto k = submodule(sum.module, kernel_basis(cover));
  return {sum.module, cover, k.module, k.inclusion};
}

inline Matrix flatten(const Matrix& x) {
  Matrix v(x.rows() * x.cols(), 1, x.field());
  for (std::size_t k = 0; k < x.data().size(); ++k) v(k, 0) = x.data()[k];
  return v;
}

struct ShortExactSequence {
  Module left, middle, right;
  Matrix iota;  // middle.dim() x left.dim()
  Matrix pi;    // right.dim() x middle.dim()
};

inline bool is_exact(const ShortExactSequence& s) {
  if (!(s.pi * s.iota).is_zero()) return false;
  if (rank(s.iota) != s.left.dim() || rank(s.pi) != s.right.dim()) return false;
  if (s.middle.dim() != s.left.dim() + s.right.dim()) return false;
  for (std::size_t v = 0; v < s.middle.dim_vector().size(); ++v)
    if (s.middle.dim_vector()[v] != s.left.dim_vector()[v] + s.right.dim_vector()[v]) return false;
  check_morphism({s.left, s.middle, s.iota});
  check_morphism({s.middle, s.right, s.pi});
  return true;
}

// A section of pi exists iff the sequence splits.
inline bool is_split(const ShortExactSequence& s) {
  const Fp f = s.middle.field();
  const auto homs = hom_basis(s.right, s.middle);
  const std::size_t n = s.right.dim();
  if (n == 0) return true;
  Matrix sys(n * n, homs.size(), f);
  for (std::size_t h = 0; h < homs.size(); ++h) {
    const Matrix c = flatten(s.pi * homs[h]);
    for (std::size_t k = 0; k < n * n; ++k) sys(k, h) = c(k, 0);
  }
  return solve(sys, flatten(Matrix::identity(n, f))).has_value();
}

// Pushout along zeta: E = (x + P) / {(zeta(w), -w)}, giving 0 -> x -> E -> z -> 0.
inline ShortExactSequence pushout_middle_term(const Module& z, const Module& x, const ProjectiveCover& cover,
                                              const Matrix& zeta) {
  AlgebraPtr alg = x.algebra();
  auto sum = direct_sum(alg, {x, cover.projective});
  const Matrix rel = sum.inclusions[0] * zeta - sum.inclusions[1] * cover.syzygy_inc;
  auto q = quotient(sum.module, rel);
  ShortExactSequence s{x, q.module, z, q.projection * sum.inclusions[0], Matrix()};
  // pi[(x, p)] = cover(p), factored through the quotient coordinates
  const Matrix on_sum = cover.cover * sum.projections[1];
  auto lifted = solve(q.projection.transpose(), on_sum.transpose());
  if (!lifted) throw VerificationError("middle term projection does not factor");
  s.pi = lifted->transpose();
  return s;
}

// Ext^1(z, x) = Hom(Omega z, x) / restrictions of Hom(P, x).
class Ext1 {
 public:
  Ext1(const Module& z, const Module& x) : Ext1(z, x, projective_cover(z)) {}
  Ext1(const Module& z, const Module& x, ProjectiveCover cover) : z_(z), x_(x), cover_(std::move(cover)) {
    const Fp f = z.field();
    const auto hom_omega = hom_basis(cover_.syzygy, x);
    const auto hom_p = hom_basis(cover_.projective, x);
    const std::size_t w = cover_.syzygy.dim();
    const std::size_t len = x.dim() * w;
    Matrix omega(len, hom_omega.size(), f);
    for (std::size_t j = 0; j < hom_omega.size(); ++j) {
      auto c = flatten(hom_omega[j]);
      for (std::size_t k = 0; k < len; ++k) omega(k, j) = c(k, 0);
    }
    Matrix restricted(len, hom_p.size(), f);
    for (std::size_t j = 0; j < hom_p.size(); ++j) {
      auto c = flatten(hom_p[j] * cover_.syzygy_inc);
      for (std::size_t k = 0; k < len; ++k) restricted(k, j) = c(k, 0);
    }
    boundaries_ = image_basis(restricted);
    const Matrix reps = quotient_basis(boundaries_, omega);
    for (std::size_t j = 0; j < reps.cols(); ++j) {
      Matrix z1(x.dim(), w, f);
      for (std::size_t k = 0; k < len; ++k) z1(k / w, k % w) = reps(k, j);
      basis_.push_back(std::move(z1));
    }
  }

  std::size_t dim() const { return basis_.size(); }
  const std::vector<Matrix>& basis() const { return basis_; }  // cocycles Omega -> x
  const ProjectiveCover& cover() const { return cover_; }
  const Module& left() const { return x_; }
  const Module& right() const { return z_; }

  Matrix cocycle(const std::vector<Scalar>& coeffs) const {
    return combine(basis_, coeffs, x_.dim(), cover_.syzygy.dim(), x_.field());
  }
  bool is_coboundary(const Matrix& zeta) const { return in_span(boundaries_, flatten(zeta)); }
  ShortExactSequence middle_term(const Matrix& zeta) const { return pushout_middle_term(z_, x_, cover_, zeta); }

 private:
  Module z_, x_;
  ProjectiveCover cover_;
  Matrix boundaries_;
  std::vector<Matrix> basis_;
};

inline std::size_t ext1_dim(const Module& z, const Module& x) { return Ext1(z, x).dim(); }

// Loewy-layer label such as "2/3" or "2/1,3" built from vertex names.
inline std::string loewy_label(const Module& m) {
  if (m.is_zero()) return "0";
  const Algebra& a = *m.algebra();
  std::vector<Matrix> layers{Matrix::identity(m.dim(), m.field())};
  while (layers.back().cols() > 0) {
    Matrix cur = layers.back();
    Matrix next(m.dim(), 0, m.field());
    for (auto g : a.generators()) next = hstack(next, m.action(g) * cur);
    layers.push_back(image_basis(next));
  }
  std::string out;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    std::string layer;
    for (std::size_t v = 0; v < a.num_vertices(); ++v) {
      const std::size_t lv = subspace_intersection(layers[l], m.vertex_space(v)).cols();
      const std::size_t nv = subspace_intersection(layers[l + 1], m.vertex_space(v)).cols();
      for (std::size_t k = 0; k < lv - nv; ++k) layer += (layer.empty() ? "" : ",") + a.vertex_names()[v];
    }
    out += (out.empty() ? "" : "/") + layer;
  }
  return out;
}

}  // namespace qrep
