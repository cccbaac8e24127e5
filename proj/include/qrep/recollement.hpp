#pragma once

// The recollement (mod A/AeA, mod A, mod eAe) of an idempotent e, for right modules.
//
//   j^* T = Te                      i_* X = X through A -> A/AeA
//   i^! T = {t : t.AeA = 0}         i^* T = T / T.AeA
//   j_! N = N (x)_C eA              j_* N = Hom_C(Ae, N), (phi.a)(y) = phi(a y)
//   j_!* N = image of j_! N -> j_* N, n (x) x |-> (y |-> n.(x y))

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrep/algebra.hpp"
#include "qrep/errors.hpp"
#include "qrep/module.hpp"
#include "qrep/subcat.hpp"
#include "qrep/universe.hpp"

namespace qrep {

enum class FunctorTag { i_star, i_upper, i_shriek, j_lower_shriek, j_upper, j_star, j_intermediate };

inline const std::vector<FunctorTag>& all_functor_tags() {
  static const std::vector<FunctorTag> t{FunctorTag::i_star,        FunctorTag::i_upper, FunctorTag::i_shriek,
                                         FunctorTag::j_lower_shriek, FunctorTag::j_upper, FunctorTag::j_star,
                                         FunctorTag::j_intermediate};
  return t;
}

inline std::string to_string(FunctorTag t) {
  switch (t) {
    case FunctorTag::i_star: return "i_*";
    case FunctorTag::i_upper: return "i^*";
    case FunctorTag::i_shriek: return "i^!";
    case FunctorTag::j_lower_shriek: return "j_!";
    case FunctorTag::j_upper: return "j^*";
    case FunctorTag::j_star: return "j_*";
    case FunctorTag::j_intermediate: return "j_!*";
  }
  return "?";
}

enum class Side { X, Y, Z };

inline Side source_side(FunctorTag t) {
  switch (t) {
    case FunctorTag::i_star: return Side::Y;
    case FunctorTag::i_upper:
    case FunctorTag::i_shriek:
    case FunctorTag::j_upper: return Side::X;
    default: return Side::Z;
  }
}

struct ExactnessCertificate {
  bool structural = false;  // A/AeA is a projective right A-module
  bool direct = false;      // i^! preserved exactness on every tested sequence
  std::size_t sequences_tested = 0;
  std::string witness;      // a sequence on which i^! fails, when any
};

struct RecollementOptions {
  std::size_t bound_x = 0;  // 0 = no universes
  std::size_t bound_y = 0;
  std::size_t bound_z = 0;
  Strategy strategy = Strategy::Extension;
  Limits limits{};
};

class Recollement {
 public:
  Recollement(AlgebraPtr a, IdempotentSpec e, const RecollementOptions& opt = {})
      : a_(std::move(a)), e_(std::move(e)), opt_(opt) {
    const Fp f = a_->field();
    for (auto v : e_.vertices)
      if (v >= a_->num_vertices()) throw InputError("idempotent vertex out of range");
    corner_ = corner_algebra(*a_, e_);
    quot_ = quotient_by_idempotent_ideal(*a_, e_);
    ea_ = a_->basis_starting_in(e_.vertices);
    ae_ = a_->basis_ending_in(e_.vertices);
    // corner basis index of each A basis element lying in eAe
    for (std::size_t k = 0; k < corner_.embedding.size(); ++k) corner_index_[corner_.embedding[k]] = k;
    // left C action on eA and right C action on Ae, in those bases
    const std::size_t dc = c()->dim();
    for (std::size_t k = 0; k < dc; ++k) {
      const auto cv = a_->unit_vector(corner_.embedding[k]);
      lambda_ea_.push_back(restrict_mult(cv, ea_, true));
      rho_ae_.push_back(restrict_mult(cv, ae_, false));
    }
    for (std::size_t b = 0; b < a_->dim(); ++b) {
      rho_ea_.push_back(restrict_mult(a_->unit_vector(b), ea_, false));
      lambda_ae_.push_back(restrict_mult(a_->unit_vector(b), ae_, true));
    }
    (void)f;
    build_universes();
  }

  const AlgebraPtr& a() const { return a_; }
  const AlgebraPtr& b() const { return quot_.algebra; }
  const AlgebraPtr& c() const { return corner_.algebra; }
  const IdempotentSpec& idempotent() const { return e_; }
  const CornerAlgebra& corner() const { return corner_; }
  const QuotientAlgebra& quotient_data() const { return quot_; }
  bool has_universes() const { return ux_ && uy_ && uz_; }
  const IndecUniverse& ux() const { return *require(ux_); }
  const IndecUniverse& uy() const { return *require(uy_); }
  const IndecUniverse& uz() const { return *require(uz_); }
  UniversePtr ux_ptr() const { return ux_; }
  UniversePtr uy_ptr() const { return uy_; }
  UniversePtr uz_ptr() const { return uz_; }
  void set_universes(UniversePtr x, UniversePtr y, UniversePtr z) {
    ux_ = std::move(x);
    uy_ = std::move(y);
    uz_ = std::move(z);
    jstar_ids_.clear();
    ishriek_ids_.clear();
  }

  // ---- the seven functors -------------------------------------------------

  Module j_upper(const Module& t) const {
    expect(t, a_, "j^*");
    std::vector<Matrix> acts;
    const Matrix s = te_coords(t);
    for (std::size_t k = 0; k < c()->dim(); ++k)
      acts.push_back(s.transpose() * t.action(corner_.embedding[k]) * s);
    return Module::from_actions(c(), acts, nullptr, false);
  }

  Module i_star(const Module& x) const {
    expect(x, b(), "i_*");
    const Fp f = a_->field();
    std::vector<Matrix> acts;
    for (std::size_t k = 0; k < a_->dim(); ++k) {
      Matrix m(x.dim(), x.dim(), f);
      for (std::size_t r = 0; r < b()->dim(); ++r)
        if (quot_.projection(r, k) != 0) m.axpy(quot_.projection(r, k), x.action(r));
      acts.push_back(std::move(m));
    }
    return Module::from_actions(a_, acts, nullptr, false);
  }

  // {t : t.AeA = 0} as a subspace of t
  Matrix i_shriek_span(const Module& t) const {
    expect(t, a_, "i^!");
    Matrix stacked(0, t.dim(), t.field());
    for (std::size_t j = 0; j < quot_.ideal.cols(); ++j) stacked = vstack(stacked, ideal_action(t, j));
    return kernel_basis(stacked);
  }
  Module i_shriek(const Module& t) const { return to_b(submodule(t, i_shriek_span(t)).module); }

  Matrix t_aea_span(const Module& t) const {
    Matrix span(t.dim(), 0, t.field());
    for (std::size_t j = 0; j < quot_.ideal.cols(); ++j) span = hstack(span, ideal_action(t, j));
    return image_basis(span);
  }
  Module i_upper(const Module& t) const {
    expect(t, a_, "i^*");
    return to_b(quotient(t, t_aea_span(t)).module);
  }

  struct LowerShriek {
    Module module;
    Matrix projection;  // module coords <- N (x) eA coords
    Matrix section;     // N (x) eA coords <- module coords
  };
  LowerShriek j_lower_shriek_data(const Module& n) const {
    expect(n, c(), "j_!");
    const Fp f = a_->field();
    const std::size_t dn = n.dim(), de = ea_.size();
    const Matrix in = Matrix::identity(dn, f), ie = Matrix::identity(de, f);
    std::vector<Matrix> acts;
    for (std::size_t k = 0; k < a_->dim(); ++k) acts.push_back(kronecker_product(in, rho_ea_[k]));
    Matrix rel(dn * de, 0, f);
    for (std::size_t k = 0; k < c()->dim(); ++k)
      rel = hstack(rel, kronecker_product(n.action(k), ie) - kronecker_product(in, lambda_ea_[k]));
    Matrix t;
    const Module w = Module::from_actions(a_, acts, &t, false);
    const Matrix tinv = *inverse(t);
    auto q = quotient(w, tinv * image_basis(rel));
    Matrix proj = q.projection * tinv;
    auto sec = solve(proj, Matrix::identity(q.module.dim(), f));
    return {q.module, proj, *sec};
  }
  Module j_lower_shriek(const Module& n) const { return j_lower_shriek_data(n).module; }

  struct LowerStar {
    Module module;
    Matrix basis;  // columns = flattened maps Ae -> N (row-major, dn x dim Ae), in module coords
  };
  LowerStar j_star_data(const Module& n) const {
    expect(n, c(), "j_*");
    const Fp f = a_->field();
    const std::size_t dn = n.dim(), dy = ae_.size();
    // phi rho_c = R_c phi for all c
    Matrix sys(0, dn * dy, f);
    for (std::size_t k = 0; k < c()->dim(); ++k) {
      Matrix eq(dn * dy, dn * dy, f);
      const Matrix& rc = rho_ae_[k];
      const Matrix& nc = n.action(k);
      for (std::size_t r = 0; r < dn; ++r)
        for (std::size_t col = 0; col < dy; ++col) {
          const std::size_t row = r * dy + col;
          for (std::size_t m = 0; m < dy; ++m)
            if (rc(m, col) != 0) eq(row, r * dy + m) = f.add(eq(row, r * dy + m), rc(m, col));
          for (std::size_t m = 0; m < dn; ++m)
            if (nc(r, m) != 0) eq(row, m * dy + col) = f.sub(eq(row, m * dy + col), nc(r, m));
        }
      sys = vstack(sys, eq);
    }
    const Matrix h = kernel_basis(sys);
    std::vector<Matrix> acts;
    for (std::size_t k = 0; k < a_->dim(); ++k) {
      // phi . a = phi o lambda_a
      Matrix img(dn * dy, h.cols(), f);
      for (std::size_t j = 0; j < h.cols(); ++j) {
        const Matrix phi = unflatten(h.col_matrix(j), dn, dy) * lambda_ae_[k];
        img.set_block(0, j, flatten(phi));
      }
      auto x = solve(h, img);
      if (!x) throw VerificationError("j_*: action does not preserve C-linear maps");
      acts.push_back(*x);
    }
    Matrix t;
    Module m = Module::from_actions(a_, acts, &t, false);
    return {m, h * t};
  }
  Module j_star(const Module& n) const { return j_star_data(n).module; }

  // Matrix of the canonical map j_! N -> j_* N.
  Matrix canonical_map(const Module& n) const {
    const Fp f = a_->field();
    const auto ls = j_lower_shriek_data(n);
    const auto st = j_star_data(n);
    const std::size_t dn = n.dim(), de = ea_.size(), dy = ae_.size();
    Matrix on_tensor(st.module.dim(), dn * de, f);
    for (std::size_t i = 0; i < dn; ++i)
      for (std::size_t x = 0; x < de; ++x) {
        Matrix phi(dn, dy, f);
        for (std::size_t y = 0; y < dy; ++y) {
          const auto prod = a_->multiply(a_->unit_vector(ea_[x]), a_->unit_vector(ae_[y]));
          // prod lies in eAe
          Matrix rn(dn, dn, f);
          for (std::size_t k = 0; k < a_->dim(); ++k)
            if (prod[k] != 0) rn.axpy(prod[k], n.action(corner_index_.at(k)));
          for (std::size_t r = 0; r < dn; ++r) phi(r, y) = rn(r, i);
        }
        auto coords = solve(st.basis, flatten(phi));
        if (!coords) throw VerificationError("canonical map lands outside j_*");
        on_tensor.set_block(0, i * de + x, *coords);
      }
    return on_tensor * ls.section;
  }

  Module j_intermediate(const Module& n) const {
    const Matrix m = canonical_map(n);
    return submodule(j_star(n), image_basis(m)).module;
  }

  // x |-> (y |-> x.y), X -> j_* j^* X
  Matrix unit_to_j_star(const Module& x) const {
    const Fp f = a_->field();
    const Module z = j_upper(x);
    const auto st = j_star_data(z);
    const Matrix s = te_coords(x);
    const std::size_t dy = ae_.size();
    Matrix out(st.module.dim(), x.dim(), f);
    for (std::size_t i = 0; i < x.dim(); ++i) {
      Matrix phi(z.dim(), dy, f);
      for (std::size_t y = 0; y < dy; ++y) {
        const Matrix img = s.transpose() * (x.action(ae_[y]) * Matrix::identity(x.dim(), f).col_matrix(i));
        for (std::size_t r = 0; r < z.dim(); ++r) phi(r, y) = img(r, 0);
      }
      auto coords = solve(st.basis, flatten(phi));
      if (!coords) throw VerificationError("unit map lands outside j_*");
      out.set_block(0, i, *coords);
    }
    return out;
  }

  Module apply(FunctorTag t, const Module& m) const {
    switch (t) {
      case FunctorTag::i_star: return i_star(m);
      case FunctorTag::i_upper: return i_upper(m);
      case FunctorTag::i_shriek: return i_shriek(m);
      case FunctorTag::j_lower_shriek: return j_lower_shriek(m);
      case FunctorTag::j_upper: return j_upper(m);
      case FunctorTag::j_star: return j_star(m);
      case FunctorTag::j_intermediate: return j_intermediate(m);
    }
    throw InputError("unknown functor");
  }

  // Matrix of F(f) between apply(t, f.source) and apply(t, f.target).
  Matrix apply_to_morphism(FunctorTag t, const Morphism& g) const {
    const Fp f = a_->field();
    switch (t) {
      case FunctorTag::i_star: expect(g.source, b(), "i_*"); return g.map;
      case FunctorTag::j_upper: {
        expect(g.source, a_, "j^*");
        return te_coords(g.target).transpose() * g.map * te_coords(g.source);
      }
      case FunctorTag::i_shriek: {
        const auto s = submodule(g.source, i_shriek_span(g.source));
        const auto r = submodule(g.target, i_shriek_span(g.target));
        // the B-module coordinates coincide with the A-submodule coordinates (to_b keeps the basis)
        return *solve(r.inclusion, g.map * s.inclusion);
      }
      case FunctorTag::i_upper: {
        const auto qs = quotient(g.source, t_aea_span(g.source));
        const auto qt = quotient(g.target, t_aea_span(g.target));
        const Matrix sec = *solve(qs.projection, Matrix::identity(qs.module.dim(), f));
        return qt.projection * g.map * sec;
      }
      case FunctorTag::j_lower_shriek: {
        const auto ls = j_lower_shriek_data(g.source);
        const auto lt = j_lower_shriek_data(g.target);
        return lt.projection * kronecker_product(g.map, Matrix::identity(ea_.size(), f)) * ls.section;
      }
      case FunctorTag::j_star: {
        const auto ss = j_star_data(g.source);
        const auto st = j_star_data(g.target);
        const std::size_t dy = ae_.size();
        Matrix img(st.basis.rows(), ss.basis.cols(), f);
        for (std::size_t j = 0; j < ss.basis.cols(); ++j)
          img.set_block(0, j, flatten(g.map * unflatten(ss.basis.col_matrix(j), g.source.dim(), dy)));
        return *solve(st.basis, img);
      }
      case FunctorTag::j_intermediate: {
        const Matrix js = apply_to_morphism(FunctorTag::j_star, g);
        const auto is = submodule(j_star(g.source), image_basis(canonical_map(g.source)));
        const auto it = submodule(j_star(g.target), image_basis(canonical_map(g.target)));
        return *solve(it.inclusion, js * is.inclusion);
      }
    }
    throw InputError("unknown functor");
  }

  // ---- exactness of i^! ----------------------------------------------------

  bool structural_exactness() const {
    // A/AeA as a right A-module is i_* of the regular B-module
    std::vector<Module> parts;
    for (auto& p : indecomposable_projectives(b())) parts.push_back(i_star(p));
    const Module m = direct_sum(a_, parts).module;
    return projective_cover(m).projective.dim() == m.dim();
  }

  ExactnessCertificate exactness() const {
    std::lock_guard<std::mutex> lock(mu_);
    if (cert_) return *cert_;
    ExactnessCertificate c;
    c.structural = structural_exactness();
    c.direct = true;
    const IndecUniverse& u = ux();
    auto adds = [&](const Module& l, const Module& m, const Module& n) {
      return i_shriek_span(m).cols() == i_shriek_span(l).cols() + i_shriek_span(n).cols();
    };
    for (std::size_t i = 0; i < u.size() && c.direct; ++i)
      for (const auto& span : submodule_spans(u.module(i), u.limits())) {
        ++c.sequences_tested;
        const Module sub = submodule(u.module(i), span).module, quo = quotient(u.module(i), span).module;
        if (!adds(sub, u.module(i), quo)) {
          c.direct = false;
          c.witness = "0 -> " + loewy_label(sub) + " -> " + u.label(i) + " -> " + loewy_label(quo) + " -> 0";
          break;
        }
      }
    const Fp f = a_->field();
    for (std::size_t z = 0; z < u.size() && c.direct; ++z)
      for (std::size_t x = 0; x < u.size() && c.direct; ++x) {
        const Ext1& ext = u.ext(z, x);
        for (const auto& line : all_subspaces(ext.dim(), 1, f)) {
          std::vector<Scalar> coeffs(line.cols());
          for (std::size_t k = 0; k < line.cols(); ++k) coeffs[k] = line(0, k);
          const auto s = ext.middle_term(ext.cocycle(coeffs));
          ++c.sequences_tested;
          if (!adds(s.left, s.middle, s.right)) {
            c.direct = false;
            c.witness = "0 -> " + u.label(x) + " -> E -> " + u.label(z) + " -> 0 (nonsplit, middle term " +
                        loewy_label(s.middle) + ")";
            break;
          }
        }
      }
    if (c.structural != c.direct)
      throw VerificationError("exactness verdicts disagree (structural " + std::string(c.structural ? "true" : "false") +
                              ", direct " + (c.direct ? "true" : "false") + ")" +
                              (c.witness.empty() ? "" : "; witness: " + c.witness));
    cert_ = c;
    return c;
  }
  bool is_i_shriek_exact() const { return exactness().structural; }

  // ---- universe-level images ----------------------------------------------

  const std::vector<std::size_t>& j_upper_ids(std::size_t x) const {
    fill_ids();
    return jstar_ids_[x];
  }
  const std::vector<std::size_t>& i_shriek_ids(std::size_t x) const {
    fill_ids();
    return ishriek_ids_[x];
  }

  // ---- gluing and restriction -----------------------------------------------

  IdSet glue_comprehension(const IdSet& ey, const IdSet& ez) const {
    IdSet out;
    for (std::size_t x = 0; x < ux().size(); ++x)
      if (contains_all(ez, j_upper_ids(x)) && contains_all(ey, i_shriek_ids(x))) out.push_back(x);
    return out;
  }

  IdSet glue_left_schur(const IdSet& ey, const IdSet& ez, bool allow_unverified = false) const {
    require_exact("left Schur gluing", allow_unverified);
    return glue_comprehension(ey, ez);
  }
  IdSet glue_wide(const IdSet& ey, const IdSet& ez, bool allow_unverified = false) const {
    require_exact("wide gluing", allow_unverified);
    return glue_comprehension(ey, ez);
  }
  IdSet glue_torf(const IdSet& ey, const IdSet& ez) const { return glue_comprehension(ey, ez); }

  IdSet i_star_ids(const IdSet& ys) const {
    IdSet out;
    for (auto y : ys) {
      auto d = ux().decompose(i_star(uy().module(y)));
      out.insert(out.end(), d.begin(), d.end());
    }
    return normalize(out);
  }
  IdSet functor_ids(FunctorTag t, const IdSet& zs) const {
    IdSet out;
    for (auto z : zs) {
      auto d = ux().decompose(apply(t, uz().module(z)));
      out.insert(out.end(), d.begin(), d.end());
    }
    return normalize(out);
  }

  enum class MonobrickVariant { general, cc };

  IdSet glue_monobrick(const IdSet& my, const IdSet& mz, MonobrickVariant variant = MonobrickVariant::general,
                       bool allow_unverified = false) const {
    if (!is_monobrick(uy(), my) || !is_monobrick(uz(), mz)) throw PreconditionError("inputs are not monobricks");
    IdSet out = i_star_ids(my);
    IdSet z_part;
    if (variant == MonobrickVariant::cc) {
      if (!is_cofinally_closed(uy(), my) || !is_cofinally_closed(uz(), mz))
        throw PreconditionError("inputs are not cofinally closed");
      require_exact("cofinally closed monobrick gluing", allow_unverified);
      z_part = functor_ids(FunctorTag::j_star, mz);
    } else {
      z_part = functor_ids(FunctorTag::j_intermediate, mz);
    }
    out.insert(out.end(), z_part.begin(), z_part.end());
    out = normalize(out);
    if (out.size() != my.size() + mz.size())
      throw VerificationError("glued brick set lost members: " + format_ids(ux(), out));
    if (!allow_unverified || is_i_shriek_exact()) {
      if (!is_monobrick(ux(), out)) throw VerificationError("glued set is not a monobrick: " + format_ids(ux(), out));
      if (variant == MonobrickVariant::cc && !is_cofinally_closed(ux(), out))
        throw VerificationError("glued set is not cofinally closed: " + format_ids(ux(), out));
    }
    return out;
  }

  IdSet glue_semibrick(const IdSet& sy, const IdSet& sz) const {
    if (!is_semibrick(uy(), sy) || !is_semibrick(uz(), sz)) throw PreconditionError("inputs are not semibricks");
    IdSet out = i_star_ids(sy);
    IdSet z_part = functor_ids(FunctorTag::j_intermediate, sz);
    out.insert(out.end(), z_part.begin(), z_part.end());
    out = normalize(out);
    if (!is_semibrick(ux(), out)) throw VerificationError("glued set is not a semibrick: " + format_ids(ux(), out));
    return out;
  }

  std::pair<IdSet, IdSet> restrict(const IdSet& ex) const {
    IdSet y, z;
    for (auto x : ex) {
      y.insert(y.end(), i_shriek_ids(x).begin(), i_shriek_ids(x).end());
      z.insert(z.end(), j_upper_ids(x).begin(), j_upper_ids(x).end());
    }
    return {normalize(y), normalize(z)};
  }

 private:
  template <class P>
  static const P& require(const P& p) {
    if (!p) throw PreconditionError("recollement universes were not built");
    return p;
  }

  void require_exact(const std::string& what, bool allow_unverified) const {
    if (allow_unverified) return;
    if (!is_i_shriek_exact())
      throw PreconditionError(what + " requires i^! to be exact; pass --allow-unverified-hypothesis to override");
  }

  void expect(const Module& m, const AlgebraPtr& alg, const std::string& functor) const {
    if (m.algebra() != alg) throw InputError("source-category mismatch for " + functor);
  }

  void build_universes() {
    if (opt_.bound_x == 0) return;
    ux_ = build_universe(a_, opt_.bound_x, pick(a_), opt_.limits);
    uy_ = build_universe(b(), opt_.bound_y ? opt_.bound_y : opt_.bound_x, pick(b()), opt_.limits);
    uz_ = build_universe(c(), opt_.bound_z ? opt_.bound_z : opt_.bound_x, pick(c()), opt_.limits);
  }
  Strategy pick(const AlgebraPtr& alg) const {
    if (opt_.strategy == Strategy::AnalyticTypeA && !IndecUniverse::type_a_line(*alg)) return Strategy::Extension;
    return opt_.strategy;
  }

  void fill_ids() const {
    std::lock_guard<std::mutex> lock(mu_);
    if (!jstar_ids_.empty() || ux().size() == 0) return;
    for (std::size_t x = 0; x < ux().size(); ++x) {
      jstar_ids_.push_back(uz().decompose(j_upper(ux().module(x))));
      ishriek_ids_.push_back(uy().decompose(i_shriek(ux().module(x))));
    }
  }

  // coordinates of Te inside t: identity columns of the vertex blocks in e
  Matrix te_coords(const Module& t) const {
    Matrix s(t.dim(), 0, t.field());
    for (auto v : e_.vertices) s = hstack(s, t.vertex_space(v));
    return s;
  }

  Matrix ideal_action(const Module& t, std::size_t j) const {
    Matrix m(t.dim(), t.dim(), t.field());
    for (std::size_t k = 0; k < a_->dim(); ++k)
      if (quot_.ideal(k, j) != 0) m.axpy(quot_.ideal(k, j), t.action(k));
    return m;
  }

  // Transport an A-module annihilated by AeA to a B-module on the same basis.
  Module to_b(const Module& t) const {
    std::vector<Matrix> acts;
    for (std::size_t k = 0; k < b()->dim(); ++k) acts.push_back(t.action(quot_.lift[k]));
    return Module::from_actions(b(), acts, nullptr, false);
  }

  // Multiplication by `a` restricted to span(sub) (left: x -> a x, right: x -> x a).
  Matrix restrict_mult(const std::vector<Scalar>& a, const std::vector<std::size_t>& sub, bool left) const {
    const Fp f = a_->field();
    Matrix m(sub.size(), sub.size(), f);
    for (std::size_t j = 0; j < sub.size(); ++j) {
      const auto p = left ? a_->multiply(a, a_->unit_vector(sub[j])) : a_->multiply(a_->unit_vector(sub[j]), a);
      for (std::size_t i = 0; i < sub.size(); ++i) m(i, j) = p[sub[i]];
      for (std::size_t k = 0; k < a_->dim(); ++k)
        if (p[k] != 0 && std::find(sub.begin(), sub.end(), k) == sub.end())
          throw VerificationError("multiplication leaves the one-sided ideal");
    }
    return m;
  }

  static Matrix unflatten(const Matrix& v, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols, v.field());
    for (std::size_t k = 0; k < rows * cols; ++k) m(k / cols, k % cols) = v(k, 0);
    return m;
  }

  AlgebraPtr a_;
  IdempotentSpec e_;
  RecollementOptions opt_;
  CornerAlgebra corner_;
  QuotientAlgebra quot_;
  std::vector<std::size_t> ea_, ae_;
  std::map<std::size_t, std::size_t> corner_index_;
  std::vector<Matrix> lambda_ea_, rho_ae_, rho_ea_, lambda_ae_;
  UniversePtr ux_, uy_, uz_;
  mutable std::mutex mu_;
  mutable std::optional<ExactnessCertificate> cert_;
  mutable std::vector<std::vector<std::size_t>> jstar_ids_, ishriek_ids_;
};

struct AxiomReport {
  std::size_t checks = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Adjunction dimension laws, the unit/counit isomorphisms, the vanishing compositions and
// Im i_* = Ker j^*, on every universe member; the exact-case identities when i^! is exact.
inline AxiomReport check_axioms(const Recollement& r) {
  AxiomReport rep;
  const auto& ux = r.ux();
  const auto& uy = r.uy();
  const auto& uz = r.uz();
  auto expect = [&](bool cond, const std::string& what) {
    ++rep.checks;
    if (!cond) rep.failures.push_back(what);
  };
  std::vector<Module> istar, jshriek, jstar;
  for (std::size_t y = 0; y < uy.size(); ++y) istar.push_back(r.i_star(uy.module(y)));
  for (std::size_t z = 0; z < uz.size(); ++z) {
    jshriek.push_back(r.j_lower_shriek(uz.module(z)));
    jstar.push_back(r.j_star(uz.module(z)));
  }
  for (std::size_t x = 0; x < ux.size(); ++x) {
    const Module& m = ux.module(x);
    const std::string lx = ux.label(x);
    const Module iu = r.i_upper(m), is = r.i_shriek(m), ju = r.j_upper(m);
    for (std::size_t y = 0; y < uy.size(); ++y) {
      const std::string ly = uy.label(y);
      expect(hom_dim(iu, uy.module(y)) == hom_dim(m, istar[y]), "Hom(i^*" + lx + ", " + ly + ") != Hom(" + lx + ", i_*" + ly + ")");
      expect(hom_dim(istar[y], m) == hom_dim(uy.module(y), is), "Hom(i_*" + ly + ", " + lx + ") != Hom(" + ly + ", i^!" + lx + ")");
    }
    for (std::size_t z = 0; z < uz.size(); ++z) {
      const std::string lz = uz.label(z);
      expect(hom_dim(jshriek[z], m) == hom_dim(uz.module(z), ju), "Hom(j_!" + lz + ", " + lx + ") != Hom(" + lz + ", j^*" + lx + ")");
      expect(hom_dim(ju, uz.module(z)) == hom_dim(m, jstar[z]), "Hom(j^*" + lx + ", " + lz + ") != Hom(" + lx + ", j_*" + lz + ")");
    }
    expect((ju.dim() == 0) == (r.t_aea_span(m).cols() == 0),
           "Im i_* != Ker j^* at " + lx);
  }
  for (std::size_t y = 0; y < uy.size(); ++y) {
    const std::string ly = uy.label(y);
    expect(is_isomorphic(r.i_upper(istar[y]), uy.module(y)), "i^*i_*" + ly + " not iso to " + ly);
    expect(is_isomorphic(r.i_shriek(istar[y]), uy.module(y)), "i^!i_*" + ly + " not iso to " + ly);
    expect(r.j_upper(istar[y]).dim() == 0, "j^*i_*" + ly + " != 0");
  }
  const bool exact = r.is_i_shriek_exact();
  for (std::size_t z = 0; z < uz.size(); ++z) {
    const std::string lz = uz.label(z);
    const Module& n = uz.module(z);
    expect(is_isomorphic(r.j_upper(jshriek[z]), n), "j^*j_!" + lz + " not iso to " + lz);
    expect(is_isomorphic(r.j_upper(jstar[z]), n), "j^*j_*" + lz + " not iso to " + lz);
    expect(r.i_upper(jshriek[z]).dim() == 0, "i^*j_!" + lz + " != 0");
    expect(r.i_shriek(jstar[z]).dim() == 0, "i^!j_*" + lz + " != 0");
    if (exact) {
      expect(r.i_upper(jstar[z]).dim() == 0, "i^*j_*" + lz + " != 0 although i^! is exact");
      expect(is_isomorphic(r.j_intermediate(n), jstar[z]), "j_!*" + lz + " not iso to j_*" + lz + " although i^! is exact");
    }
  }
  if (exact)
    for (std::size_t x = 0; x < ux.size(); ++x) {
      const Module& m = ux.module(x);
      const Matrix u = r.unit_to_j_star(m);
      const std::size_t target = r.j_star(r.j_upper(m)).dim();
      const bool ok = rank(u) == target && m.dim() - rank(u) == r.i_shriek_span(m).cols() &&
                      subspace_intersection(kernel_basis(u), r.i_shriek_span(m)).cols() == r.i_shriek_span(m).cols();
      expect(ok, "0 -> i_*i^!X -> X -> j_*j^*X -> 0 not exact at " + ux.label(x));
    }
  return rep;
}

inline std::shared_ptr<Recollement> build_recollement(AlgebraPtr a, const IdempotentSpec& e,
                                                      const RecollementOptions& opt = {}) {
  auto r = std::make_shared<Recollement>(std::move(a), e, opt);
  if (r->has_universes()) {
    const auto rep = check_axioms(*r);
    if (!rep.ok()) throw VerificationError("recollement self-check failed: " + rep.failures.front());
  }
  return r;
}

}  // namespace qrep
