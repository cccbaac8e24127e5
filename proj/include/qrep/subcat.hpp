#pragma once

// Brick sets and subcategories of a universe, represented by sorted id sets.
// A subcategory stands for the additive, summand-closed hull of its members.

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qrep/errors.hpp"
#include "qrep/module.hpp"
#include "qrep/universe.hpp"

namespace qrep {

using IdSet = std::vector<std::size_t>;

inline IdSet normalize(IdSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool contains(const IdSet& set, std::size_t id) { return std::binary_search(set.begin(), set.end(), id); }

inline bool contains_all(const IdSet& set, const std::vector<std::size_t>& ids) {
  return std::all_of(ids.begin(), ids.end(), [&](std::size_t i) { return contains(set, i); });
}

inline bool contains_module(const IndecUniverse& u, const IdSet& set, const Module& m) {
  return contains_all(set, u.decompose(m));
}

inline bool is_brick_set(const IndecUniverse& u, const IdSet& s) {
  return std::all_of(s.begin(), s.end(), [&](std::size_t i) { return u.is_brick(i); });
}

inline bool is_semibrick(const IndecUniverse& u, const IdSet& s) {
  if (!is_brick_set(u, s)) return false;
  for (auto a : s)
    for (auto b : s)
      if (a != b && u.hom_dim(a, b) != 0) return false;
  return true;
}

inline bool is_monobrick(const IndecUniverse& u, const IdSet& s) {
  if (!is_brick_set(u, s)) return false;
  for (auto a : s)
    for (auto b : s)
      if (u.hom_profile(a, b).any_nonzero_noninjective) return false;
  return true;
}

inline IdSet all_bricks(const IndecUniverse& u) {
  IdSet b;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u.is_brick(i)) b.push_back(i);
  return b;
}

// Every brick N outside s that injects into a member must also admit a nonzero
// non-injection into some member. The ambient set is all bricks of the universe.
inline bool is_cofinally_closed(const IndecUniverse& u, const IdSet& s) {
  for (auto n : all_bricks(u)) {
    if (contains(s, n)) continue;
    bool injects = false, witness = false;
    for (auto m : s) {
      const auto& p = u.hom_profile(n, m);
      injects |= p.any_injective;
      witness |= p.any_nonzero_noninjective;
    }
    if (injects && !witness) return false;
  }
  return true;
}

// True when some extension of z by an object of add(pool) has a summand outside target.
inline bool any_extension_escapes(const IndecUniverse& u, std::size_t z, const IdSet& pool, const IdSet& target) {
  bool escaped = false;
  u.for_each_extension_source(z, pool, [&](const std::vector<std::size_t>& ids, const std::vector<std::size_t>& m) {
    if (escaped) return;
    if (!contains_all(target, u.ext_union(z, ids, m))) escaped = true;
  });
  return escaped;
}

inline bool is_extension_closed(const IndecUniverse& u, const IdSet& e) {
  for (auto z : e)
    if (any_extension_escapes(u, z, e, e)) return false;
  return true;
}

// Least summand-closed set containing c and closed under extensions 0 -> X -> E -> Z -> 0
// with Z in c and X in add of the set.
inline IdSet filt_closure(const IndecUniverse& u, const IdSet& c) {
  IdSet s = normalize(c);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto z : c) {
      IdSet add;
      u.for_each_extension_source(z, s, [&](const std::vector<std::size_t>& ids, const std::vector<std::size_t>& m) {
        for (auto id : u.ext_union(z, ids, m))
          if (!contains(s, id)) add.push_back(id);
      });
      if (!add.empty()) {
        add.insert(add.end(), s.begin(), s.end());
        s = normalize(add);
        changed = true;
      }
    }
  }
  return s;
}

// Members with no proper nonzero submodule L such that L and M/L both lie in e.
inline IdSet sim(const IndecUniverse& u, const IdSet& e) {
  IdSet out;
  for (auto m : e) {
    bool simple = true;
    for (const auto& info : u.submodule_info(m)) {
      if (info.sub_ids.empty() || info.quotient_ids.empty()) continue;
      if (contains_all(e, info.sub_ids) && contains_all(e, info.quotient_ids)) {
        simple = false;
        break;
      }
    }
    if (simple) out.push_back(m);
  }
  return out;
}

// Every map from m to a member is zero or injective. Checking indecomposable targets
// suffices: a map into a direct sum is injective as soon as one component is.
inline bool is_left_schurian(const IndecUniverse& u, std::size_t m, const IdSet& e) {
  for (auto c : e)
    if (u.hom_profile(m, c).any_nonzero_noninjective) return false;
  return true;
}

inline bool is_left_schur(const IndecUniverse& u, const IdSet& e) {
  if (!is_extension_closed(u, e)) return false;
  for (auto s : sim(u, e))
    if (!is_left_schurian(u, s, e)) return false;
  return true;
}

inline bool is_subobject_closed(const IndecUniverse& u, const IdSet& e) {
  for (auto m : e)
    for (const auto& info : u.submodule_info(m))
      if (!contains_all(e, info.sub_ids)) return false;
  return true;
}

inline bool is_torsion_free(const IndecUniverse& u, const IdSet& e) {
  return is_subobject_closed(u, e) && is_extension_closed(u, e);
}

namespace detail {

// Maps x -> sum of ys[j]^mult[j] whose components in Hom(x, ys[j]) are independent, or
// (dual) maps sum of xs[i]^mult[i] -> y. Dependent components split off a summand.
inline bool kernels_cokernels_closed(const IndecUniverse& u, const IdSet& e) {
  const Fp f = u.algebra()->field();
  const AlgebraPtr alg = u.algebra();
  auto check = [&](const Matrix& map, const Module& src, const Module& tgt) {
    Morphism m{src, tgt, map};
    return contains_module(u, e, kernel(m).module) && contains_module(u, e, cokernel(m).module);
  };
  for (auto x : e) {
    // x indecomposable source, arbitrary target in add(e)
    std::vector<std::size_t> ids, weight, cap;
    for (auto y : e) {
      const auto& hb = u.hom_basis(x, y);
      if (hb.empty()) continue;
      ids.push_back(y);
      weight.push_back(u.module(y).dim());
      cap.push_back(hb.size());
    }
    bool ok = true;
    for_each_multiplicity(weight, cap, u.bound(), [&](const std::vector<std::size_t>& mult) {
      if (!ok) return;
      std::vector<Module> parts;
      std::vector<std::pair<std::size_t, std::size_t>> slot;  // (type, row)
      for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t r = 0; r < mult[i]; ++r) {
          parts.push_back(u.module(ids[i]));
          slot.emplace_back(i, r);
        }
      const auto sum = direct_sum(alg, parts);
      std::vector<std::vector<Matrix>> choices(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (mult[i] > 0) choices[i] = all_subspaces(cap[i], mult[i], f);
      std::vector<std::size_t> pick(ids.size(), 0);
      while (ok) {
        Matrix map(sum.module.dim(), u.module(x).dim(), f);
        for (std::size_t p = 0; p < parts.size(); ++p) {
          auto [i, r] = slot[p];
          const Matrix& sub = choices[i][pick[i]];
          std::vector<Scalar> coeffs(sub.cols());
          for (std::size_t c = 0; c < sub.cols(); ++c) coeffs[c] = sub(r, c);
          const auto& hb = u.hom_basis(x, ids[i]);
          map = map + sum.inclusions[p] * combine(hb, coeffs, hb[0].rows(), hb[0].cols(), f);
        }
        ok = check(map, u.module(x), sum.module);
        std::size_t i = 0;
        for (; i < ids.size(); ++i) {
          if (mult[i] == 0) continue;
          if (++pick[i] < choices[i].size()) break;
          pick[i] = 0;
        }
        if (i == ids.size()) break;
      }
    });
    if (!ok) return false;
  }
  for (auto y : e) {
    // arbitrary source in add(e), y indecomposable target
    std::vector<std::size_t> ids, weight, cap;
    for (auto x : e) {
      const auto& hb = u.hom_basis(x, y);
      if (hb.empty()) continue;
      ids.push_back(x);
      weight.push_back(u.module(x).dim());
      cap.push_back(hb.size());
    }
    bool ok = true;
    for_each_multiplicity(weight, cap, u.bound(), [&](const std::vector<std::size_t>& mult) {
      if (!ok) return;
      std::vector<Module> parts;
      std::vector<std::pair<std::size_t, std::size_t>> slot;
      for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t r = 0; r < mult[i]; ++r) {
          parts.push_back(u.module(ids[i]));
          slot.emplace_back(i, r);
        }
      const auto sum = direct_sum(alg, parts);
      std::vector<std::vector<Matrix>> choices(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (mult[i] > 0) choices[i] = all_subspaces(cap[i], mult[i], f);
      std::vector<std::size_t> pick(ids.size(), 0);
      while (ok) {
        Matrix map(u.module(y).dim(), sum.module.dim(), f);
        for (std::size_t p = 0; p < parts.size(); ++p) {
          auto [i, r] = slot[p];
          const Matrix& sub = choices[i][pick[i]];
          std::vector<Scalar> coeffs(sub.cols());
          for (std::size_t c = 0; c < sub.cols(); ++c) coeffs[c] = sub(r, c);
          const auto& hb = u.hom_basis(ids[i], y);
          map = map + combine(hb, coeffs, hb[0].rows(), hb[0].cols(), f) * sum.projections[p];
        }
        ok = check(map, sum.module, u.module(y));
        std::size_t i = 0;
        for (; i < ids.size(); ++i) {
          if (mult[i] == 0) continue;
          if (++pick[i] < choices[i].size()) break;
          pick[i] = 0;
        }
        if (i == ids.size()) break;
      }
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

inline bool is_wide(const IndecUniverse& u, const IdSet& e) {
  return is_extension_closed(u, e) && detail::kernels_cokernels_closed(u, e);
}

struct SubcategoryFlags {
  bool extension_closed = false;
  bool left_schur = false;
  bool wide = false;
  bool torf = false;
};

inline SubcategoryFlags classify_subcategory(const IndecUniverse& u, const IdSet& e) {
  SubcategoryFlags fl;
  fl.extension_closed = is_extension_closed(u, e);
  if (!fl.extension_closed) return fl;
  fl.left_schur = true;
  for (auto s : sim(u, e)) fl.left_schur = fl.left_schur && is_left_schurian(u, s, e);
  fl.torf = is_subobject_closed(u, e);
  fl.wide = detail::kernels_cokernels_closed(u, e);
  return fl;
}

// 0 = chain[0] < chain[1] < ... < chain[n] = ambient, spans in ambient coordinates.
struct Filtration {
  Module ambient;
  std::vector<Matrix> chain;
  std::vector<std::size_t> classes;  // class of chain[i+1] / chain[i]
};

inline Module subquotient(const Module& m, const Matrix& lower, const Matrix& upper) {
  auto up = submodule(m, upper);
  auto low = solve(up.inclusion, lower);
  if (!low) throw InputError("filtration step is not an inclusion");
  return quotient(up.module, *low).module;
}

inline bool validate_filtration(const IndecUniverse& u, const Filtration& fl, std::string* why = nullptr) {
  auto fail = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  const Module& m = fl.ambient;
  if (fl.chain.empty()) return fail("empty chain");
  if (fl.chain.size() != fl.classes.size() + 1) return fail("class list length mismatch");
  if (fl.chain.front().cols() != 0 && rank(fl.chain.front()) != 0) return fail("chain does not start at 0");
  if (rank(fl.chain.back()) != m.dim()) return fail("chain does not end at the module");
  for (std::size_t i = 0; i < fl.chain.size(); ++i)
    if (!m.is_submodule_span(image_basis(fl.chain[i]))) return fail("step " + std::to_string(i) + " is not a submodule");
  for (std::size_t i = 0; i + 1 < fl.chain.size(); ++i) {
    const Matrix lo = image_basis(fl.chain[i]), hi = image_basis(fl.chain[i + 1]);
    if (!in_span(hi, lo) || hi.cols() <= lo.cols()) return fail("step " + std::to_string(i) + " is not strict");
    const Module q = subquotient(m, lo, hi);
    if (fl.classes[i] >= u.size()) return fail("unknown class id");
    if (!indecomposables_isomorphic(u.module(fl.classes[i]), q))
      return fail("subquotient " + std::to_string(i + 1) + " is not isomorphic to " + u.label(fl.classes[i]));
  }
  return true;
}

// Searches for a filtration of m with subquotients in c (submodule search, top factor first).
inline std::optional<Filtration> find_filtration(const IndecUniverse& u, const IdSet& c, const Module& m) {
  const Fp f = m.field();
  if (m.is_zero()) return Filtration{m, {Matrix(0, 0, f)}, {}};
  for (const auto& span : submodule_spans(m, u.limits())) {
    if (span.cols() == m.dim()) continue;
    const Module q = quotient(m, span).module;
    std::optional<std::size_t> cls;
    for (auto id : c)
      if (u.module(id).dim_vector() == q.dim_vector() && indecomposables_isomorphic(u.module(id), q)) {
        cls = id;
        break;
      }
    if (!cls) continue;
    const auto sub = submodule(m, span);
    auto rest = find_filtration(u, c, sub.module);
    if (!rest) continue;
    Filtration out{m, {}, rest->classes};
    for (const auto& step : rest->chain) out.chain.push_back(step.cols() == 0 ? Matrix(m.dim(), 0, f) : sub.inclusion * step);
    out.chain.push_back(Matrix::identity(m.dim(), f));
    out.classes.push_back(*cls);
    return out;
  }
  return std::nullopt;
}

// Members of filt_closure(c) with no c-filtration of their own. Nonempty exactly when the
// true Filt c is not closed under direct summands, so the id-set hull overshoots it.
inline IdSet summand_audit(const IndecUniverse& u, const IdSet& c, const IdSet& closure) {
  IdSet bad;
  for (auto id : closure) {
    if (contains(c, id)) continue;
    auto fl = find_filtration(u, c, u.module(id));
    if (!fl || !validate_filtration(u, *fl)) bad.push_back(id);
  }
  return bad;
}
inline IdSet summand_audit(const IndecUniverse& u, const IdSet& c) { return summand_audit(u, c, filt_closure(u, c)); }

// Y_j = pi^{-1}(Z_j) on top of the image of the sub's filtration.
inline Filtration merge_filtrations(const ShortExactSequence& s, const Filtration& fx, const Filtration& fz) {
  if (!(fx.ambient == s.left)) throw InputError("first filtration does not filter the sub of the sequence");
  if (!(fz.ambient == s.right)) throw InputError("second filtration does not filter the quotient of the sequence");
  const Fp f = s.middle.field();
  Filtration out{s.middle, {}, fx.classes};
  for (const auto& step : fx.chain)
    out.chain.push_back(step.cols() == 0 ? Matrix(s.middle.dim(), 0, f) : image_basis(s.iota * step));
  for (std::size_t j = 1; j < fz.chain.size(); ++j) {
    const Matrix& w = fz.chain[j];
    const Matrix k = kernel_basis(hstack(s.pi, w.cols() == 0 ? Matrix(s.right.dim(), 0, f) : w.scaled(f.neg(1))));
    out.chain.push_back(image_basis(k.rows_range(0, s.middle.dim())));
    out.classes.push_back(fz.classes[j - 1]);
  }
  return out;
}

struct BijectionReport {
  std::size_t monobricks = 0, semibricks = 0, cc_monobricks = 0;
  std::size_t left_schur = 0, wide = 0, torf = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline std::string format_ids(const IndecUniverse& u, const IdSet& s) {
  std::string r = "{";
  for (std::size_t i = 0; i < s.size(); ++i) r += (i ? ", " : "") + u.label(s[i]);
  return r + "}";
}

// Round trips between monobricks and left Schur subcategories, with the restricted bijections.
inline BijectionReport verify_bijection(const IndecUniverse& u, const std::vector<IdSet>& monobricks,
                                        const std::vector<IdSet>& left_schurs) {
  BijectionReport r;
  std::set<IdSet> images;
  for (const auto& m : monobricks) {
    ++r.monobricks;
    const bool semi = is_semibrick(u, m), cc = is_cofinally_closed(u, m);
    r.semibricks += semi;
    r.cc_monobricks += cc;
    const IdSet e = filt_closure(u, m);
    images.insert(e);
    if (sim(u, e) != m) r.failures.push_back("sim(Filt M) != M for M = " + format_ids(u, m));
    auto fl = classify_subcategory(u, e);
    if (!fl.left_schur) r.failures.push_back("Filt M not left Schur for M = " + format_ids(u, m));
    if (semi != fl.wide) r.failures.push_back("semibrick/wide mismatch for M = " + format_ids(u, m));
    if (cc != fl.torf) r.failures.push_back("cofinally closed/torf mismatch for M = " + format_ids(u, m));
  }
  for (const auto& e : left_schurs) {
    ++r.left_schur;
    auto fl = classify_subcategory(u, e);
    r.wide += fl.wide;
    r.torf += fl.torf;
    if (filt_closure(u, sim(u, e)) != e) r.failures.push_back("Filt(sim E) != E for E = " + format_ids(u, e));
    if (!images.count(e)) r.failures.push_back("left Schur subcategory not hit: " + format_ids(u, e));
  }
  if (images.size() != monobricks.size()) r.failures.push_back("Filt is not injective on monobricks");
  if (r.wide != r.semibricks) r.failures.push_back("#wide != #semibricks");
  if (r.torf != r.cc_monobricks) r.failures.push_back("#torf != #cofinally closed monobricks");
  if (r.left_schur != r.monobricks) r.failures.push_back("#left Schur != #monobricks");
  return r;
}

}  // namespace qrep
