#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qrep/algebra.hpp"
#include "qrep/errors.hpp"
#include "qrep/module.hpp"
#include "qrep/recollement.hpp"
#include "qrep/subcat.hpp"
#include "qrep/universe.hpp"

namespace qrep {

struct EnumerationOptions {
  std::size_t max_bricks = 20;
  std::size_t oracle_cap = 1u << 12;  // subset candidates for the brute-force route
};

struct BrickSetRecord {
  IdSet ids;
  bool semibrick = false;
  bool cofinally_closed = false;
};

struct MonobrickEnumeration {
  std::vector<BrickSetRecord> sets;
  std::size_t semibricks = 0;
  std::size_t cofinally_closed = 0;
  double millis = 0;
};

struct SubcatRecord {
  IdSet ids;
  IdSet simples;
  SubcategoryFlags flags;
};

struct SubcatEnumeration {
  std::vector<SubcatRecord> subcats;  // every left Schur subcategory, flagged
  std::size_t left_schur = 0, wide = 0, torf = 0;
  bool oracle_run = false;
  bool representation_exact = true;  // false when some Filt is not summand-closed
  std::vector<std::string> divergences;
  double millis = 0;

  std::vector<IdSet> select(bool SubcategoryFlags::*flag) const {
    std::vector<IdSet> out;
    for (const auto& s : subcats)
      if (s.flags.*flag) out.push_back(s.ids);
    return out;
  }
};

namespace detail {

inline double millis_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline bool by_size_then_lex(const IdSet& a, const IdSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace detail

inline MonobrickEnumeration all_monobricks(const IndecUniverse& u, const EnumerationOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const IdSet bricks = all_bricks(u);
  if (bricks.size() > opt.max_bricks)
    throw BudgetExceeded("monobrick enumeration: " + std::to_string(bricks.size()) + " bricks exceed the limit of " +
                         std::to_string(opt.max_bricks));
  const std::size_t n = bricks.size();
  std::vector<std::vector<char>> compat(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      compat[i][j] = !u.hom_profile(bricks[i], bricks[j]).any_nonzero_noninjective &&
                     !u.hom_profile(bricks[j], bricks[i]).any_nonzero_noninjective;
  std::vector<IdSet> found;
  IdSet cur;
  std::function<void(std::size_t)> dfs = [&](std::size_t start) {
    found.push_back(cur);
    for (std::size_t k = start; k < n; ++k) {
      if (!compat[k][k]) continue;
      bool ok = true;
      for (auto c : cur) ok = ok && compat[k][static_cast<std::size_t>(std::find(bricks.begin(), bricks.end(), c) - bricks.begin())];
      if (!ok) continue;
      cur.push_back(bricks[k]);
      dfs(k + 1);
      cur.pop_back();
    }
  };
  dfs(0);
  std::sort(found.begin(), found.end(), detail::by_size_then_lex);
  MonobrickEnumeration r;
  for (auto& s : found) {
    BrickSetRecord rec{s, is_semibrick(u, s), is_cofinally_closed(u, s)};
    r.semibricks += rec.semibrick;
    r.cofinally_closed += rec.cofinally_closed;
    r.sets.push_back(std::move(rec));
  }
  r.millis = detail::millis_since(t0);
  return r;
}

// Left Schur subcategories as Filt of monobricks, cross-checked against a subset filter when small.
// When the summand audit finds a monobrick whose Filt is not summand-closed, the id-set hull is no
// longer Filt itself; the divergence is recorded and the subset filter becomes authoritative.
inline SubcatEnumeration all_left_schur(const IndecUniverse& u, const MonobrickEnumeration& mb,
                                        const EnumerationOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  SubcatEnumeration r;
  std::vector<std::string> problems;
  std::map<IdSet, const BrickSetRecord*> seen;
  for (const auto& m : mb.sets) {
    IdSet e = filt_closure(u, m.ids);
    const IdSet bad = summand_audit(u, m.ids, e);
    if (!bad.empty()) {
      r.representation_exact = false;
      r.divergences.push_back("Filt " + format_ids(u, m.ids) + " is not summand-closed: " + format_ids(u, bad) +
                              " occur only as summands");
    }
    if (seen.count(e))
      problems.push_back("Filt identifies two monobricks: " + format_ids(u, seen[e]->ids) + " and " + format_ids(u, m.ids));
    seen[e] = &m;
    SubcatRecord rec{e, m.ids, classify_subcategory(u, e)};
    if (!rec.flags.left_schur) problems.push_back("Filt of monobrick " + format_ids(u, m.ids) + " is not left Schur");
    if (rec.flags.wide != m.semibrick) problems.push_back("wide/semibrick mismatch at " + format_ids(u, m.ids));
    if (rec.flags.torf != m.cofinally_closed) problems.push_back("torf/cofinally closed mismatch at " + format_ids(u, m.ids));
    r.subcats.push_back(std::move(rec));
  }
  const std::size_t n = u.size();
  if (n < 63 && (std::uint64_t{1} << n) <= opt.oracle_cap) {
    r.oracle_run = true;
    std::vector<SubcatRecord> oracle;
    std::set<IdSet> ls, wide, torf;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      IdSet s;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) s.push_back(i);
      const auto fl = classify_subcategory(u, s);
      if (fl.left_schur) {
        ls.insert(s);
        oracle.push_back({s, sim(u, s), fl});
      }
      if (is_wide(u, s)) wide.insert(s);
      if (is_torsion_free(u, s)) torf.insert(s);
    }
    auto compare = [&](const std::set<IdSet>& found, bool SubcategoryFlags::*flag, const char* what) {
      std::set<IdSet> route;
      for (const auto& s : r.subcats)
        if (s.flags.*flag) route.insert(s.ids);
      for (const auto& s : found)
        if (!route.count(s)) problems.push_back(std::string(what) + " subcategory missed by the bijection route: " + format_ids(u, s));
      for (const auto& s : route)
        if (!found.count(s)) problems.push_back(std::string(what) + " subcategory rejected by the subset oracle: " + format_ids(u, s));
    };
    compare(ls, &SubcategoryFlags::left_schur, "left Schur");
    compare(wide, &SubcategoryFlags::wide, "wide");
    compare(torf, &SubcategoryFlags::torf, "torsion-free");
    if (!r.representation_exact) r.subcats = std::move(oracle);
  }
  if (!problems.empty()) {
    if (r.representation_exact) throw VerificationError(problems.front());
    r.divergences.insert(r.divergences.end(), problems.begin(), problems.end());
  }
  std::sort(r.subcats.begin(), r.subcats.end(),
            [](const SubcatRecord& a, const SubcatRecord& b) { return detail::by_size_then_lex(a.ids, b.ids); });
  for (const auto& s : r.subcats) {
    ++r.left_schur;
    r.wide += s.flags.wide;
    r.torf += s.flags.torf;
  }
  r.millis = detail::millis_since(t0);
  return r;
}

inline SubcatEnumeration all_left_schur(const IndecUniverse& u, const EnumerationOptions& opt = {}) {
  return all_left_schur(u, all_monobricks(u, opt), opt);
}

// ---- gluing table for k(1 -> 2 -> 3) ---------------------------------------

inline AlgebraPtr path_algebra_a(std::size_t n, Fp f, std::size_t first = 1) {
  Quiver q;
  for (std::size_t i = 0; i < n; ++i) q.vertices.push_back(std::to_string(first + i));
  const char* names = "abcdefghijklmnopqrstuvwxyz";
  for (std::size_t i = 0; i + 1 < n; ++i)
    q.arrows.push_back({std::string(1, names[(first + i - 1) % 26]), q.vertices[i], q.vertices[i + 1]});
  return algebra_from_quiver(q, {}, f);
}

struct TriangularExample {
  AlgebraPtr b, c;
  Bimodule m;
  TriangularAlgebra tri;
};

// B = k(2 -> 3), C = k, M = e1 A (e2 + e3) which as a right B-module is the projective at 2.
inline TriangularExample table1_triangular(Fp f) {
  TriangularExample ex;
  ex.b = path_algebra_a(2, f, 2);
  ex.c = path_algebra_a(1, f, 1);
  const Matrix r2 = Matrix::from_rows(f, {{1, 0}, {0, 0}});
  const Matrix r3 = Matrix::from_rows(f, {{0, 0}, {0, 1}});
  const Matrix rb = Matrix::from_rows(f, {{0, 0}, {1, 0}});
  ex.m = make_bimodule(*ex.b, *ex.c, 2, {{"e1", Matrix::identity(2, f)}}, {{"e2", r2}, {"e3", r3}, {"b", rb}});
  ex.tri = triangular_matrix_algebra(*ex.b, *ex.c, ex.m);
  return ex;
}

struct Table1Row {
  IdSet my, mz;  // monobricks in mod B and mod C
  IdSet mx;      // glued monobrick in mod A
  IdSet ex;      // Filt of the glued monobrick
  SubcategoryFlags flags;
  bool b_semibrick = false, b_cofinally_closed = false;
};

struct Table1Report {
  Fp field{2};
  std::shared_ptr<Recollement> rec;
  bool isomorphic_to_path_algebra = false;
  bool exact = false;
  std::size_t mbrick_b = 0, mbrick_c = 0;
  std::vector<Table1Row> rows;
  std::size_t distinct = 0, not_torf = 0, not_wide = 0;
  std::vector<std::string> failures;
  double millis = 0;
  bool ok() const { return failures.empty(); }
};

inline Table1Report reproduce_table1(Fp f, const Limits& lim = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  Table1Report rep;
  rep.field = f;
  auto ex = table1_triangular(f);
  auto direct = path_algebra_a(3, f, 1);
  rep.isomorphic_to_path_algebra = find_algebra_isomorphism(*ex.tri.algebra, *direct).has_value();
  if (!rep.isomorphic_to_path_algebra) rep.failures.push_back("triangular algebra is not isomorphic to k(1 -> 2 -> 3)");
  RecollementOptions ro;
  ro.bound_x = 3;
  ro.bound_y = 2;
  ro.bound_z = 1;
  ro.limits = lim;
  rep.rec = build_recollement(ex.tri.algebra, ex.tri.c_side, ro);
  const Recollement& r = *rep.rec;
  rep.exact = r.is_i_shriek_exact();
  if (!rep.exact) rep.failures.push_back("i^! is not exact for the triangular idempotent");
  if (!find_algebra_isomorphism(*r.b(), *ex.b)) rep.failures.push_back("A/AeA is not isomorphic to B");
  if (!find_algebra_isomorphism(*r.c(), *ex.c)) rep.failures.push_back("eAe is not isomorphic to C");
  const auto mb = all_monobricks(r.uy());
  const auto mc = all_monobricks(r.uz());
  rep.mbrick_b = mb.sets.size();
  rep.mbrick_c = mc.sets.size();
  if (rep.mbrick_b != 6) rep.failures.push_back("expected 6 monobricks in mod B, found " + std::to_string(rep.mbrick_b));
  if (rep.mbrick_c != 2) rep.failures.push_back("expected 2 monobricks in mod C, found " + std::to_string(rep.mbrick_c));
  std::set<IdSet> distinct;
  for (const auto& my : mb.sets)
    for (const auto& mz : mc.sets) {
      Table1Row row;
      row.my = my.ids;
      row.mz = mz.ids;
      row.b_semibrick = my.semibrick;
      row.b_cofinally_closed = my.cofinally_closed;
      row.mx = r.glue_monobrick(my.ids, mz.ids);
      row.ex = filt_closure(r.ux(), row.mx);
      row.flags = classify_subcategory(r.ux(), row.ex);
      const std::string where = "row (" + format_ids(r.uy(), row.my) + ", " + format_ids(r.uz(), row.mz) + ")";
      if (!row.flags.left_schur) rep.failures.push_back(where + ": not left Schur");
      const IdSet comp = r.glue_left_schur(filt_closure(r.uy(), my.ids), filt_closure(r.uz(), mz.ids));
      if (comp != row.ex) rep.failures.push_back(where + ": Filt of the glued monobrick differs from the glued subcategory");
      distinct.insert(row.ex);
      rep.not_torf += !row.flags.torf;
      rep.not_wide += !row.flags.wide;
      if (row.flags.torf != row.b_cofinally_closed) rep.failures.push_back(where + ": torf flag does not follow the B side");
      if (row.flags.wide != row.b_semibrick) rep.failures.push_back(where + ": wide flag does not follow the B side");
      rep.rows.push_back(std::move(row));
    }
  rep.distinct = distinct.size();
  if (rep.rows.size() != 12 || rep.distinct != 12)
    rep.failures.push_back("expected 12 distinct rows, found " + std::to_string(rep.distinct) + " of " +
                           std::to_string(rep.rows.size()));
  if (rep.not_torf != 2) rep.failures.push_back("expected 2 rows that are not torsion-free, found " + std::to_string(rep.not_torf));
  if (rep.not_wide != 2) rep.failures.push_back("expected 2 rows that are not wide, found " + std::to_string(rep.not_wide));
  rep.millis = detail::millis_since(t0);
  return rep;
}

// ---- theorem sweeps ---------------------------------------------------------

enum class TheoremId { left_schur, wide, torf, cc_monobrick };

inline std::string to_string(TheoremId t) {
  switch (t) {
    case TheoremId::left_schur: return "3.2";
    case TheoremId::wide: return "3.3";
    case TheoremId::torf: return "3.4";
    case TheoremId::cc_monobrick: return "3.5";
  }
  return "?";
}

inline TheoremId parse_theorem(const std::string& s) {
  if (s == "3.2") return TheoremId::left_schur;
  if (s == "3.3") return TheoremId::wide;
  if (s == "3.4") return TheoremId::torf;
  if (s == "3.5") return TheoremId::cc_monobrick;
  throw InputError("unknown theorem '" + s + "' (expected 3.2, 3.3, 3.4 or 3.5)");
}

struct TheoremOptions {
  EnumerationOptions enumeration{};
  std::size_t equivalence_cap = 12;  // max |Y| + |Z| for the all-subsets equivalence sweep
  bool run_without_hypothesis = false;
};

struct TheoremReport {
  TheoremId which = TheoremId::left_schur;
  bool hypothesis = true;
  bool skipped = false;
  std::size_t forward = 0;        // glued pairs checked
  std::size_t backward = 0;       // subcategories of X of comprehension form checked
  std::size_t equivalence = 0;    // subset pairs checked against the equivalence
  std::size_t qualifying_pairs = 0;
  std::vector<std::string> failures;
  double millis = 0;
  bool ok() const { return failures.empty(); }
};

inline TheoremReport verify_theorem(const Recollement& r, TheoremId which, const TheoremOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  TheoremReport rep;
  rep.which = which;
  rep.hypothesis = which == TheoremId::torf || r.is_i_shriek_exact();
  if (!rep.hypothesis && !opt.run_without_hypothesis) {
    rep.skipped = true;
    rep.millis = detail::millis_since(t0);
    return rep;
  }
  const auto& ux = r.ux();
  const auto& uy = r.uy();
  const auto& uz = r.uz();
  auto fail = [&](const std::string& s) { rep.failures.push_back(s); };
  auto pair_name = [&](const IdSet& y, const IdSet& z) { return "(" + format_ids(uy, y) + ", " + format_ids(uz, z) + ")"; };

  if (which == TheoremId::cc_monobrick) {
    const auto my = all_monobricks(uy, opt.enumeration), mz = all_monobricks(uz, opt.enumeration);
    for (const auto& a : my.sets)
      for (const auto& b : mz.sets) {
        if (!a.cofinally_closed || !b.cofinally_closed) continue;
        ++rep.forward;
        ++rep.qualifying_pairs;
        try {
          const IdSet mx = r.glue_monobrick(a.ids, b.ids, Recollement::MonobrickVariant::cc, true);
          if (!is_monobrick(ux, mx) || !is_cofinally_closed(ux, mx))
            fail("glued set " + format_ids(ux, mx) + " from " + pair_name(a.ids, b.ids) + " is not a cofinally closed monobrick");
          const IdSet fx = filt_closure(ux, mx);
          if (fx != r.glue_torf(filt_closure(uy, a.ids), filt_closure(uz, b.ids)))
            fail("Filt of glued set differs from the glued torsion-free class at " + pair_name(a.ids, b.ids));
        } catch (const VerificationError& e) {
          fail(pair_name(a.ids, b.ids) + ": " + e.what());
        }
      }
    rep.millis = detail::millis_since(t0);
    return rep;
  }

  auto predicate = [which](const IndecUniverse& u, const IdSet& s) {
    switch (which) {
      case TheoremId::left_schur: return is_left_schur(u, s);
      case TheoremId::wide: return is_wide(u, s);
      default: return is_torsion_free(u, s);
    }
  };
  bool SubcategoryFlags::*flag = which == TheoremId::left_schur ? &SubcategoryFlags::left_schur
                                 : which == TheoremId::wide     ? &SubcategoryFlags::wide
                                                                : &SubcategoryFlags::torf;
  const auto ey = all_left_schur(uy, opt.enumeration);
  const auto ez = all_left_schur(uz, opt.enumeration);
  const auto ex = all_left_schur(ux, opt.enumeration);
  std::vector<SubcatRecord> ys, zs;
  for (const auto& s : ey.subcats)
    if (s.flags.*flag) ys.push_back(s);
  for (const auto& s : ez.subcats)
    if (s.flags.*flag) zs.push_back(s);

  // (1) => (2), plus the round trip and the monobrick-level coherence
  for (const auto& y : ys)
    for (const auto& z : zs) {
      ++rep.forward;
      ++rep.qualifying_pairs;
      const IdSet g = r.glue_comprehension(y.ids, z.ids);
      if (!predicate(ux, g)) fail("glued " + format_ids(ux, g) + " from " + pair_name(y.ids, z.ids) + " fails the target property");
      if (r.restrict(g) != std::make_pair(y.ids, z.ids)) fail("restriction of the glued subcategory differs at " + pair_name(y.ids, z.ids));
      if (which != TheoremId::torf && ex.representation_exact && ey.representation_exact && ez.representation_exact) {
        try {
          const IdSet mx = r.glue_monobrick(y.simples, z.simples, Recollement::MonobrickVariant::general, true);
          if (filt_closure(ux, mx) != g) fail("Filt of the glued monobrick differs from the glued subcategory at " + pair_name(y.ids, z.ids));
          if (which == TheoremId::wide && !is_semibrick(ux, mx)) fail("glued simples are not a semibrick at " + pair_name(y.ids, z.ids));
        } catch (const VerificationError& e) {
          fail(pair_name(y.ids, z.ids) + ": " + e.what());
        }
      }
    }

  // (2) => (1) over subcategories of X of comprehension form
  for (const auto& x : ex.subcats) {
    if (!(x.flags.*flag)) continue;
    const auto [y, z] = r.restrict(x.ids);
    if (r.glue_comprehension(y, z) != x.ids) continue;
    ++rep.backward;
    if (!predicate(uy, y) || !predicate(uz, z))
      fail("subcategory " + format_ids(ux, x.ids) + " restricts to " + pair_name(y, z) + " which fails the edge property");
  }

  // full equivalence over all pairs of subsets
  const std::size_t ny = uy.size(), nz = uz.size();
  if (ny + nz <= opt.equivalence_cap) {
    std::vector<char> py(std::size_t{1} << ny), pz(std::size_t{1} << nz);
    auto subset = [](std::uint64_t mask, std::size_t n) {
      IdSet s;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) s.push_back(i);
      return s;
    };
    for (std::uint64_t a = 0; a < py.size(); ++a) py[a] = predicate(uy, subset(a, ny));
    for (std::uint64_t b = 0; b < pz.size(); ++b) pz[b] = predicate(uz, subset(b, nz));
    std::map<IdSet, bool> cache;
    for (std::uint64_t a = 0; a < py.size(); ++a)
      for (std::uint64_t b = 0; b < pz.size(); ++b) {
        ++rep.equivalence;
        const IdSet y = subset(a, ny), z = subset(b, nz);
        const IdSet g = r.glue_comprehension(y, z);
        auto it = cache.find(g);
        if (it == cache.end()) it = cache.emplace(g, predicate(ux, g)).first;
        if (it->second != (py[a] && pz[b]))
          fail("equivalence fails at " + pair_name(y, z) + ": glued " + format_ids(ux, g) + " is " +
               (it->second ? "" : "not ") + "of the target kind");
      }
  }
  rep.millis = detail::millis_since(t0);
  return rep;
}

// ---- random triangular algebras -------------------------------------------

enum class SmallAlgebra { field, field_pair, a2 };

inline std::string to_string(SmallAlgebra k) {
  switch (k) {
    case SmallAlgebra::field: return "k";
    case SmallAlgebra::field_pair: return "k x k";
    case SmallAlgebra::a2: return "kA2";
  }
  return "?";
}

inline AlgebraPtr small_algebra(SmallAlgebra k, Fp f, const std::string& prefix) {
  Quiver q;
  q.vertices.push_back(prefix + "1");
  if (k != SmallAlgebra::field) q.vertices.push_back(prefix + "2");
  if (k == SmallAlgebra::a2) q.arrows.push_back({prefix + "x", prefix + "1", prefix + "2"});
  return algebra_from_quiver(q, {}, f);
}

struct FuzzInstance {
  std::uint64_t seed = 0;
  SmallAlgebra b_kind = SmallAlgebra::field, c_kind = SmallAlgebra::field;
  std::size_t m_dim = 0;
  AlgebraPtr b, c;
  Bimodule m;
  TriangularAlgebra tri;
  std::string describe() const {
    return "seed " + std::to_string(seed) + ": B = " + to_string(b_kind) + ", C = " + to_string(c_kind) +
           ", dim M = " + std::to_string(m_dim);
  }
};

// Random C-B-bimodule of dimension <= 2: every basis vector sits in some e_c M e_b, and the
// arrow actions are random blocks between those pieces. Samples failing the axioms are redrawn.
inline FuzzInstance random_triangular(std::uint64_t seed, Fp f) {
  std::mt19937_64 rng(seed);
  const SmallAlgebra kinds[] = {SmallAlgebra::field, SmallAlgebra::field_pair, SmallAlgebra::a2};
  for (int attempt = 0; attempt < 1000; ++attempt) {
    FuzzInstance ins;
    ins.seed = seed;
    ins.b_kind = kinds[rng() % 3];
    ins.c_kind = kinds[rng() % 3];
    ins.m_dim = rng() % 3;
    ins.b = small_algebra(ins.b_kind, f, "b");
    ins.c = small_algebra(ins.c_kind, f, "c");
    const std::size_t d = ins.m_dim;
    const std::size_t nb = ins.b->num_vertices(), nc = ins.c->num_vertices();
    std::vector<std::size_t> bv(d), cv(d);
    for (std::size_t i = 0; i < d; ++i) {
      bv[i] = rng() % nb;
      cv[i] = rng() % nc;
    }
    std::map<std::string, Matrix> left, right;
    for (std::size_t v = 0; v < nc; ++v) {
      Matrix e(d, d, f);
      for (std::size_t i = 0; i < d; ++i) e(i, i) = cv[i] == v;
      left[idempotent_label(ins.c->vertex_names()[v])] = e;
    }
    for (std::size_t v = 0; v < nb; ++v) {
      Matrix e(d, d, f);
      for (std::size_t i = 0; i < d; ++i) e(i, i) = bv[i] == v;
      right[idempotent_label(ins.b->vertex_names()[v])] = e;
    }
    if (ins.b_kind == SmallAlgebra::a2) {
      // m in e_c M e_b1  ->  m.x in e_c M e_b2
      Matrix x(d, d, f);
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
          if (bv[j] == 0 && bv[i] == 1 && cv[i] == cv[j]) x(i, j) = static_cast<Scalar>(rng() % f.p());
      right["bx"] = x;
    }
    if (ins.c_kind == SmallAlgebra::a2) {
      // m in e_c2 M e_b  ->  x.m in e_c1 M e_b
      Matrix x(d, d, f);
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
          if (cv[j] == 1 && cv[i] == 0 && bv[i] == bv[j]) x(i, j) = static_cast<Scalar>(rng() % f.p());
      left["cx"] = x;
    }
    try {
      ins.m = make_bimodule(*ins.b, *ins.c, d, left, right);
      ins.tri = triangular_matrix_algebra(*ins.b, *ins.c, ins.m);
      return ins;
    } catch (const InputError&) {
      continue;
    }
  }
  throw BudgetExceeded("no valid bimodule drawn for seed " + std::to_string(seed));
}

}  // namespace qrep
