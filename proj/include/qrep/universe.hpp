#pragma once

// The finite list of indecomposable modules up to a dimension bound, with
// cached Hom data, Ext groups and extension middle terms.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qrep/algebra.hpp"
#include "qrep/errors.hpp"
#include "qrep/module.hpp"

namespace qrep {

enum class Strategy { AnalyticTypeA, BruteForce, Extension };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::AnalyticTypeA: return "analytic-typeA";
    case Strategy::BruteForce: return "brute-force";
    case Strategy::Extension: return "extension";
  }
  return "?";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "analytic-typeA") return Strategy::AnalyticTypeA;
  if (s == "brute-force") return Strategy::BruteForce;
  if (s == "extension") return Strategy::Extension;
  throw InputError("unknown universe strategy '" + s + "'");
}

struct UniverseOptions {
  std::size_t bound = 4;
  Strategy strategy = Strategy::Extension;
  Limits limits{};
  std::uint64_t state_budget = 1u << 22;  // brute-force block tuples per dimension vector
};

struct HomProfile {
  std::size_t dim = 0;
  bool any_injective = false;
  bool any_surjective = false;
  bool any_nonzero_noninjective = false;
};

// All m-dimensional subspaces of F_p^k, each as an m x k matrix in reduced row echelon form.
inline std::vector<Matrix> all_subspaces(std::size_t k, std::size_t m, Fp f) {
  std::vector<Matrix> out;
  if (m > k) return out;
  std::vector<std::size_t> piv(m);
  std::iota(piv.begin(), piv.end(), 0);
  while (true) {
    // free entries: row r, columns c > piv[r] that are not pivots
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = piv[r] + 1; c < k; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(r, c);
    VectorOdometer odo(free.size(), f);
    do {
      Matrix x(m, k, f);
      for (std::size_t r = 0; r < m; ++r) x(r, piv[r]) = 1;
      for (std::size_t i = 0; i < free.size(); ++i) x(free[i].first, free[i].second) = odo.value()[i];
      out.push_back(std::move(x));
    } while (odo.next());
    // next pivot combination
    std::size_t i = m;
    while (i > 0 && piv[i - 1] == k - m + i - 1) --i;
    if (i == 0) break;
    ++piv[i - 1];
    for (std::size_t j = i; j < m; ++j) piv[j] = piv[j - 1] + 1;
  }
  return out;
}

// Enumerates multiplicity vectors m with m[i] <= cap[i] and sum m[i]*weight[i] <= budget, skipping all-zero.
inline void for_each_multiplicity(const std::vector<std::size_t>& weight, const std::vector<std::size_t>& cap,
                                  std::size_t budget, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> m(weight.size(), 0);
  std::function<void(std::size_t, std::size_t, bool)> rec = [&](std::size_t i, std::size_t left, bool any) {
    if (i == weight.size()) {
      if (any) fn(m);
      return;
    }
    for (std::size_t k = 0; k <= cap[i] && k * weight[i] <= left; ++k) {
      m[i] = k;
      rec(i + 1, left - k * weight[i], any || k > 0);
    }
    m[i] = 0;
  };
  rec(0, budget, false);
}

// For X = sum of xs[i]^mult[i], calls emit on the middle term of every class of Ext^1(z, X)
// whose components in each Ext^1(z, xs[i])^mult[i] are linearly independent, one class per
// choice of subspaces. Classes with dependent components split off a summand of X and are
// covered by smaller X.
inline void for_each_extension_class(const Module& z, const ProjectiveCover& cover, const std::vector<Module>& xs,
                                     const std::vector<const Ext1*>& exts, const std::vector<std::size_t>& mult,
                                     const std::function<void(const ShortExactSequence&)>& emit) {
  AlgebraPtr alg = z.algebra();
  const Fp f = z.field();
  std::vector<Module> parts;
  std::vector<std::size_t> type_of;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < mult[i]; ++k) {
      parts.push_back(xs[i]);
      type_of.push_back(i);
    }
  const auto sum = direct_sum(alg, parts);
  std::vector<std::vector<Matrix>> choices(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (mult[i] > 0) choices[i] = all_subspaces(exts[i]->dim(), mult[i], f);
  std::vector<std::size_t> pick(xs.size(), 0);
  const std::size_t w = cover.syzygy.dim();
  while (true) {
    Matrix zeta(sum.module.dim(), w, f);
    std::vector<std::size_t> row_of_type(xs.size(), 0);
    for (std::size_t part = 0; part < parts.size(); ++part) {
      const std::size_t i = type_of[part];
      const Matrix& sub = choices[i][pick[i]];
      const std::size_t r = row_of_type[i]++;
      std::vector<Scalar> coeffs(sub.cols());
      for (std::size_t c = 0; c < sub.cols(); ++c) coeffs[c] = sub(r, c);
      zeta = zeta + sum.inclusions[part] * exts[i]->cocycle(coeffs);
    }
    auto s = pushout_middle_term(z, sum.module, cover, zeta);
    emit(s);
    std::size_t i = 0;
    for (; i < xs.size(); ++i) {
      if (mult[i] == 0) continue;
      if (++pick[i] < choices[i].size()) break;
      pick[i] = 0;
    }
    if (i == xs.size()) break;
  }
}

class IndecUniverse {
 public:
  struct Entry {
    Module module;
    std::string label;
    std::size_t end_dim = 0;
    bool brick = false;
  };

  static std::shared_ptr<IndecUniverse> build(AlgebraPtr alg, const UniverseOptions& opt) {
    std::vector<Module> found;
    switch (opt.strategy) {
      case Strategy::AnalyticTypeA: found = analytic_type_a(alg, opt.bound); break;
      case Strategy::BruteForce: found = brute_force(alg, opt); break;
      case Strategy::Extension: found = by_extensions(alg, opt); break;
    }
    return from_modules(alg, opt.bound, to_string(opt.strategy), std::move(found), opt.limits, true);
  }

  // Takes ownership of a list of pairwise non-isomorphic indecomposables (e.g. from a cache file).
  static std::shared_ptr<IndecUniverse> from_modules(AlgebraPtr alg, std::size_t bound, std::string strategy,
                                                     std::vector<Module> mods, const Limits& lim, bool sort) {
    auto u = std::shared_ptr<IndecUniverse>(new IndecUniverse());
    u->alg_ = alg;
    u->bound_ = bound;
    u->strategy_ = std::move(strategy);
    u->limits_ = lim;
    for (auto& m : mods) {
      auto an = analyze_endomorphisms(m, lim);
      if (an.kind == EndKind::Zero || an.kind == EndKind::Decomposable)
        throw InputError("universe member is not indecomposable");
      u->entries_.push_back({m, loewy_label(m), an.end_dim, an.kind == EndKind::Brick});
    }
    if (sort) {
      std::stable_sort(u->entries_.begin(), u->entries_.end(), [](const Entry& a, const Entry& b) {
        if (a.module.dim() != b.module.dim()) return a.module.dim() < b.module.dim();
        if (a.module.dim_vector() != b.module.dim_vector()) return a.module.dim_vector() < b.module.dim_vector();
        return a.end_dim < b.end_dim;
      });
    }
    std::map<std::string, int> count;
    for (auto& e : u->entries_) ++count[e.label];
    std::map<std::string, int> seen;
    for (auto& e : u->entries_)
      if (count[e.label] > 1) e.label += "#" + std::to_string(++seen[e.label]);
    const std::size_t n = u->entries_.size();
    u->hom_.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u->hom_[i][j] = qrep::hom_dim(u->entries_[i].module, u->entries_[j].module);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (u->entries_[i].module.dim_vector() == u->entries_[j].module.dim_vector() &&
            indecomposables_isomorphic(u->entries_[i].module, u->entries_[j].module))
          throw InputError("universe members " + u->entries_[i].label + " and " + u->entries_[j].label +
                           " are isomorphic");
    return u;
  }

  const AlgebraPtr& algebra() const { return alg_; }
  std::size_t bound() const { return bound_; }
  const std::string& strategy() const { return strategy_; }
  const Limits& limits() const { return limits_; }
  std::size_t size() const { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_[i]; }
  const Module& module(std::size_t i) const { return entries_[i].module; }
  const std::string& label(std::size_t i) const { return entries_[i].label; }
  bool is_brick(std::size_t i) const { return entries_[i].brick; }
  std::size_t hom_dim(std::size_t i, std::size_t j) const { return hom_[i][j]; }
  std::size_t max_member_dim() const {
    std::size_t m = 0;
    for (const auto& e : entries_) m = std::max(m, e.module.dim());
    return m;
  }

  std::vector<std::size_t> all_ids() const {
    std::vector<std::size_t> v(size());
    std::iota(v.begin(), v.end(), 0);
    return v;
  }
  std::vector<std::size_t> simple_ids() const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < size(); ++i)
      if (module(i).dim() == 1) v.push_back(i);
    return v;
  }
  std::optional<std::size_t> find_label(const std::string& l) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (label(i) == l) return i;
    return std::nullopt;
  }

  // Id of an indecomposable module, or nullopt when it is not in the universe.
  std::optional<std::size_t> find(const Module& m) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (module(i).dim_vector() == m.dim_vector() && indecomposables_isomorphic(module(i), m)) return i;
    return std::nullopt;
  }

  std::size_t id_of(const Module& m) const {
    auto i = find(m);
    if (!i) throw UniverseExhausted("universe exhausted: indecomposable with dimension vector " + dimvec(m) +
                                    " is not among the " + std::to_string(size()) + " members (bound " +
                                    std::to_string(bound_) + ")");
    return *i;
  }

  // Krull-Schmidt multiset of ids, sorted.
  std::vector<std::size_t> decompose(const Module& m) const {
    std::vector<std::size_t> out;
    for (const auto& s : split_indecomposables(m, limits_)) out.push_back(id_of(s.module));
    std::sort(out.begin(), out.end());
    return out;
  }

  const HomProfile& hom_profile(std::size_t i, std::size_t j) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = profiles_.find({i, j});
      if (it != profiles_.end()) return it->second;
    }
    HomProfile p;
    const Module& a = module(i);
    const Module& b = module(j);
    const auto basis = qrep::hom_basis(a, b);
    p.dim = basis.size();
    if (p.dim > 0) {
      const bool can_inj = a.dim() <= b.dim();
      const bool can_surj = a.dim() >= b.dim();
      if (!can_inj) p.any_nonzero_noninjective = true;
      if (can_inj || can_surj) {
        for (const auto& c : cheap_candidates(basis, a.field())) note(p, c, a, b);
        if (!(p.any_nonzero_noninjective && (p.any_injective || !can_inj) && (p.any_surjective || !can_surj)))
          scan_span(basis, b.dim(), a.dim(), a.field(), limits_, "Hom scan " + label(i) + " -> " + label(j),
                    [&](const Matrix& h) {
                      note(p, h, a, b);
                      return p.any_nonzero_noninjective && (p.any_injective || !can_inj) &&
                             (p.any_surjective || !can_surj);
                    });
      }
    }
    std::lock_guard<std::mutex> lock(mu_);
    return profiles_.emplace(std::make_pair(i, j), p).first->second;
  }

  const std::vector<Matrix>& hom_basis(std::size_t i, std::size_t j) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = homs_.find({i, j});
    if (it != homs_.end()) return it->second;
    return homs_.emplace(std::make_pair(i, j), qrep::hom_basis(module(i), module(j))).first->second;
  }

  const ProjectiveCover& cover(std::size_t z) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = covers_.find(z);
    if (it != covers_.end()) return *it->second;
    return *covers_.emplace(z, std::make_unique<ProjectiveCover>(projective_cover(module(z)))).first->second;
  }

  const Ext1& ext(std::size_t z, std::size_t x) const {
    const ProjectiveCover& c = cover(z);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = exts_.find({z, x});
      if (it != exts_.end()) return *it->second;
    }
    auto e = std::make_unique<Ext1>(module(z), module(x), c);
    std::lock_guard<std::mutex> lock(mu_);
    return *exts_.emplace(std::make_pair(z, x), std::move(e)).first->second;
  }

  // Ids of all indecomposable summands of middle terms of extensions of z by
  // X = sum of ids[i]^mult[i] (see for_each_extension_class). Memoized.
  const std::vector<std::size_t>& ext_union(std::size_t z, const std::vector<std::size_t>& ids,
                                            const std::vector<std::size_t>& mult) const {
    std::vector<std::size_t> key{z};
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (mult[i] > 0) {
        key.push_back(ids[i]);
        key.push_back(mult[i]);
      }
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = unions_.find(key);
      if (it != unions_.end()) return it->second;
    }
    std::vector<Module> xs;
    std::vector<const Ext1*> exts;
    std::vector<std::size_t> ms;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (mult[i] > 0) {
        xs.push_back(module(ids[i]));
        exts.push_back(&ext(z, ids[i]));
        ms.push_back(mult[i]);
      }
    std::set<std::size_t> out;
    for_each_extension_class(module(z), cover(z), xs, exts, ms, [&](const ShortExactSequence& s) {
      for (auto id : decompose(s.middle)) out.insert(id);
    });
    std::lock_guard<std::mutex> lock(mu_);
    return unions_.emplace(key, std::vector<std::size_t>(out.begin(), out.end())).first->second;
  }

  // Calls fn(ids, mult) for every multiset X over `pool` with nonzero extensions by z
  // that fits in the bound together with z.
  void for_each_extension_source(std::size_t z, const std::vector<std::size_t>& pool,
                                 const std::function<void(const std::vector<std::size_t>&,
                                                          const std::vector<std::size_t>&)>& fn) const {
    std::vector<std::size_t> ids, weight, cap;
    for (auto x : pool) {
      const std::size_t d = ext(z, x).dim();
      if (d == 0) continue;
      ids.push_back(x);
      weight.push_back(module(x).dim());
      cap.push_back(d);
    }
    if (ids.empty() || module(z).dim() >= bound_) return;
    for_each_multiplicity(weight, cap, bound_ - module(z).dim(),
                          [&](const std::vector<std::size_t>& m) { fn(ids, m); });
  }

  // Submodules of member i, with the decompositions of L and M/L.
  struct SubmoduleInfo {
    Matrix span;
    std::vector<std::size_t> sub_ids;
    std::vector<std::size_t> quotient_ids;
  };
  const std::vector<SubmoduleInfo>& submodule_info(std::size_t i) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = submods_.find(i);
      if (it != submods_.end()) return it->second;
    }
    std::vector<SubmoduleInfo> out;
    for (const auto& span : submodule_spans(module(i), limits_)) {
      SubmoduleInfo info{span, {}, {}};
      info.sub_ids = decompose(submodule(module(i), span).module);
      info.quotient_ids = decompose(quotient(module(i), span).module);
      out.push_back(std::move(info));
    }
    std::lock_guard<std::mutex> lock(mu_);
    return submods_.emplace(i, std::move(out)).first->second;
  }

  static std::string dimvec(const Module& m) {
    std::string s = "(";
    for (std::size_t v = 0; v < m.dim_vector().size(); ++v) s += (v ? "," : "") + std::to_string(m.dim_vector()[v]);
    return s + ")";
  }

  // Strategy implementations are public so tests can compare them directly.
  static std::vector<Module> simples(AlgebraPtr alg) {
    std::vector<Module> out;
    for (std::size_t v = 0; v < alg->num_vertices(); ++v) {
      std::vector<std::size_t> d(alg->num_vertices(), 0);
      d[v] = 1;
      out.push_back(Module::from_blocks(alg, d, Module::zero_blocks(*alg, d)));
    }
    return out;
  }

  // Vertex order along the line if the generators form a type A graph, else nullopt.
  static std::optional<std::vector<std::size_t>> type_a_line(const Algebra& alg) {
    const std::size_t n = alg.num_vertices();
    if (alg.generators().size() + 1 != n) return std::nullopt;
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto g : alg.generators()) {
      auto [s, t] = alg.endpoints(g);
      if (s == t) return std::nullopt;
      adj[s].push_back(t);
      adj[t].push_back(s);
    }
    std::size_t start = 0;
    if (n > 1) {
      start = n;
      for (std::size_t v = 0; v < n; ++v) {
        if (adj[v].size() > 2) return std::nullopt;
        if (adj[v].size() == 1 && start == n) start = v;
      }
      if (start == n) return std::nullopt;
    }
    std::vector<std::size_t> order{start};
    std::vector<bool> seen(n, false);
    seen[start] = true;
    while (order.size() < n) {
      bool moved = false;
      for (auto w : adj[order.back()])
        if (!seen[w]) {
          seen[w] = true;
          order.push_back(w);
          moved = true;
          break;
        }
      if (!moved) return std::nullopt;
    }
    return order;
  }

  static std::vector<Module> analytic_type_a(AlgebraPtr alg, std::size_t bound) {
    auto line = type_a_line(*alg);
    if (!line) throw InputError("analytic-typeA strategy requires a quiver of type A (a line)");
    const auto& order = *line;
    const std::size_t n = order.size();
    // relation-free: dim A = number of directed paths (intervals traversed along arrows)
    std::size_t paths = n;
    std::vector<int> dir(n > 0 ? n - 1 : 0, 0);  // +1 if arrow order[k] -> order[k+1]
    for (auto g : alg->generators()) {
      auto [s, t] = alg->endpoints(g);
      for (std::size_t k = 0; k + 1 < n; ++k) {
        if (order[k] == s && order[k + 1] == t) dir[k] = 1;
        if (order[k] == t && order[k + 1] == s) dir[k] = -1;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        bool fwd = true, bwd = true;
        for (std::size_t k = i; k < j; ++k) {
          fwd &= dir[k] == 1;
          bwd &= dir[k] == -1;
        }
        if (fwd || bwd) ++paths;
      }
    if (paths != alg->dim()) throw InputError("analytic-typeA strategy requires a relation-free type A quiver");
    std::vector<Module> out;
    for (std::size_t len = 1; len <= std::min(bound, n); ++len)
      for (std::size_t i = 0; i + len <= n; ++i) {
        std::vector<std::size_t> d(alg->num_vertices(), 0);
        for (std::size_t k = i; k < i + len; ++k) d[order[k]] = 1;
        std::vector<Matrix> blocks;
        for (auto g : alg->generators()) {
          auto [s, t] = alg->endpoints(g);
          Matrix b(d[t], d[s], alg->field());
          if (d[s] == 1 && d[t] == 1) b(0, 0) = 1;
          blocks.push_back(b);
        }
        out.push_back(Module::from_blocks(alg, d, blocks));
      }
    return out;
  }

  static std::vector<Module> brute_force(AlgebraPtr alg, const UniverseOptions& opt) {
    const Algebra& a = *alg;
    const Fp f = a.field();
    const std::size_t nv = a.num_vertices();
    std::vector<Module> out;
    std::vector<std::size_t> d(nv, 0);
    std::vector<std::vector<std::size_t>> vectors;
    std::function<void(std::size_t, std::size_t)> gen = [&](std::size_t v, std::size_t left) {
      if (v == nv) {
        if (left < opt.bound)
          vectors.push_back(d);
        return;
      }
      for (std::size_t k = 0; k <= left; ++k) {
        d[v] = k;
        gen(v + 1, left - k);
      }
      d[v] = 0;
    };
    gen(0, opt.bound);
    std::sort(vectors.begin(), vectors.end(), [](const auto& x, const auto& y) {
      auto sx = std::accumulate(x.begin(), x.end(), std::size_t{0});
      auto sy = std::accumulate(y.begin(), y.end(), std::size_t{0});
      if (sx != sy) return sx < sy;
      return x < y;
    });
    for (const auto& dv : vectors) {
      if (!connected_support(a, dv)) continue;
      std::size_t entries = 0;
      for (auto g : a.generators()) {
        auto [s, t] = a.endpoints(g);
        entries += dv[s] * dv[t];
      }
      if (bounded_power(f.p(), entries, opt.state_budget) > opt.state_budget)
        throw BudgetExceeded("brute-force universe: " + std::to_string(entries) +
                             " free entries for one dimension vector exceed the state budget; use the "
                             "analytic-typeA or extension strategy, or a lower bound");
      VectorOdometer odo(entries, f);
      const std::size_t first_new = out.size();
      do {
        std::vector<Matrix> blocks;
        std::size_t k = 0;
        for (auto g : a.generators()) {
          auto [s, t] = a.endpoints(g);
          Matrix b(dv[t], dv[s], f);
          for (std::size_t r = 0; r < dv[t]; ++r)
            for (std::size_t c = 0; c < dv[s]; ++c) b(r, c) = odo.value()[k++];
          blocks.push_back(std::move(b));
        }
        Module m;
        try {
          m = Module::from_blocks(alg, dv, blocks);
        } catch (const InputError&) {
          continue;
        }
        if (!is_indecomposable(m, opt.limits)) continue;
        bool dup = false;
        for (std::size_t i = first_new; i < out.size() && !dup; ++i) dup = indecomposables_isomorphic(out[i], m);
        if (!dup) out.push_back(m);
      } while (odo.next());
    }
    return out;
  }

  // Every indecomposable E of dim <= bound is an extension of its simple top quotient Z by a
  // module of smaller dimension, so closing the simples under such extensions is complete.
  static std::vector<Module> by_extensions(AlgebraPtr alg, const UniverseOptions& opt) {
    std::vector<Module> members;
    if (opt.bound == 0) return members;
    const auto simple = simples(alg);
    for (const auto& s : simple) members.push_back(s);
    std::vector<ProjectiveCover> covers;
    for (const auto& s : simple) covers.push_back(projective_cover(s));
    std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Ext1>> exts;
    auto ext = [&](std::size_t z, std::size_t x) -> const Ext1& {
      auto& e = exts[{z, x}];
      if (!e) e = std::make_unique<Ext1>(simple[z], members[x], covers[z]);
      return *e;
    };
    auto find = [&](const Module& m) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].dim_vector() == m.dim_vector() && indecomposables_isomorphic(members[i], m)) return i;
      return std::nullopt;
    };
    std::set<std::vector<std::size_t>> done;
    bool changed = true;
    while (changed) {
      changed = false;
      const std::size_t snapshot = members.size();
      for (std::size_t z = 0; z < simple.size(); ++z) {
        std::vector<std::size_t> ids, weight, cap;
        for (std::size_t x = 0; x < snapshot; ++x) {
          const std::size_t d = ext(z, x).dim();
          if (d == 0) continue;
          ids.push_back(x);
          weight.push_back(members[x].dim());
          cap.push_back(d);
        }
        for_each_multiplicity(weight, cap, opt.bound - 1, [&](const std::vector<std::size_t>& mult) {
          std::vector<std::size_t> key{z};
          std::vector<Module> xs;
          std::vector<const Ext1*> ex;
          std::vector<std::size_t> ms;
          for (std::size_t i = 0; i < ids.size(); ++i)
            if (mult[i] > 0) {
              key.push_back(ids[i]);
              key.push_back(mult[i]);
              xs.push_back(members[ids[i]]);
              ex.push_back(&ext(z, ids[i]));
              ms.push_back(mult[i]);
            }
          if (!done.insert(key).second) return;
          for_each_extension_class(simple[z], covers[z], xs, ex, ms, [&](const ShortExactSequence& s) {
            for (const auto& part : split_indecomposables(s.middle, opt.limits))
              if (!find(part.module)) {
                members.push_back(part.module);
                changed = true;
              }
          });
        });
      }
    }
    return members;
  }

 private:
  IndecUniverse() = default;

  static bool connected_support(const Algebra& a, const std::vector<std::size_t>& dv) {
    std::vector<std::size_t> sup;
    for (std::size_t v = 0; v < dv.size(); ++v)
      if (dv[v] > 0) sup.push_back(v);
    if (sup.empty()) return false;
    std::set<std::size_t> seen{sup[0]};
    std::vector<std::size_t> stack{sup[0]};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto g : a.generators()) {
        auto [s, t] = a.endpoints(g);
        for (auto [x, y] : {std::pair{s, t}, std::pair{t, s}})
          if (x == v && dv[y] > 0 && seen.insert(y).second) stack.push_back(y);
      }
    }
    return seen.size() == sup.size();
  }

  static void note(HomProfile& p, const Matrix& h, const Module& a, const Module& b) {
    if (h.is_zero()) return;
    const std::size_t r = rank(h);
    if (r == a.dim()) p.any_injective = true;
    else p.any_nonzero_noninjective = true;
    if (r == b.dim()) p.any_surjective = true;
  }

  AlgebraPtr alg_;
  std::size_t bound_ = 0;
  std::string strategy_;
  Limits limits_;
  std::vector<Entry> entries_;
  std::vector<std::vector<std::size_t>> hom_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::size_t, std::size_t>, HomProfile> profiles_;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::vector<Matrix>> homs_;
  mutable std::map<std::size_t, std::unique_ptr<ProjectiveCover>> covers_;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Ext1>> exts_;
  mutable std::map<std::vector<std::size_t>, std::vector<std::size_t>> unions_;
  mutable std::map<std::size_t, std::vector<SubmoduleInfo>> submods_;
};

using UniversePtr = std::shared_ptr<const IndecUniverse>;

inline UniversePtr build_universe(AlgebraPtr alg, std::size_t bound, Strategy strategy, const Limits& lim = {}) {
  UniverseOptions o;
  o.bound = bound;
  o.strategy = strategy;
  o.limits = lim;
  return IndecUniverse::build(alg, o);
}

}  // namespace qrep
