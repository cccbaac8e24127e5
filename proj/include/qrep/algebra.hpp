#pragma once

// Finite-dimensional basic algebras stored as structure constants.
//
// Every basis element b has a unique pair of vertices (s, t) with
// e_s * b * e_t = b ("path-like" basis). Products are written left to right,
// so an arrow s -> t followed by an arrow t -> u multiplies as a*b.
// Modules are right modules, i.e. ordinary quiver representations.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qrep/errors.hpp"
#include "qrep/exactla.hpp"

namespace qrep {

struct Arrow {
  std::string name;
  std::string source;
  std::string target;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  std::size_t vertex_index(const std::string& v) const {
    auto it = std::find(vertices.begin(), vertices.end(), v);
    if (it == vertices.end()) throw InputError("unknown vertex '" + v + "'");
    return static_cast<std::size_t>(it - vertices.begin());
  }
  std::size_t arrow_index(const std::string& a) const {
    for (std::size_t i = 0; i < arrows.size(); ++i)
      if (arrows[i].name == a) return i;
    throw InputError("unknown arrow '" + a + "'");
  }
  void validate() const {
    std::set<std::string> seen(vertices.begin(), vertices.end());
    if (seen.size() != vertices.size()) throw InputError("duplicate vertex identifier");
    std::set<std::string> names;
    for (const auto& a : arrows) {
      if (!names.insert(a.name).second) throw InputError("duplicate arrow name '" + a.name + "'");
      vertex_index(a.source);
      vertex_index(a.target);
    }
  }
};

struct PathTerm {
  std::int64_t coeff = 1;
  std::vector<std::string> path;
};
using Relation = std::vector<PathTerm>;

// b = sum coeff * (g_1 g_2 ... g_m) over generator words.
struct WordTerm {
  Scalar coeff;
  std::vector<std::size_t> word;  // indices into Algebra::generators()
};

class Algebra {
 public:
  using Vec = std::vector<Scalar>;

  // products[i * dim + j] holds the coordinates of b_i * b_j.
  static std::shared_ptr<const Algebra> create(Fp field, std::vector<std::string> labels,
                                               std::vector<std::string> vertex_names,
                                               std::vector<std::size_t> idempotents,
                                               std::vector<Vec> products) {
    auto a = std::shared_ptr<Algebra>(new Algebra());
    a->field_ = field;
    a->labels_ = std::move(labels);
    a->vertex_names_ = std::move(vertex_names);
    a->idempotents_ = std::move(idempotents);
    a->products_ = std::move(products);
    a->finalize();
    return a;
  }

  const Fp& field() const { return field_; }
  std::size_t dim() const { return labels_.size(); }
  std::size_t num_vertices() const { return vertex_names_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  const std::vector<std::size_t>& idempotents() const { return idempotents_; }
  std::size_t idempotent(std::size_t v) const { return idempotents_[v]; }
  std::pair<std::size_t, std::size_t> endpoints(std::size_t b) const { return endpoints_[b]; }
  bool is_idempotent_basis(std::size_t b) const { return idempotent_vertex_[b] >= 0; }
  const std::vector<std::size_t>& generators() const { return generators_; }
  const std::vector<WordTerm>& expression(std::size_t b) const { return expressions_[b]; }
  const Vec& product(std::size_t i, std::size_t j) const { return products_[i * dim() + j]; }

  std::size_t vertex_index(const std::string& name) const {
    for (std::size_t v = 0; v < vertex_names_.size(); ++v)
      if (vertex_names_[v] == name) return v;
    throw InputError("algebra has no vertex '" + name + "'");
  }
  std::size_t basis_index(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    throw InputError("algebra has no basis element '" + label + "'");
  }

  Vec unit_vector(std::size_t i) const {
    Vec v(dim(), 0);
    v[i] = 1;
    return v;
  }

  Vec multiply(const Vec& x, const Vec& y) const {
    Vec r(dim(), 0);
    for (std::size_t i = 0; i < dim(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (y[j] == 0) continue;
        const Scalar s = field_.mul(x[i], y[j]);
        const Vec& c = product(i, j);
        for (std::size_t k = 0; k < dim(); ++k)
          if (c[k] != 0) r[k] = field_.add(r[k], field_.mul(s, c[k]));
      }
    }
    return r;
  }

  // Column j = coordinates of b_j * a.
  Matrix right_multiplication(const Vec& a) const {
    Matrix m(dim(), dim(), field_);
    for (std::size_t j = 0; j < dim(); ++j) {
      auto v = multiply(unit_vector(j), a);
      for (std::size_t k = 0; k < dim(); ++k) m(k, j) = v[k];
    }
    return m;
  }
  // Column j = coordinates of a * b_j.
  Matrix left_multiplication(const Vec& a) const {
    Matrix m(dim(), dim(), field_);
    for (std::size_t j = 0; j < dim(); ++j) {
      auto v = multiply(a, unit_vector(j));
      for (std::size_t k = 0; k < dim(); ++k) m(k, j) = v[k];
    }
    return m;
  }

  // Basis elements starting (resp. ending) in a vertex set: bases of eA and Ae.
  std::vector<std::size_t> basis_starting_in(const std::vector<std::size_t>& vertices) const {
    std::vector<std::size_t> r;
    for (std::size_t b = 0; b < dim(); ++b)
      if (std::find(vertices.begin(), vertices.end(), endpoints_[b].first) != vertices.end()) r.push_back(b);
    return r;
  }
  std::vector<std::size_t> basis_ending_in(const std::vector<std::size_t>& vertices) const {
    std::vector<std::size_t> r;
    for (std::size_t b = 0; b < dim(); ++b)
      if (std::find(vertices.begin(), vertices.end(), endpoints_[b].second) != vertices.end()) r.push_back(b);
    return r;
  }

  std::size_t dim_between(std::size_t s, std::size_t t) const {
    std::size_t n = 0;
    for (const auto& e : endpoints_)
      if (e.first == s && e.second == t) ++n;
    return n;
  }

  // FNV-1a over a canonical serialization of the structure constants.
  std::string hash() const {
    std::ostringstream os;
    os << "p=" << field_.p() << ";labels=";
    for (const auto& l : labels_) os << l << ',';
    os << ";vertices=";
    for (const auto& v : vertex_names_) os << v << ',';
    os << ";idem=";
    for (auto i : idempotents_) os << i << ',';
    os << ";c=";
    for (const auto& v : products_)
      for (auto x : v) os << x << ',';
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : os.str()) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
  }

 private:
  Algebra() = default;

  void finalize() {
    const std::size_t d = dim();
    if (products_.size() != d * d) throw InputError("structure constant table has wrong size");
    for (auto& v : products_) {
      if (v.size() != d) throw InputError("structure constant vector has wrong size");
      for (auto& x : v) x %= field_.p();
    }
    if (idempotents_.size() != vertex_names_.size())
      throw InputError("need exactly one idempotent per vertex");
    idempotent_vertex_.assign(d, -1);
    for (std::size_t v = 0; v < idempotents_.size(); ++v) {
      if (idempotents_[v] >= d) throw InputError("idempotent index out of range");
      idempotent_vertex_[idempotents_[v]] = static_cast<int>(v);
    }
    check_idempotents();
    check_associativity();
    compute_endpoints();
    compute_generators();
  }

  void check_idempotents() const {
    const std::size_t d = dim();
    for (std::size_t u = 0; u < num_vertices(); ++u)
      for (std::size_t v = 0; v < num_vertices(); ++v) {
        Vec expect = (u == v) ? unit_vector(idempotents_[u]) : Vec(d, 0);
        if (product(idempotents_[u], idempotents_[v]) != expect)
          throw InputError("vertex idempotents are not orthogonal idempotents");
      }
    Vec one(d, 0);
    for (auto i : idempotents_) one[i] = 1;
    for (std::size_t b = 0; b < d; ++b) {
      auto e = unit_vector(b);
      if (multiply(one, e) != e || multiply(e, one) != e)
        throw InputError("vertex idempotents do not sum to the identity");
    }
  }

  void check_associativity() const {
    const std::size_t d = dim();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const Vec& ij = product(i, j);
        for (std::size_t k = 0; k < d; ++k) {
          Vec lhs = multiply(ij, unit_vector(k));
          Vec rhs = multiply(unit_vector(i), product(j, k));
          if (lhs != rhs)
            throw InputError("multiplication is not associative on (" + labels_[i] + ", " + labels_[j] + ", " +
                             labels_[k] + ")");
        }
      }
  }

  void compute_endpoints() {
    const std::size_t d = dim();
    endpoints_.assign(d, {0, 0});
    for (std::size_t b = 0; b < d; ++b) {
      int found = 0;
      auto e = unit_vector(b);
      for (std::size_t s = 0; s < num_vertices(); ++s)
        for (std::size_t t = 0; t < num_vertices(); ++t) {
          if (multiply(multiply(unit_vector(idempotents_[s]), e), unit_vector(idempotents_[t])) == e) {
            endpoints_[b] = {s, t};
            ++found;
          }
        }
      if (found != 1) throw InputError("basis element '" + labels_[b] + "' is not of the form e_s b e_t");
    }
  }

  // rad = span of the non-idempotent basis elements; generators complete rad^2 to rad.
  void compute_generators() {
    const std::size_t d = dim();
    std::vector<std::size_t> rad;
    for (std::size_t b = 0; b < d; ++b)
      if (!is_idempotent_basis(b)) rad.push_back(b);
    for (auto b : rad)
      if (endpoints_[b].first == endpoints_[b].second) {
        // a non-idempotent basis element in e_v A e_v must be nilpotent
        Vec x = unit_vector(b);
        Vec pw = x;
        for (std::size_t k = 0; k < d + 1; ++k) pw = multiply(pw, x);
        if (std::any_of(pw.begin(), pw.end(), [](Scalar s) { return s != 0; }))
          throw InputError("algebra is not basic: '" + labels_[b] + "' is not nilpotent");
      }
    for (auto i : rad)
      for (auto j : rad) {
        const Vec& c = product(i, j);
        for (std::size_t k = 0; k < d; ++k)
          if (c[k] != 0 && is_idempotent_basis(k))
            throw InputError("span of non-idempotent basis elements is not an ideal");
      }
    Matrix rad2(d, 0, field_);
    {
      std::vector<Vec> cols;
      for (auto i : rad)
        for (auto j : rad) cols.push_back(product(i, j));
      Matrix m(d, cols.size(), field_);
      for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t k = 0; k < d; ++k) m(k, c) = cols[c][k];
      rad2 = image_basis(m);
    }
    Matrix span = rad2;
    generators_.clear();
    for (auto b : rad) {
      Matrix col = Matrix::column(field_, unit_vector(b));
      if (!in_span(span, col)) {
        generators_.push_back(b);
        span = hstack(span, col);
      }
    }
    compute_expressions(rad);
  }

  void compute_expressions(const std::vector<std::size_t>& rad) {
    const std::size_t d = dim();
    struct Word {
      std::vector<std::size_t> gens;
      Vec vec;
    };
    std::vector<Word> kept;
    Matrix span(d, 0, field_);
    std::vector<Word> level;
    for (std::size_t g = 0; g < generators_.size(); ++g) level.push_back({{g}, unit_vector(generators_[g])});
    while (!level.empty()) {
      std::vector<Word> added;
      for (auto& w : level) {
        Matrix col = Matrix::column(field_, w.vec);
        if (in_span(span, col)) continue;
        span = hstack(span, col);
        added.push_back(w);
        kept.push_back(w);
      }
      level.clear();
      for (const auto& w : added)
        for (std::size_t g = 0; g < generators_.size(); ++g) {
          Vec v = multiply(w.vec, unit_vector(generators_[g]));
          if (std::all_of(v.begin(), v.end(), [](Scalar s) { return s == 0; })) continue;
          auto gens = w.gens;
          gens.push_back(g);
          level.push_back({std::move(gens), std::move(v)});
        }
      if (kept.size() > d) break;
    }
    expressions_.assign(d, {});
    for (auto b : rad) {
      auto x = solve(span, Matrix::column(field_, unit_vector(b)));
      if (!x) throw InputError("generators do not generate the radical (not a basic algebra?)");
      for (std::size_t u = 0; u < kept.size(); ++u)
        if ((*x)(u, 0) != 0) expressions_[b].push_back({(*x)(u, 0), kept[u].gens});
    }
  }

  Fp field_{};
  std::vector<std::string> labels_;
  std::vector<std::string> vertex_names_;
  std::vector<std::size_t> idempotents_;
  std::vector<Vec> products_;
  std::vector<int> idempotent_vertex_;
  std::vector<std::pair<std::size_t, std::size_t>> endpoints_;
  std::vector<std::size_t> generators_;
  std::vector<std::vector<WordTerm>> expressions_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

struct AlgebraOptions {
  std::size_t max_path_length = 32;
  std::size_t max_paths = 200000;
};

namespace detail {

struct Path {
  std::size_t start;
  std::size_t end;
  std::vector<std::size_t> arrows;
  auto key() const { return std::tie(start, arrows); }
  friend bool operator<(const Path& a, const Path& b) {
    if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
    return a.key() < b.key();
  }
  friend bool operator==(const Path& a, const Path& b) { return a.start == b.start && a.arrows == b.arrows; }
};

inline std::string shortest_cycle(const Quiver& q) {
  const std::size_t n = q.vertices.size();
  std::string best;
  std::size_t best_len = SIZE_MAX;
  for (std::size_t s = 0; s < n; ++s) {
    // BFS over arrows from s back to s
    std::vector<std::vector<std::size_t>> path_to(n);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> frontier{s};
    std::vector<std::vector<std::size_t>> frontier_paths{{}};
    for (std::size_t len = 1; len <= n && !frontier.empty(); ++len) {
      std::vector<std::size_t> nf;
      std::vector<std::vector<std::size_t>> np;
      for (std::size_t k = 0; k < frontier.size(); ++k)
        for (std::size_t a = 0; a < q.arrows.size(); ++a) {
          if (q.vertex_index(q.arrows[a].source) != frontier[k]) continue;
          auto t = q.vertex_index(q.arrows[a].target);
          auto p = frontier_paths[k];
          p.push_back(a);
          if (t == s && len < best_len) {
            best_len = len;
            best.clear();
            for (auto x : p) best += (best.empty() ? "" : "*") + q.arrows[x].name;
          }
          if (!seen[t]) {
            seen[t] = true;
            nf.push_back(t);
            np.push_back(std::move(p));
          }
        }
      frontier = std::move(nf);
      frontier_paths = std::move(np);
    }
  }
  return best.empty() ? "(none)" : best;
}

}  // namespace detail

inline std::string idempotent_label(const std::string& vertex) { return "e" + vertex; }

// Path algebra kQ/I. Relations must be linear combinations of parallel paths of length >= 2.
inline AlgebraPtr algebra_from_quiver(const Quiver& q, const std::vector<Relation>& relations, Fp field,
                                      const AlgebraOptions& opt = {}) {
  using detail::Path;
  q.validate();
  const std::size_t nv = q.vertices.size();
  if (nv == 0) throw InputError("quiver has no vertices");
  std::vector<std::size_t> src(q.arrows.size()), tgt(q.arrows.size());
  for (std::size_t a = 0; a < q.arrows.size(); ++a) {
    src[a] = q.vertex_index(q.arrows[a].source);
    tgt[a] = q.vertex_index(q.arrows[a].target);
  }
  struct RelTerm {
    Scalar coeff;
    Path path;
  };
  std::vector<std::vector<RelTerm>> rels;
  for (const auto& r : relations) {
    std::vector<RelTerm> terms;
    std::optional<std::pair<std::size_t, std::size_t>> ends;
    for (const auto& t : r) {
      if (t.path.size() < 2) throw InputError("relation terms must be paths of length >= 2 (admissible relations)");
      Path p{0, 0, {}};
      for (std::size_t k = 0; k < t.path.size(); ++k) {
        auto a = q.arrow_index(t.path[k]);
        if (k > 0 && tgt[p.arrows.back()] != src[a])
          throw InputError("relation path is not composable at arrow '" + t.path[k] + "'");
        p.arrows.push_back(a);
      }
      p.start = src[p.arrows.front()];
      p.end = tgt[p.arrows.back()];
      if (ends && *ends != std::make_pair(p.start, p.end))
        throw InputError("relation terms are not parallel paths");
      ends = std::make_pair(p.start, p.end);
      Scalar c = field.reduce(t.coeff);
      if (c != 0) terms.push_back({c, p});
    }
    if (!terms.empty()) rels.push_back(std::move(terms));
  }

  // paths[L] = all paths of length exactly L
  std::vector<std::vector<Path>> by_length;
  {
    std::vector<Path> trivial;
    for (std::size_t v = 0; v < nv; ++v) trivial.push_back({v, v, {}});
    by_length.push_back(trivial);
  }
  auto extend = [&](const std::vector<Path>& ps) {
    std::vector<Path> out;
    for (const auto& p : ps)
      for (std::size_t a = 0; a < q.arrows.size(); ++a)
        if (src[a] == p.end) {
          Path np = p;
          np.arrows.push_back(a);
          np.end = tgt[a];
          out.push_back(std::move(np));
        }
    std::sort(out.begin(), out.end());
    return out;
  };

  // Find L such that every path of length L lies in the ideal modulo longer paths.
  std::size_t total_paths = nv;
  std::optional<std::size_t> cutoff;
  for (std::size_t L = 1; L <= opt.max_path_length + 1; ++L) {
    by_length.push_back(extend(by_length.back()));
    total_paths += by_length.back().size();
    if (total_paths > opt.max_paths) throw BudgetExceeded("path enumeration exceeded budget");
    if (by_length.back().empty()) {
      cutoff = L;
      break;
    }
    if (rels.empty()) continue;
    // index of paths of length <= L
    std::map<Path, std::size_t> index;
    std::vector<Path> all;
    for (std::size_t l = 0; l <= L; ++l)
      for (const auto& p : by_length[l]) {
        index[p] = all.size();
        all.push_back(p);
      }
    std::vector<std::vector<Scalar>> gens;
    for (const auto& r : rels) {
      std::size_t minlen = SIZE_MAX;
      for (const auto& t : r) minlen = std::min(minlen, t.path.arrows.size());
      for (std::size_t lu = 0; lu + minlen <= L; ++lu)
        for (const auto& u : by_length[lu])
          for (std::size_t lv = 0; lu + lv + minlen <= L; ++lv)
            for (const auto& v : by_length[lv]) {
              if (u.end != r.front().path.start || r.front().path.end != v.start) continue;
              std::vector<Scalar> vec(all.size(), 0);
              bool any = false;
              for (const auto& t : r) {
                if (lu + lv + t.path.arrows.size() > L) continue;
                Path c = u;
                c.arrows.insert(c.arrows.end(), t.path.arrows.begin(), t.path.arrows.end());
                c.arrows.insert(c.arrows.end(), v.arrows.begin(), v.arrows.end());
                c.end = v.end;
                vec[index.at(c)] = field.add(vec[index.at(c)], t.coeff);
                any = true;
              }
              if (any) gens.push_back(std::move(vec));
            }
    }
    Matrix ideal(all.size(), gens.size(), field);
    for (std::size_t c = 0; c < gens.size(); ++c)
      for (std::size_t k = 0; k < all.size(); ++k) ideal(k, c) = gens[c][k];
    ideal = image_basis(ideal);
    bool killed = true;
    for (const auto& p : by_length[L]) {
      std::vector<Scalar> e(all.size(), 0);
      e[index.at(p)] = 1;
      if (!in_span(ideal, Matrix::column(field, e))) {
        killed = false;
        break;
      }
    }
    if (killed) {
      cutoff = L;
      break;
    }
  }
  if (!cutoff)
    throw InputError("quotient is not finite-dimensional within path length " + std::to_string(opt.max_path_length) +
                     "; unbounded cycle: " + detail::shortest_cycle(q));

  const std::size_t L = *cutoff;
  std::map<Path, std::size_t> index;
  std::vector<Path> all;
  for (std::size_t l = 0; l < L; ++l)
    for (const auto& p : by_length[l]) {
      index[p] = all.size();
      all.push_back(p);
    }
  // Truncated ideal inside paths of length < L.
  std::vector<std::vector<Scalar>> gens;
  for (const auto& r : rels) {
    std::size_t minlen = SIZE_MAX;
    for (const auto& t : r) minlen = std::min(minlen, t.path.arrows.size());
    for (std::size_t lu = 0; lu + minlen < L; ++lu)
      for (const auto& u : by_length[lu])
        for (std::size_t lv = 0; lu + lv + minlen < L; ++lv)
          for (const auto& v : by_length[lv]) {
            if (u.end != r.front().path.start || r.front().path.end != v.start) continue;
            std::vector<Scalar> vec(all.size(), 0);
            bool any = false;
            for (const auto& t : r) {
              if (lu + lv + t.path.arrows.size() >= L) continue;
              Path c = u;
              c.arrows.insert(c.arrows.end(), t.path.arrows.begin(), t.path.arrows.end());
              c.arrows.insert(c.arrows.end(), v.arrows.begin(), v.arrows.end());
              c.end = v.end;
              vec[index.at(c)] = field.add(vec[index.at(c)], t.coeff);
              any = true;
            }
            if (any) gens.push_back(std::move(vec));
          }
  }
  Matrix ideal(all.size(), gens.size(), field);
  for (std::size_t c = 0; c < gens.size(); ++c)
    for (std::size_t k = 0; k < all.size(); ++k) ideal(k, c) = gens[c][k];
  ideal = image_basis(ideal);
  const Matrix complement = quotient_basis(ideal, Matrix::identity(all.size(), field));
  std::vector<std::size_t> basis_paths;
  for (std::size_t c = 0; c < complement.cols(); ++c)
    for (std::size_t k = 0; k < all.size(); ++k)
      if (complement(k, c) != 0) basis_paths.push_back(k);
  const std::size_t dim = basis_paths.size();
  // reduction[k] = coordinates of path k in the chosen basis
  const Matrix sys = hstack(complement, ideal);
  const auto red = solve(sys, Matrix::identity(all.size(), field));
  if (!red) throw VerificationError("path reduction failed");

  auto label_of = [&](const Path& p) {
    if (p.arrows.empty()) return idempotent_label(q.vertices[p.start]);
    std::string s;
    for (auto a : p.arrows) s += (s.empty() ? "" : "*") + q.arrows[a].name;
    return s;
  };
  std::vector<std::string> labels;
  std::vector<std::size_t> idempotents(nv);
  for (std::size_t i = 0; i < dim; ++i) {
    const Path& p = all[basis_paths[i]];
    labels.push_back(label_of(p));
    if (p.arrows.empty()) idempotents[p.start] = i;
  }
  std::vector<std::vector<Scalar>> products(dim * dim, std::vector<Scalar>(dim, 0));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const Path& a = all[basis_paths[i]];
      const Path& b = all[basis_paths[j]];
      if (a.end != b.start) continue;
      if (a.arrows.size() + b.arrows.size() >= L) continue;
      Path c = a;
      c.arrows.insert(c.arrows.end(), b.arrows.begin(), b.arrows.end());
      c.end = b.end;
      const std::size_t k = index.at(c);
      for (std::size_t r = 0; r < dim; ++r) products[i * dim + j][r] = (*red)(r, k);
    }
  return Algebra::create(field, std::move(labels), q.vertices, std::move(idempotents), std::move(products));
}

// A vertex subset selecting the idempotent e = sum of e_v.
struct IdempotentSpec {
  std::vector<std::size_t> vertices;

  static IdempotentSpec of(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return {std::move(v)};
  }
  bool contains(std::size_t v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }
  IdempotentSpec complement(std::size_t n) const {
    std::vector<std::size_t> c;
    for (std::size_t v = 0; v < n; ++v)
      if (!contains(v)) c.push_back(v);
    return {c};
  }
  // Empty or full subsets make one edge category zero.
  bool degenerate(std::size_t n) const { return vertices.empty() || vertices.size() == n; }
};

struct CornerAlgebra {
  AlgebraPtr algebra;
  std::vector<std::size_t> embedding;   // corner basis index -> A basis index
  std::vector<std::size_t> vertex_map;  // corner vertex -> A vertex
  bool degenerate = false;
};

inline CornerAlgebra corner_algebra(const Algebra& a, const IdempotentSpec& e) {
  for (auto v : e.vertices)
    if (v >= a.num_vertices()) throw InputError("idempotent vertex out of range");
  CornerAlgebra r;
  r.vertex_map = e.vertices;
  r.degenerate = e.degenerate(a.num_vertices());
  for (std::size_t b = 0; b < a.dim(); ++b) {
    auto [s, t] = a.endpoints(b);
    if (e.contains(s) && e.contains(t)) r.embedding.push_back(b);
  }
  const std::size_t d = r.embedding.size();
  std::vector<std::string> labels;
  for (auto b : r.embedding) labels.push_back(a.labels()[b]);
  std::vector<std::string> vnames;
  std::vector<std::size_t> idem;
  for (auto v : e.vertices) {
    vnames.push_back(a.vertex_names()[v]);
    auto it = std::find(r.embedding.begin(), r.embedding.end(), a.idempotent(v));
    idem.push_back(static_cast<std::size_t>(it - r.embedding.begin()));
  }
  std::vector<std::vector<Scalar>> products(d * d, std::vector<Scalar>(d, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const auto& c = a.product(r.embedding[i], r.embedding[j]);
      for (std::size_t k = 0; k < d; ++k) products[i * d + j][k] = c[r.embedding[k]];
    }
  r.algebra = Algebra::create(a.field(), std::move(labels), std::move(vnames), std::move(idem), std::move(products));
  return r;
}

struct QuotientAlgebra {
  AlgebraPtr algebra;
  Matrix ideal;                         // basis of AeA in A coordinates (columns)
  Matrix projection;                    // dim(B) x dim(A): coordinates of b_k + AeA
  std::vector<std::size_t> lift;        // B basis index -> A basis index
  std::vector<std::size_t> vertex_map;  // B vertex -> A vertex
};

inline Matrix idempotent_ideal(const Algebra& a, const IdempotentSpec& e) {
  std::vector<std::vector<Scalar>> cols;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (a.endpoints(i).second != a.endpoints(j).first) continue;
      if (!e.contains(a.endpoints(i).second)) continue;
      cols.push_back(a.product(i, j));
    }
  Matrix m(a.dim(), cols.size(), a.field());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t k = 0; k < a.dim(); ++k) m(k, c) = cols[c][k];
  return image_basis(m);
}

inline QuotientAlgebra quotient_by_idempotent_ideal(const Algebra& a, const IdempotentSpec& e) {
  const Fp f = a.field();
  QuotientAlgebra r;
  r.ideal = idempotent_ideal(a, e);
  const Matrix comp = quotient_basis(r.ideal, Matrix::identity(a.dim(), f));
  for (std::size_t c = 0; c < comp.cols(); ++c)
    for (std::size_t k = 0; k < a.dim(); ++k)
      if (comp(k, c) != 0) r.lift.push_back(k);
  const std::size_t d = r.lift.size();
  auto x = solve(hstack(comp, r.ideal), Matrix::identity(a.dim(), f));
  if (!x) throw VerificationError("quotient projection failed");
  r.projection = x->rows_range(0, d);
  std::vector<std::string> labels;
  for (auto b : r.lift) labels.push_back(a.labels()[b]);
  std::vector<std::string> vnames;
  std::vector<std::size_t> idem;
  for (std::size_t v = 0; v < a.num_vertices(); ++v) {
    if (e.contains(v)) continue;
    auto it = std::find(r.lift.begin(), r.lift.end(), a.idempotent(v));
    if (it == r.lift.end()) throw VerificationError("vertex idempotent collapsed in A/AeA");
    r.vertex_map.push_back(v);
    vnames.push_back(a.vertex_names()[v]);
    idem.push_back(static_cast<std::size_t>(it - r.lift.begin()));
  }
  std::vector<std::vector<Scalar>> products(d * d, std::vector<Scalar>(d, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const auto& c = a.product(r.lift[i], r.lift[j]);
      for (std::size_t k = 0; k < d; ++k) {
        Scalar s = 0;
        for (std::size_t l = 0; l < a.dim(); ++l)
          if (c[l] != 0) s = f.add(s, f.mul(r.projection(k, l), c[l]));
        products[i * d + j][k] = s;
      }
    }
  r.algebra = Algebra::create(f, std::move(labels), std::move(vnames), std::move(idem), std::move(products));
  return r;
}

// A C-B-bimodule: left action of C, right action of B, on column vectors.
struct Bimodule {
  std::size_t dim = 0;
  std::vector<Matrix> left;   // per C basis element: x -> c.x
  std::vector<Matrix> right;  // per B basis element: x -> x.b
};

namespace detail {

inline Matrix word_action(const std::vector<Matrix>& gen_actions, const std::vector<std::size_t>& word, bool left,
                          std::size_t n, Fp f) {
  Matrix m = Matrix::identity(n, f);
  // left action: (g1 g2).x = g1.(g2.x)  -> L_g1 L_g2; right: x.(g1 g2) = (x.g1).g2 -> R_g2 R_g1
  for (auto g : word) m = left ? m * gen_actions[g] : gen_actions[g] * m;
  return m;
}

}  // namespace detail

// Extends actions given on vertex idempotents and generators to every basis element.
inline std::vector<Matrix> extend_actions(const Algebra& alg, const std::map<std::size_t, Matrix>& given,
                                          std::size_t n, bool left) {
  const Fp f = alg.field();
  std::vector<Matrix> gen_actions;
  for (auto g : alg.generators()) {
    auto it = given.find(g);
    if (it == given.end()) throw InputError("missing action for generator '" + alg.labels()[g] + "'");
    gen_actions.push_back(it->second);
  }
  std::vector<Matrix> all(alg.dim(), Matrix(n, n, f));
  for (std::size_t b = 0; b < alg.dim(); ++b) {
    if (alg.is_idempotent_basis(b)) {
      auto it = given.find(b);
      if (it == given.end()) throw InputError("missing action for idempotent '" + alg.labels()[b] + "'");
      all[b] = it->second;
      continue;
    }
    for (const auto& t : alg.expression(b)) all[b].axpy(t.coeff, detail::word_action(gen_actions, t.word, left, n, f));
  }
  return all;
}

inline Bimodule make_bimodule(const Algebra& b, const Algebra& c, std::size_t dim,
                              const std::map<std::string, Matrix>& left_by_label,
                              const std::map<std::string, Matrix>& right_by_label) {
  std::map<std::size_t, Matrix> l, r;
  for (const auto& [k, m] : left_by_label) l[c.basis_index(k)] = m;
  for (const auto& [k, m] : right_by_label) r[b.basis_index(k)] = m;
  for (const auto& [k, m] : l)
    if (m.rows() != dim || m.cols() != dim) throw InputError("bimodule left action has wrong size");
  for (const auto& [k, m] : r)
    if (m.rows() != dim || m.cols() != dim) throw InputError("bimodule right action has wrong size");
  if (dim == 0) return {0, std::vector<Matrix>(c.dim(), Matrix(0, 0, c.field())),
                        std::vector<Matrix>(b.dim(), Matrix(0, 0, b.field()))};
  return {dim, extend_actions(c, l, dim, true), extend_actions(b, r, dim, false)};
}

struct TriangularAlgebra {
  AlgebraPtr algebra;
  IdempotentSpec c_side;  // vertices coming from C
  std::vector<std::size_t> b_embedding;  // B basis -> A basis
  std::vector<std::size_t> c_embedding;  // C basis -> A basis
};

// A = [[B, 0], [M, C]] with products b*b', c*c', m*b, c*m.
inline TriangularAlgebra triangular_matrix_algebra(const Algebra& b, const Algebra& c, const Bimodule& m) {
  const Fp f = b.field();
  if (!(c.field() == f)) throw InputError("B and C have different characteristics");
  if (m.left.size() != c.dim() || m.right.size() != b.dim()) throw InputError("bimodule action tables have wrong size");
  const std::size_t n = m.dim;
  // axioms
  for (std::size_t i = 0; i < c.dim(); ++i)
    for (std::size_t j = 0; j < c.dim(); ++j) {
      Matrix prod(n, n, f);
      const auto& cc = c.product(i, j);
      for (std::size_t k = 0; k < c.dim(); ++k) prod.axpy(cc[k], m.left[k]);
      if (!(m.left[i] * m.left[j] == prod))
        throw InputError("bimodule axiom fails on triple (" + c.labels()[i] + ", " + c.labels()[j] + ", m)");
    }
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) {
      Matrix prod(n, n, f);
      const auto& bb = b.product(i, j);
      for (std::size_t k = 0; k < b.dim(); ++k) prod.axpy(bb[k], m.right[k]);
      if (!(m.right[j] * m.right[i] == prod))
        throw InputError("bimodule axiom fails on triple (m, " + b.labels()[i] + ", " + b.labels()[j] + ")");
    }
  for (std::size_t i = 0; i < c.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      if (!(m.left[i] * m.right[j] == m.right[j] * m.left[i]))
        throw InputError("bimodule axiom fails on triple (" + c.labels()[i] + ", m, " + b.labels()[j] + ")");
  {
    Matrix one_l(n, n, f), one_r(n, n, f);
    for (auto e : c.idempotents()) one_l = one_l + m.left[e];
    for (auto e : b.idempotents()) one_r = one_r + m.right[e];
    if (!(one_l == Matrix::identity(n, f)) || !(one_r == Matrix::identity(n, f)))
      throw InputError("bimodule actions are not unital");
  }
  // Basis of M adapted to the idempotents: e_c M e_b pieces.
  Matrix adapted(n, 0, f);
  std::vector<std::pair<std::size_t, std::size_t>> slot;
  for (std::size_t cv = 0; cv < c.num_vertices(); ++cv)
    for (std::size_t bv = 0; bv < b.num_vertices(); ++bv) {
      Matrix piece = image_basis(m.left[c.idempotent(cv)] * m.right[b.idempotent(bv)]);
      for (std::size_t k = 0; k < piece.cols(); ++k) slot.emplace_back(cv, bv);
      adapted = hstack(adapted, piece);
    }
  if (adapted.cols() != n) throw InputError("bimodule does not decompose along vertex idempotents");
  const Matrix adapted_inv = *inverse(adapted);
  std::vector<Matrix> L(c.dim()), R(b.dim());
  for (std::size_t i = 0; i < c.dim(); ++i) L[i] = adapted_inv * m.left[i] * adapted;
  for (std::size_t i = 0; i < b.dim(); ++i) R[i] = adapted_inv * m.right[i] * adapted;

  const std::size_t db = b.dim(), dc = c.dim(), d = db + n + dc;
  std::vector<std::string> labels;
  std::set<std::string> bnames(b.vertex_names().begin(), b.vertex_names().end());
  bool clash = false;
  for (const auto& v : c.vertex_names()) clash |= bnames.count(v) > 0;
  std::vector<std::string> vnames;
  for (const auto& v : b.vertex_names()) vnames.push_back(clash ? "B." + v : v);
  for (const auto& v : c.vertex_names()) vnames.push_back(clash ? "C." + v : v);
  for (const auto& l : b.labels()) labels.push_back(clash ? "B." + l : l);
  for (std::size_t k = 0; k < n; ++k) labels.push_back("m" + std::to_string(k + 1));
  for (const auto& l : c.labels()) labels.push_back(clash ? "C." + l : l);
  std::vector<std::size_t> idem;
  for (auto e : b.idempotents()) idem.push_back(e);
  for (auto e : c.idempotents()) idem.push_back(db + n + e);

  std::vector<std::vector<Scalar>> products(d * d, std::vector<Scalar>(d, 0));
  auto at = [&](std::size_t i, std::size_t j) -> std::vector<Scalar>& { return products[i * d + j]; };
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t k = 0; k < db; ++k) at(i, j)[k] = b.product(i, j)[k];
  for (std::size_t i = 0; i < dc; ++i)
    for (std::size_t j = 0; j < dc; ++j)
      for (std::size_t k = 0; k < dc; ++k) at(db + n + i, db + n + j)[db + n + k] = c.product(i, j)[k];
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t j = 0; j < db; ++j)  // m * b
      for (std::size_t k = 0; k < n; ++k) at(db + x, j)[db + k] = R[j](k, x);
    for (std::size_t i = 0; i < dc; ++i)  // c * m
      for (std::size_t k = 0; k < n; ++k) at(db + n + i, db + x)[db + k] = L[i](k, x);
  }
  TriangularAlgebra t;
  t.algebra = Algebra::create(f, std::move(labels), std::move(vnames), std::move(idem), std::move(products));
  std::vector<std::size_t> cv;
  for (std::size_t v = 0; v < c.num_vertices(); ++v) cv.push_back(b.num_vertices() + v);
  t.c_side = IdempotentSpec::of(cv);
  for (std::size_t i = 0; i < db; ++i) t.b_embedding.push_back(i);
  for (std::size_t i = 0; i < dc; ++i) t.c_embedding.push_back(db + n + i);
  return t;
}

// Searches for an algebra isomorphism that maps vertex idempotents to vertex
// idempotents. Returns the dim x dim matrix sending A-coordinates to A'-coordinates.
inline std::optional<Matrix> find_algebra_isomorphism(const Algebra& a, const Algebra& b,
                                                      std::uint64_t budget = 1u << 20) {
  if (a.dim() != b.dim() || a.num_vertices() != b.num_vertices() || !(a.field() == b.field())) return std::nullopt;
  const Fp f = a.field();
  const std::size_t n = a.num_vertices(), d = a.dim();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t spent = 0;
  do {
    bool ok = true;
    for (std::size_t s = 0; s < n && ok; ++s)
      for (std::size_t t = 0; t < n && ok; ++t) ok = a.dim_between(s, t) == b.dim_between(perm[s], perm[t]);
    if (!ok) continue;
    // candidate images for each generator: the radical part of e_s' B e_t'
    std::vector<std::vector<std::size_t>> slots;
    for (auto g : a.generators()) {
      auto [s, t] = a.endpoints(g);
      std::vector<std::size_t> sl;
      for (std::size_t k = 0; k < d; ++k)
        if (!b.is_idempotent_basis(k) && b.endpoints(k) == std::make_pair(perm[s], perm[t])) sl.push_back(k);
      slots.push_back(sl);
    }
    std::size_t total_vars = 0;
    for (auto& s : slots) total_vars += s.size();
    VectorOdometer odo(total_vars, f);
    do {
      if (++spent > budget) throw BudgetExceeded("algebra isomorphism search exceeded budget");
      std::vector<std::vector<Scalar>> gen_img;
      std::size_t off = 0;
      for (auto& sl : slots) {
        std::vector<Scalar> v(d, 0);
        for (std::size_t k = 0; k < sl.size(); ++k) v[sl[k]] = odo.value()[off + k];
        off += sl.size();
        gen_img.push_back(std::move(v));
      }
      Matrix phi(d, d, f);
      for (std::size_t x = 0; x < d; ++x) {
        std::vector<Scalar> img(d, 0);
        if (a.is_idempotent_basis(x)) {
          for (std::size_t v = 0; v < n; ++v)
            if (a.idempotent(v) == x) img[b.idempotent(perm[v])] = 1;
        } else {
          for (const auto& t : a.expression(x)) {
            std::vector<Scalar> w = gen_img[t.word.front()];
            for (std::size_t k = 1; k < t.word.size(); ++k) w = b.multiply(w, gen_img[t.word[k]]);
            for (std::size_t k = 0; k < d; ++k) img[k] = f.add(img[k], f.mul(t.coeff, w[k]));
          }
        }
        for (std::size_t k = 0; k < d; ++k) phi(k, x) = img[k];
      }
      if (!is_invertible(phi)) continue;
      bool mult = true;
      for (std::size_t i = 0; i < d && mult; ++i)
        for (std::size_t j = 0; j < d && mult; ++j) {
          auto lhs = (phi * Matrix::column(f, a.product(i, j))).col(0);
          auto rhs = b.multiply(phi.col(i), phi.col(j));
          mult = lhs == rhs;
        }
      if (mult) return phi;
    } while (odo.next());
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace qrep
