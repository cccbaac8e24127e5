#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrep/algebra.hpp"
#include "qrep/errors.hpp"
#include "qrep/module.hpp"
#include "qrep/subcat.hpp"
#include "qrep/universe.hpp"

namespace qrep {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

namespace detail {

template <class T>
T field_of(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(where + ": field '" + key + "' has the wrong type");
  }
}

inline Scalar reduce_int(std::int64_t v, Fp f) {
  const auto p = static_cast<std::int64_t>(f.p());
  return static_cast<Scalar>(((v % p) + p) % p);
}

}  // namespace detail

// ---- matrices ----------------------------------------------------------------

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, Fp f, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array() || j.size() != rows) throw InputError(where + ": expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols, f);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw InputError(where + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number_integer()) throw InputError(where + ": entries must be integers");
      m(r, c) = detail::reduce_int(j[r][c].get<std::int64_t>(), f);
    }
  }
  return m;
}

// ---- algebras ----------------------------------------------------------------

struct AlgebraDescription {
  Scalar field_char = 2;
  Quiver quiver;
  std::vector<Relation> relations;
};

inline AlgebraDescription algebra_description_from_json(const json& j, const std::string& where = "algebra") {
  AlgebraDescription d;
  d.field_char = detail::field_of<Scalar>(j, "field_char", where);
  const json& q = j.contains("quiver") ? j.at("quiver") : throw InputError(where + ": missing field 'quiver'");
  d.quiver.vertices = detail::field_of<std::vector<std::string>>(q, "vertices", where + ".quiver");
  if (q.contains("arrows"))
    for (const auto& a : q.at("arrows"))
      d.quiver.arrows.push_back({detail::field_of<std::string>(a, "name", where + ".arrows"),
                                 detail::field_of<std::string>(a, "from", where + ".arrows"),
                                 detail::field_of<std::string>(a, "to", where + ".arrows")});
  if (j.contains("relations"))
    for (const auto& rel : j.at("relations")) {
      Relation r;
      for (const auto& t : rel)
        r.push_back({detail::field_of<std::int64_t>(t, "coeff", where + ".relations"),
                     detail::field_of<std::vector<std::string>>(t, "path", where + ".relations")});
      d.relations.push_back(std::move(r));
    }
  return d;
}

inline json algebra_description_to_json(const AlgebraDescription& d) {
  json j;
  j["field_char"] = d.field_char;
  j["quiver"]["vertices"] = d.quiver.vertices;
  j["quiver"]["arrows"] = json::array();
  for (const auto& a : d.quiver.arrows) j["quiver"]["arrows"].push_back({{"name", a.name}, {"from", a.source}, {"to", a.target}});
  j["relations"] = json::array();
  for (const auto& r : d.relations) {
    json rel = json::array();
    for (const auto& t : r) rel.push_back({{"coeff", t.coeff}, {"path", t.path}});
    j["relations"].push_back(rel);
  }
  return j;
}

struct LoadedAlgebra {
  AlgebraPtr algebra;
  std::optional<IdempotentSpec> default_idempotent;  // the C side of a triangular algebra
  std::string kind;                                   // "quiver" or "triangular"
};

inline AlgebraPtr algebra_from_description(const AlgebraDescription& d, std::optional<Scalar> char_override) {
  const Scalar p = char_override ? *char_override : d.field_char;
  Fp f = [&] {
    try {
      return Fp(p);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }();
  return algebra_from_quiver(d.quiver, d.relations, f);
}

// A triangular file: {"triangular": {"b": <algebra>, "c": <algebra>, "bimodule": {"dim", "left", "right"}}}
// where each algebra is inline or a path relative to the file.
inline LoadedAlgebra load_algebra_json(const json& j, const std::string& base_dir, std::optional<Scalar> char_override) {
  if (!j.contains("triangular")) {
    return {algebra_from_description(algebra_description_from_json(j), char_override), std::nullopt, "quiver"};
  }
  const json& t = j.at("triangular");
  auto side = [&](const char* key) {
    if (!t.contains(key)) throw InputError(std::string("triangular: missing field '") + key + "'");
    const json& s = t.at(key);
    if (s.is_string()) return algebra_from_description(algebra_description_from_json(read_json_file(base_dir + s.get<std::string>())), char_override);
    return algebra_from_description(algebra_description_from_json(s, std::string("triangular.") + key), char_override);
  };
  AlgebraPtr b = side("b"), c = side("c");
  if (!t.contains("bimodule")) throw InputError("triangular: missing field 'bimodule'");
  const json& m = t.at("bimodule");
  const auto dim = detail::field_of<std::size_t>(m, "dim", "bimodule");
  std::map<std::string, Matrix> left, right;
  if (m.contains("left"))
    for (auto it = m.at("left").begin(); it != m.at("left").end(); ++it)
      left[it.key()] = matrix_from_json(it.value(), b->field(), dim, dim, "bimodule.left." + it.key());
  if (m.contains("right"))
    for (auto it = m.at("right").begin(); it != m.at("right").end(); ++it)
      right[it.key()] = matrix_from_json(it.value(), b->field(), dim, dim, "bimodule.right." + it.key());
  auto bim = make_bimodule(*b, *c, dim, left, right);
  auto tri = triangular_matrix_algebra(*b, *c, bim);
  return {tri.algebra, tri.c_side, "triangular"};
}

inline LoadedAlgebra load_algebra_file(const std::string& path, std::optional<Scalar> char_override = std::nullopt) {
  const auto slash = path.find_last_of('/');
  const std::string dir = slash == std::string::npos ? "" : path.substr(0, slash + 1);
  return load_algebra_json(read_json_file(path), dir, char_override);
}

inline IdempotentSpec parse_idempotent(const Algebra& a, const std::string& list) {
  std::vector<std::size_t> vs;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      vs.push_back(a.vertex_index(item));
    } catch (const InputError&) {
      throw InputError("unknown vertex '" + item + "' in --e");
    }
  }
  return IdempotentSpec::of(vs);
}

// ---- modules and universes -------------------------------------------------

inline json module_to_json(const Module& m) {
  json j;
  j["dims"] = m.dim_vector();
  j["blocks"] = json::array();
  for (const auto& b : m.blocks()) j["blocks"].push_back(matrix_to_json(b));
  return j;
}

inline Module module_from_json(const AlgebraPtr& alg, const json& j, const std::string& where) {
  const auto dims = detail::field_of<std::vector<std::size_t>>(j, "dims", where);
  if (dims.size() != alg->num_vertices()) throw InputError(where + ": dimension vector has wrong length");
  const auto& gens = alg->generators();
  if (!j.contains("blocks") || j.at("blocks").size() != gens.size()) throw InputError(where + ": need one block per generator");
  std::vector<Matrix> blocks;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    auto [s, t] = alg->endpoints(gens[g]);
    blocks.push_back(matrix_from_json(j.at("blocks")[g], alg->field(), dims[t], dims[s], where + ".blocks"));
  }
  return Module::from_blocks(alg, dims, blocks, true);
}

inline json universe_to_json(const IndecUniverse& u) {
  json j;
  j["format"] = "qrep-universe";
  j["format_version"] = 1;
  j["algebra_hash"] = u.algebra()->hash();
  j["bound"] = u.bound();
  j["strategy"] = u.strategy();
  j["modules"] = json::array();
  for (std::size_t i = 0; i < u.size(); ++i) {
    json m = module_to_json(u.module(i));
    m["label"] = u.label(i);
    m["end_dim"] = u.entry(i).end_dim;
    m["brick"] = u.is_brick(i);
    j["modules"].push_back(m);
  }
  j["hom"] = json::array();
  for (std::size_t i = 0; i < u.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < u.size(); ++k) row.push_back(u.hom_dim(i, k));
    j["hom"].push_back(row);
  }
  return j;
}

// Rebuilds a universe from cache contents; nullopt (with a reason) when the cache does not fit.
inline std::optional<UniversePtr> universe_from_json(const AlgebraPtr& alg, const json& j, std::size_t bound,
                                                     const std::string& strategy, const Limits& lim, std::string* why) {
  auto reject = [&](const std::string& w) -> std::optional<UniversePtr> {
    if (why) *why = w;
    return std::nullopt;
  };
  if (j.value("format", "") != "qrep-universe" || j.value("format_version", 0) != 1) return reject("unrecognized cache format");
  if (j.value("algebra_hash", "") != alg->hash()) return reject("algebra hash mismatch");
  if (j.value("bound", std::size_t{0}) != bound) return reject("bound mismatch");
  if (j.value("strategy", "") != strategy) return reject("strategy mismatch");
  std::vector<Module> mods;
  for (std::size_t i = 0; i < j.at("modules").size(); ++i)
    mods.push_back(module_from_json(alg, j.at("modules")[i], "cache module " + std::to_string(i)));
  auto u = IndecUniverse::from_modules(alg, bound, strategy, std::move(mods), lim, false);
  for (std::size_t i = 0; i < u->size(); ++i) {
    if (j.at("modules")[i].value("label", "") != u->label(i)) return reject("label mismatch");
    for (std::size_t k = 0; k < u->size(); ++k)
      if (j.at("hom")[i][k].get<std::size_t>() != u->hom_dim(i, k)) return reject("Hom table mismatch");
  }
  return UniversePtr(u);
}

// Loads the cache when it matches, otherwise rebuilds and rewrites it; warnings go to `warn`.
inline UniversePtr cached_universe(const AlgebraPtr& alg, std::size_t bound, Strategy strategy, const Limits& lim,
                                   const std::string& cache_path, std::ostream& warn) {
  if (!cache_path.empty()) {
    std::ifstream in(cache_path);
    if (in) {
      std::string why;
      try {
        auto u = universe_from_json(alg, json::parse(in), bound, to_string(strategy), lim, &why);
        if (u) return *u;
      } catch (const std::exception& e) {
        why = e.what();
      }
      warn << "warning: ignoring cache '" << cache_path << "' (" << why << "); rebuilding\n";
    }
  }
  auto u = build_universe(alg, bound, strategy, lim);
  if (!cache_path.empty()) write_text_file(cache_path, universe_to_json(*u).dump(1) + "\n");
  return u;
}

// ---- subcategories -----------------------------------------------------------

inline json subcat_to_json(const IndecUniverse& u, const IdSet& ids, const std::string& kind) {
  json j;
  j["format"] = "qrep-subcat";
  j["kind"] = kind;
  j["algebra_hash"] = u.algebra()->hash();
  j["bound"] = u.bound();
  j["ids"] = ids;
  json labels = json::array();
  for (auto i : ids) labels.push_back(u.label(i));
  j["labels"] = labels;
  return j;
}

// Accepts "ids", or "labels" when no ids are given. The hash must match when present.
inline IdSet subcat_from_json(const IndecUniverse& u, const json& j) {
  if (j.contains("algebra_hash") && j.at("algebra_hash").get<std::string>() != u.algebra()->hash())
    throw InputError("subcategory file belongs to a different algebra (hash " + j.at("algebra_hash").get<std::string>() + ")");
  IdSet ids;
  if (j.contains("ids")) {
    for (const auto& v : j.at("ids")) {
      if (!v.is_number_unsigned() || v.get<std::size_t>() >= u.size())
        throw InputError("unknown universe id " + v.dump());
      ids.push_back(v.get<std::size_t>());
    }
  } else if (j.contains("labels")) {
    for (const auto& v : j.at("labels")) {
      auto id = u.find_label(v.get<std::string>());
      if (!id) throw InputError("unknown module label '" + v.get<std::string>() + "'");
      ids.push_back(*id);
    }
  } else {
    throw InputError("subcategory file needs 'ids' or 'labels'");
  }
  return normalize(ids);
}

// ---- DOT -----------------------------------------------------------------------

struct DotOptions {
  bool show_nonmembers = false;  // grey nodes for universe members outside the subcategory
};

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

// Brick digraph: nodes are indecomposables, edges are nonzero Hom spaces styled by whether
// some map is injective (mono), surjective (epi) or neither.
inline std::string to_dot(const IndecUniverse& u, const IdSet& members, const IdSet& black, const DotOptions& opt = {},
                          const std::string& name = "qrep") {
  std::ostringstream o;
  o << "digraph \"" << dot_escape(name) << "\" {\n";
  o << "  node [shape=circle, style=filled, fontsize=10];\n";
  IdSet shown;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const bool in = contains(members, i) || contains(black, i);
    if (!in && !opt.show_nonmembers) continue;
    shown.push_back(i);
    std::string fill = contains(black, i) ? "black" : in ? "white" : "grey";
    o << "  n" << i << " [label=\"" << dot_escape(u.label(i)) << "\", fillcolor=" << fill
      << (fill == "black" ? ", fontcolor=white" : "") << "];\n";
  }
  for (auto i : shown)
    for (auto k : shown) {
      if (i == k || u.hom_dim(i, k) == 0) continue;
      const auto& p = u.hom_profile(i, k);
      const char* kind = p.any_injective ? "mono" : p.any_surjective ? "epi" : "other";
      const char* style = p.any_injective ? "solid" : p.any_surjective ? "dashed" : "dotted";
      o << "  n" << i << " -> n" << k << " [label=\"" << kind << "\", style=" << style << "];\n";
    }
  o << "}\n";
  return o.str();
}

}  // namespace qrep
