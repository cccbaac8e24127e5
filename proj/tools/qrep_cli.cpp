#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrep/qrep.hpp"

using namespace qrep;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3 };

struct Config {
  std::string command;
  std::string algebra;
  std::string e;
  std::string side = "x";
  std::size_t max_dim = 4;
  std::optional<Scalar> field_char;
  std::string format = "json";
  std::string cache;
  std::size_t threshold = Limits{}.threshold;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
  bool allow_unverified = false;
  std::string strategy = "extension";
  std::string out;
  // command specific
  std::string subcat, monobrick, ey, ez, kind = "left-schur", theorem = "all", expect;
  std::size_t fuzz = 0;
  bool show_all = false;

  json to_json() const {
    json j;
    j["command"] = command;
    if (!algebra.empty()) j["algebra"] = algebra;
    if (!e.empty()) j["e"] = e;
    j["side"] = side;
    j["max_dim"] = max_dim;
    if (field_char) j["char"] = *field_char;
    j["format"] = format;
    if (!cache.empty()) j["cache"] = cache;
    j["threshold"] = threshold;
    j["seed"] = seed;
    j["workers"] = workers;
    j["allow_unverified_hypothesis"] = allow_unverified;
    j["strategy"] = strategy;
    if (!subcat.empty()) j["subcat"] = subcat;
    if (!monobrick.empty()) j["monobrick"] = monobrick;
    if (!ey.empty()) j["e_y"] = ey;
    if (!ez.empty()) j["e_z"] = ez;
    if (command == "glue" || command == "enumerate") j["kind"] = kind;
    if (command == "verify") {
      j["theorem"] = theorem;
      j["fuzz"] = fuzz;
    }
    if (!expect.empty()) j["expect"] = expect;
    return j;
  }
  Limits limits() const {
    Limits l;
    l.threshold = threshold;
    return l;
  }
};

std::ostream* g_out = &std::cout;

void emit(const std::string& text) { *g_out << text; }

json envelope(const Config& c, const std::string& hash, std::size_t bound) {
  json j;
  j["tool"] = "qrep";
  j["version"] = kVersion;
  j["config"] = c.to_json();
  if (!hash.empty()) j["algebra_hash"] = hash;
  j["bound"] = bound;
  return j;
}

Strategy strategy_for(const Config& c, const Algebra& a) {
  Strategy s = parse_strategy(c.strategy);
  if (s == Strategy::AnalyticTypeA && !IndecUniverse::type_a_line(a)) {
    std::cerr << "warning: analytic-typeA strategy needs a linear A_n quiver; using extension\n";
    s = Strategy::Extension;
  }
  return s;
}

// Everything a command may need: the algebra, and either its universe or a full recollement.
struct Context {
  LoadedAlgebra loaded;
  std::shared_ptr<Recollement> rec;
  UniversePtr universe;  // the universe of the selected side
};

std::string side_cache(const Config& c, const std::string& side) {
  if (c.cache.empty()) return "";
  return side == "x" ? c.cache : c.cache + "." + side;
}

Context load_context(const Config& c, bool need_recollement) {
  if (c.algebra.empty()) throw InputError("--algebra is required");
  Context ctx;
  ctx.loaded = load_algebra_file(c.algebra, c.field_char);
  const AlgebraPtr a = ctx.loaded.algebra;
  std::optional<IdempotentSpec> e;
  if (!c.e.empty()) e = parse_idempotent(*a, c.e);
  else if (need_recollement) e = ctx.loaded.default_idempotent;
  if (need_recollement && !e) throw InputError("--e is required for this command (no default idempotent in the algebra file)");
  if (c.side != "x" && !e) throw InputError("--side " + c.side + " needs --e");
  if (c.side != "x" && c.side != "y" && c.side != "z") throw InputError("--side must be x, y or z");
  if (e) {
    ctx.rec = std::make_shared<Recollement>(a, *e);
    auto ux = cached_universe(a, c.max_dim, strategy_for(c, *a), c.limits(), side_cache(c, "x"), std::cerr);
    auto uy = cached_universe(ctx.rec->b(), c.max_dim, strategy_for(c, *ctx.rec->b()), c.limits(), side_cache(c, "y"), std::cerr);
    auto uz = cached_universe(ctx.rec->c(), c.max_dim, strategy_for(c, *ctx.rec->c()), c.limits(), side_cache(c, "z"), std::cerr);
    ctx.rec->set_universes(ux, uy, uz);
    const auto ax = check_axioms(*ctx.rec);
    if (!ax.ok()) throw VerificationError("recollement self-check failed: " + ax.failures.front());
    ctx.universe = c.side == "x" ? ux : c.side == "y" ? uy : uz;
  } else {
    ctx.universe = cached_universe(a, c.max_dim, strategy_for(c, *a), c.limits(), c.cache, std::cerr);
  }
  return ctx;
}

json ids_json(const IndecUniverse& u, const IdSet& s) {
  json j;
  j["ids"] = s;
  json labels = json::array();
  for (auto i : s) labels.push_back(u.label(i));
  j["labels"] = labels;
  return j;
}

json flags_json(const SubcategoryFlags& f) {
  return {{"extension_closed", f.extension_closed}, {"left_schur", f.left_schur}, {"wide", f.wide}, {"torf", f.torf}};
}

std::string join_dims(const std::vector<std::size_t>& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s;
}

// ---- commands -----------------------------------------------------------------

int cmd_indecs(const Config& c) {
  auto ctx = load_context(c, false);
  const auto& u = *ctx.universe;
  if (c.format == "tsv") {
    std::ostringstream o;
    o << "id\tlabel\tdim_vector\tdim\tend_dim\tbrick\n";
    for (std::size_t i = 0; i < u.size(); ++i)
      o << i << '\t' << u.label(i) << '\t' << join_dims(u.module(i).dim_vector()) << '\t' << u.module(i).dim() << '\t'
        << u.entry(i).end_dim << '\t' << (u.is_brick(i) ? "yes" : "no") << '\n';
    emit(o.str());
    return kPass;
  }
  json j = envelope(c, u.algebra()->hash(), u.bound());
  j["vertices"] = u.algebra()->vertex_names();
  j["indecomposables"] = json::array();
  for (std::size_t i = 0; i < u.size(); ++i)
    j["indecomposables"].push_back({{"id", i},
                                    {"label", u.label(i)},
                                    {"dim_vector", u.module(i).dim_vector()},
                                    {"dim", u.module(i).dim()},
                                    {"end_dim", u.entry(i).end_dim},
                                    {"brick", u.is_brick(i)}});
  j["count"] = u.size();
  j["status"] = "pass";
  emit(j.dump(2) + "\n");
  return kPass;
}

int cmd_enumerate(const Config& c) {
  auto ctx = load_context(c, false);
  const auto& u = *ctx.universe;
  const auto mb = all_monobricks(u);
  const auto ls = all_left_schur(u, mb);
  const auto rep = verify_bijection(u, [&] {
    std::vector<IdSet> v;
    for (const auto& m : mb.sets) v.push_back(m.ids);
    return v;
  }(), ls.select(&SubcategoryFlags::left_schur));
  const bool pass = ls.representation_exact ? rep.ok() : true;
  if (c.format == "tsv") {
    std::ostringstream o;
    o << "kind\tids\tlabels\tsemibrick_or_wide\tcc_or_torf\n";
    for (const auto& m : mb.sets) {
      o << "monobrick\t" << json(m.ids).dump() << '\t' << format_ids(u, m.ids) << '\t' << m.semibrick << '\t'
        << m.cofinally_closed << '\n';
    }
    for (const auto& s : ls.subcats)
      o << "left_schur\t" << json(s.ids).dump() << '\t' << format_ids(u, s.ids) << '\t' << s.flags.wide << '\t'
        << s.flags.torf << '\n';
    emit(o.str());
    return pass ? kPass : kFail;
  }
  json j = envelope(c, u.algebra()->hash(), u.bound());
  j["bricks"] = ids_json(u, all_bricks(u));
  j["monobricks"] = json::array();
  for (const auto& m : mb.sets) {
    json e = ids_json(u, m.ids);
    e["semibrick"] = m.semibrick;
    e["cofinally_closed"] = m.cofinally_closed;
    j["monobricks"].push_back(e);
  }
  j["left_schur"] = json::array();
  for (const auto& s : ls.subcats) {
    json e = ids_json(u, s.ids);
    e["sim"] = ids_json(u, s.simples);
    e["flags"] = flags_json(s.flags);
    j["left_schur"].push_back(e);
  }
  j["counts"] = {{"bricks", all_bricks(u).size()}, {"monobricks", mb.sets.size()}, {"semibricks", mb.semibricks},
                 {"cofinally_closed", mb.cofinally_closed}, {"left_schur", ls.left_schur}, {"wide", ls.wide},
                 {"torf", ls.torf}};
  j["oracle"] = ls.oracle_run ? "agreed" : "skipped";
  j["summand_closed"] = ls.representation_exact;
  if (!ls.divergences.empty()) j["divergences"] = ls.divergences;
  j["bijection_failures"] = rep.failures;
  j["status"] = pass ? "pass" : "fail";
  emit(j.dump(2) + "\n");
  return pass ? kPass : kFail;
}

int cmd_check(const Config& c) {
  if (c.subcat.empty()) throw InputError("--subcat is required");
  auto ctx = load_context(c, false);
  const auto& u = *ctx.universe;
  const IdSet s = subcat_from_json(u, read_json_file(c.subcat));
  const auto fl = classify_subcategory(u, s);
  json j = envelope(c, u.algebra()->hash(), u.bound());
  j["subcategory"] = ids_json(u, s);
  j["flags"] = flags_json(fl);
  const bool bricks = is_brick_set(u, s);
  j["brick_set"] = {{"bricks", bricks},
                    {"monobrick", bricks && is_monobrick(u, s)},
                    {"semibrick", bricks && is_semibrick(u, s)},
                    {"cofinally_closed", bricks && is_monobrick(u, s) && is_cofinally_closed(u, s)}};
  if (fl.extension_closed) j["sim"] = ids_json(u, sim(u, s));
  bool pass = true;
  std::vector<std::string> missing;
  std::stringstream ss(c.expect);
  std::string want;
  while (std::getline(ss, want, ',')) {
    if (want.empty()) continue;
    bool have = false;
    if (want == "extension-closed") have = fl.extension_closed;
    else if (want == "left-schur") have = fl.left_schur;
    else if (want == "wide") have = fl.wide;
    else if (want == "torf") have = fl.torf;
    else if (want == "monobrick") have = j["brick_set"]["monobrick"];
    else if (want == "semibrick") have = j["brick_set"]["semibrick"];
    else if (want == "cofinally-closed") have = j["brick_set"]["cofinally_closed"];
    else throw InputError("unknown --expect property '" + want + "'");
    if (!have) {
      pass = false;
      missing.push_back(want);
    }
  }
  if (!missing.empty()) j["expectation_failures"] = missing;
  j["status"] = pass ? "pass" : "fail";
  emit(j.dump(2) + "\n");
  return pass ? kPass : kFail;
}

int cmd_glue(const Config& c) {
  if (c.ey.empty() || c.ez.empty()) throw InputError("--ey and --ez are required");
  auto ctx = load_context(c, true);
  const Recollement& r = *ctx.rec;
  const IdSet y = subcat_from_json(r.uy(), read_json_file(c.ey));
  const IdSet z = subcat_from_json(r.uz(), read_json_file(c.ez));
  IdSet out;
  std::string kind;
  bool check = true;
  std::string target;
  if (c.kind == "left-schur") out = r.glue_left_schur(y, z, c.allow_unverified), kind = "subcategory", target = "left_schur";
  else if (c.kind == "wide") out = r.glue_wide(y, z, c.allow_unverified), kind = "subcategory", target = "wide";
  else if (c.kind == "torf") out = r.glue_torf(y, z), kind = "subcategory", target = "torf";
  else if (c.kind == "monobrick") out = r.glue_monobrick(y, z, Recollement::MonobrickVariant::general, c.allow_unverified), kind = "brickset";
  else if (c.kind == "monobrick-cc") out = r.glue_monobrick(y, z, Recollement::MonobrickVariant::cc, c.allow_unverified), kind = "brickset";
  else if (c.kind == "semibrick") out = r.glue_semibrick(y, z), kind = "brickset";
  else throw InputError("unknown --kind '" + c.kind + "'");
  const bool exact = r.is_i_shriek_exact();
  json j = envelope(c, r.ux().algebra()->hash(), r.ux().bound());
  j["result"] = subcat_to_json(r.ux(), out, kind);
  j["hypothesis_verified"] = exact || c.kind == "torf" || c.kind == "semibrick" || c.kind == "monobrick";
  j["universe_bounded"] = true;
  if (kind == "subcategory") {
    const auto fl = classify_subcategory(r.ux(), out);
    j["flags"] = flags_json(fl);
    check = target == "left_schur" ? fl.left_schur : target == "wide" ? fl.wide : fl.torf;
    const auto back = r.restrict(out);
    j["restricts_back"] = back == std::make_pair(y, z);
  }
  // outputs produced without the hypothesis are observations, not assertions
  const bool pass = check || !j["hypothesis_verified"].get<bool>();
  j["status"] = pass ? "pass" : "fail";
  emit(j.dump(2) + "\n");
  return pass ? kPass : kFail;
}

json theorem_json(const TheoremReport& t) {
  json j;
  j["theorem"] = to_string(t.which);
  j["hypothesis"] = t.hypothesis;
  j["status"] = t.skipped ? "skipped" : t.ok() ? "pass" : "fail";
  j["forward_pairs"] = t.forward;
  j["backward_subcategories"] = t.backward;
  j["equivalence_pairs"] = t.equivalence;
  j["failures"] = t.failures;
  return j;
}

std::vector<TheoremId> theorems_of(const std::string& s) {
  if (s == "all") return {TheoremId::left_schur, TheoremId::wide, TheoremId::torf, TheoremId::cc_monobrick};
  return {parse_theorem(s)};
}

int cmd_verify(const Config& c) {
  TheoremOptions to;
  to.run_without_hypothesis = c.allow_unverified;
  const auto ids = theorems_of(c.theorem);
  bool pass = true;
  if (c.fuzz > 0) {
    const Fp f(c.field_char.value_or(2));
    json j = envelope(c, "", c.max_dim);
    j["instances"] = json::array();
    std::size_t accepted = 0, rejected = 0;
    for (std::uint64_t s = c.seed; accepted < c.fuzz; ++s) {
      auto ins = random_triangular(s, f);
      const std::vector<IdempotentSpec> sides{ins.tri.c_side, ins.tri.c_side.complement(ins.tri.algebra->num_vertices())};
      for (std::size_t k = 0; k < sides.size(); ++k) {
        const IdempotentSpec& e = sides[k];
        RecollementOptions ro;
        ro.bound_x = c.max_dim;
        ro.limits = c.limits();
        Recollement r(ins.tri.algebra, e, ro);
        const std::size_t top = std::max({r.ux().max_member_dim(), r.uy().max_member_dim(), r.uz().max_member_dim()});
        if (top + 2 > c.max_dim) {
          ++rejected;
          break;
        }
        if (k == 0) ++accepted;
        json inst{{"seed", s}, {"description", ins.describe()}, {"algebra_hash", ins.tri.algebra->hash()}};
        json e_names = json::array();
        for (auto v : e.vertices) e_names.push_back(ins.tri.algebra->vertex_names()[v]);
        inst["e"] = e_names;
        const auto ax = check_axioms(r);
        const auto cert = r.exactness();
        inst["exact"] = cert.structural;
        if (!cert.witness.empty()) inst["witness"] = cert.witness;
        inst["axioms"] = ax.ok() ? "pass" : "fail";
        if (!ax.ok()) pass = false, inst["axiom_failures"] = ax.failures;
        inst["theorems"] = json::array();
        for (auto t : ids) {
          const auto rep = verify_theorem(r, t, to);
          if (!rep.skipped && !rep.ok() && rep.hypothesis) pass = false;
          inst["theorems"].push_back(theorem_json(rep));
        }
        j["instances"].push_back(inst);
      }
    }
    j["accepted"] = accepted;
    j["rejected_as_possibly_infinite"] = rejected;
    j["status"] = pass ? "pass" : "fail";
    emit(j.dump(2) + "\n");
    return pass ? kPass : kFail;
  }
  auto ctx = load_context(c, true);
  const Recollement& r = *ctx.rec;
  json j = envelope(c, r.ux().algebra()->hash(), r.ux().bound());
  const auto cert = r.exactness();
  j["i_shriek_exact"] = {{"structural", cert.structural}, {"direct", cert.direct}, {"sequences_tested", cert.sequences_tested}};
  if (!cert.witness.empty()) j["i_shriek_exact"]["witness"] = cert.witness;
  j["results"] = json::array();
  for (auto t : ids) {
    const auto rep = verify_theorem(r, t, to);
    if (!rep.skipped && !rep.ok() && rep.hypothesis) pass = false;
    j["results"].push_back(theorem_json(rep));
  }
  j["status"] = pass ? "pass" : "fail";
  emit(j.dump(2) + "\n");
  return pass ? kPass : kFail;
}

int cmd_table1(const Config& c) {
  const Fp f(c.field_char.value_or(2));
  const auto rep = reproduce_table1(f, c.limits());
  const Recollement& r = *rep.rec;
  if (c.format == "tsv") {
    std::ostringstream o;
    o << "row\tB_monobrick\tC_monobrick\tA_monobrick\tA_subcategory\tleft_schur\twide\ttorf\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& row = rep.rows[i];
      o << i + 1 << '\t' << format_ids(r.uy(), row.my) << '\t' << format_ids(r.uz(), row.mz) << '\t'
        << format_ids(r.ux(), row.mx) << '\t' << format_ids(r.ux(), row.ex) << '\t' << row.flags.left_schur << '\t'
        << row.flags.wide << '\t' << row.flags.torf << '\n';
    }
    emit(o.str());
    return rep.ok() ? kPass : kFail;
  }
  if (c.format == "dot") {
    std::string all;
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
      all += to_dot(r.ux(), rep.rows[i].ex, rep.rows[i].mx, {}, "row" + std::to_string(i + 1));
    emit(all);
    return rep.ok() ? kPass : kFail;
  }
  json j = envelope(c, r.ux().algebra()->hash(), r.ux().bound());
  j["field_char"] = f.p();
  j["triangular_isomorphic_to_path_algebra"] = rep.isomorphic_to_path_algebra;
  j["i_shriek_exact"] = rep.exact;
  j["monobricks_B"] = rep.mbrick_b;
  j["monobricks_C"] = rep.mbrick_c;
  j["rows"] = json::array();
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    j["rows"].push_back({{"row", i + 1},
                         {"B_monobrick", ids_json(r.uy(), row.my)},
                         {"C_monobrick", ids_json(r.uz(), row.mz)},
                         {"A_monobrick", ids_json(r.ux(), row.mx)},
                         {"A_subcategory", ids_json(r.ux(), row.ex)},
                         {"flags", flags_json(row.flags)},
                         {"red_not_torf", !row.flags.torf},
                         {"blue_not_wide", !row.flags.wide},
                         {"dot", to_dot(r.ux(), row.ex, row.mx, {}, "row" + std::to_string(i + 1))}});
  }
  j["distinct"] = rep.distinct;
  j["not_torf"] = rep.not_torf;
  j["not_wide"] = rep.not_wide;
  j["failures"] = rep.failures;
  j["status"] = rep.ok() ? "pass" : "fail";
  emit(j.dump(2) + "\n");
  return rep.ok() ? kPass : kFail;
}

int cmd_export_dot(const Config& c) {
  if (c.subcat.empty()) throw InputError("--subcat is required");
  auto ctx = load_context(c, false);
  const auto& u = *ctx.universe;
  const IdSet s = subcat_from_json(u, read_json_file(c.subcat));
  IdSet black;
  if (!c.monobrick.empty()) black = subcat_from_json(u, read_json_file(c.monobrick));
  else if (is_extension_closed(u, s)) black = sim(u, s);
  DotOptions o;
  o.show_nonmembers = c.show_all;
  emit(to_dot(u, s, black, o));
  return kPass;
}

int print_error(const std::string& kind, const std::string& msg, int code) {
  json j{{"tool", "qrep"}, {"version", kVersion}, {"status", "error"}, {"error", {{"kind", kind}, {"message", msg}, {"exit_code", code}}}};
  std::cout << j.dump(2) << "\n";
  std::cerr << "qrep: " << kind << ": " << msg << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrep: monobricks, left Schur subcategories and idempotent recollements over F_p"};
  app.require_subcommand(1);
  Config c;
  Scalar char_value = 0;
  auto common = [&](CLI::App* s, bool needs_algebra) {
    auto* opt = s->add_option("--algebra", c.algebra, "algebra JSON file (quiver or triangular)");
    if (needs_algebra) opt->required();
    s->add_option("--e", c.e, "idempotent as a comma-separated vertex list");
    s->add_option("--side", c.side, "category of the recollement: x (A), y (A/AeA) or z (eAe)")->check(CLI::IsMember({"x", "y", "z"}));
    s->add_option("--max-dim", c.max_dim, "dimension bound of the universe")->check(CLI::PositiveNumber);
    s->add_option("--char", char_value, "field characteristic (overrides the file)");
    s->add_option("--format", c.format, "json, tsv or dot")->check(CLI::IsMember({"json", "tsv", "dot"}));
    s->add_option("--cache", c.cache, "universe cache file");
    s->add_option("--threshold", c.threshold, "exhaustive-search threshold (field elements scanned)");
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--workers", c.workers, "worker count (computation is single-threaded; recorded only)");
    s->add_flag("--allow-unverified-hypothesis", c.allow_unverified, "run gluing without the exactness certificate");
    s->add_option("--strategy", c.strategy, "universe strategy")->check(CLI::IsMember({"extension", "brute-force", "analytic-typeA"}));
    s->add_option("--out", c.out, "write the report to a file instead of stdout");
  };
  auto* indecs = app.add_subcommand("indecs", "list the indecomposables of the universe");
  common(indecs, true);
  auto* enumerate = app.add_subcommand("enumerate", "all monobricks and left Schur subcategories");
  common(enumerate, true);
  auto* check = app.add_subcommand("check", "classify a candidate subcategory or brick set");
  common(check, true);
  check->add_option("--subcat", c.subcat, "subcategory JSON file")->required();
  check->add_option("--expect", c.expect, "comma-separated properties that must hold");
  auto* glue = app.add_subcommand("glue", "glue subcategories or brick sets across the recollement");
  common(glue, true);
  glue->add_option("--ey", c.ey, "subcategory of mod A/AeA")->required();
  glue->add_option("--ez", c.ez, "subcategory of mod eAe")->required();
  glue->add_option("--kind", c.kind, "left-schur, wide, torf, monobrick, monobrick-cc or semibrick")
      ->check(CLI::IsMember({"left-schur", "wide", "torf", "monobrick", "monobrick-cc", "semibrick"}));
  auto* verify = app.add_subcommand("verify", "check the gluing theorems exhaustively");
  common(verify, false);
  verify->add_option("--theorem", c.theorem, "3.2, 3.3, 3.4, 3.5 or all")->check(CLI::IsMember({"3.2", "3.3", "3.4", "3.5", "all"}));
  verify->add_option("--fuzz", c.fuzz, "sweep this many random triangular algebras instead of --algebra");
  auto* table1 = app.add_subcommand("table1", "reproduce the k(1 -> 2 -> 3) gluing table");
  common(table1, false);
  auto* dot = app.add_subcommand("export-dot", "brick digraph of a subcategory");
  common(dot, true);
  dot->add_option("--subcat", c.subcat, "subcategory JSON file")->required();
  dot->add_option("--monobrick", c.monobrick, "brick set drawn black (default: sim of the subcategory)");
  dot->add_flag("--show-all", c.show_all, "draw non-members in grey");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return print_error("usage", e.what(), kUsage);
  }
  if (char_value != 0) c.field_char = char_value;
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) return print_error("usage", "cannot write '" + c.out + "'", kUsage);
    g_out = &file;
  }
  try {
    if (indecs->parsed()) return c.command = "indecs", cmd_indecs(c);
    if (enumerate->parsed()) return c.command = "enumerate", cmd_enumerate(c);
    if (check->parsed()) return c.command = "check", cmd_check(c);
    if (glue->parsed()) return c.command = "glue", cmd_glue(c);
    if (verify->parsed()) {
      c.command = "verify";
      if (c.fuzz == 0 && c.algebra.empty()) throw InputError("verify needs --algebra or --fuzz");
      return cmd_verify(c);
    }
    if (table1->parsed()) return c.command = "table1", cmd_table1(c);
    if (dot->parsed()) return c.command = "export-dot", cmd_export_dot(c);
  } catch (const UniverseExhausted& e) {
    return print_error("universe-exhausted", e.what(), kBudget);
  } catch (const BudgetExceeded& e) {
    return print_error("budget", e.what(), kBudget);
  } catch (const VerificationError& e) {
    return print_error("verification", e.what(), kFail);
  } catch (const PreconditionError& e) {
    return print_error("precondition", e.what(), kUsage);
  } catch (const InputError& e) {
    return print_error("input", e.what(), kUsage);
  } catch (const std::invalid_argument& e) {
    return print_error("input", e.what(), kUsage);
  }
  return kUsage;
}
