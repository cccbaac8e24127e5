#include <cctype>
#include <filesystem>
#include <map>
#include <sstream>

#include "support.hpp"

using namespace qtest;
namespace fs = std::filesystem;

namespace {

const std::string kData = QREP_DATA_DIR;

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("qrep_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// A small DOT reader written against the graph grammar (digraph, node/edge statements,
// attribute lists, quoted IDs), independent of the writer.
struct DotGraph {
  std::string name;
  std::map<std::string, std::map<std::string, std::string>> nodes;
  std::vector<std::tuple<std::string, std::string, std::map<std::string, std::string>>> edges;
};

class DotReader {
 public:
  explicit DotReader(std::string text) : s_(std::move(text)) {}

  DotGraph parse() {
    DotGraph g;
    expect_word("digraph");
    if (peek() != "{") g.name = next();
    expect("{");
    while (peek() != "}") {
      std::string id = next();
      if (id.empty()) throw std::runtime_error("unexpected end of input");
      if (id == "node" || id == "edge" || id == "graph") {
        attrs();
      } else if (peek() == "->") {
        next();
        std::string to = next();
        g.edges.emplace_back(id, to, peek() == "[" ? attrs() : std::map<std::string, std::string>{});
      } else {
        auto a = peek() == "[" ? attrs() : std::map<std::string, std::string>{};
        g.nodes[id].insert(a.begin(), a.end());
      }
      if (peek() == ";") next();
    }
    expect("}");
    if (!next().empty()) throw std::runtime_error("trailing input after graph");
    return g;
  }

 private:
  std::map<std::string, std::string> attrs() {
    std::map<std::string, std::string> out;
    expect("[");
    while (peek() != "]") {
      std::string k = next();
      if (k.empty()) throw std::runtime_error("unexpected end of input");
      expect("=");
      out[k] = next();
      if (peek() == "," || peek() == ";") next();
    }
    expect("]");
    return out;
  }
  void expect(const std::string& t) {
    auto got = next();
    if (got != t) throw std::runtime_error("expected '" + t + "' but got '" + got + "'");
  }
  void expect_word(const std::string& t) { expect(t); }
  std::string peek() {
    auto save = pos_;
    auto t = next();
    pos_ = save;
    return t;
  }
  std::string next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ >= s_.size()) return "";
    const char c = s_[pos_];
    if (c == '"') {
      std::string out;
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) throw std::runtime_error("unterminated string");
      ++pos_;
      return out;
    }
    if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
      pos_ += 2;
      return "->";
    }
    if (std::string("{}[];=,").find(c) != std::string::npos) {
      ++pos_;
      return std::string(1, c);
    }
    std::string out;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.'))
      out += s_[pos_++];
    if (out.empty()) throw std::runtime_error(std::string("unexpected character '") + c + "'");
    return out;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

TEST(AlgebraFiles, ShippedExamplesLoad) {
  auto a2 = load_algebra_file(kData + "/kA2.json");
  EXPECT_EQ(a2.kind, "quiver");
  EXPECT_EQ(a2.algebra->dim(), 3u);
  EXPECT_EQ(load_algebra_file(kData + "/kA3.json").algebra->dim(), 6u);
  EXPECT_EQ(load_algebra_file(kData + "/Fp.json").algebra->dim(), 1u);
  EXPECT_EQ(load_algebra_file(kData + "/kA3_rad2.json").algebra->dim(), 5u);
  auto tri = load_algebra_file(kData + "/table1_triangular.json");
  EXPECT_EQ(tri.kind, "triangular");
  ASSERT_TRUE(tri.default_idempotent.has_value());
  EXPECT_EQ(tri.default_idempotent->vertices.size(), 1u);
  EXPECT_TRUE(find_algebra_isomorphism(*tri.algebra, *load_algebra_file(kData + "/kA3.json").algebra).has_value());
}

TEST(AlgebraFiles, CharacteristicOverride) {
  auto a = load_algebra_file(kData + "/kA3.json", 5);
  EXPECT_EQ(a.algebra->field().p(), 5u);
  auto t = load_algebra_file(kData + "/table1_triangular.json", 3);
  EXPECT_EQ(t.algebra->field().p(), 3u);
  EXPECT_THROW(load_algebra_file(kData + "/kA3.json", 6), InputError);
}

TEST(AlgebraFiles, DescriptionRoundTrip) {
  auto d = algebra_description_from_json(read_json_file(kData + "/kA3_rad2.json"));
  auto again = algebra_description_from_json(algebra_description_to_json(d));
  EXPECT_EQ(algebra_from_description(d, std::nullopt)->hash(), algebra_from_description(again, std::nullopt)->hash());
}

TEST(AlgebraFiles, InlineTriangular) {
  json j = json::parse(R"({"triangular": {
    "b": {"field_char": 2, "quiver": {"vertices": ["2"], "arrows": []}},
    "c": {"field_char": 2, "quiver": {"vertices": ["1"], "arrows": []}},
    "bimodule": {"dim": 1, "left": {"e1": [[1]]}, "right": {"e2": [[1]]}}}})");
  auto a = load_algebra_json(j, "", std::nullopt);
  EXPECT_EQ(a.algebra->dim(), 3u);
  EXPECT_TRUE(find_algebra_isomorphism(*a.algebra, *path_algebra_a(2, Fp(2), 1)).has_value());
}

TEST(AlgebraFiles, SchemaErrors) {
  auto dir = scratch_dir("schema");
  auto write = [&](const std::string& name, const std::string& text) {
    write_text_file((dir / name).string(), text);
    return (dir / name).string();
  };
  EXPECT_THROW(load_algebra_file(write("bad.json", "{ not json")), InputError);
  EXPECT_THROW(load_algebra_file((dir / "missing.json").string()), InputError);
  EXPECT_THROW(load_algebra_file(write("noquiver.json", R"({"field_char": 2})")), InputError);
  EXPECT_THROW(load_algebra_file(write("nochar.json", R"({"quiver": {"vertices": ["1"]}})")), InputError);
  EXPECT_THROW(load_algebra_file(write("type.json", R"({"field_char": "two", "quiver": {"vertices": ["1"]}})")),
               InputError);
  EXPECT_THROW(load_algebra_file(write("arrow.json",
                                       R"({"field_char": 2, "quiver": {"vertices": ["1"], "arrows": [{"name": "a", "from": "1", "to": "7"}]}})")),
               InputError);
  EXPECT_THROW(load_algebra_file(write("rel.json",
                                       R"({"field_char": 2, "quiver": {"vertices": ["1","2"], "arrows": [{"name": "a", "from": "1", "to": "2"}]},
                                           "relations": [[{"coeff": 1, "path": ["a", "zz"]}]]})")),
               InputError);
  EXPECT_THROW(load_algebra_file(write("shape.json", R"({"triangular": {
    "b": {"field_char": 2, "quiver": {"vertices": ["2"]}}, "c": {"field_char": 2, "quiver": {"vertices": ["1"]}},
    "bimodule": {"dim": 2, "left": {"e1": [[1]]}, "right": {}}}})")),
               InputError);
  try {
    load_algebra_file(write("where.json", R"({"field_char": 2, "quiver": {"vertices": ["1"], "arrows": [{"name": "a"}]}})"));
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("'from'"), std::string::npos) << e.what();
  }
}

TEST(Idempotents, ParseVertexNames) {
  auto a = load_algebra_file(kData + "/kA3.json").algebra;
  EXPECT_EQ(parse_idempotent(*a, "2,3").vertices, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(parse_idempotent(*a, "1").vertices, std::vector<std::size_t>{0});
  EXPECT_THROW(parse_idempotent(*a, "4"), InputError);
}

TEST(Modules, JsonRoundTrip) {
  Gen g(3);
  auto a = ka3(Fp(3));
  for (int trial = 0; trial < 20; ++trial) {
    auto m = g.module(a, {g.below(3), g.below(3), g.below(3)});
    EXPECT_TRUE(module_from_json(a, module_to_json(m), "m") == m);
  }
  json bad = module_to_json(interval(a, 0, 1));
  bad["dims"] = {1, 1};
  EXPECT_THROW(module_from_json(a, bad, "m"), InputError);
}

TEST(UniverseCache, RoundTripAndRebuild) {
  auto dir = scratch_dir("cache");
  const std::string path = (dir / "u.json").string();
  Fp f(2);
  auto a = ka3(f);
  std::ostringstream warn;
  auto built = cached_universe(a, 3, Strategy::Extension, {}, path, warn);
  EXPECT_TRUE(warn.str().empty());
  ASSERT_TRUE(fs::exists(path));
  const std::string first = read_json_file(path).dump();

  auto loaded = cached_universe(a, 3, Strategy::Extension, {}, path, warn);
  EXPECT_TRUE(warn.str().empty());
  ASSERT_EQ(loaded->size(), built->size());
  for (std::size_t i = 0; i < built->size(); ++i) {
    EXPECT_TRUE(loaded->module(i) == built->module(i));
    EXPECT_EQ(loaded->label(i), built->label(i));
    for (std::size_t k = 0; k < built->size(); ++k) EXPECT_EQ(loaded->hom_dim(i, k), built->hom_dim(i, k));
  }

  // another algebra against the same file: warning, rebuild, rewrite
  auto other = ka3(Fp(3));
  auto rebuilt = cached_universe(other, 3, Strategy::Extension, {}, path, warn);
  EXPECT_NE(warn.str().find("hash mismatch"), std::string::npos) << warn.str();
  EXPECT_EQ(rebuilt->algebra()->field().p(), 3u);
  EXPECT_EQ(read_json_file(path).at("algebra_hash").get<std::string>(), other->hash());
  EXPECT_NE(read_json_file(path).dump(), first);

  std::ostringstream warn2;
  cached_universe(other, 2, Strategy::Extension, {}, path, warn2);
  EXPECT_NE(warn2.str().find("bound mismatch"), std::string::npos) << warn2.str();

  write_text_file(path, "garbage");
  std::ostringstream warn3;
  auto fresh = cached_universe(other, 2, Strategy::Extension, {}, path, warn3);
  EXPECT_NE(warn3.str().find("warning"), std::string::npos);
  EXPECT_EQ(fresh->size(), 5u);
}

TEST(UniverseCache, TamperedHomTableIsRejected) {
  auto a = ka2(Fp(2));
  auto u = build_universe(a, 2, Strategy::Extension);
  json j = universe_to_json(*u);
  j["hom"][0][1] = 7;
  std::string why;
  EXPECT_FALSE(universe_from_json(a, j, 2, "extension", {}, &why).has_value());
  EXPECT_EQ(why, "Hom table mismatch");
}

TEST(SubcatFiles, RoundTripAndErrors) {
  auto u = build_universe(ka3(Fp(2)), 3, Strategy::Extension);
  const IdSet s = ids(*u, {"3", "2/3", "1/2/3"});
  EXPECT_EQ(subcat_from_json(*u, subcat_to_json(*u, s, "torf")), s);
  json by_label = {{"labels", {"1/2/3", "3"}}};
  EXPECT_EQ(subcat_from_json(*u, by_label), ids(*u, {"3", "1/2/3"}));
  EXPECT_THROW(subcat_from_json(*u, json{{"ids", {99}}}), InputError);
  EXPECT_THROW(subcat_from_json(*u, json{{"labels", {"4"}}}), InputError);
  EXPECT_THROW(subcat_from_json(*u, json::object()), InputError);
  json foreign = subcat_to_json(*u, s, "torf");
  foreign["algebra_hash"] = "deadbeef";
  EXPECT_THROW(subcat_from_json(*u, foreign), InputError);
}

TEST(Dot, RoundTripThroughIndependentParser) {
  for (const char* file : {"/kA2.json", "/kA3.json", "/kA3_rad2.json"}) {
    auto a = load_algebra_file(kData + file).algebra;
    auto u = build_universe(a, 3, Strategy::Extension);
    Gen g(std::hash<std::string>{}(file));
    for (int trial = 0; trial < 10; ++trial) {
      const IdSet members = g.subset(u->size());
      IdSet black;
      for (auto m : members)
        if (g.coin()) black.push_back(m);
      for (bool all : {false, true}) {
        const std::string text = to_dot(*u, members, black, DotOptions{all}, "row \"x\"");
        DotGraph gr = DotReader(text).parse();
        EXPECT_EQ(gr.name, "row \"x\"");
        std::set<std::size_t> shown;
        for (const auto& [node, attrs] : gr.nodes) {
          ASSERT_EQ(node[0], 'n');
          const std::size_t i = std::stoul(node.substr(1));
          shown.insert(i);
          EXPECT_EQ(attrs.at("label"), u->label(i));
          const std::string expect = contains(black, i) ? "black" : contains(members, i) ? "white" : "grey";
          EXPECT_EQ(attrs.at("fillcolor"), expect);
        }
        EXPECT_EQ(shown.size(), all ? u->size() : members.size());
        std::set<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& [from, to, attrs] : gr.edges) {
          const std::size_t i = std::stoul(from.substr(1)), k = std::stoul(to.substr(1));
          edges.insert({i, k});
          const auto& p = u->hom_profile(i, k);
          EXPECT_EQ(attrs.at("label"), p.any_injective ? "mono" : p.any_surjective ? "epi" : "other");
        }
        std::set<std::pair<std::size_t, std::size_t>> expected;
        for (auto i : shown)
          for (auto k : shown)
            if (i != k && u->hom_dim(i, k) > 0) expected.insert({i, k});
        EXPECT_EQ(edges, expected);
      }
    }
  }
}

TEST(Dot, ContractExamples) {
  auto u = build_universe(ka2(Fp(2)), 2, Strategy::Extension);
  DotGraph full = DotReader(to_dot(*u, u->all_ids(), ids(*u, {"2", "3"}))).parse();
  EXPECT_EQ(full.nodes.size(), 3u);
  std::size_t black = 0;
  for (const auto& [n, attrs] : full.nodes) black += attrs.at("fillcolor") == "black";
  EXPECT_EQ(black, 2u);
  DotGraph empty = DotReader(to_dot(*u, {}, {})).parse();
  EXPECT_TRUE(empty.nodes.empty());
  EXPECT_TRUE(empty.edges.empty());
}

TEST(Dot, ParserRejectsBrokenText) {
  EXPECT_THROW(DotReader("digraph g { n0 -> ").parse(), std::runtime_error);
  EXPECT_THROW(DotReader("digraph g { n0 [label=\"x] }").parse(), std::runtime_error);
}
