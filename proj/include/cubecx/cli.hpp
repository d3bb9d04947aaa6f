#pragma once
// Command-line driver: file loading, fixtures, verb dispatch and reports.

#include "cubecx/development.hpp"
#include "cubecx/dual.hpp"
#include "cubecx/fiber.hpp"
#include "cubecx/fixtures.hpp"
#include "cubecx/freegroup.hpp"
#include "cubecx/io.hpp"
#include "cubecx/pipeline.hpp"
#include "cubecx/smallcancel.hpp"
#include "cubecx/wallspace.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace cubecx::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kGuardEnv = "CUBECX_GUARD";

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Loaders

/// {"X": complex-ref, "relators": [map-refs]}; every relator targets the shared X.
inline CubicalPresentation load_presentation(const fs::path& p) {
  auto j = read_json(p);
  auto base = p.parent_path();
  if (!j.is_object() || !j.contains("X") || !j.contains("relators") || !j["relators"].is_array())
    throw Error(ErrorKind::Parse, p.string() + ": presentation needs X and relators");
  CubicalPresentation pres;
  pres.base = resolve_complex(j["X"], base, p.string() + ": X");
  for (std::size_t i = 0; i < j["relators"].size(); ++i) {
    const Json& r = j["relators"][i];
    auto where = p.string() + ": relator " + std::to_string(i);
    if (r.is_string()) {
      auto mp = base / r.get<std::string>();
      pres.relators.push_back(map_from_json(read_json(mp), mp.parent_path(), mp.string(), nullptr, pres.base));
    } else {
      pres.relators.push_back(map_from_json(r, base, where, nullptr, pres.base));
    }
  }
  validate_presentation(pres);
  return pres;
}

inline Json presentation_to_json(const Json& x_ref, const std::vector<std::string>& relator_refs) {
  return Json{{"X", x_ref}, {"relators", relator_refs}};
}

/// A directory holds <i>.json per relator; a file holds one wallspace or an array of them.
inline std::vector<RelatorWalls> load_relator_walls(const fs::path& p, std::size_t relators) {
  std::vector<RelatorWalls> out;
  if (fs::is_directory(p)) {
    for (std::size_t i = 0; i < relators; ++i) {
      auto f = p / (std::to_string(i) + ".json");
      out.push_back(relator_walls_from_json(read_json(f), p, f.string()));
    }
    return out;
  }
  auto j = read_json(p);
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(relator_walls_from_json(j[i], p.parent_path(), p.string() + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(relator_walls_from_json(j, p.parent_path(), p.string()));
  }
  return out;
}

/// Graphs are 1-complexes with a per-edge "labels" side table and a "rank".
inline Json graph_to_json(const LabeledGraph& g) {
  CubeComplex x(static_cast<std::size_t>(g.vertices));
  Json labels = Json::array();
  for (const auto& e : g.edges) {
    x.add_edge(e.from, e.to);
    labels.push_back(e.label);
  }
  Json j = complex_to_json(x);
  j["labels"] = labels;
  j["rank"] = g.rank;
  if (g.base >= 0) j["base"] = g.base;
  return j;
}

inline LabeledGraph graph_from_json(const Json& j, const std::string& where) {
  auto x = complex_from_json(j, where);
  if (x.dim() > 1) throw Error(ErrorKind::Validation, where + ": a graph has no squares");
  if (!j.contains("labels") || !j["labels"].is_array() || j["labels"].size() != x.count(1))
    throw Error(ErrorKind::Parse, where + ": one label per edge is required");
  LabeledGraph g;
  g.rank = j.value("rank", 2);
  g.vertices = static_cast<int>(x.vertex_count());
  g.base = j.value("base", -1);
  for (std::size_t e = 0; e < x.count(1); ++e) {
    int label = j["labels"][e].get<int>();
    if (label < 0 || label >= g.rank) throw Error(ErrorKind::Validation, where + ": label out of range at edge " + std::to_string(e));
    const auto& c = x.cube(1, static_cast<CubeId>(e)).corners;
    g.add_edge(c[0], c[1], label);
  }
  return g;
}

inline LabeledGraph load_graph(const fs::path& p) { return graph_from_json(read_json(p), p.string()); }

inline std::vector<Word> read_words(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorKind::Parse, p.string() + ": cannot open");
  std::vector<Word> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string w;
    while (ss >> w) {
      for (char c : w)
        if (!is_letter(c)) throw Error(ErrorKind::Parse, p.string() + ":" + std::to_string(n) + ": bad letter in " + w);
      out.push_back(w);
    }
  }
  return out;
}

inline std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, what + ": not an integer list: " + s);
    }
  }
  return out;
}

inline CubeId checked_vertex(const CubeComplex& x, int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= x.vertex_count())
    throw Error(ErrorKind::UnknownVertex, "vertex " + std::to_string(v) + " of " + std::to_string(x.vertex_count()));
  return v;
}

// ---------------------------------------------------------------------------
// Reports

struct Report {
  std::vector<std::string> command;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Certificate> certificates;
  /// Extra payload shown only in JSON reports.
  Json data;

  void param(std::string k, std::string v) { params.emplace_back(std::move(k), std::move(v)); }
  void param(std::string k, std::int64_t v) { param(std::move(k), std::to_string(v)); }
  void param(std::string k, const Rational& v) { param(std::move(k), format_rational(v)); }

  Status status() const {
    Status s = Status::pass;
    for (const auto& c : certificates) {
      if (c.status == Status::fail) return Status::fail;
      if (c.status == Status::inconclusive) s = Status::inconclusive;
    }
    return s;
  }
};

inline int exit_code(Status s) {
  switch (s) {
    case Status::pass: return 0;
    case Status::fail: return 1;
    case Status::inconclusive: return 2;
  }
  return 1;
}

inline std::string echo(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

inline std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "cubecx " << kVersion << "\n";
  os << "command: " << echo(r.command) << "\n";
  for (const auto& [k, v] : r.params) os << "param " << k << ": " << v << "\n";
  for (const auto& c : r.certificates) os << render(c);
  os << "status: " << to_string(r.status()) << "\n";
  return os.str();
}

inline Json render_json(const Report& r) {
  Json j;
  j["version"] = kVersion;
  j["command"] = r.command;
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  j["certificates"] = certs;
  if (!r.data.is_null()) j["data"] = r.data;
  j["status"] = std::string(to_string(r.status()));
  return j;
}

/// Errors that mean the input itself is unusable.
inline bool usage_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::Validation:
    case ErrorKind::DanglingFace:
    case ErrorKind::IncompatibleFaces:
    case ErrorKind::UnknownVertex:
    case ErrorKind::UnknownFixture:
      return true;
    default:
      return false;
  }
}

/// Exhausted searches are inconclusive; other module errors are failures.
inline Certificate error_certificate(const Error& e) {
  auto c = make_certificate("error");
  c.add("kind", std::string(to_string(e.kind())));
  if (e.kind() == ErrorKind::GuardExhausted || e.kind() == ErrorKind::BudgetExhausted)
    c.inconclusive(e.what());
  else
    c.fail(std::string(to_string(e.kind())), {{"message", e.what()}});
  return c;
}

// ---------------------------------------------------------------------------
// Fixtures

using Files = std::vector<std::pair<std::string, Json>>;

inline Json walls_file(const RelatorWalls& rw, const std::string& complex_file) {
  // walls on a subdivision carry their own complex
  Json ref = rw.walls.subdivided ? complex_to_json(*rw.walls.complex) : Json(complex_file);
  return relator_walls_to_json(rw, ref);
}

/// B_r, the cycle reading w, its presentation and antipodal walls.
inline Files word_fixture(const Word& w) {
  if (w.empty()) throw Error(ErrorKind::UnknownFixture, "empty word");
  int rank = 2;
  for (char c : w) {
    if (!is_letter(c)) throw Error(ErrorKind::UnknownFixture, "bad word " + w);
    rank = std::max(rank, generator_of(c) + 1);
  }
  auto z = fixtures::word_cycle(w, rank);
  RelatorWalls rw{antipodal_walls(z.source), std::nullopt};
  return {{"x.json", complex_to_json(*z.target)},
          {"z.json", complex_to_json(*z.source)},
          {"z.map.json", map_to_json(z, "z.json", "x.json")},
          {"pres.json", presentation_to_json("x.json", {"z.map.json"})},
          {"walls.json", walls_file(rw, "z.json")}};
}

inline FiniteWallspace octants() {
  FiniteWallspace ws;
  ws.points = 8;
  for (int k = 0; k < 3; ++k) {
    std::array<std::vector<int>, 2> s;
    for (int x = 0; x < 8; ++x) s[static_cast<std::size_t>((x >> k) & 1)].push_back(x);
    ws.walls.push_back(s);
  }
  return ws;
}

inline int fixture_number(const std::string& s, const std::string& name) {
  if (s.empty() || s.size() > 4 || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw Error(ErrorKind::UnknownFixture, name);
  return std::stoi(s);
}

inline Files fixture_files(const std::string& name) {
  namespace fx = cubecx::fixtures;
  auto one = [&](const CubeComplex& x) { return Files{{name + ".json", complex_to_json(x)}}; };
  std::smatch m;
  if (name == "torus" || name == "t2") return Files{{"t2.json", complex_to_json(fx::torus())}};
  if (name == "theta") return one(fx::theta());
  if (name == "tripod") return one(fx::tripod());
  if (name == "square") return one(fx::square());
  if (name == "interval") return one(fx::interval());
  if (name == "doubled-square") return one(fx::doubled_square());
  if (name == "octants") return Files{{"octants.json", finite_wallspace_to_json(octants())}};
  if (name == "c4-aabb") return word_fixture("aabb");
  if (name == "nonexample-product") {
    auto f = fx::nonexample_product();
    return {{"x.json", complex_to_json(*f.target)}, {"y.json", complex_to_json(*f.source)},
            {"y.map.json", map_to_json(f, "y.json", "x.json")}};
  }
  if (name == "two-hexagons") {
    auto f = fx::two_hexagons();
    auto dec = rank2_graph_decomposition(f.source);
    RelatorWalls rw{rank2_walls(dec), dec};
    return {{"x.json", complex_to_json(*f.target)},
            {"y.json", complex_to_json(*f.source)},
            {"y.map.json", map_to_json(f, "y.json", "x.json")},
            {"pres.json", presentation_to_json("x.json", {"y.map.json"})},
            {"walls.json", walls_file(rw, "y.json")}};
  }
  if (name.rfind("word-", 0) == 0) return word_fixture(name.substr(5));
  if (std::regex_match(name, m, std::regex("b([0-9]+)"))) {
    int r = fixture_number(m[1], name);
    if (r < 1 || r > 26) throw Error(ErrorKind::UnknownFixture, name);
    return one(fx::bouquet(r));
  }
  if (std::regex_match(name, m, std::regex("c([0-9]+)"))) {
    int n = fixture_number(m[1], name);
    if (n < 1) throw Error(ErrorKind::UnknownFixture, name);
    return one(fx::cycle_graph(n));
  }
  if (std::regex_match(name, m, std::regex("path-([0-9]+)"))) return one(fx::path_graph(fixture_number(m[1], name)));
  if (std::regex_match(name, m, std::regex("grid-([0-9]+)x([0-9]+)"))) {
    int a = fixture_number(m[1], name), b = fixture_number(m[2], name);
    if (a < 1 || b < 1 || a * b > 10000) throw Error(ErrorKind::UnknownFixture, name);
    return one(fx::grid(a, b));
  }
  throw Error(ErrorKind::UnknownFixture, name);
}

// ---------------------------------------------------------------------------
// Verbs

struct Options {
  int guard = kDefaultGuard;
  long budget = 100000;
  std::string alpha = "1/16";
  std::string beta = "1/16";
  bool json = false;
  std::string out;
  std::vector<std::string> inputs;
  int vertex = 0;
  int radius = 2;
  int cutoff = 0;
  int n = 0;
  int max_n = 8;
  int rank = 2;
  int k = 11;
  int min_sys = 0;
  int m = -1;
  int u = -1;
  int v = -1;
  std::string mode = "sufficient";
  std::string survive;
  std::string subset;
  std::string seed;
  bool strong = false;
  std::size_t paths = 2000000;
};

namespace detail {

inline const std::string& input(const Options& o, std::size_t i, const char* what) {
  if (i >= o.inputs.size()) throw Error(ErrorKind::Parse, std::string("missing argument: ") + what);
  return o.inputs[i];
}

inline std::shared_ptr<const CubeComplex> complex_arg(const Options& o, std::size_t i) {
  return share(load_complex(input(o, i, "complex file")));
}

inline CubicalMap map_arg(const Options& o, std::size_t i) { return load_map(input(o, i, "map file")); }

inline Rational rational(const std::string& s, const char* what) {
  try {
    return parse_rational(s);
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string(what) + ": " + e.what());
  }
}

inline void write_files(const fs::path& dir, const Files& files, Certificate& c) {
  fs::create_directories(dir);
  for (const auto& [name, j] : files) {
    write_text(dir / name, dump(j));
    c.add("wrote", name);
  }
}

inline Certificate counts(std::string check, const CubeComplex& x) {
  auto c = make_certificate(std::move(check));
  for (int d = 0; d <= std::max(x.dim(), 0); ++d) c.add("cubes_" + std::to_string(d), x.count(d));
  return c;
}

inline DevelopedBall ball_arg(const Options& o, Report& r) {
  auto x = complex_arg(o, 0);
  r.param("vertex", o.vertex);
  r.param("radius", o.radius);
  return develop_ball(x, checked_vertex(*x, o.vertex), o.radius);
}

/// Abstract ground-set form, relator wallspace, or a complex read as its hyperplane wallspace.
inline FiniteWallspace any_wallspace(const fs::path& p) {
  auto j = read_json(p);
  if (j.is_object() && j.contains("points")) return finite_wallspace_from_json(j, p.string());
  if (j.is_object() && j.contains("walls")) return finite_wallspace(wallspace_from_json(j, p.parent_path(), p.string()));
  return hyperplane_wallspace(complex_from_json(j, p.string()));
}

inline Certificate fiber_certificate(const FiberProduct& fp) {
  auto c = counts("fiber product", *fp.complex);
  c.add("components", fp.components.size());
  for (const auto& comp : fp.components) {
    auto k = make_certificate("component " + std::to_string(comp.id));
    k.add("vertices", comp.cells.count(0));
    k.add("edges", comp.cells.count(1));
    k.add("least", std::to_string(comp.least.first) + " " + std::to_string(comp.least.second));
    k.add("diagonal", comp.diagonal);
    c.children.push_back(std::move(k));
  }
  return c;
}

/// Antipodal walls on a cycle; on a rank 2 graph, the walls of its decomposition.
inline RelatorWalls default_walls(std::shared_ptr<const CubeComplex> y, int guard) {
  if (y->dim() <= 1 && y->connected() && y->euler_characteristic() == -1) {
    auto dec = rank2_graph_decomposition(y);
    return {rank2_walls(dec, guard), dec};
  }
  return {antipodal_walls(std::move(y), {}, guard), std::nullopt};
}

inline Certificate plan_summary(const QuotientPlan& plan) {
  auto c = plan.certificate;
  c.add("m", plan.relators.m);
  c.add("n", plan.relators.n);
  c.add("examined", plan.relators.examined);
  for (std::size_t i = 0; i < plan.relators.words.size(); ++i) {
    c.add("relator " + std::to_string(i) + " U", plan.relators.words[i].first);
    c.add("relator " + std::to_string(i) + " V", plan.relators.words[i].second);
  }
  return c;
}

}  // namespace detail

using Handler = std::function<void(const Options&, Report&)>;

/// Verb table; multi-word verbs are joined with a space.
inline std::map<std::string, Handler> handlers() {
  using namespace detail;
  std::map<std::string, Handler> h;

  h["validate"] = [](const Options& o, Report& r) { r.certificates.push_back(validate_complex(*complex_arg(o, 0))); };

  h["link"] = [](const Options& o, Report& r) {
    auto x = complex_arg(o, 0);
    r.param("vertex", o.vertex);
    CubeId v = checked_vertex(*x, o.vertex);
    auto c = check_link(*x, v);
    auto l = vertex_link(*x, v);
    c.add("link_vertices", l.vertices.size());
    c.add("link_simplices", l.simplices.size());
    r.certificates.push_back(std::move(c));
  };

  h["hyperplanes"] = [](const Options& o, Report& r) {
    auto x = complex_arg(o, 0);
    r.param("budget", static_cast<std::int64_t>(o.budget));
    auto c = make_certificate("hyperplanes");
    auto hs = hyperplanes(*x, static_cast<std::size_t>(o.budget));
    c.add("count", hs.size());
    for (const auto& hp : hs) {
      auto k = make_certificate("hyperplane " + std::to_string(hp.id));
      std::string edges;
      for (CubeId e : hp.edges) edges += (edges.empty() ? "" : " ") + std::to_string(e);
      k.add("edges", edges);
      k.add("embedded", hp.embedded);
      k.add("two_sided", hp.two_sided);
      k.add("contractible", std::string(to_string(hp.contractible)));
      c.children.push_back(std::move(k));
    }
    r.certificates.push_back(std::move(c));
  };

  h["pseudograph"] = [](const Options& o, Report& r) { r.certificates.push_back(pseudograph_certificate(*complex_arg(o, 0))); };

  h["localisom"] = [](const Options& o, Report& r) {
    auto f = map_arg(o, 0);
    auto c = validate_map(f);
    if (c.passed()) c.absorb(check_local_isometry(f));
    r.certificates.push_back(std::move(c));
  };

  h["subdivide"] = [](const Options& o, Report& r) {
    auto s = subdivide(*complex_arg(o, 0));
    auto c = counts("subdivide", s);
    if (!o.out.empty()) {
      write_text(o.out, dump(complex_to_json(s)));
      c.add("wrote", o.out);
    }
    r.data = complex_to_json(s);
    r.certificates.push_back(std::move(c));
  };

  h["develop"] = [](const Options& o, Report& r) {
    auto b = ball_arg(o, r);
    auto c = counts("developed ball", *b.ball);
    c.add("complete", b.complete);
    if (!o.out.empty())
      write_files(o.out, {{"ball.json", complex_to_json(*b.ball)}, {"ball.map.json", map_to_json(b.projection, "ball.json", "base.json")},
                          {"base.json", complex_to_json(*b.base)}}, c);
    r.certificates.push_back(std::move(c));
  };

  h["systole"] = [](const Options& o, Report& r) {
    r.param("guard", o.guard);
    r.certificates.push_back(systole_certificate(systole(complex_arg(o, 0), o.guard)));
  };

  h["hull"] = [](const Options& o, Report& r) {
    auto b = ball_arg(o, r);
    r.param("seed", o.seed);
    auto seed = parse_int_list(o.seed, "--seed");
    for (int v : seed) checked_vertex(*b.ball, v);
    auto s = convex_hull(b, std::vector<CubeId>(seed.begin(), seed.end()));
    auto c = make_certificate("convex hull");
    c.add("complete_ball", b.complete);
    for (std::size_t d = 0; d < s.cells.size(); ++d) c.add("cells_" + std::to_string(d), s.cells[d].size());
    std::string verts;
    for (CubeId v : s.vertices()) verts += (verts.empty() ? "" : " ") + std::to_string(v);
    c.add("vertices", verts);
    r.certificates.push_back(std::move(c));
  };

  h["superconvex"] = [](const Options& o, Report& r) {
    r.param("cutoff", o.cutoff);
    r.param("guard", o.guard);
    r.certificates.push_back(superconvexity_check(map_arg(o, 0), o.cutoff, o.guard));
  };

  h["fiber"] = [](const Options& o, Report& r) {
    auto fp = fiber_product(map_arg(o, 0), map_arg(o, 1));
    auto c = fiber_certificate(fp);
    if (!o.out.empty())
      write_files(o.out, {{"fiber.json", complex_to_json(*fp.complex)},
                          {"left.json", complex_to_json(*fp.left.target)},
                          {"right.json", complex_to_json(*fp.right.target)},
                          {"left.map.json", map_to_json(fp.left, "fiber.json", "left.json")},
                          {"right.map.json", map_to_json(fp.right, "fiber.json", "right.json")}}, c);
    r.certificates.push_back(std::move(c));
  };

  h["aut"] = [](const Options& o, Report& r) {
    auto auts = aut_over_x(map_arg(o, 0));
    auto c = make_certificate("automorphisms over X");
    c.add("order", auts.size());
    for (std::size_t i = 0; i < auts.size(); ++i) {
      std::string v;
      for (const auto& im : auts[i].images[0]) v += (v.empty() ? "" : " ") + std::to_string(im.id);
      c.add("vertex map " + std::to_string(i), v);
    }
    r.certificates.push_back(std::move(c));
  };

  h["induce"] = [](const Options& o, Report& r) {
    auto e = map_arg(o, 0);
    auto pres = load_presentation(input(o, 1, "presentation"));
    auto ip = induced_presentation(e, pres);
    auto c = make_certificate("induced presentation");
    c.add("relators", ip.presentation.relators.size());
    for (std::size_t i = 0; i < ip.origin.size(); ++i)
      c.add("relator " + std::to_string(i), "Y" + std::to_string(ip.origin[i].relator) + " component " +
                                                 std::to_string(ip.origin[i].component) + ", " +
                                                 std::to_string(ip.presentation.relators[i].source->vertex_count()) + " vertices");
    r.certificates.push_back(std::move(c));
  };

  h["pieces"] = [](const Options& o, Report& r) {
    r.param("guard", o.guard);
    auto rep = enumerate_pieces(load_presentation(input(o, 0, "presentation")), o.guard);
    auto c = make_certificate("pieces");
    c.add("count", rep.pieces.size());
    Json all = Json::array();
    for (const auto& p : rep.pieces) {
      auto pj = piece_json(p);
      c.add("piece", pj.dump());
      all.push_back(pj);
    }
    r.data = Json{{"pieces", all}};
    r.certificates.push_back(std::move(c));
  };

  h["cprime"] = [](const Options& o, Report& r) {
    auto alpha = rational(o.alpha, "--alpha");
    r.param("alpha", alpha);
    r.param("guard", o.guard);
    r.certificates.push_back(check_cprime(load_presentation(input(o, 0, "presentation")), alpha, o.guard));
  };

  h["fold"] = [](const Options& o, Report& r) {
    auto g = fold(load_graph(input(o, 0, "graph file")));
    auto c = make_certificate("fold");
    c.add("vertices", g.vertices);
    c.add("edges", g.edges.size());
    c.add("folded", g.folded());
    auto j = graph_to_json(g);
    if (!o.out.empty()) {
      write_text(o.out, dump(j));
      c.add("wrote", o.out);
    }
    r.data = j;
    r.certificates.push_back(std::move(c));
  };

  h["avoider"] = [](const Options& o, Report& r) {
    r.param("rank", o.rank);
    std::vector<LabeledGraph> cs;
    for (const auto& f : o.inputs) cs.push_back(load_graph(f));
    r.certificates.push_back(avoider(o.rank, cs).certificate);
  };

  h["malnormalize"] = [](const Options& o, Report& r) {
    const auto& u = input(o, 0, "U");
    const auto& v = input(o, 1, "V");
    r.param("rank", o.rank);
    int n = o.n;
    if (n <= 0) {
      r.param("max_n", o.max_n);
      n = minimal_malnormal_n(u, v, o.max_n, o.rank);
      if (n < 0) {
        auto c = make_certificate("malnormalize");
        c.inconclusive("no n <= " + std::to_string(o.max_n) + " passes the tree test");
        r.certificates.push_back(std::move(c));
        return;
      }
    }
    r.param("n", n);
    r.certificates.push_back(malnormalize(u, v, n, o.rank).certificate);
  };

  h["scwords"] = [](const Options& o, Report& r) {
    auto m = std::stoi(input(o, 0, "m"));
    auto n = std::stoi(input(o, 1, "n"));
    if (m < 1 || n < 1) throw Error(ErrorKind::Parse, "scwords needs positive m and n");
    auto [u, v] = sc_words(m, n);
    auto c = make_certificate("scwords");
    c.add("U", u);
    c.add("V", v);
    r.certificates.push_back(std::move(c));
  };

  h["gcprime"] = [](const Options& o, Report& r) {
    auto alpha = rational(o.alpha, "--alpha");
    r.param("alpha", alpha);
    r.param("rank", o.rank);
    std::vector<Word> words;
    for (const auto& w : o.inputs) {
      if (fs::exists(w)) {
        auto more = read_words(w);
        words.insert(words.end(), more.begin(), more.end());
      } else {
        words.push_back(w);
      }
    }
    for (const auto& w : words) validate_word(w, o.rank);
    r.certificates.push_back(graphical_cprime(o.rank, words, alpha));
  };

  auto build = [](bool pair) {
    return [pair](const Options& o, Report& r) {
      auto alpha = rational(o.alpha, "--alpha");
      r.param("alpha", alpha);
      r.param("min_sys", o.min_sys);
      r.param("budget", static_cast<std::int64_t>(o.budget));
      r.param("guard", o.guard);
      CubicalMap y = o.inputs.empty() ? identity_map(share(fixtures::bouquet(2))) : map_arg(o, 0);
      r.param("Y", o.inputs.empty() ? std::string("B2 identity") : o.inputs[0]);
      std::vector<Word> survive;
      if (!o.survive.empty()) {
        survive = read_words(o.survive);
        r.param("survive", o.survive);
      }
      auto plan = quotient_build(y, alpha, o.min_sys, o.budget, pair, survive, o.guard);
      auto c = plan_summary(plan);
      if (!o.out.empty()) {
        write_files(o.out, plan_files(plan), c);
      }
      r.certificates.push_back(std::move(c));
    };
  };
  h["quotient build"] = build(false);
  h["quotient pair"] = build(true);
  h["quotient verify"] = [](const Options& o, Report& r) {
    r.param("guard", o.guard);
    fs::path p = input(o, 0, "manifest");
    if (fs::is_directory(p)) p /= "manifest.json";
    r.certificates.push_back(verify_plan(p, o.guard));
  };

  h["cover"] = [](const Options& o, Report& r) {
    auto z = map_arg(o, 0);
    auto [group, images] = group_from_json(read_json(input(o, 1, "group table")));
    auto res = regular_cover(z, group, images);
    auto c = res.certificate;
    c.add("deck_order", res.deck_order);
    if (!o.out.empty())
      write_files(o.out, {{"cover.json", complex_to_json(*res.cover.source)},
                          {"z.json", complex_to_json(*z.source)},
                          {"x.json", complex_to_json(*z.target)},
                          {"cover.map.json", map_to_json(res.cover, "cover.json", "z.json")},
                          {"cover_to_x.map.json", map_to_json(res.to_x, "cover.json", "x.json")}}, c);
    r.certificates.push_back(std::move(c));
  };

  // walls take a relator map or a bare complex
  auto relator_complex = [](const Options& o) {
    const auto& p = input(o, 0, "relator");
    auto j = read_json(p);
    if (j.is_object() && j.contains("assign")) return map_from_json(j, fs::path(p).parent_path(), p).source;
    return share(complex_from_json(j, p));
  };
  auto emit_walls = [](const Options& o, Report& r, const RelatorWalls& rw, Certificate c) {
    c.add("walls", rw.walls.walls.size());
    c.add("subdivided", rw.walls.subdivided);
    c.absorb(check_wall_separation(rw.walls));
    auto j = relator_walls_to_json(rw, complex_to_json(*rw.walls.complex));
    if (!o.out.empty()) {
      write_text(o.out, dump(j));
      c.add("wrote", o.out);
    }
    r.data = j;
    r.certificates.push_back(std::move(c));
  };
  h["walls antipodal"] = [relator_complex, emit_walls](const Options& o, Report& r) {
    r.param("guard", o.guard);
    RelatorWalls rw{antipodal_walls(relator_complex(o), {}, o.guard), std::nullopt};
    emit_walls(o, r, rw, make_certificate("antipodal walls"));
  };
  h["walls rank2"] = [relator_complex, emit_walls](const Options& o, Report& r) {
    r.param("guard", o.guard);
    auto dec = rank2_graph_decomposition(relator_complex(o));
    RelatorWalls rw{rank2_walls(dec, o.guard), dec};
    auto c = make_certificate("rank 2 walls");
    c.add("diam(Z1 cap Z2)", subcomplex_diameter(*dec.y, cubecx::detail::cell_intersection(dec.z1, dec.z2)));
    emit_walls(o, r, rw, std::move(c));
  };

  auto b6 = [](bool full) {
    return [full](const Options& o, Report& r) {
      auto alpha = rational(o.alpha, "--alpha");
      if (o.mode != "sufficient" && o.mode != "exhaustive") throw Error(ErrorKind::Parse, "--mode is sufficient or exhaustive");
      r.param("mode", o.mode);
      r.param("alpha", alpha);
      r.param("guard", o.guard);
      if (o.mode == "exhaustive") r.param("paths", static_cast<std::int64_t>(o.paths));
      auto pres = load_presentation(input(o, 0, "presentation"));
      std::vector<RelatorWalls> walls;
      if (full) {
        for (const auto& f : pres.relators) walls.push_back(default_walls(f.source, o.guard));
      } else {
        walls = load_relator_walls(input(o, 1, "walls"), pres.relators.size());
      }
      r.certificates.push_back(check_b6(pres, walls, o.mode == "sufficient" ? B6Mode::sufficient : B6Mode::exhaustive, o.guard,
                                        alpha, o.paths));
    };
  };
  h["b6"] = b6(false);
  h["b6 full"] = b6(true);

  h["kwall"] = [](const Options& o, Report& r) {
    auto alpha = rational(o.alpha, "--alpha");
    r.param("k", o.k);
    r.param("alpha", alpha);
    r.param("guard", o.guard);
    auto pres = load_presentation(input(o, 0, "presentation"));
    auto walls = load_relator_walls(input(o, 1, "walls"), pres.relators.size());
    r.certificates.push_back(check_k_wall_convexity(pres, walls, o.k, alpha, o.guard));
  };

  h["freeness-bounds"] = [](const Options& o, Report& r) {
    auto alpha = rational(o.alpha, "--alpha");
    auto beta = rational(o.beta, "--beta");
    r.param("alpha", alpha);
    r.param("beta", beta);
    r.param("guard", o.guard);
    auto pres = load_presentation(input(o, 0, "presentation"));
    std::optional<Rank2Decomposition> dec;
    if (o.inputs.size() > 1) {
      auto walls = load_relator_walls(o.inputs[1], pres.relators.size());
      if (walls.empty() || !walls[0].decomposition) throw Error(ErrorKind::Parse, o.inputs[1] + ": no decomposition record");
      dec = walls[0].decomposition;
    } else {
      if (pres.relators.size() != 1) throw Error(ErrorKind::Validation, "freeness bounds take a single relator");
      dec = rank2_graph_decomposition(pres.relators[0].source);
    }
    r.certificates.push_back(check_freeness_bounds(pres, *dec, alpha, beta, o.guard));
  };

  h["dual"] = [](const Options& o, Report& r) {
    auto ws = any_wallspace(input(o, 0, "wallspace"));
    auto d = dual_complex(ws);
    auto c = counts("dual cube complex", *d.complex);
    c.add("walls", ws.walls.size());
    c.add("active_walls", d.active.size());
    c.absorb(validate_complex(*d.complex));
    auto j = dual_to_json(d);
    if (!o.out.empty()) {
      write_text(o.out, dump(j));
      c.add("wrote", o.out);
    }
    r.data = j;
    r.certificates.push_back(std::move(c));
  };

  h["hemi"] = [](const Options& o, Report& r) {
    r.param("subset", o.subset);
    auto ws = any_wallspace(input(o, 0, "wallspace"));
    auto hd = hemi_restrict_dual(ws, parse_int_list(o.subset, "--subset"));
    r.data = dual_to_json(hd.dual);
    r.certificates.push_back(hd.certificate);
  };

  h["strongsep"] = [](const Options& o, Report& r) {
    auto b = ball_arg(o, r);
    r.param("u", o.u);
    r.param("v", o.v);
    std::optional<int> m;
    if (o.m >= 0) {
      m = o.m;
      r.param("M", o.m);
    }
    auto verdict = strong_separation(b, o.u, o.v, m);
    auto c = verdict.certificate();
    if (verdict.kind == SeparationKind::crossed) c.fail("NotStronglySeparated", c.witness);
    r.certificates.push_back(std::move(c));
  };

  h["facing"] = [](const Options& o, Report& r) {
    auto b = ball_arg(o, r);
    r.param("strong", o.strong ? "true" : "false");
    std::optional<int> m;
    if (o.m >= 0) {
      m = o.m;
      r.param("M", o.m);
    }
    auto t = facing_triple_search(b, o.strong, m);
    if (t) {
      r.certificates.push_back(t->certificate);
      return;
    }
    auto c = make_certificate("facing triple");
    if (b.complete)
      c.fail("NoFacingTriple", {{"radius", o.radius}});
    else
      c.inconclusive("no facing triple within radius " + std::to_string(o.radius));
    r.certificates.push_back(std::move(c));
  };

  h["fixtures"] = [](const Options& o, Report& r) {
    const auto& name = input(o, 0, "fixture name");
    auto files = fixture_files(name);
    auto c = make_certificate("fixtures " + name);
    write_files(o.out.empty() ? fs::path(".") : fs::path(o.out), files, c);
    r.certificates.push_back(std::move(c));
  };

  return h;
}

// ---------------------------------------------------------------------------
// Entry point

namespace detail {

struct Verb {
  const char* name;
  const char* help;
  const char* inputs;
};

inline const std::vector<Verb>& verbs() {
  static const std::vector<Verb> v{
      {"validate", "NPC check of a complex", "complex"},
      {"link", "link condition at --vertex", "complex"},
      {"hyperplanes", "hyperplanes and their properties", "complex"},
      {"pseudograph", "every hyperplane contractible; reports rank", "complex"},
      {"localisom", "local isometry check of a map", "map"},
      {"subdivide", "cubical subdivision (--out file)", "complex"},
      {"develop", "developed ball at --vertex of --radius", "complex"},
      {"systole", "systole within --guard", "complex"},
      {"hull", "convex hull of --seed in a developed ball", "complex"},
      {"superconvex", "superconvexity up to --cutoff", "map"},
      {"fiber", "fiber product of two maps", "map map"},
      {"aut", "automorphisms over the target", "map"},
      {"induce", "induced presentation along a map", "map presentation"},
      {"pieces", "pieces of a presentation", "presentation"},
      {"cprime", "cubical C'(alpha)", "presentation"},
      {"fold", "Stallings folding", "graph"},
      {"avoider", "word avoiding the constraint graphs", "graph..."},
      {"malnormalize", "malnormal pair from U V (--n or --max-n)", "U V"},
      {"scwords", "small-cancellation words", "m n"},
      {"gcprime", "graphical C'(alpha) of words or word files", "word..."},
      {"kwall", "k-wall convexity bounds", "presentation walls"},
      {"freeness-bounds", "numeric freeness hypotheses", "presentation [walls]"},
      {"dual", "dual cube complex of a wallspace", "wallspace"},
      {"hemi", "dual of the hemiwallspace of --subset", "wallspace"},
      {"strongsep", "strong separation of hyperplanes --u --v", "complex"},
      {"facing", "facing triple search", "complex"},
      {"fixtures", "write fixture files (--out DIR)", "name"},
  };
  return v;
}

}  // namespace detail

/// Runs one command; returns the exit status (0 pass, 1 fail, 2 inconclusive, 3 usage).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"cubecx: certificate-producing checks on cube complexes", "cubecx"};
  app.set_version_flag("--version", std::string("cubecx ") + kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--guard", o.guard, "guard radius")->envname(kGuardEnv)->check(CLI::PositiveNumber);
  app.add_option("--budget", o.budget, "search budget")->check(CLI::NonNegativeNumber);
  app.add_option("--alpha", o.alpha, "small-cancellation constant p/q");
  app.add_flag("--json", o.json, "JSON report");
  app.add_option("--out", o.out, "output file or directory");

  std::map<CLI::App*, std::string> names;
  auto verb = [&](CLI::App* parent, const std::string& name, const std::string& help, const std::string& full) {
    auto* s = parent->add_subcommand(name, help);
    names[s] = full;
    return s;
  };
  auto positional = [&](CLI::App* s, const std::string& what) { s->add_option("inputs", o.inputs, what); };
  for (const auto& v : detail::verbs()) positional(verb(&app, v.name, v.help, v.name), v.inputs);

  auto sub = [&](const char* n) {
    for (auto& [a, full] : names)
      if (full == n) return a;
    return static_cast<CLI::App*>(nullptr);
  };
  for (const char* n : {"link", "develop", "hull", "strongsep", "facing"}) sub(n)->add_option("--vertex", o.vertex, "base vertex");
  for (const char* n : {"develop", "hull", "strongsep", "facing"}) sub(n)->add_option("--radius", o.radius, "ball radius")->check(CLI::NonNegativeNumber);
  sub("hull")->add_option("--seed", o.seed, "comma-separated ball vertices")->required();
  sub("superconvex")->add_option("--cutoff", o.cutoff, "strip cutoff L")->check(CLI::NonNegativeNumber);
  sub("malnormalize")->add_option("--n", o.n, "fixed n");
  sub("malnormalize")->add_option("--max-n", o.max_n, "largest n searched");
  for (const char* n : {"avoider", "malnormalize", "gcprime"}) sub(n)->add_option("--rank", o.rank, "free rank")->check(CLI::Range(1, 26));
  sub("kwall")->add_option("--k", o.k, "wall count k")->check(CLI::PositiveNumber);
  sub("freeness-bounds")->add_option("--beta", o.beta, "overlap constant p/q");
  sub("hemi")->add_option("--subset", o.subset, "comma-separated points")->required();
  for (const char* n : {"strongsep", "facing"}) sub(n)->add_option("--M", o.m, "quantitative margin M");
  sub("strongsep")->add_option("--u", o.u, "first hyperplane")->required();
  sub("strongsep")->add_option("--v", o.v, "second hyperplane")->required();
  sub("facing")->add_flag("--strong", o.strong, "require pairwise strong separation");

  auto* quotient = verb(&app, "quotient", "quotient pipeline", "quotient");
  quotient->require_subcommand(1);
  for (const char* n : {"build", "pair"}) {
    auto* q = verb(quotient, n, std::string("relator ") + (std::string(n) == "pair" ? "pair" : "search") + " over Y (default B2)",
                   std::string("quotient ") + n);
    positional(q, "Y map");
    q->add_option("--min-sys", o.min_sys, "lower bound on relator systole")->check(CLI::NonNegativeNumber);
    q->add_option("--survive", o.survive, "file of words that must survive");
  }
  positional(verb(quotient, "verify", "re-check a written plan", "quotient verify"), "manifest");

  auto* walls = verb(&app, "walls", "relator wallspaces", "walls");
  walls->require_subcommand(1);
  positional(verb(walls, "antipodal", "antipodal walls of a systolic cycle", "walls antipodal"), "relator");
  positional(verb(walls, "rank2", "walls of a rank 2 decomposition", "walls rank2"), "relator");

  auto* b6 = verb(&app, "b6", "B(6) conditions; b6 full computes the walls", "b6");
  positional(b6, "presentation walls");
  positional(verb(b6, "full", "B(6) with computed walls", "b6 full"), "presentation");
  for (CLI::App* s : std::vector<CLI::App*>{b6, sub("b6 full")}) {
    s->add_option("--mode", o.mode, "sufficient or exhaustive");
    s->add_option("--paths", o.paths, "exhaustive path budget");
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }

  // deepest parsed subcommand
  CLI::App* leaf = &app;
  for (bool deeper = true; deeper;) {
    deeper = false;
    for (auto* s : leaf->get_subcommands())
      if (s->parsed()) {
        leaf = s;
        deeper = true;
        break;
      }
  }
  const std::string& name = names.at(leaf);

  Report r;
  r.command = args;
  try {
    auto table = handlers();
    auto it = table.find(name);
    if (it == table.end()) throw Error(ErrorKind::Parse, "no handler for " + name);
    it->second(o, r);
  } catch (const Error& e) {
    if (usage_error(e.kind())) {
      err << "error: " << e.what() << "\n";
      return 3;
    }
    r.certificates.push_back(error_certificate(e));
  } catch (const std::invalid_argument& e) {
    err << "error: bad argument: " << e.what() << "\n";
    return 3;
  } catch (const std::out_of_range& e) {
    err << "error: argument out of range: " << e.what() << "\n";
    return 3;
  }
  out << (o.json ? dump(render_json(r)) : render_text(r));
  return exit_code(r.status());
}

inline int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cubecx::cli
