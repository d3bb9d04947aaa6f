#pragma once

#include "cubecx/freegroup.hpp"
#include "cubecx/hyperplane.hpp"
#include "cubecx/io.hpp"
#include "cubecx/smallcancel.hpp"

namespace cubecx {

/// Breadth-first spanning tree from vertex 0; non-tree edges, in id order,
/// are the free generators of the fundamental group.
struct SpanningTree {
  std::vector<EdgeEnd> up;  // edge-end at v pointing to its parent; edge -1 at the root
  std::vector<CubeId> generators;
  std::vector<int> generator_of_edge;
};

inline SpanningTree spanning_tree(const CubeComplex& x) {
  if (x.vertex_count() == 0 || !x.connected()) throw Error(ErrorKind::NotConnected, "spanning tree needs a connected complex");
  SpanningTree t;
  t.up.assign(x.vertex_count(), EdgeEnd{-1, 0});
  std::vector<char> seen(x.vertex_count(), 0), tree(x.count(1), 0);
  auto ends = x.edge_ends();
  std::deque<CubeId> q{0};
  seen[0] = 1;
  while (!q.empty()) {
    CubeId v = q.front();
    q.pop_front();
    for (const auto& e : ends[static_cast<std::size_t>(v)]) {
      CubeId w = x.edge_vertex(x.opposite(e));
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      tree[static_cast<std::size_t>(e.edge)] = 1;
      t.up[static_cast<std::size_t>(w)] = x.opposite(e);
      q.push_back(w);
    }
  }
  t.generator_of_edge.assign(x.count(1), -1);
  for (std::size_t e = 0; e < x.count(1); ++e)
    if (!tree[e]) {
      t.generator_of_edge[e] = static_cast<int>(t.generators.size());
      t.generators.push_back(static_cast<CubeId>(e));
    }
  return t;
}

/// Steps are edge-ends at the vertex being left.
using EdgePath = std::vector<EdgeEnd>;

namespace detail {

inline EdgePath to_root(const CubeComplex& x, const SpanningTree& t, CubeId v) {
  EdgePath p;
  while (t.up[static_cast<std::size_t>(v)].edge >= 0) {
    EdgeEnd e = t.up[static_cast<std::size_t>(v)];
    p.push_back(e);
    v = x.edge_vertex(x.opposite(e));
  }
  return p;
}

inline EdgePath reversed(const CubeComplex& x, const EdgePath& p) {
  EdgePath r;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r.push_back(x.opposite(*it));
  return r;
}

}  // namespace detail

/// Closed path at vertex 0 spelling a word in the free generators.
inline EdgePath word_path(const CubeComplex& x, const SpanningTree& t, const Word& w) {
  EdgePath out;
  for (char c : w) {
    int k = generator_of(c);
    if (k < 0 || k >= static_cast<int>(t.generators.size()))
      throw Error(ErrorKind::Validation, std::string("letter '") + c + "' is not a generator");
    CubeId e = t.generators[static_cast<std::size_t>(k)];
    const auto& cs = x.cube(1, e).corners;
    EdgePath loop = detail::reversed(x, detail::to_root(x, t, cs[0]));
    loop.push_back({e, 0});
    auto back = detail::to_root(x, t, cs[1]);
    loop.insert(loop.end(), back.begin(), back.end());
    if (is_inverse_letter(c)) loop = detail::reversed(x, loop);
    out.insert(out.end(), loop.begin(), loop.end());
  }
  return out;
}

/// Folded core of the wedge of closed paths in a graph, as an immersion into it.
inline CubicalMap loops_core(std::shared_ptr<const CubeComplex> x, const std::vector<EdgePath>& loops) {
  LabeledGraph g;
  g.rank = static_cast<int>(x->count(1));
  g.base = g.add_vertex();
  for (const auto& p : loops) {
    int at = g.base;
    for (std::size_t i = 0; i < p.size(); ++i) {
      int next = i + 1 == p.size() ? g.base : g.add_vertex();
      if (p[i].side == 0) {
        g.add_edge(at, next, p[i].edge);
      } else {
        g.add_edge(next, at, p[i].edge);
      }
      at = next;
    }
  }
  auto folded = fold(g);
  folded.base = -1;
  auto c = core(folded);
  if (c.edges.empty()) throw Error(ErrorKind::Validation, "loops are null-homotopic");
  CubeComplex s(static_cast<std::size_t>(c.vertices));
  std::vector<CubeId> vimg(static_cast<std::size_t>(c.vertices), -1);
  std::vector<std::pair<CubeId, bool>> eimg;
  for (const auto& e : c.edges) {
    s.add_edge(e.from, e.to);
    const auto& cs = x->cube(1, e.label).corners;
    vimg[static_cast<std::size_t>(e.from)] = cs[0];
    vimg[static_cast<std::size_t>(e.to)] = cs[1];
    eimg.emplace_back(e.label, false);
  }
  return graph_map(share(std::move(s)), std::move(x), vimg, eimg);
}

inline void require_graph_map(const CubicalMap& f, const char* what) {
  if (f.source->dim() > 1 || f.target->dim() > 1)
    throw Error(ErrorKind::Unsupported, std::string(what) + ": only graphs over graphs are supported");
}

/// Every non-diagonal component of W x_X W is a tree.
inline Certificate malnormal_over_x(const CubicalMap& w) {
  auto cert = make_certificate("malnormal over X");
  auto cs = cone_summary(w, w, true);
  std::size_t off = 0;
  for (const auto& c : cs.components) {
    if (c.diagonal) continue;
    ++off;
    if (c.edges + 1 != c.vertices && cert.passed())
      cert.fail("NonTreeComponent", {{"component", c.index},
                                     {"at", {c.least.first, c.least.second}},
                                     {"vertices", c.vertices},
                                     {"edges", c.edges}});
  }
  cert.add("offdiagonal_components", off);
  return cert;
}

struct CoreResult {
  CubicalMap w_to_y;
  CubicalMap w_to_x;
  Word u, v;
  int n = 0;
  std::size_t constraints = 0;
  Certificate certificate;
};

/// Constraint graph of one fiber component in the generators of Y: edges
/// over the spanning tree are collapsed.
inline LabeledGraph constraint_graph(const FiberProduct& fp, int k, const SpanningTree& t) {
  const auto& comp = fp.components[static_cast<std::size_t>(k)];
  const CubeComplex& c = *fp.complex;
  auto verts = comp.cells.vertices();
  std::map<CubeId, int> parent;
  for (CubeId v : verts) parent[v] = v;
  std::function<CubeId(CubeId)> find = [&](CubeId a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (CubeId e : comp.cells.cells[1]) {
    const auto& im = fp.left.image(1, e);
    if (t.generator_of_edge[static_cast<std::size_t>(im.id)] >= 0) continue;
    auto a = find(c.cube(1, e).corners[0]), b = find(c.cube(1, e).corners[1]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  LabeledGraph g;
  g.rank = static_cast<int>(t.generators.size());
  std::map<CubeId, int> id;
  for (CubeId v : verts)
    if (find(v) == v) id[v] = g.add_vertex();
  for (CubeId e : comp.cells.cells[1]) {
    const auto& im = fp.left.image(1, e);
    int gen = t.generator_of_edge[static_cast<std::size_t>(im.id)];
    if (gen < 0) continue;
    int a = id[find(c.cube(1, e).corners[0])], b = id[find(c.cube(1, e).corners[1])];
    if (im.corr[0].flip) std::swap(a, b);
    g.add_edge(a, b, gen);
  }
  return g;
}

/// Malnormal W -> Y for a graph Y -> X: essential non-diagonal components of
/// Y x_X Y become constraints, the avoider and malnormalization give words,
/// and their folded core is W.
inline CoreResult malnormal_core(const CubicalMap& y, int guard = kDefaultGuard, int max_n = 8) {
  require_graph_map(y, "malnormal_core");
  require_local_isometry(y, "malnormal_core");
  auto pg = pseudograph_certificate(*y.source);
  if (!pg.passed()) throw Error(ErrorKind::Validation, "Y is not a pseudograph: " + pg.reason);
  int rank = 1 - y.source->euler_characteristic();
  if (rank < 2) throw Error(ErrorKind::RankTooLow, "Y has rank " + std::to_string(rank));
  CoreResult out;
  auto cert = make_certificate("malnormal_core");
  cert.add("rank", rank);
  cert.add("guard", guard);
  auto t = spanning_tree(*y.source);
  auto fp = fiber_product(y, y);
  std::vector<LabeledGraph> constraints;
  for (const auto& c : fp.components) {
    if (c.diagonal || c.point() || c.cells.count(1) + 1 == c.cells.count(0)) continue;
    constraints.push_back(constraint_graph(fp, c.id, t));
  }
  out.constraints = constraints.size();
  cert.add("constraints", constraints.size());
  if (constraints.empty()) {
    out.w_to_y = identity_map(y.source);
    out.w_to_x = y;
    cert.add("W", "Y");
    cert.absorb(malnormal_over_x(out.w_to_x));
    out.certificate = std::move(cert);
    return out;
  }
  auto av = avoider(rank, constraints);
  cert.absorb(av.certificate);
  Certificate check = make_certificate("malnormal over X");
  for (int n = 1; n <= max_n; ++n) {
    auto [u2, v2] = malnormal_words(av.sigma1, av.sigma2, n);
    out.u = u2;
    out.v = v2;
    out.n = n;
    out.w_to_y = loops_core(y.source, {word_path(*y.source, t, u2), word_path(*y.source, t, v2)});
    out.w_to_x = compose(y, out.w_to_y);
    check = malnormal_over_x(out.w_to_x);
    if (check.passed()) break;
  }
  cert.add("n", out.n);
  cert.add("U'", out.u);
  cert.add("V'", out.v);
  cert.add("W_vertices", out.w_to_y.source->vertex_count());
  cert.add("W_edges", out.w_to_y.source->count(1));
  cert.add("hull", "folded core");
  cert.absorb(std::move(check));
  out.certificate = std::move(cert);
  return out;
}

struct RelatorResult {
  std::vector<CubicalMap> z_to_w;
  std::vector<CubicalMap> z_to_x;
  std::vector<std::pair<Word, Word>> words;
  int m = 0, n = 0;
  std::size_t examined = 0;
  Certificate certificate;
};

namespace detail {

/// The k-th relator's words: the second family swaps b for B so its
/// readings share only single-letter runs with the first.
inline std::pair<Word, Word> relator_words(int m, int n, int k) {
  auto [u, v] = sc_words(m, n);
  if (k == 1)
    for (Word* w : {&u, &v})
      for (char& c : *w)
        if (c == 'b') c = 'B';
  return {u, v};
}

inline bool is_bouquet_identity(const CubicalMap& w) {
  if (w.source->vertex_count() != 1 || w.target->vertex_count() != 1 || w.source->count(1) != w.target->count(1)) return false;
  for (std::size_t e = 0; e < w.source->count(1); ++e) {
    const auto& im = w.image(1, static_cast<CubeId>(e));
    if (im.id != static_cast<CubeId>(e) || im.corr[0].flip) return false;
  }
  return true;
}

inline RelatorResult search_relators(const CubicalMap& w, const Rational& alpha, int min_sys, long budget, int guard, int count) {
  require_graph_map(w, "build_relator");
  if (alpha <= 0 || alpha > 1) throw Error(ErrorKind::Validation, "alpha must lie in (0, 1]");
  int rank = 1 - w.source->euler_characteristic();
  if (rank < 2) throw Error(ErrorKind::RankTooLow, "W has rank " + std::to_string(rank));
  auto t = spanning_tree(*w.source);
  bool bouquet = is_bouquet_identity(w);
  std::shared_ptr<const CubeComplex> wsrc = w.source;
  RelatorResult out;
  std::size_t arithmetic = 0, graphical = 0, verified = 0;
  for (int s = 4;; ++s)
    for (int m = 2; m <= s - 2; ++m) {
      int n = s - m;
      if (static_cast<long>(out.examined) >= budget)
        throw Error(ErrorKind::BudgetExhausted, "no relator verified within " + std::to_string(budget) + " candidates");
      ++out.examined;
      std::vector<std::pair<Word, Word>> words;
      std::vector<std::vector<EdgePath>> loops;
      bool skip = false;
      // a^(m-2) b a^(m-1) reads twice, so some piece has at least 2max(m,n)-2 edges
      int piece_floor = 2 * std::max(m, n) - 2;
      for (int k = 0; k < count && !skip; ++k) {
        words.push_back(relator_words(m, n, k));
        loops.push_back({word_path(*wsrc, t, words.back().first), word_path(*wsrc, t, words.back().second)});
        auto sys_ceiling = static_cast<std::int64_t>(std::min(loops.back()[0].size(), loops.back()[1].size()));
        if (sys_ceiling < min_sys || !less_than_scaled(piece_floor, alpha, sys_ceiling)) skip = true;
      }
      if (skip) {
        ++arithmetic;
        continue;
      }
      if (bouquet) {
        std::vector<Word> all;
        for (const auto& [u, v] : words) {
          all.push_back(u);
          all.push_back(v);
        }
        if (!graphical_cprime(rank, all, alpha).passed()) {
          ++graphical;
          continue;
        }
      }
      ++verified;
      CubicalPresentation pres{w.target, {}};
      std::vector<CubicalMap> zw;
      for (const auto& l : loops) {
        zw.push_back(loops_core(wsrc, l));
        pres.relators.push_back(compose(w, zw.back()));
      }
      auto cp = check_cprime(pres, alpha, guard);
      if (!cp.passed()) continue;
      auto sys_cert = make_certificate("systole");
      sys_cert.add("min_sys", min_sys);
      for (std::size_t k = 0; k < pres.relators.size(); ++k) {
        auto sy = systole(pres.relators[k].source, guard);
        sys_cert.add("Z" + std::to_string(k), sy.str());
        if (!sy.exact || sy.value < min_sys) sys_cert.fail("SystoleBelowTarget", {{"relator", k}, {"systole", sy.str()}});
      }
      if (!sys_cert.passed()) continue;
      out.m = m;
      out.n = n;
      out.words = words;
      out.z_to_w = std::move(zw);
      out.z_to_x = std::move(pres.relators);
      auto cert = make_certificate(count == 1 ? "build_relator" : "build_relator_pair");
      cert.add("alpha", alpha);
      cert.add("min_sys", min_sys);
      cert.add("m", m);
      cert.add("n", n);
      cert.add("examined", out.examined);
      cert.add("arithmetic_rejects", arithmetic);
      cert.add("graphical_rejects", graphical);
      cert.add("verified", verified);
      for (std::size_t k = 0; k < out.words.size(); ++k) {
        cert.add("U" + std::to_string(k), out.words[k].first);
        cert.add("V" + std::to_string(k), out.words[k].second);
      }
      cert.absorb(std::move(cp));
      cert.absorb(std::move(sys_cert));
      out.certificate = std::move(cert);
      return out;
    }
}

}  // namespace detail

/// First (m, n) in order of m + n, then m, whose relator passes C'(alpha) and
/// has systole at least min_sys. `budget` bounds the candidates examined.
inline RelatorResult build_relator(const CubicalMap& w, const Rational& alpha, int min_sys, long budget = 100000,
                                   int guard = kDefaultGuard) {
  return detail::search_relators(w, alpha, min_sys, budget, guard, 1);
}

/// Two relators passing C'(alpha) jointly, cross pieces included.
inline RelatorResult build_relator_pair(const CubicalMap& w, const Rational& alpha, int min_sys, long budget = 100000,
                                        int guard = kDefaultGuard) {
  return detail::search_relators(w, alpha, min_sys, budget, guard, 2);
}

// ---------------------------------------------------------------------------
// Plans

struct QuotientPlan {
  CubicalMap y;
  CoreResult core;
  RelatorResult relators;
  Rational alpha{1};
  int min_sys = 0;
  /// Words checked for survival, with their lengths.
  std::vector<std::pair<Word, int>> survive;
  Certificate certificate;
};

inline int minimal_systole(const RelatorResult& r, int guard) {
  int best = std::numeric_limits<int>::max();
  for (const auto& z : r.z_to_x) best = std::min(best, systole(z.source, guard).value);
  return best;
}

inline QuotientPlan quotient_build(const CubicalMap& y, const Rational& alpha, int min_sys, long budget, bool pair,
                                   const std::vector<Word>& survive = {}, int guard = kDefaultGuard) {
  QuotientPlan plan;
  plan.y = y;
  plan.alpha = alpha;
  int longest = 0;
  for (const auto& w : survive) {
    auto r = free_reduce(w);
    plan.survive.emplace_back(r, static_cast<int>(r.size()));
    longest = std::max(longest, static_cast<int>(r.size()));
  }
  // sys(Z) > n keeps every word of length <= n alive
  plan.min_sys = std::max(min_sys, survive.empty() ? 0 : longest + 1);
  plan.core = malnormal_core(y, guard);
  plan.relators = pair ? build_relator_pair(plan.core.w_to_x, alpha, plan.min_sys, budget, guard)
                       : build_relator(plan.core.w_to_x, alpha, plan.min_sys, budget, guard);
  auto cert = make_certificate(pair ? "quotient pair" : "quotient build");
  cert.add("alpha", alpha);
  cert.add("min_sys", plan.min_sys);
  cert.add("kappa", "not computed");
  cert.add("epsilon", "not computed");
  cert.add("beta", "not used");
  cert.absorb(plan.core.certificate);
  cert.absorb(plan.relators.certificate);
  if (!plan.survive.empty()) {
    auto sv = make_certificate("survival");
    int sys = minimal_systole(plan.relators, guard);
    for (const auto& [w, len] : plan.survive) {
      sv.add(w.empty() ? std::string("(empty)") : w, len < sys ? "survives" : "unknown");
      if (len >= sys) sv.fail("WordTooLong", {{"word", w}, {"length", len}, {"systole", sys}});
    }
    cert.absorb(std::move(sv));
  }
  plan.certificate = std::move(cert);
  return plan;
}

/// Files of a plan: complexes, maps referencing them, and the manifest.
inline std::vector<std::pair<std::string, Json>> plan_files(const QuotientPlan& plan) {
  std::vector<std::pair<std::string, Json>> files;
  files.emplace_back("x.json", complex_to_json(*plan.y.target));
  files.emplace_back("y.json", complex_to_json(*plan.y.source));
  files.emplace_back("w.json", complex_to_json(*plan.core.w_to_y.source));
  files.emplace_back("y.map.json", map_to_json(plan.y, "y.json", "x.json"));
  files.emplace_back("w_to_y.map.json", map_to_json(plan.core.w_to_y, "w.json", "y.json"));
  files.emplace_back("w.map.json", map_to_json(plan.core.w_to_x, "w.json", "x.json"));
  Json zs = Json::array(), zws = Json::array();
  for (std::size_t k = 0; k < plan.relators.z_to_x.size(); ++k) {
    auto name = "z" + std::to_string(k);
    files.emplace_back(name + ".json", complex_to_json(*plan.relators.z_to_x[k].source));
    files.emplace_back(name + ".map.json", map_to_json(plan.relators.z_to_x[k], name + ".json", "x.json"));
    files.emplace_back(name + "_to_w.map.json", map_to_json(plan.relators.z_to_w[k], name + ".json", "w.json"));
    zs.push_back(name + ".map.json");
    zws.push_back(name + "_to_w.map.json");
  }
  Json words = Json::array();
  for (const auto& [u, v] : plan.relators.words) words.push_back({u, v});
  Json manifest;
  manifest["x"] = "x.json";
  manifest["maps"] = {{"y", "y.map.json"}, {"w_to_y", "w_to_y.map.json"}, {"w", "w.map.json"}, {"z", zs}, {"z_to_w", zws}};
  manifest["alpha"] = format_rational(plan.alpha);
  manifest["min_sys"] = plan.min_sys;
  manifest["parameters"] = {{"m", plan.relators.m}, {"n", plan.relators.n}, {"words", words}};
  manifest["certificate"] = to_json(plan.certificate);
  files.emplace_back("manifest.json", std::move(manifest));
  return files;
}

/// Re-runs the relator checks of a written plan and compares with the stored verdicts.
inline Certificate verify_plan(const std::filesystem::path& manifest_path, int guard = kDefaultGuard) {
  auto manifest = read_json(manifest_path);
  auto dir = manifest_path.parent_path();
  auto cert = make_certificate("verify plan");
  auto x = load_complex(dir / manifest["x"].get<std::string>());
  auto xs = share(std::move(x));
  auto load = [&](const std::string& name) { return map_from_json(read_json(dir / name), dir, name, nullptr, xs); };
  auto w = load(manifest["maps"]["w"].get<std::string>());
  for (const auto* m : {&w})
    if (!check_local_isometry(*m).passed()) cert.fail("map is not a local isometry");
  cert.absorb(malnormal_over_x(w));
  CubicalPresentation pres{xs, {}};
  for (const auto& z : manifest["maps"]["z"]) pres.relators.push_back(load(z.get<std::string>()));
  auto alpha = parse_rational(manifest["alpha"].get<std::string>());
  auto cp = check_cprime(pres, alpha, guard);
  // the stored tree holds the same cprime certificate under the relator search
  const Json& stored = manifest["certificate"];
  bool found = false;
  std::function<void(const Json&)> seek = [&](const Json& j) {
    if (j.value("check", "") == "cprime" && j == to_json(cp)) found = true;
    if (j.contains("children"))
      for (const auto& c : j["children"]) seek(c);
  };
  seek(stored);
  cert.add("cprime", std::string(to_string(cp.status)));
  cert.add("matches_stored", found);
  if (!found) cert.fail("ReportMismatch");
  cert.absorb(std::move(cp));
  return cert;
}

// ---------------------------------------------------------------------------
// Regular covers

struct FiniteGroup {
  std::vector<std::vector<int>> table;
  int identity = 0;
  std::vector<int> inverse;
  int order() const { return static_cast<int>(table.size()); }
  int mul(int a, int b) const { return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
};

inline FiniteGroup finite_group(std::vector<std::vector<int>> table) {
  FiniteGroup g;
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error(ErrorKind::Validation, "group table is empty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw Error(ErrorKind::Validation, "group table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw Error(ErrorKind::Validation, "group table entry out of range");
  }
  g.table = std::move(table);
  g.identity = -1;
  for (int e = 0; e < n && g.identity < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = g.mul(e, a) == a && g.mul(a, e) == a;
    if (ok) g.identity = e;
  }
  if (g.identity < 0) throw Error(ErrorKind::Validation, "group table has no identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) throw Error(ErrorKind::Validation, "group table is not associative");
  g.inverse.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.mul(a, b) == g.identity) g.inverse[static_cast<std::size_t>(a)] = b;
  if (std::find(g.inverse.begin(), g.inverse.end(), -1) != g.inverse.end()) throw Error(ErrorKind::Validation, "group table lacks inverses");
  return g;
}

inline FiniteGroup cyclic_group(int n) {
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
  return finite_group(std::move(t));
}

/// {"table": [[...]], "images": [...]}; images are optional here.
inline std::pair<FiniteGroup, std::vector<int>> group_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("table")) throw Error(ErrorKind::Parse, "group needs a 'table'");
  std::vector<std::vector<int>> t;
  std::vector<int> images;
  try {
    t = j["table"].get<std::vector<std::vector<int>>>();
    if (j.contains("images")) images = j["images"].get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("group: ") + e.what());
  }
  return {finite_group(std::move(t)), std::move(images)};
}

struct CoverResult {
  CubicalMap cover;  // Z^ -> Z
  CubicalMap to_x;   // Z^ -> X
  std::size_t deck_order = 0;
  Certificate certificate;
};

/// Cover with fiber H: cell (c, h) has its corner 0 on sheet h, and crossing a
/// non-tree edge forward multiplies the sheet by that generator's image.
inline CoverResult regular_cover(const CubicalMap& z, const FiniteGroup& h, const std::vector<int>& images) {
  const CubeComplex& x = *z.source;
  auto t = spanning_tree(x);
  if (images.size() != t.generators.size())
    throw Error(ErrorKind::Validation, "expected " + std::to_string(t.generators.size()) + " generator images, got " +
                                           std::to_string(images.size()));
  for (int v : images)
    if (v < 0 || v >= h.order()) throw Error(ErrorKind::Validation, "generator image out of range");
  const int n = h.order();
  auto label = [&](EdgeEnd e) {
    int g = t.generator_of_edge[static_cast<std::size_t>(e.edge)];
    int val = g < 0 ? h.identity : images[static_cast<std::size_t>(g)];
    return e.side == 0 ? val : h.inverse[static_cast<std::size_t>(val)];
  };
  // product along the path from corner 0 to `lab`, one axis at a time
  auto corner_sheet = [&](int d, CubeId c, std::uint32_t lab) {
    int s = h.identity;
    std::uint32_t at = 0;
    for (int a = 0; a < d; ++a)
      if ((lab >> a) & 1u) {
        s = h.mul(s, label(x.edge_at(d, c, at, a)));
        at |= 1u << a;
      }
    return s;
  };
  for (std::size_t c = 0; c < x.count(2); ++c) {
    auto id = static_cast<CubeId>(c);
    int one = h.mul(label(x.edge_at(2, id, 0, 0)), label(x.edge_at(2, id, 1, 1)));
    int two = h.mul(label(x.edge_at(2, id, 0, 1)), label(x.edge_at(2, id, 2, 0)));
    if (one != two) throw Error(ErrorKind::NotAHomomorphism, "square " + std::to_string(c) + " maps to a nontrivial element");
  }
  // generated subgroup must be all of H for the cover to be connected
  std::set<int> sub{h.identity};
  for (bool grew = true; grew;) {
    grew = false;
    for (int a : std::vector<int>(sub.begin(), sub.end()))
      for (int g : images)
        if (sub.insert(h.mul(a, g)).second) grew = true;
  }
  if (static_cast<int>(sub.size()) != n) throw Error(ErrorKind::Validation, "generator images do not generate H");

  CubeComplex cov(x.vertex_count() * static_cast<std::size_t>(n));
  CubicalMap f;
  f.images.resize(static_cast<std::size_t>(x.dim() + 1));
  for (std::size_t v = 0; v < cov.vertex_count(); ++v) f.images[0].push_back({static_cast<CubeId>(v / static_cast<std::size_t>(n)), {}});
  for (int d = 1; d <= x.dim(); ++d)
    for (std::size_t c = 0; c < x.count(d); ++c)
      for (int s = 0; s < n; ++s) {
        const Cube& src = x.cube(d, static_cast<CubeId>(c));
        Cube cc;
        for (std::uint32_t lab = 0; lab < src.corners.size(); ++lab)
          cc.corners.push_back(src.corners[lab] * n + h.mul(s, corner_sheet(d, static_cast<CubeId>(c), lab)));
        for (int a = 0; a < d; ++a)
          for (int side = 0; side < 2; ++side) {
            const Facet& fa = src.faces[static_cast<std::size_t>(2 * a + side)];
            std::uint32_t lab = facet_label_in_parent(0, a, side, fa.corr);
            cc.faces.push_back({fa.id * n + h.mul(s, corner_sheet(d, static_cast<CubeId>(c), lab)), fa.corr});
          }
        cov.add_cube(d, std::move(cc));
        f.images[static_cast<std::size_t>(d)].push_back({static_cast<CubeId>(c), identity_frame(d)});
      }
  f.source = share(std::move(cov));
  f.target = z.source;
  CoverResult out;
  out.cover = std::move(f);
  out.to_x = compose(z, out.cover);
  auto cert = make_certificate("regular cover");
  cert.add("order", n);
  cert.add("generators", t.generators.size());
  cert.absorb(validate_map(out.cover));
  if (out.cover.source->dim() <= 1) {
    auto cs = cone_summary(out.cover, out.cover, true);
    out.deck_order = automorphism_vertex_maps(out.cover, cs).size();
  } else {
    out.deck_order = aut_over_x(out.cover).size();
  }
  cert.add("deck_group_order", out.deck_order);
  if (out.deck_order != static_cast<std::size_t>(n)) cert.fail("DeckGroupMismatch", {{"deck", out.deck_order}, {"order", n}});
  out.certificate = std::move(cert);
  return out;
}

}  // namespace cubecx
