#pragma once

#include "cubecx/hyperplane.hpp"
#include "cubecx/io.hpp"
#include "cubecx/smallcancel.hpp"

#include <optional>

namespace cubecx {

/// Walls partition the hyperplanes of `complex`; hyperplane ids follow edge_classes.
struct Wallspace {
  std::shared_ptr<const CubeComplex> complex;
  std::vector<std::vector<int>> walls;
  /// Closed geodesics the walls were read from (steps are edge-ends at the vertex left).
  std::vector<std::vector<EdgeEnd>> sigma;
  bool subdivided = false;

  std::vector<int> wall_of() const {
    std::size_t n = 0;
    for (const auto& w : walls)
      for (int h : w) n = std::max(n, static_cast<std::size_t>(h) + 1);
    std::vector<int> out(n, -1);
    for (std::size_t k = 0; k < walls.size(); ++k)
      for (int h : walls[k]) out[static_cast<std::size_t>(h)] = static_cast<int>(k);
    return out;
  }
};

/// Every hyperplane in exactly one wall.
inline void validate_wallspace(const Wallspace& ws) {
  if (!ws.complex) throw Error(ErrorKind::Validation, "wallspace has no complex");
  auto cls = edge_classes(*ws.complex);
  std::vector<int> seen(cls.size(), 0);
  for (const auto& w : ws.walls) {
    if (w.empty()) throw Error(ErrorKind::Validation, "empty wall");
    for (int h : w) {
      if (h < 0 || static_cast<std::size_t>(h) >= cls.size())
        throw Error(ErrorKind::Validation, "wall names unknown hyperplane " + std::to_string(h));
      ++seen[static_cast<std::size_t>(h)];
    }
  }
  for (std::size_t h = 0; h < seen.size(); ++h)
    if (seen[h] != 1)
      throw Error(ErrorKind::Validation, "hyperplane " + std::to_string(h) + " lies in " + std::to_string(seen[h]) + " walls");
}

namespace detail {

inline bool closed_path(const CubeComplex& x, const std::vector<EdgeEnd>& p) {
  if (p.empty()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].edge < 0 || static_cast<std::size_t>(p[i].edge) >= x.count(1) || (p[i].side != 0 && p[i].side != 1)) return false;
    if (x.edge_vertex(x.opposite(p[i])) != x.edge_vertex(p[(i + 1) % p.size()])) return false;
  }
  return true;
}

inline std::vector<EdgeEnd> least_rotation(std::vector<EdgeEnd> p) {
  auto best = p;
  for (std::size_t r = 1; r < p.size(); ++r) {
    std::rotate(p.begin(), p.begin() + 1, p.end());
    if (p < best) best = p;
  }
  return best;
}

/// Walls from antipodal pairs along each geodesic; unpaired hyperplanes stand alone.
inline std::vector<std::vector<int>> antipodal_union(const CubeComplex& x, const std::vector<std::vector<EdgeEnd>>& sigmas) {
  auto cls = edge_classes(x);
  std::vector<int> parent(cls.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    return parent[static_cast<std::size_t>(a)] == a ? a : parent[static_cast<std::size_t>(a)] = find(parent[static_cast<std::size_t>(a)]);
  };
  for (const auto& s : sigmas) {
    std::size_t n = s.size() / 2;
    for (std::size_t k = 0; k < n; ++k) {
      int a = find(cls.of_edge[static_cast<std::size_t>(s[k].edge)]);
      int b = find(cls.of_edge[static_cast<std::size_t>(s[k + n].edge)]);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int h = 0; h < static_cast<int>(cls.size()); ++h) groups[find(h)].push_back(h);
  std::vector<std::vector<int>> out;
  for (auto& [r, g] : groups) out.push_back(std::move(g));
  return out;
}

}  // namespace detail

/// Antipodal wall structure from a systolic geodesic, subdividing first when it is odd.
inline Wallspace antipodal_walls(std::shared_ptr<const CubeComplex> y, std::vector<EdgeEnd> sigma = {},
                                 int guard = kDefaultGuard) {
  auto sys = systole(y, guard);
  if (!sys.exact) throw Error(ErrorKind::GuardExhausted, "systole not found within guard " + std::to_string(guard));
  Wallspace ws;
  if (sigma.empty()) {
    sigma = detail::least_rotation(sys.witness);
  } else {
    if (!detail::closed_path(*y, sigma)) throw Error(ErrorKind::Validation, "sigma is not a closed path");
    if (static_cast<int>(sigma.size()) > sys.value)
      throw Error(ErrorKind::NotSystolic, "sigma has length " + std::to_string(sigma.size()) + " but the systole is " + std::to_string(sys.value));
    if (static_cast<int>(sigma.size()) < sys.value) throw Error(ErrorKind::Validation, "sigma is shorter than the systole");
  }
  if (sigma.size() % 2 == 1) {
    y = share(subdivide(*y));
    auto sys2 = systole(y, 2 * guard);
    sigma = detail::least_rotation(sys2.witness);
    ws.subdivided = true;
  }
  ws.complex = y;
  ws.walls = detail::antipodal_union(*y, {sigma});
  ws.sigma = {sigma};
  return ws;
}

/// Y = Z1 u K u Z2 with Z1 n Z2 inside K, K contractible and locally convex,
/// and sigma_i a systolic closed path of Z_i of even length.
struct Rank2Decomposition {
  std::shared_ptr<const CubeComplex> y;
  Subcomplex z1, z2, k;
  std::vector<EdgeEnd> sigma1, sigma2;
};

namespace detail {

inline Subcomplex cell_union(const Subcomplex& a, const Subcomplex& b) {
  Subcomplex out;
  out.cells.resize(std::max(a.cells.size(), b.cells.size()));
  for (std::size_t d = 0; d < out.cells.size(); ++d) {
    std::vector<CubeId> u;
    const std::vector<CubeId> none;
    const auto& x = d < a.cells.size() ? a.cells[d] : none;
    const auto& y = d < b.cells.size() ? b.cells[d] : none;
    std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(u));
    out.cells[d] = std::move(u);
  }
  return out;
}

inline Subcomplex cell_intersection(const Subcomplex& a, const Subcomplex& b) {
  Subcomplex out;
  out.cells.resize(std::min(a.cells.size(), b.cells.size()));
  for (std::size_t d = 0; d < out.cells.size(); ++d)
    std::set_intersection(a.cells[d].begin(), a.cells[d].end(), b.cells[d].begin(), b.cells[d].end(), std::back_inserter(out.cells[d]));
  return out;
}

inline bool inside(const Subcomplex& a, const Subcomplex& b) {
  for (std::size_t d = 0; d < a.cells.size(); ++d)
    for (CubeId c : a.cells[d])
      if (!b.contains(static_cast<int>(d), c)) return false;
  return true;
}

inline CubicalMap inclusion(std::shared_ptr<const CubeComplex> y, const Subcomplex& s) {
  auto ex = extract(*y, s);
  CubicalMap f;
  f.source = share(std::move(ex.complex));
  f.target = std::move(y);
  f.images.resize(ex.origin.size());
  for (std::size_t d = 0; d < ex.origin.size(); ++d)
    for (CubeId c : ex.origin[d]) f.images[d].push_back({c, identity_frame(static_cast<int>(d))});
  return f;
}

inline Subcomplex sorted(Subcomplex s) {
  for (auto& v : s.cells) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return s;
}

}  // namespace detail

inline int subcomplex_diameter(const CubeComplex& y, const Subcomplex& s) {
  auto v = s.vertices();
  if (v.empty()) return 0;
  return vertex_set_diameter(y, std::vector<CubeId>(v.begin(), v.end()));
}

/// Throws DecompositionInvalid naming the first invariant that fails.
inline void validate_decomposition(const Rank2Decomposition& d, int guard = kDefaultGuard) {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::DecompositionInvalid, what); };
  if (!d.y) bad("no complex");
  const CubeComplex& y = *d.y;
  for (const auto* s : {&d.z1, &d.z2, &d.k}) {
    for (std::size_t dim = 0; dim < s->cells.size(); ++dim) {
      if (!std::is_sorted(s->cells[dim].begin(), s->cells[dim].end())) bad("cell lists must be sorted");
      for (CubeId c : s->cells[dim])
        if (c < 0 || static_cast<int>(dim) > y.dim() || static_cast<std::size_t>(c) >= y.count(static_cast<int>(dim))) bad("cell out of range");
    }
    if (!detail::inside(face_closure(y, *s), *s)) bad("a piece of the decomposition is not a subcomplex");
  }
  auto all = detail::cell_union(detail::cell_union(d.z1, d.z2), d.k);
  for (int dim = 0; dim <= y.dim(); ++dim)
    if (all.count(dim) != y.count(dim)) bad("Y is not Z1 u K u Z2");
  if (!detail::inside(detail::cell_intersection(d.z1, d.z2), d.k)) bad("Z1 n Z2 is not contained in K");
  if (d.k.count(0) == 0) bad("K is empty");
  auto kin = detail::inclusion(d.y, d.k);
  if (!kin.source->connected() || contractibility(*kin.source) != Tri::yes) bad("K is not contractible");
  if (!check_local_isometry(kin).passed()) bad("K is not locally convex");
  int i = 1;
  for (const auto& [z, sigma] : {std::pair{&d.z1, &d.sigma1}, std::pair{&d.z2, &d.sigma2}}) {
    auto name = "Z" + std::to_string(i++);
    auto zin = detail::inclusion(d.y, *z);
    if (!zin.source->connected() || zin.source->euler_characteristic() != 0) bad(name + " is not a connected rank 1 complex");
    if (!detail::closed_path(y, *sigma)) bad("sigma of " + name + " is not a closed path");
    for (const auto& e : *sigma)
      if (!z->contains(1, e.edge)) bad("sigma of " + name + " leaves " + name);
    auto sys = systole(zin.source, guard);
    if (!sys.exact || static_cast<int>(sigma->size()) != sys.value) bad("sigma of " + name + " is not systolic");
    if (sigma->size() % 2) bad("sigma of " + name + " has odd length");
  }
}

/// Antipodal walls of Z1 and Z2; a hyperplane of K joins its antipodes in both.
inline Wallspace rank2_walls(const Rank2Decomposition& d, int guard = kDefaultGuard) {
  validate_decomposition(d, guard);
  Wallspace ws;
  ws.complex = d.y;
  ws.walls = detail::antipodal_union(*d.y, {d.sigma1, d.sigma2});
  ws.sigma = {d.sigma1, d.sigma2};
  return ws;
}

/// Splits a rank 2 core graph: figure eight (K = the branch vertex), barbell
/// (K = the bar) or theta (K = the shortest arc, Z_i = K plus another arc).
inline Rank2Decomposition rank2_graph_decomposition(std::shared_ptr<const CubeComplex> y) {
  const CubeComplex& g = *y;
  if (g.dim() > 1) throw Error(ErrorKind::Unsupported, "rank 2 decomposition is automatic only for graphs");
  if (!g.connected() || g.euler_characteristic() != -1) throw Error(ErrorKind::DecompositionInvalid, "not a connected rank 2 graph");
  auto ends = g.edge_ends();
  std::vector<CubeId> branch;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (ends[v].size() == 1) throw Error(ErrorKind::DecompositionInvalid, "graph is not a core (valence 1 vertex)");
    if (ends[v].size() >= 3) branch.push_back(static_cast<CubeId>(v));
  }
  // arcs between branch vertices, each as a path of steps
  std::vector<std::vector<EdgeEnd>> arcs;
  std::set<CubeId> used;
  for (CubeId b : branch)
    for (const auto& e0 : ends[static_cast<std::size_t>(b)]) {
      if (used.count(e0.edge)) continue;
      std::vector<EdgeEnd> arc{e0};
      used.insert(e0.edge);
      CubeId at = g.edge_vertex(g.opposite(e0));
      while (ends[static_cast<std::size_t>(at)].size() == 2) {
        const auto& es = ends[static_cast<std::size_t>(at)];
        EdgeEnd next = es[0] == g.opposite(arc.back()) ? es[1] : es[0];
        arc.push_back(next);
        used.insert(next.edge);
        at = g.edge_vertex(g.opposite(next));
      }
      arcs.push_back(std::move(arc));
    }
  auto start = [&](const std::vector<EdgeEnd>& p) { return g.edge_vertex(p.front()); };
  auto end = [&](const std::vector<EdgeEnd>& p) { return g.edge_vertex(g.opposite(p.back())); };
  auto reversed = [&](const std::vector<EdgeEnd>& p) {
    std::vector<EdgeEnd> r;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r.push_back(g.opposite(*it));
    return r;
  };
  auto cells_of = [&](const std::vector<std::vector<EdgeEnd>>& paths, std::vector<CubeId> extra) {
    Subcomplex s;
    s.cells.resize(2);
    for (const auto& p : paths)
      for (const auto& e : p) {
        s.cells[1].push_back(e.edge);
        s.cells[0].push_back(g.edge_vertex(e));
        s.cells[0].push_back(g.edge_vertex(g.opposite(e)));
      }
    for (CubeId v : extra) s.cells[0].push_back(v);
    return detail::sorted(std::move(s));
  };
  Rank2Decomposition d;
  d.y = y;
  if (branch.size() == 1 && arcs.size() == 2) {
    d.sigma1 = arcs[0];
    d.sigma2 = arcs[1];
    d.z1 = cells_of({arcs[0]}, {});
    d.z2 = cells_of({arcs[1]}, {});
    d.k = cells_of({}, {branch[0]});
  } else if (branch.size() == 2 && arcs.size() == 3) {
    std::vector<std::vector<EdgeEnd>> loops, bars;
    for (const auto& a : arcs) (start(a) == end(a) ? loops : bars).push_back(a);
    if (loops.size() == 2) {
      d.sigma1 = loops[0];
      d.sigma2 = loops[1];
      d.z1 = cells_of({loops[0]}, {});
      d.z2 = cells_of({loops[1]}, {});
      d.k = cells_of({bars[0]}, {});
    } else {
      std::stable_sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
      // orient every arc from branch[0]
      for (auto& a : arcs)
        if (start(a) != branch[0]) a = reversed(a);
      const auto& r = arcs[0];
      auto close = [&](const std::vector<EdgeEnd>& p) {
        auto s = p;
        auto back = reversed(r);
        s.insert(s.end(), back.begin(), back.end());
        return s;
      };
      d.sigma1 = close(arcs[1]);
      d.sigma2 = close(arcs[2]);
      d.z1 = cells_of({arcs[1], r}, {});
      d.z2 = cells_of({arcs[2], r}, {});
      d.k = cells_of({r}, {});
    }
  } else {
    throw Error(ErrorKind::DecompositionInvalid, "unexpected branch structure");
  }
  return d;
}

// ---------------------------------------------------------------------------
// Checks

struct HyperplaneData {
  std::vector<Hyperplane> planes;
  EdgeClasses classes;
  /// Diameter of each carrier, measured in the complex.
  std::vector<int> carrier_diameter;
  int max_carrier_diameter() const {
    int m = 0;
    for (int d : carrier_diameter) m = std::max(m, d);
    return m;
  }
};

inline HyperplaneData hyperplane_data(const CubeComplex& y) {
  HyperplaneData h;
  h.planes = hyperplanes(y);
  h.classes = edge_classes(y);
  auto ends = y.edge_ends();
  for (const auto& p : h.planes) {
    auto v = p.carrier.vertices();
    int best = 0;
    for (CubeId a : v) {
      auto dist = bfs_distances(y, a, ends);
      for (CubeId b : v) best = std::max(best, dist[static_cast<std::size_t>(b)]);
    }
    h.carrier_diameter.push_back(best);
  }
  return h;
}

/// Each wall: embedded two-sided hyperplanes with disjoint carriers whose
/// removal disconnects the complex.
inline Certificate check_wall_separation(const Wallspace& ws) {
  validate_wallspace(ws);
  const CubeComplex& y = *ws.complex;
  auto cert = make_certificate("wall separation");
  cert.add("walls", ws.walls.size());
  auto hs = hyperplanes(y);
  auto cls = edge_classes(y);
  auto ends = y.edge_ends();
  for (std::size_t k = 0; k < ws.walls.size() && cert.passed(); ++k) {
    const auto& wall = ws.walls[k];
    Json where{{"wall", k}, {"hyperplanes", wall}};
    for (int h : wall) {
      const auto& p = hs[static_cast<std::size_t>(h)];
      if (!p.embedded || !p.two_sided) {
        where["hyperplane"] = h;
        cert.fail(p.embedded ? "HyperplaneOneSided" : "HyperplaneNotEmbedded", where);
        break;
      }
    }
    if (!cert.passed()) break;
    for (std::size_t a = 0; a < wall.size() && cert.passed(); ++a)
      for (std::size_t b = a + 1; b < wall.size(); ++b) {
        auto va = hs[static_cast<std::size_t>(wall[a])].carrier.vertices();
        auto vb = hs[static_cast<std::size_t>(wall[b])].carrier.vertices();
        std::vector<CubeId> common;
        std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
        if (!common.empty()) {
          where["meet"] = {wall[a], wall[b]};
          where["vertex"] = common.front();
          cert.fail("CarriersMeet", where);
          break;
        }
      }
    if (!cert.passed()) break;
    std::set<int> cut(wall.begin(), wall.end());
    std::vector<int> comp(y.vertex_count(), -1);
    int count = 0;
    for (std::size_t s = 0; s < y.vertex_count(); ++s) {
      if (comp[s] >= 0) continue;
      std::deque<CubeId> q{static_cast<CubeId>(s)};
      comp[s] = count;
      while (!q.empty()) {
        CubeId v = q.front();
        q.pop_front();
        for (const auto& e : ends[static_cast<std::size_t>(v)]) {
          if (cut.count(cls.of_edge[static_cast<std::size_t>(e.edge)])) continue;
          CubeId w = y.edge_vertex(y.opposite(e));
          if (comp[static_cast<std::size_t>(w)] < 0) {
            comp[static_cast<std::size_t>(w)] = count;
            q.push_back(w);
          }
        }
      }
      ++count;
    }
    if (count < 2) cert.fail("WallDoesNotSeparate", where);
  }
  return cert;
}

/// Edge maps of the automorphisms of f over X (identity included).
inline std::vector<std::vector<CubeId>> automorphism_edge_maps(const CubicalMap& f) {
  std::vector<std::vector<CubeId>> out;
  if (f.source->dim() <= 1 && f.target->dim() <= 1) {
    auto cs = cone_summary(f, f, true);
    auto ends = f.source->edge_ends();
    for (const auto& psi : automorphism_vertex_maps(f, cs)) {
      std::vector<CubeId> em;
      for (std::size_t e = 0; e < f.source->count(1); ++e) {
        EdgeEnd from{static_cast<CubeId>(e), 0};
        EdgeEnd want = f.image(from);
        CubeId v = psi[static_cast<std::size_t>(f.source->edge_vertex(from))];
        CubeId hit = -1;
        for (const auto& e2 : ends[static_cast<std::size_t>(v)])
          if (f.image(e2) == want) hit = e2.edge;
        em.push_back(hit);
      }
      out.push_back(std::move(em));
    }
    return out;
  }
  for (const auto& a : aut_over_x(f)) {
    std::vector<CubeId> em;
    for (const auto& im : a.images[1]) em.push_back(im.id);
    out.push_back(std::move(em));
  }
  return out;
}

/// Walls map to walls under every automorphism over X.
inline Certificate check_equivariance(const CubicalMap& f, const Wallspace& ws) {
  auto cert = make_certificate("equivariance");
  auto maps = automorphism_edge_maps(f);
  cert.add("aut_order", maps.size());
  if (ws.complex.get() != f.source.get() && !(*ws.complex == *f.source)) {
    cert.inconclusive("walls live on a subdivision of the relator");
    return cert;
  }
  auto cls = edge_classes(*f.source);
  std::set<std::vector<int>> walls;
  for (auto w : ws.walls) {
    std::sort(w.begin(), w.end());
    walls.insert(w);
  }
  for (std::size_t a = 0; a < maps.size() && cert.passed(); ++a)
    for (const auto& w : ws.walls) {
      std::set<int> image;
      for (int h : w)
        for (CubeId e : cls.members[static_cast<std::size_t>(h)])
          image.insert(cls.of_edge[static_cast<std::size_t>(maps[a][static_cast<std::size_t>(e)])]);
      if (!walls.count(std::vector<int>(image.begin(), image.end()))) {
        cert.fail("WallNotPreserved", {{"automorphism", a}, {"wall", w}});
        break;
      }
    }
  return cert;
}

/// Per relator: its walls, and a rank 2 decomposition when there is one.
struct RelatorWalls {
  Wallspace walls;
  std::optional<Rank2Decomposition> decomposition;
};

namespace detail {

inline Certificate inequality(const std::string& name, bool holds, const Rational& margin) {
  auto c = make_certificate(name);
  c.add("margin", margin);
  if (!holds) c.fail("InequalityFails: " + name, {{"inequality", name}, {"margin", format_rational(margin)}});
  return c;
}

struct RelatorMeasures {
  int sys = 0;
  bool sys_exact = false;
  int carrier = 0;
  std::optional<int> k_diameter;
};

inline RelatorMeasures measure(const CubicalMap& f, const RelatorWalls& rw, int guard) {
  RelatorMeasures m;
  auto s = systole(f.source, guard);
  m.sys = s.value;
  m.sys_exact = s.exact;
  m.carrier = hyperplane_data(*f.source).max_carrier_diameter();
  if (rw.decomposition) m.k_diameter = subcomplex_diameter(*rw.decomposition->y, rw.decomposition->k);
  return m;
}

inline Rational wall_constant(int k, const Rational& alpha) {
  Rational half_gap = (Rational(1, 2) - Rational(k) * alpha) / 2;
  return std::min(Rational(1, 33), half_gap);
}

}  // namespace detail

/// Sufficient test: C'(alpha) with alpha < 1/(2k), and every carrier and K
/// of diameter at most c sys where c = min(1/33, (1/2 - k alpha)/2).
inline Certificate check_k_wall_convexity(const CubicalPresentation& pres, const std::vector<RelatorWalls>& walls, int k,
                                          const Rational& alpha, int guard = kDefaultGuard) {
  if (k < 1) throw Error(ErrorKind::Validation, "k must be positive");
  if (walls.size() != pres.relators.size()) throw Error(ErrorKind::Validation, "one wallspace per relator is required");
  auto cert = make_certificate(std::to_string(k) + "-wall convexity");
  cert.add("k", k);
  cert.add("alpha", alpha);
  cert.absorb(check_cprime(pres, alpha, guard));
  Rational bound(1, 2 * k);
  bool alpha_ok = alpha < bound;
  auto ac = detail::inequality("alpha < 1/(2k)", alpha_ok, bound - alpha);
  if (!alpha_ok) {
    ac.status = Status::inconclusive;
    ac.witness = Json();
    ac.reason = "sufficient condition needs alpha < 1/" + std::to_string(2 * k);
  }
  cert.absorb(std::move(ac));
  Rational c = detail::wall_constant(k, alpha);
  cert.add("c", c);
  for (std::size_t i = 0; i < pres.relators.size(); ++i) {
    auto m = detail::measure(pres.relators[i], walls[i], guard);
    auto rc = make_certificate("relator " + std::to_string(i));
    rc.add("systole", m.sys);
    rc.add("max_carrier_diameter", m.carrier);
    if (!m.sys_exact) {
      rc.inconclusive("systole not exact");
    } else if (alpha_ok) {
      Rational cap = c * m.sys;
      std::string cs = "sys*" + format_rational(c);
      rc.absorb(detail::inequality("diam N(U) <= " + cs, Rational(m.carrier) <= cap, cap - m.carrier));
      if (m.k_diameter) {
        rc.add("diam_K", *m.k_diameter);
        rc.absorb(detail::inequality("diam K <= " + cs, Rational(*m.k_diameter) <= cap, cap - *m.k_diameter));
      }
    }
    cert.absorb(std::move(rc));
  }
  return cert;
}

enum class B6Mode { sufficient, exhaustive };

namespace detail {

/// Lifts of the current piece: (relator j, vertex z) pairs walked in parallel.
/// Pieces lift into non-diagonal, non-automorphism fiber components.
struct GraphPieceTracker {
  const CubicalPresentation& pres;
  int host;
  std::vector<ConeSummary> summaries;
  std::vector<std::vector<std::vector<EdgeEnd>>> ends;

  GraphPieceTracker(const CubicalPresentation& p, int i, int guard) : pres(p), host(i) {
    for (std::size_t j = 0; j < p.relators.size(); ++j) {
      summaries.push_back(cone_summary(p.relators[static_cast<std::size_t>(i)], p.relators[j], static_cast<int>(j) == i, guard));
      ends.push_back(p.relators[j].source->edge_ends());
    }
  }

  using Lifts = std::vector<std::pair<int, CubeId>>;

  Lifts start(CubeId v) const {
    Lifts out;
    const auto& f = pres.relators[static_cast<std::size_t>(host)];
    for (std::size_t j = 0; j < pres.relators.size(); ++j) {
      const auto& g = pres.relators[j];
      for (std::size_t z = 0; z < g.source->vertex_count(); ++z) {
        if (g.vertex(static_cast<CubeId>(z)) != f.vertex(v)) continue;
        int k = summaries[j].component_of(v, static_cast<CubeId>(z));
        if (k < 0) continue;
        const auto& c = summaries[j].components[static_cast<std::size_t>(k)];
        if (!c.diagonal && !c.aut_graph) out.emplace_back(static_cast<int>(j), static_cast<CubeId>(z));
      }
    }
    return out;
  }

  Lifts step(const Lifts& in, EdgeEnd e) const {
    EdgeEnd want = pres.relators[static_cast<std::size_t>(host)].image(e);
    Lifts out;
    for (auto [j, z] : in) {
      const auto& g = pres.relators[static_cast<std::size_t>(j)];
      for (const auto& e2 : ends[static_cast<std::size_t>(j)][static_cast<std::size_t>(z)])
        if (g.image(e2) == want) {
          out.emplace_back(j, g.source->edge_vertex(g.source->opposite(e2)));
          break;
        }
    }
    return out;
  }
};

/// Reduced paths covered greedily by at most `max_pieces` pieces, starting and
/// ending on carriers of the target hyperplanes (one hyperplane, or one wall).
/// A hit that is not a power of a single target edge is a violation.
inline std::optional<Json> exhaustive_convexity(const CubicalPresentation& pres, int i, const Wallspace& ws, int max_pieces,
                                                bool wall_version, std::size_t budget, int guard, bool& exhausted) {
  const CubeComplex& y = *pres.relators[static_cast<std::size_t>(i)].source;
  GraphPieceTracker tracker(pres, i, guard);
  auto ends = y.edge_ends();
  auto cls = edge_classes(y);
  std::size_t visited = 0;
  std::optional<Json> found;
  std::vector<EdgeEnd> path;
  std::vector<char> on;  // vertex lies on a target carrier

  auto single_edge_power = [&]() {
    for (const auto& s : path)
      if (s.edge != path[0].edge) return false;
    return path.size() == 1 || y.edge_vertex(path[0]) == y.edge_vertex(y.opposite(path[0]));
  };

  // a piece longer than the guard lifts into a non-tree component: unresolved
  std::function<void(CubeId, CubeId, const GraphPieceTracker::Lifts&, int, int, int)> dfs =
      [&](CubeId from, CubeId v, const GraphPieceTracker::Lifts& lifts, int pieces, int piece_len, int target) {
        if (found || exhausted) return;
        if (++visited > budget) {
          exhausted = true;
          return;
        }
        if (!path.empty() && on[static_cast<std::size_t>(v)] && !single_edge_power()) {
          Json steps = Json::array();
          for (const auto& s : path) steps.push_back({s.edge, s.side});
          found = Json{{"relator", i}, {"start", from}, {"path", steps}, {wall_version ? "wall" : "hyperplane", target},
                       {"pieces", pieces}};
          return;
        }
        for (const auto& e : ends[static_cast<std::size_t>(v)]) {
          if (!path.empty() && e == y.opposite(path.back())) continue;
          auto next = path.empty() ? GraphPieceTracker::Lifts{} : tracker.step(lifts, e);
          int count = pieces, len = piece_len + 1;
          if (next.empty()) {
            if (++count > max_pieces) continue;
            next = tracker.step(tracker.start(v), e);
            if (next.empty()) continue;
            len = 1;
          }
          if (len > guard) {
            exhausted = true;
            return;
          }
          path.push_back(e);
          dfs(from, y.edge_vertex(y.opposite(e)), next, count, len, target);
          path.pop_back();
          if (found || exhausted) return;
        }
      };

  auto run = [&](const std::vector<int>& planes, int target) {
    on.assign(y.vertex_count(), 0);
    std::set<CubeId> starts;
    for (int h : planes)
      for (CubeId e : cls.members[static_cast<std::size_t>(h)])
        for (CubeId c : y.cube(1, e).corners) {
          on[static_cast<std::size_t>(c)] = 1;
          starts.insert(c);
        }
    for (CubeId s : starts) {
      path.clear();
      dfs(s, s, {}, 0, 0, target);
      if (found || exhausted) return;
    }
  };
  if (wall_version) {
    for (std::size_t w = 0; w < ws.walls.size() && !found && !exhausted; ++w) run(ws.walls[w], static_cast<int>(w));
  } else {
    for (std::size_t h = 0; h < cls.size() && !found && !exhausted; ++h) run({static_cast<int>(h)}, static_cast<int>(h));
  }
  return found;
}

}  // namespace detail

/// B(6) items 1-5. Sufficient mode proves items 3-4 from C'(1/16) and
/// diameter bounds; exhaustive mode searches short piece paths (graph relators).
inline Certificate check_b6(const CubicalPresentation& pres, const std::vector<RelatorWalls>& walls, B6Mode mode,
                            int guard = kDefaultGuard, const Rational& alpha = Rational(1, 16),
                            std::size_t path_budget = 2000000) {
  if (walls.size() != pres.relators.size()) throw Error(ErrorKind::Validation, "one wallspace per relator is required");
  auto cert = make_certificate("B(6)");
  cert.add("mode", mode == B6Mode::sufficient ? "sufficient" : "exhaustive");
  cert.add("alpha", alpha);

  auto item1 = make_certificate("item 1: small cancellation");
  item1.absorb(detail::inequality("alpha <= 1/14", alpha <= Rational(1, 14), Rational(1, 14) - alpha));
  auto cp = check_cprime(pres, alpha, guard);
  bool cprime_ok = cp.passed();
  item1.absorb(std::move(cp));
  cert.absorb(std::move(item1));

  auto item2 = make_certificate("item 2: wallspace cones");
  for (std::size_t i = 0; i < walls.size(); ++i) {
    auto sep = check_wall_separation(walls[i].walls);
    sep.check = "relator " + std::to_string(i) + " wall separation";
    item2.absorb(std::move(sep));
  }
  cert.absorb(std::move(item2));

  auto item3 = make_certificate("item 3: hyperplane convexity");
  auto item4 = make_certificate("item 4: wall convexity");
  if (mode == B6Mode::sufficient) {
    item3.absorb(detail::inequality("C'(1/16)", alpha <= Rational(1, 16) && cprime_ok, Rational(1, 16) - alpha));
    for (std::size_t i = 0; i < pres.relators.size(); ++i) {
      auto m = detail::measure(pres.relators[i], walls[i], guard);
      Rational half(m.sys, 2);
      item3.absorb(detail::inequality("relator " + std::to_string(i) + ": diam N(U) < sys/2", Rational(m.carrier) < half,
                                      half - m.carrier));
    }
    item4 = check_k_wall_convexity(pres, walls, 7, alpha, guard);
    item4.check = "item 4: wall convexity";
  } else {
    bool graphs = all_graphs(pres);
    for (auto* item : {&item3, &item4}) {
      if (!graphs) {
        item->inconclusive("exhaustive mode supports graph relators");
        continue;
      }
      bool wall_version = item == &item4;
      for (std::size_t i = 0; i < pres.relators.size() && item->status != Status::fail; ++i) {
        if (wall_version && walls[i].walls.complex.get() != pres.relators[i].source.get() &&
            !(*walls[i].walls.complex == *pres.relators[i].source)) {
          item->inconclusive("walls of relator " + std::to_string(i) + " live on a subdivision");
          continue;
        }
        bool exhausted = false;
        auto v = detail::exhaustive_convexity(pres, static_cast<int>(i), walls[i].walls, 7, wall_version, path_budget, guard, exhausted);
        if (v) {
          item->fail(wall_version ? "WallConvexityViolated" : "HyperplaneConvexityViolated", *v);
        } else if (exhausted) {
          item->inconclusive("path budget " + std::to_string(path_budget) + " or piece guard " + std::to_string(guard) +
                             " reached on relator " + std::to_string(i));
        }
      }
    }
  }
  cert.absorb(std::move(item3));
  cert.absorb(std::move(item4));

  auto item5 = make_certificate("item 5: equivariance");
  for (std::size_t i = 0; i < pres.relators.size(); ++i) {
    auto eq = check_equivariance(pres.relators[i], walls[i].walls);
    eq.check = "relator " + std::to_string(i) + " equivariance";
    item5.absorb(std::move(eq));
  }
  cert.absorb(std::move(item5));
  return cert;
}

/// Numeric hypotheses of the freeness route for one rank 2 relator.
inline Certificate check_freeness_bounds(const CubicalPresentation& pres, const Rank2Decomposition& dec, const Rational& alpha,
                                         const Rational& beta, int guard = kDefaultGuard) {
  if (pres.relators.size() != 1) throw Error(ErrorKind::Validation, "freeness bounds take a single relator");
  validate_decomposition(dec, guard);
  const auto& f = pres.relators[0];
  if (dec.y.get() != f.source.get() && !(*dec.y == *f.source))
    throw Error(ErrorKind::DecompositionInvalid, "decomposition is not of the relator");
  auto cert = make_certificate("freeness bounds");
  cert.add("alpha", alpha);
  cert.add("beta", beta);
  cert.absorb(detail::inequality("alpha <= 1/16", alpha <= Rational(1, 16), Rational(1, 16) - alpha));
  cert.absorb(check_cprime(pres, alpha, guard));
  auto s1 = systole(detail::inclusion(dec.y, dec.z1).source, guard);
  auto s2 = systole(detail::inclusion(dec.y, dec.z2).source, guard);
  int m = std::min(s1.value, s2.value);
  int overlap = subcomplex_diameter(*dec.y, detail::cell_intersection(dec.z1, dec.z2));
  int d = hyperplane_data(*dec.y).max_carrier_diameter();
  cert.add("sys(Z1)", s1.str());
  cert.add("sys(Z2)", s2.str());
  cert.add("M", m);
  cert.add("D", d);
  cert.add("diam(Z1 cap Z2)", overlap);
  Rational eighth(1, 8);
  cert.absorb(detail::inequality("alpha + beta < 1/8", alpha + beta < eighth, eighth - alpha - beta));
  cert.absorb(detail::inequality("diam(Z1 cap Z2) <= beta*M", Rational(overlap) <= beta * m, beta * m - overlap));
  cert.absorb(detail::inequality("diam N(U) <= alpha*M", Rational(d) <= alpha * m, alpha * m - d));
  int big = 16 * std::max(d, overlap);
  for (const auto& [name, s] : {std::pair{"Z1", s1}, std::pair{"Z2", s2}})
    cert.absorb(detail::inequality(std::string("sys(") + name + ") > 16 max{D, diam(Z1 cap Z2)}", s.value > big, Rational(s.value - big)));
  auto auts = automorphism_edge_maps(f);
  auto ac = make_certificate("Aut trivial");
  ac.add("aut_order", auts.size());
  if (auts.size() != 1) ac.fail("NontrivialAut", {{"aut_order", auts.size()}});
  cert.absorb(std::move(ac));
  return cert;
}

// ---------------------------------------------------------------------------
// Files

namespace detail {

inline Json steps_json(const std::vector<EdgeEnd>& p) {
  Json a = Json::array();
  for (const auto& e : p) a.push_back({e.edge, e.side});
  return a;
}

inline std::vector<EdgeEnd> steps_from_json(const Json& a) {
  std::vector<EdgeEnd> s;
  for (const auto& e : a) s.push_back({e.at(0).get<CubeId>(), e.at(1).get<int>()});
  return s;
}

inline Subcomplex cells_from_json(const Json& a) {
  Subcomplex s;
  s.cells = a.get<std::vector<std::vector<CubeId>>>();
  return sorted(std::move(s));
}

}  // namespace detail

/// Z1, Z2, K as per-dimension cell lists, sigma_i as edge-end steps.
inline Json decomposition_to_json(const Rank2Decomposition& d) {
  return Json{{"z1", d.z1.cells}, {"z2", d.z2.cells}, {"k", d.k.cells},
              {"sigma1", detail::steps_json(d.sigma1)}, {"sigma2", detail::steps_json(d.sigma2)}};
}

inline Rank2Decomposition decomposition_from_json(const Json& j, std::shared_ptr<const CubeComplex> y, const std::string& where) {
  Rank2Decomposition d;
  d.y = std::move(y);
  try {
    d.z1 = detail::cells_from_json(j.at("z1"));
    d.z2 = detail::cells_from_json(j.at("z2"));
    d.k = detail::cells_from_json(j.at("k"));
    d.sigma1 = detail::steps_from_json(j.at("sigma1"));
    d.sigma2 = detail::steps_from_json(j.at("sigma2"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, where + ": decomposition: " + e.what());
  }
  validate_decomposition(d);
  return d;
}

inline Json wallspace_to_json(const Wallspace& ws, const Json& complex_ref) {
  Json sig = Json::array();
  for (const auto& s : ws.sigma) sig.push_back(detail::steps_json(s));
  return Json{{"complex", complex_ref}, {"walls", ws.walls}, {"sigma", sig}, {"subdivided", ws.subdivided}};
}

inline Wallspace wallspace_from_json(const Json& j, const std::filesystem::path& base, const std::string& where) {
  if (!j.is_object() || !j.contains("complex") || !j.contains("walls")) throw Error(ErrorKind::Parse, where + ": wallspace needs complex and walls");
  Wallspace ws;
  ws.complex = resolve_complex(j["complex"], base, where);
  try {
    ws.walls = j["walls"].get<std::vector<std::vector<int>>>();
    if (j.contains("sigma"))
      for (const auto& p : j["sigma"]) ws.sigma.push_back(detail::steps_from_json(p));
    ws.subdivided = j.value("subdivided", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, where + ": " + e.what());
  }
  validate_wallspace(ws);
  return ws;
}

/// Relator walls with the optional "decomposition" record.
inline RelatorWalls relator_walls_from_json(const Json& j, const std::filesystem::path& base, const std::string& where) {
  RelatorWalls rw;
  rw.walls = wallspace_from_json(j, base, where);
  if (j.contains("decomposition")) rw.decomposition = decomposition_from_json(j["decomposition"], rw.walls.complex, where);
  return rw;
}

inline Json relator_walls_to_json(const RelatorWalls& rw, const Json& complex_ref) {
  Json j = wallspace_to_json(rw.walls, complex_ref);
  if (rw.decomposition) j["decomposition"] = decomposition_to_json(*rw.decomposition);
  return j;
}

}  // namespace cubecx
